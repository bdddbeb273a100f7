// Copyright (c) 2026 The isokit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// isokit command-line front end.
//
//   validate   check pause-marked / timed corpus files
//   synth      fit a phrase-length histogram and stamp pause structure
//              onto raw bitext
//   align      project source pause structure onto unsegmented targets
//   eval       score hypotheses (BLEU, ChrF-Phrase, SA, PhraseLC,
//              Acceptability)
//   dub        build dubbing plans from source timings, report smoothness
//
// Exit codes: 0 success, 1 data/validation errors, 2 usage errors.
// Output files are written atomically (temp file + rename); reruns on
// unchanged inputs produce byte-identical results.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "isokit/isokit.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitDataError = 1;
constexpr int kExitUsage = 2;

void print_issues(const std::vector<isokit::io::LineIssue>& issues, const std::string& file) {
    for (const auto& issue : issues) {
        std::cerr << file << ":" << issue.line_no;
        if (!issue.id.empty())
            std::cerr << " (id " << issue.id << ")";
        std::cerr << ": " << issue.message << "\n";
    }
}

isokit::align::CostKind parse_cost(const std::string& name) {
    return name == "l2" ? isokit::align::CostKind::L2 : isokit::align::CostKind::L1;
}

std::string format_score(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", value);
    return buf;
}

// ---------------------------------------------------------------- validate

struct ValidateConfig {
    std::string pauses_file;
    std::string timed_file;
    std::string marker = std::string(isokit::kDefaultMarker);
    double min_pause = isokit::kDefaultPauseThreshold;
};

int run_validate(const ValidateConfig& cfg) {
    bool any_issue = false;
    if (!cfg.pauses_file.empty()) {
        auto file = isokit::io::read_pause_marked_file(cfg.pauses_file, cfg.marker);
        print_issues(file.issues, cfg.pauses_file);
        any_issue |= !file.ok();
        if (file.ok())
            std::cout << cfg.pauses_file << ": " << file.sentences.size() << " sentences ok\n";
    }
    if (!cfg.timed_file.empty()) {
        auto file = isokit::io::read_timed_jsonl(cfg.timed_file, cfg.min_pause);
        print_issues(file.issues, cfg.timed_file);
        any_issue |= !file.ok();
        if (file.ok())
            std::cout << cfg.timed_file << ": " << file.records.size() << " records ok\n";
    }
    return any_issue ? kExitDataError : kExitOk;
}

// -------------------------------------------------------------------- eval

struct EvalConfig {
    std::string src_file;
    std::string ref_file;
    std::string hyp_file;
    std::string json_file;
    std::string marker = std::string(isokit::kDefaultMarker);
    double tolerance = isokit::metrics::kDefaultLcTolerance;
    int chrf_order = isokit::metrics::kDefaultChrfMaxOrder;
    double chrf_beta = isokit::metrics::kDefaultChrfBeta;
    bool macro_chrf = false;
    unsigned threads = 1;
    std::string lc_trace;
};

int run_lc_trace(const std::string& spec) {
    // "TOTAL:STEP1,STEP2,..." — budget then per-step generated lengths.
    auto fail = [&] {
        std::cerr << "bad --dump-lc-trace value '" << spec << "', expected TOTAL:STEP1,STEP2,...\n";
        return kExitUsage;
    };
    std::size_t colon = spec.find(':');
    std::uint64_t total = 0;
    std::vector<std::uint64_t> steps;
    try {
        total = std::stoull(spec.substr(0, colon));
        if (colon != std::string::npos) {
            std::string rest = spec.substr(colon + 1);
            std::size_t pos = 0;
            while (pos < rest.size()) {
                std::size_t comma = rest.find(',', pos);
                std::string piece = rest.substr(pos, comma - pos);
                if (!piece.empty())
                    steps.push_back(std::stoull(piece));
                if (comma == std::string::npos)
                    break;
                pos = comma + 1;
            }
        }
    } catch (const std::exception&) {
        return fail();
    }
    if (total == 0)
        return fail();

    auto trace = isokit::lc::bucket_trace(total, steps);
    json doc;
    doc["total"] = total;
    doc["steps"] = steps;
    json entries = json::array();
    for (const auto& step : trace)
        entries.push_back({{"generated", step.generated},
                           {"ratio", step.ratio},
                           {"bucket", step.bucket},
                           {"stop", step.stop}});
    doc["trace"] = entries;
    std::cout << doc.dump() << "\n";
    return kExitOk;
}

int run_eval(const EvalConfig& cfg) {
    if (!cfg.lc_trace.empty())
        return run_lc_trace(cfg.lc_trace);

    auto src = isokit::io::read_pause_marked_file(cfg.src_file, cfg.marker);
    auto ref = isokit::io::read_pause_marked_file(cfg.ref_file, cfg.marker);
    auto hyp = isokit::io::read_pause_marked_file(cfg.hyp_file, cfg.marker);
    print_issues(src.issues, cfg.src_file);
    print_issues(ref.issues, cfg.ref_file);
    print_issues(hyp.issues, cfg.hyp_file);
    if (!src.ok() || !ref.ok() || !hyp.ok())
        return kExitDataError;
    if (src.sentences.size() != ref.sentences.size() ||
        src.sentences.size() != hyp.sentences.size()) {
        std::cerr << "line counts differ: " << cfg.src_file << "=" << src.sentences.size()
                  << " " << cfg.ref_file << "=" << ref.sentences.size() << " " << cfg.hyp_file
                  << "=" << hyp.sentences.size() << "\n";
        return kExitDataError;
    }

    isokit::Corpus corpus;
    corpus.pairs.reserve(src.sentences.size());
    for (std::size_t i = 0; i < src.sentences.size(); ++i)
        corpus.pairs.push_back({std::to_string(i + 1), std::move(src.sentences[i]),
                                std::move(ref.sentences[i]), std::nullopt});

    isokit::metrics::EvalOptions options;
    options.tolerance = cfg.tolerance;
    options.chrf_max_order = cfg.chrf_order;
    options.chrf_beta = cfg.chrf_beta;
    options.macro_chrf = cfg.macro_chrf;
    options.threads = cfg.threads;
    isokit::metrics::MetricReport report =
        isokit::metrics::evaluate(corpus, hyp.sentences, options);

    std::cout << "sentences:     " << report.sentence_count << "\n"
              << "bleu:          " << format_score(report.bleu) << "\n"
              << "chrf_phrase:   " << format_score(report.chrf_phrase) << "\n"
              << "sa:            " << format_score(report.sa) << "\n"
              << "phrase_lc:     " << format_score(report.phrase_lc) << "\n"
              << "acceptability: " << format_score(report.acceptability) << "\n";
    if (!cfg.json_file.empty())
        isokit::io::atomic_write(cfg.json_file, isokit::io::report_to_json(report).dump() + "\n");
    return kExitOk;
}

// ------------------------------------------------------------------- align

struct AlignConfig {
    std::string src_file;
    std::string src_timed_file;
    std::string tgt_file;
    std::string out_file;
    std::string marker = std::string(isokit::kDefaultMarker);
    std::string cost = "l1";
    unsigned threads = 1;
};

int run_align(const AlignConfig& cfg) {
    std::vector<std::string> ids;
    std::vector<std::vector<double>> proportions;

    if (!cfg.src_timed_file.empty()) {
        auto timed = isokit::io::read_timed_jsonl(cfg.src_timed_file);
        print_issues(timed.issues, cfg.src_timed_file);
        if (!timed.ok())
            return kExitDataError;
        for (const auto& record : timed.records) {
            ids.push_back(record.id);
            proportions.push_back(isokit::align::source_duration_proportions(record.sentence));
        }
    } else {
        auto src = isokit::io::read_pause_marked_file(cfg.src_file, cfg.marker);
        print_issues(src.issues, cfg.src_file);
        if (!src.ok())
            return kExitDataError;
        for (std::size_t i = 0; i < src.sentences.size(); ++i) {
            ids.push_back(std::to_string(i + 1));
            proportions.push_back(isokit::align::source_char_proportions(src.sentences[i]));
        }
    }

    std::vector<std::string> targets = isokit::io::read_lines(cfg.tgt_file);
    if (targets.size() != ids.size()) {
        std::cerr << "line counts differ: source=" << ids.size() << " target=" << targets.size()
                  << "\n";
        return kExitDataError;
    }

    isokit::align::CostKind kind = parse_cost(cfg.cost);
    struct Slot {
        bool ok = false;
        isokit::PauseMarkedSentence sentence;
        std::string error;
    };
    std::vector<Slot> slots(targets.size());
    isokit::parallel_for_index(targets.size(), cfg.threads, [&](std::size_t i) {
        Slot& slot = slots[i];
        if (targets[i].find(cfg.marker) != std::string::npos) {
            slot.error = "target already contains the pause marker";
            return;
        }
        try {
            slot.sentence = isokit::align::project_pauses(targets[i], proportions[i], kind).sentence;
            slot.ok = true;
        } catch (const isokit::Error& e) {
            slot.error = e.what();
        }
    });

    // Failed lines keep their raw target text so the output stays
    // line-aligned with the input.
    std::string out;
    bool any_failed = false;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (slots[i].ok) {
            out += isokit::serialize(slots[i].sentence, cfg.marker);
        } else {
            any_failed = true;
            std::cerr << "id " << ids[i] << ": " << slots[i].error << "\n";
            out += std::string(isokit::trim(targets[i]));
        }
        out += '\n';
    }
    isokit::io::atomic_write(cfg.out_file, out);
    return any_failed ? kExitDataError : kExitOk;
}

// ------------------------------------------------------------------- synth

struct SynthConfig {
    std::string annotated_file;
    std::string dist_file;
    std::string dump_dist_file;
    std::string src_file;
    std::string tgt_file;
    std::string out_prefix;
    std::uint64_t seed = 0;
    std::string marker = std::string(isokit::kDefaultMarker);
    std::string cost = "l1";
    unsigned threads = 1;
};

int run_synth(const SynthConfig& cfg) {
    isokit::synth::PhraseLengthDistribution dist;
    if (!cfg.annotated_file.empty()) {
        auto annotated = isokit::io::read_pause_marked_file(cfg.annotated_file, cfg.marker);
        print_issues(annotated.issues, cfg.annotated_file);
        if (!annotated.ok())
            return kExitDataError;
        dist = isokit::synth::fit_length_distribution(annotated.sentences);
    } else {
        auto lines = isokit::io::read_lines(cfg.dist_file);
        std::string content;
        for (const auto& line : lines)
            content += line;
        dist = isokit::io::distribution_from_json(json::parse(content));
    }

    if (!cfg.dump_dist_file.empty())
        isokit::io::atomic_write(cfg.dump_dist_file,
                                 isokit::io::distribution_to_json(dist).dump() + "\n");

    if (cfg.out_prefix.empty())
        return kExitOk;

    std::vector<std::string> sources = isokit::io::read_lines(cfg.src_file);
    std::vector<std::string> targets = isokit::io::read_lines(cfg.tgt_file);
    isokit::synth::SynthesisResult result = isokit::synth::synthesize_corpus(
        sources, targets, dist, {cfg.seed}, parse_cost(cfg.cost), cfg.threads, cfg.marker);

    std::vector<isokit::PauseMarkedSentence> out_src, out_tgt;
    out_src.reserve(result.corpus.size());
    out_tgt.reserve(result.corpus.size());
    for (const auto& pair : result.corpus.pairs) {
        out_src.push_back(pair.source);
        out_tgt.push_back(pair.target);
    }
    isokit::io::write_pause_marked_file(cfg.out_prefix + ".src", out_src, cfg.marker);
    isokit::io::write_pause_marked_file(cfg.out_prefix + ".tgt", out_tgt, cfg.marker);
    std::string rejects;
    for (const auto& reject : result.rejects) {
        std::cerr << "id " << reject.id << " rejected: " << reject.reason << "\n";
        rejects += reject.id;
        rejects += '\n';
    }
    isokit::io::atomic_write(cfg.out_prefix + ".rejects", rejects);
    std::cout << "generated " << result.corpus.size() << " pairs, rejected "
              << result.rejects.size() << "\n";
    return kExitOk;
}

// --------------------------------------------------------------------- dub

struct DubConfig {
    std::string timed_file;
    std::string tgt_file;
    std::string out_file;
    std::string marker = std::string(isokit::kDefaultMarker);
    bool relax = false;
    double tau = isokit::timing::kDefaultSmoothnessTau;
    double min_pause = isokit::timing::kDefaultMinPause;
};

int run_dub(const DubConfig& cfg) {
    auto timed = isokit::io::read_timed_jsonl(cfg.timed_file, cfg.min_pause);
    print_issues(timed.issues, cfg.timed_file);
    if (!timed.ok())
        return kExitDataError;
    auto targets = isokit::io::read_pause_marked_file(cfg.tgt_file, cfg.marker);
    print_issues(targets.issues, cfg.tgt_file);
    if (!targets.ok())
        return kExitDataError;
    if (timed.records.size() != targets.sentences.size()) {
        std::cerr << "line counts differ: timed=" << timed.records.size()
                  << " target=" << targets.sentences.size() << "\n";
        return kExitDataError;
    }

    std::string out;
    std::vector<isokit::timing::DubbingPlan> plans;
    bool any_failed = false;
    for (std::size_t i = 0; i < timed.records.size(); ++i) {
        const auto& record = timed.records[i];
        try {
            isokit::timing::DubbingPlan plan =
                isokit::timing::build_plan(record.sentence, targets.sentences[i]);
            if (cfg.relax)
                plan = isokit::timing::relax(plan, cfg.min_pause);
            out += isokit::io::plan_to_json(record.id, plan).dump();
            out += '\n';
            plans.push_back(std::move(plan));
        } catch (const isokit::Error& e) {
            any_failed = true;
            std::cerr << "id " << record.id << ": " << e.what() << "\n";
        }
    }
    isokit::io::atomic_write(cfg.out_file, out);
    if (!plans.empty())
        std::cout << "smoothness " << format_score(isokit::timing::smoothness(plans, cfg.tau))
                  << "\n";
    return any_failed ? kExitDataError : kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"isochrony toolkit: pause-marked bitext evaluation, projection and synthesis"};
    app.require_subcommand(1);

    ValidateConfig validate_cfg;
    CLI::App* validate = app.add_subcommand("validate", "check corpus files");
    validate->add_option("--pauses", validate_cfg.pauses_file, "pause-marked text file");
    validate->add_option("--timed", validate_cfg.timed_file, "timed corpus JSONL file");
    validate->add_option("--marker", validate_cfg.marker, "pause marker token");
    validate->add_option("--min-pause", validate_cfg.min_pause, "minimum pause length in seconds")
        ->check(CLI::NonNegativeNumber);

    EvalConfig eval_cfg;
    CLI::App* eval = app.add_subcommand("eval", "score hypotheses against a corpus");
    eval->add_option("--src", eval_cfg.src_file, "source pause-marked file");
    eval->add_option("--ref", eval_cfg.ref_file, "reference pause-marked file");
    eval->add_option("--hyp", eval_cfg.hyp_file, "hypothesis pause-marked file");
    eval->add_option("--json", eval_cfg.json_file, "write full-precision report JSON here");
    eval->add_option("--marker", eval_cfg.marker, "pause marker token");
    eval->add_option("--tolerance", eval_cfg.tolerance, "PhraseLC length tolerance fraction")
        ->check(CLI::NonNegativeNumber);
    eval->add_option("--chrf-order", eval_cfg.chrf_order, "ChrF maximum n-gram order")
        ->check(CLI::Range(1, 20));
    eval->add_option("--chrf-beta", eval_cfg.chrf_beta, "ChrF beta (recall weight)")
        ->check(CLI::PositiveNumber);
    eval->add_flag("--macro-chrf", eval_cfg.macro_chrf,
                   "average per-phrase ChrF instead of pooling n-gram statistics");
    eval->add_option("--threads", eval_cfg.threads, "worker threads")->check(CLI::Range(1, 256));
    eval->add_option("--dump-lc-trace", eval_cfg.lc_trace,
                     "emit length-control bucket trace for TOTAL:STEP1,STEP2,... and exit");

    AlignConfig align_cfg;
    CLI::App* align = app.add_subcommand("align", "project source pauses onto plain targets");
    auto* align_src = align->add_option("--src", align_cfg.src_file,
                                        "source pause-marked file (character proportions)");
    auto* align_timed = align->add_option("--src-timed", align_cfg.src_timed_file,
                                          "source timed JSONL (duration proportions)");
    align_src->excludes(align_timed);
    align->add_option("--tgt", align_cfg.tgt_file, "plain target text file")->required();
    align->add_option("--out", align_cfg.out_file, "output pause-marked file")->required();
    align->add_option("--marker", align_cfg.marker, "pause marker token");
    align->add_option("--cost", align_cfg.cost, "segmentation cost (l1 or l2)")
        ->check(CLI::IsMember({"l1", "l2"}));
    align->add_option("--threads", align_cfg.threads, "worker threads")->check(CLI::Range(1, 256));

    SynthConfig synth_cfg;
    CLI::App* synth = app.add_subcommand("synth", "synthesize pause-annotated bitext");
    auto* synth_ann = synth->add_option("--annotated", synth_cfg.annotated_file,
                                        "annotated pause-marked file to fit the histogram from");
    auto* synth_dist = synth->add_option("--dist", synth_cfg.dist_file,
                                         "load a previously dumped histogram JSON instead");
    synth_ann->excludes(synth_dist);
    synth->add_option("--dump-dist", synth_cfg.dump_dist_file, "write histogram JSON here");
    synth->add_option("--src", synth_cfg.src_file, "raw source text file");
    synth->add_option("--tgt", synth_cfg.tgt_file, "raw target text file");
    synth->add_option("--out", synth_cfg.out_prefix,
                      "output prefix; writes <out>.src, <out>.tgt, <out>.rejects");
    synth->add_option("--seed", synth_cfg.seed, "RNG seed (splitmix64)");
    synth->add_option("--marker", synth_cfg.marker, "pause marker token");
    synth->add_option("--cost", synth_cfg.cost, "projection cost (l1 or l2)")
        ->check(CLI::IsMember({"l1", "l2"}));
    synth->add_option("--threads", synth_cfg.threads, "worker threads")->check(CLI::Range(1, 256));

    DubConfig dub_cfg;
    CLI::App* dub = app.add_subcommand("dub", "build dubbing plans and report smoothness");
    dub->add_option("--timed", dub_cfg.timed_file, "source timed JSONL")->required();
    dub->add_option("--tgt", dub_cfg.tgt_file, "target pause-marked file")->required();
    dub->add_option("--out", dub_cfg.out_file, "output plan JSONL")->required();
    dub->add_option("--marker", dub_cfg.marker, "pause marker token");
    dub->add_flag("--relax", dub_cfg.relax, "redistribute pause time to steady speaking rates");
    dub->add_option("--tau", dub_cfg.tau, "smoothness threshold on adjacent rate deviation")
        ->check(CLI::NonNegativeNumber);
    dub->add_option("--min-pause", dub_cfg.min_pause, "minimum pause length in seconds")
        ->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    for (const std::string* marker : {&validate_cfg.marker, &eval_cfg.marker, &align_cfg.marker,
                                      &synth_cfg.marker, &dub_cfg.marker}) {
        try {
            isokit::validate_marker(*marker);
        } catch (const isokit::Error& e) {
            std::cerr << "--marker: " << e.what() << "\n";
            return kExitUsage;
        }
    }

    try {
        if (app.got_subcommand(validate)) {
            if (validate_cfg.pauses_file.empty() && validate_cfg.timed_file.empty()) {
                std::cerr << "validate: need --pauses and/or --timed\n";
                return kExitUsage;
            }
            return run_validate(validate_cfg);
        }
        if (app.got_subcommand(eval)) {
            if (eval_cfg.lc_trace.empty() &&
                (eval_cfg.src_file.empty() || eval_cfg.ref_file.empty() ||
                 eval_cfg.hyp_file.empty())) {
                std::cerr << "eval: need --src, --ref and --hyp (or --dump-lc-trace)\n";
                return kExitUsage;
            }
            return run_eval(eval_cfg);
        }
        if (app.got_subcommand(align)) {
            if (align_cfg.src_file.empty() && align_cfg.src_timed_file.empty()) {
                std::cerr << "align: need --src or --src-timed\n";
                return kExitUsage;
            }
            return run_align(align_cfg);
        }
        if (app.got_subcommand(synth)) {
            if (synth_cfg.annotated_file.empty() && synth_cfg.dist_file.empty()) {
                std::cerr << "synth: need --annotated or --dist\n";
                return kExitUsage;
            }
            bool generating = !synth_cfg.out_prefix.empty() || !synth_cfg.src_file.empty() ||
                              !synth_cfg.tgt_file.empty();
            if (generating && (synth_cfg.out_prefix.empty() || synth_cfg.src_file.empty() ||
                               synth_cfg.tgt_file.empty())) {
                std::cerr << "synth: generation needs --src, --tgt and --out together\n";
                return kExitUsage;
            }
            return run_synth(synth_cfg);
        }
        if (app.got_subcommand(dub))
            return run_dub(dub_cfg);
    } catch (const isokit::Error& e) {
        std::cerr << "error [" << e.kind() << "]: " << e.what() << "\n";
        return kExitDataError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDataError;
    }
    return kExitUsage;
}
