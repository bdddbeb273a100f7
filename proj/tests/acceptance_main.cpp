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
// Acceptance suite: one line per criterion, PASS or FAIL, non-zero exit if
// anything fails. All randomness is seeded; reruns are identical.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "isokit/isokit.hpp"
#include "oracles.hpp"
#include "support.hpp"

namespace {

int g_failures = 0;

void report(const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] %s — %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    if (!pass)
        ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Acceptability formula against the eight published metric rows, ±0.25
// absolute (two rows are reported from rounded factors).
void criterion_acceptability_fidelity() {
    struct Row {
        double chrf_phrase, phrase_lc, expected;
    };
    const Row rows[] = {
        {58.5, 16.1, 9.6},  {59.5, 19.7, 11.7}, {50.4, 39.1, 19.7}, {51.2, 43.0, 22.0},
        {67.1, 18.6, 12.6}, {68.8, 20.1, 13.8}, {58.8, 20.1, 11.8}, {60.0, 43.1, 25.8},
    };
    double worst = 0.0;
    bool pass = true;
    for (const Row& row : rows) {
        double got = isokit::metrics::acceptability(row.chrf_phrase, row.phrase_lc);
        double diff = std::fabs(got - row.expected);
        worst = std::max(worst, diff);
        pass = pass && diff <= 0.25;
    }
    char detail[128];
    std::snprintf(detail, sizeof(detail), "8 rows, max |diff| = %.4f (tolerance 0.25)", worst);
    report("acceptability-formula-fidelity", pass, detail);
}

// DP equals the exhaustive oracle, bit-for-bit, on 1,000 seeded instances.
void criterion_dp_oracle_equivalence() {
    auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(660842);
    int mismatches = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        auto inst = testsupport::random_segmentation_instance(rng, 12, 5);
        auto dp = isokit::align::project_pauses(inst.target_text, inst.proportions);
        auto oracle = isokit::align::brute_force_project(inst.target_text, inst.proportions);
        if (dp.segmentation.breakpoints != oracle.breakpoints ||
            dp.segmentation.cost != oracle.cost)
            ++mismatches;
    }
    char detail[128];
    std::snprintf(detail, sizeof(detail), "1000 instances, %d mismatches, %.2f s", mismatches,
                  seconds_since(start));
    report("dp-oracle-equivalence", mismatches == 0 && seconds_since(start) < 10.0, detail);
}

// Wherever projection succeeds on every pair, SA of the projected corpus is
// exactly 100.
void criterion_projection_guarantees_sa() {
    std::mt19937_64 rng(550);
    int bad_corpora = 0;
    for (int trial = 0; trial < 500; ++trial) {
        std::uniform_int_distribution<int> pair_count(1, 8);
        isokit::Corpus corpus;
        std::vector<isokit::PauseMarkedSentence> hyps;
        int pairs = pair_count(rng);
        for (int p = 0; p < pairs; ++p) {
            isokit::BitextPair pair;
            pair.id = std::to_string(p + 1);
            pair.source = testsupport::random_sentence(rng);
            std::size_t n = pair.source.phrases.size();
            // Target with at least n tokens so projection cannot fail.
            std::uniform_int_distribution<int> extra(0, 10);
            std::string target =
                testsupport::random_text(rng, static_cast<int>(n) + extra(rng),
                                         static_cast<int>(n) + 10);
            auto proportions = isokit::align::source_char_proportions(pair.source);
            hyps.push_back(isokit::align::project_pauses(target, proportions).sentence);
            pair.target = hyps.back();
            corpus.pairs.push_back(std::move(pair));
        }
        if (isokit::metrics::segmentation_accuracy(corpus, hyps) != 100.0)
            ++bad_corpora;
    }
    char detail[128];
    std::snprintf(detail, sizeof(detail), "500 corpora, %d with SA != 100", bad_corpora);
    report("projection-guarantees-sa-100", bad_corpora == 0, detail);
}

void criterion_metric_bounds_and_relations() {
    std::mt19937_64 rng(1001);
    int violations = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        auto c = testsupport::random_eval_case(rng);
        isokit::metrics::MetricReport r = isokit::metrics::evaluate(c.corpus, c.hypotheses);
        for (double v : {r.bleu, r.chrf_phrase, r.sa, r.phrase_lc, r.acceptability})
            if (!(v >= 0.0 && v <= 100.0))
                ++violations;
        if (r.phrase_lc > r.sa + 1e-12)
            ++violations;
        if (r.acceptability > std::min(r.chrf_phrase, r.phrase_lc) + 1e-9)
            ++violations;
        // Identity laws on this corpus's reference side.
        std::string sample = isokit::joined_text(c.corpus.pairs[0].target);
        if (isokit::metrics::chrf(sample, sample) != 100.0)
            ++violations;
        std::vector<std::string> refs;
        for (const auto& pair : c.corpus.pairs)
            refs.push_back(isokit::joined_text(pair.target));
        if (isokit::metrics::corpus_bleu(refs, refs) != 100.0)
            ++violations;
        double t05 = isokit::metrics::phrase_lc(c.corpus, c.hypotheses, 0.05);
        double t10 = isokit::metrics::phrase_lc(c.corpus, c.hypotheses, 0.10);
        double t25 = isokit::metrics::phrase_lc(c.corpus, c.hypotheses, 0.25);
        if (t05 > t10 || t10 > t25)
            ++violations;
    }
    char detail[128];
    std::snprintf(detail, sizeof(detail), "1000 corpora, %d violations", violations);
    report("metric-bounds-and-order-relations", violations == 0, detail);
}

void criterion_ngram_oracle_agreement() {
    int checked = 0, agreed = 0;
    auto check = [&](double mine, double theirs) {
        ++checked;
        if (std::fabs(mine - theirs) <= 1e-9 * std::max(1.0, std::fabs(theirs)))
            ++agreed;
    };

    using SV = std::vector<std::string>;
    const std::pair<SV, SV> bleu_fixtures[] = {
        {{"the cat sat on the mat"}, {"the cat sat on the mat"}},
        {{"the cat sat on the mat"}, {"the cat is on the mat"}},
        {{"the cat sat on the mat", "a b c d e"}, {"the cat is on the mat", "a b c d e"}},
        {{"the the cat sat on the mat"}, {"the cat sat on the mat"}},
        {{"the cat sat on"}, {"the cat sat on the mat"}},
        {{"hello, world! again now"}, {"hello , world ! again now"}},
    };
    for (const auto& [hyp, ref] : bleu_fixtures)
        check(isokit::metrics::corpus_bleu(hyp, ref), oracles::bleu(hyp, ref));

    const char* chrf_fixtures[][2] = {
        {"abc", "abc"},
        {"abcd", "efgh"},
        {"abcd", "abce"},
        {"hello world", "hello there"},
        {"né pas", "ne pas"},
        {"guten morgen allerseits", "guten abend allerseits"},
    };
    for (const auto& f : chrf_fixtures)
        check(isokit::metrics::chrf(f[0], f[1]), oracles::chrf(f[0], f[1]));

    // Pinned hand-derived values on top of the oracle cross-check.
    check(isokit::metrics::chrf("abcd", "abce"), 100.0 * 23.0 / 48.0);
    const SV clip_hyp = {"the the cat sat on the mat"};
    const SV clip_ref = {"the cat sat on the mat"};
    check(isokit::metrics::corpus_bleu(clip_hyp, clip_ref), 100.0 * std::pow(3.0 / 7.0, 0.25));

    char detail[128];
    std::snprintf(detail, sizeof(detail), "%d/%d fixtures agree to 1e-9 relative", agreed,
                  checked);
    report("bleu-chrf-oracle-agreement", agreed == checked, detail);
}

void criterion_synthesis_distribution() {
    auto start = std::chrono::steady_clock::now();
    isokit::synth::PhraseLengthDistribution dist(
        std::map<std::size_t, std::uint64_t>{{4, 2}, {7, 3}, {12, 1}, {18, 2}, {25, 2}});
    isokit::synth::SplitMix64 rng(20260808);
    const int n = 10000;
    std::map<std::size_t, std::uint64_t> counts;
    for (int i = 0; i < n; ++i)
        ++counts[dist.sample(rng)];
    double tv = 0.0;
    for (const auto& [length, count] : dist.bins())
        tv += std::fabs(static_cast<double>(count) / static_cast<double>(dist.total()) -
                        static_cast<double>(counts[length]) / n);
    tv /= 2.0;

    // Same seed, byte-identical generation.
    std::mt19937_64 gen(6);
    std::vector<std::string> sources, targets;
    for (int i = 0; i < 50; ++i) {
        sources.push_back(testsupport::random_text(gen, 2, 15));
        targets.push_back(testsupport::random_text(gen, 2, 15));
    }
    auto render = [](const isokit::synth::SynthesisResult& r) {
        std::string out;
        for (const auto& pair : r.corpus.pairs)
            out += isokit::serialize(pair.source) + "\t" + isokit::serialize(pair.target) + "\n";
        for (const auto& reject : r.rejects)
            out += "!" + reject.id + "\n";
        return out;
    };
    std::string run_a = render(isokit::synth::synthesize_corpus(sources, targets, dist, {42}));
    std::string run_b = render(isokit::synth::synthesize_corpus(sources, targets, dist, {42}));
    double elapsed = seconds_since(start);

    bool pass = tv < 0.05 && run_a == run_b && elapsed < 5.0;
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "TV distance %.4f (< 0.05), reruns %s, %.2f s (< 5 s)", tv,
                  run_a == run_b ? "byte-identical" : "DIFFER", elapsed);
    report("synthesis-distribution-fidelity", pass, detail);
}

void criterion_relaxation_contract() {
    std::mt19937_64 rng(31415);
    int violations = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        isokit::timing::DubbingPlan plan = testsupport::random_plan(rng, 0.3);
        isokit::timing::DubbingPlan relaxed = isokit::timing::relax(plan, 0.3);
        for (std::size_t i = 1; i < relaxed.items.size(); ++i)
            if (relaxed.items[i].start - relaxed.items[i - 1].end < 0.3 - 1e-12)
                ++violations;
        double span_before = plan.items.back().end - plan.items.front().start;
        double span_after = relaxed.items.back().end - relaxed.items.front().start;
        if (std::fabs(span_before - span_after) > 1e-9)
            ++violations;
        if (relaxed.items.front().start != plan.items.front().start ||
            relaxed.items.back().end != plan.items.back().end)
            ++violations;
        for (double tau : {0.1, 0.2, 0.3})
            if (isokit::timing::smoothness(relaxed, tau) <
                isokit::timing::smoothness(plan, tau) - 1e-12)
                ++violations;
    }

    // Two-phrase case against a 1 ms grid search over the single pause.
    std::mt19937_64 rng2(9090);
    int grid_misses = 0;
    int grid_cases = 0;
    while (grid_cases < 100) {
        isokit::timing::DubbingPlan plan = testsupport::random_plan(rng2, 0.3, 2);
        if (plan.items.size() != 2)
            continue;
        ++grid_cases;
        isokit::timing::DubbingPlan relaxed = isokit::timing::relax(plan, 0.3);
        double gap = plan.items[1].start - plan.items[0].end;
        double slack = gap - 0.3;
        bool grow_left = plan.items[0].rate() > plan.items[1].rate();
        double best_dev = isokit::timing::rate_deviation(plan.items[0], plan.items[1]);
        isokit::timing::DubbingPlan best = plan;
        for (double x = 0.0; x <= slack + 1e-12; x += 0.001) {
            isokit::timing::DubbingPlan candidate = plan;
            if (grow_left)
                candidate.items[0].end += x;
            else
                candidate.items[1].start -= x;
            double dev = isokit::timing::rate_deviation(candidate.items[0], candidate.items[1]);
            if (dev < best_dev) {
                best_dev = dev;
                best = candidate;
            }
        }
        if (std::fabs(relaxed.items[0].end - best.items[0].end) > 1e-3 + 1e-9 ||
            std::fabs(relaxed.items[1].start - best.items[1].start) > 1e-3 + 1e-9)
            ++grid_misses;
    }
    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "1000 plans, %d contract violations; grid oracle %d/%d within 1 ms",
                  violations, grid_cases - grid_misses, grid_cases);
    report("relaxation-contract", violations == 0 && grid_misses == 0, detail);
}

void criterion_round_trip_parsing() {
    std::mt19937_64 rng(20260807);
    int failures = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        isokit::PauseMarkedSentence s = testsupport::random_sentence(rng, 5, 6);
        if (isokit::parse_pause_marked(isokit::serialize(s)) != s)
            ++failures;
    }
    char detail[96];
    std::snprintf(detail, sizeof(detail), "1000 sentences, %d round-trip failures", failures);
    report("round-trip-parsing", failures == 0, detail);
}

void criterion_performance() {
    std::mt19937_64 rng(777);
    isokit::Corpus corpus;
    std::vector<isokit::PauseMarkedSentence> hyps;
    corpus.pairs.reserve(10000);
    for (int i = 0; i < 10000; ++i) {
        isokit::BitextPair pair;
        pair.id = std::to_string(i + 1);
        pair.source = testsupport::random_sentence(rng, 4, 6);
        pair.target = testsupport::random_sentence(rng, 4, 6);
        hyps.push_back(testsupport::mutate_sentence(pair.target, rng));
        corpus.pairs.push_back(std::move(pair));
    }

    auto start = std::chrono::steady_clock::now();
    isokit::metrics::MetricReport serial = isokit::metrics::evaluate(corpus, hyps);
    double elapsed = seconds_since(start);

    isokit::metrics::EvalOptions threaded;
    threaded.threads = 4;
    isokit::metrics::MetricReport parallel = isokit::metrics::evaluate(corpus, hyps, threaded);
    bool identical = serial.bleu == parallel.bleu && serial.chrf_phrase == parallel.chrf_phrase &&
                     serial.sa == parallel.sa && serial.phrase_lc == parallel.phrase_lc &&
                     serial.acceptability == parallel.acceptability;

    char detail[160];
    std::snprintf(detail, sizeof(detail),
                  "10000 pairs in %.2f s single-threaded (< 5 s), 4-thread output %s", elapsed,
                  identical ? "bit-identical" : "DIFFERS");
    report("eval-performance-and-thread-determinism", elapsed < 5.0 && identical, detail);
}

} // namespace

int main() {
    criterion_acceptability_fidelity();
    criterion_dp_oracle_equivalence();
    criterion_projection_guarantees_sa();
    criterion_metric_bounds_and_relations();
    criterion_ngram_oracle_agreement();
    criterion_synthesis_distribution();
    criterion_relaxation_contract();
    criterion_round_trip_parsing();
    criterion_performance();
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
