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
// Evaluation suite for pause-marked bitext:
//
//   bleu           corpus BLEU on marker-stripped sentences
//   chrf           character n-gram F-score of a single string pair
//   chrf_phrase    ChrF pooled over order-wise aligned phrase pairs
//   sa             % of sentences whose phrase count matches the source
//   phrase_lc      % of sentences with every phrase within a +-tolerance
//                  character budget of the corresponding source phrase
//   acceptability  chrf_phrase * phrase_lc / 100
//
// All corpus-level statistics are integer counts accumulated in corpus
// order, so results are bit-identical no matter how many threads computed
// the per-sentence parts.

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "isokit/error.hpp"
#include "isokit/parallel.hpp"
#include "isokit/text.hpp"
#include "isokit/unicode.hpp"

namespace isokit::metrics {

inline constexpr int kBleuMaxOrder = 4;
inline constexpr int kDefaultChrfMaxOrder = 6;
inline constexpr double kDefaultChrfBeta = 2.0;
inline constexpr double kDefaultLcTolerance = 0.10;

// Per-order n-gram bookkeeping shared by BLEU (token n-grams) and ChrF
// (character n-grams). matched[k] is clipped: min(hyp count, ref count)
// summed per distinct n-gram, so matched <= min(hyp_total, ref_total).
struct NgramStats {
    std::vector<std::int64_t> matched;
    std::vector<std::int64_t> hyp_total;
    std::vector<std::int64_t> ref_total;
    std::int64_t hyp_len = 0;
    std::int64_t ref_len = 0;

    explicit NgramStats(int max_order = kBleuMaxOrder)
        : matched(static_cast<std::size_t>(max_order), 0),
          hyp_total(static_cast<std::size_t>(max_order), 0),
          ref_total(static_cast<std::size_t>(max_order), 0) {}

    int max_order() const { return static_cast<int>(matched.size()); }

    void add(const NgramStats& other) {
        for (std::size_t k = 0; k < matched.size(); ++k) {
            matched[k] += other.matched[k];
            hyp_total[k] += other.hyp_total[k];
            ref_total[k] += other.ref_total[k];
        }
        hyp_len += other.hyp_len;
        ref_len += other.ref_len;
    }
};

// BLEU tokenizer, pinned for reproducibility: every punctuation code point
// (Unicode category P) becomes its own token, everything else splits on
// whitespace. No lowercasing.
inline std::vector<std::string> bleu_tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t start = pos;
        char32_t cp = utf8_next(text, pos);
        if (cp < 0x80 && is_ascii_space(static_cast<char>(cp))) {
            if (!current.empty())
                tokens.push_back(std::move(current)), current.clear();
        } else if (is_punctuation(cp)) {
            if (!current.empty())
                tokens.push_back(std::move(current)), current.clear();
            tokens.emplace_back(text.substr(start, pos - start));
        } else {
            current.append(text.substr(start, pos - start));
        }
    }
    if (!current.empty())
        tokens.push_back(std::move(current));
    return tokens;
}

namespace detail {

// Map tokens of one sentence pair to dense ids and count clipped n-gram
// matches per order. N-gram keys are the packed id bytes.
inline NgramStats token_ngram_stats(const std::vector<std::string>& hyp,
                                    const std::vector<std::string>& ref, int max_order) {
    NgramStats stats(max_order);
    stats.hyp_len = static_cast<std::int64_t>(hyp.size());
    stats.ref_len = static_cast<std::int64_t>(ref.size());

    std::unordered_map<std::string_view, std::uint32_t> vocab;
    auto to_ids = [&](const std::vector<std::string>& tokens) {
        std::vector<std::uint32_t> ids;
        ids.reserve(tokens.size());
        for (const std::string& t : tokens) {
            auto [it, _] = vocab.try_emplace(t, static_cast<std::uint32_t>(vocab.size()));
            ids.push_back(it->second);
        }
        return ids;
    };
    std::vector<std::uint32_t> hyp_ids = to_ids(hyp);
    std::vector<std::uint32_t> ref_ids = to_ids(ref);

    auto pack = [](std::span<const std::uint32_t> ids, std::size_t begin, std::size_t count) {
        std::string key;
        key.resize(count * 4);
        for (std::size_t i = 0; i < count; ++i) {
            std::uint32_t v = ids[begin + i];
            key[i * 4 + 0] = static_cast<char>(v & 0xFF);
            key[i * 4 + 1] = static_cast<char>((v >> 8) & 0xFF);
            key[i * 4 + 2] = static_cast<char>((v >> 16) & 0xFF);
            key[i * 4 + 3] = static_cast<char>((v >> 24) & 0xFF);
        }
        return key;
    };

    for (int order = 1; order <= max_order; ++order) {
        std::size_t k = static_cast<std::size_t>(order);
        std::int64_t hyp_count = hyp_ids.size() >= k ? static_cast<std::int64_t>(hyp_ids.size() - k + 1) : 0;
        std::int64_t ref_count = ref_ids.size() >= k ? static_cast<std::int64_t>(ref_ids.size() - k + 1) : 0;
        stats.hyp_total[k - 1] += hyp_count;
        stats.ref_total[k - 1] += ref_count;
        if (hyp_count == 0 || ref_count == 0)
            continue;
        std::unordered_map<std::string, std::int64_t> ref_ngrams;
        for (std::size_t i = 0; i + k <= ref_ids.size(); ++i)
            ++ref_ngrams[pack(ref_ids, i, k)];
        std::unordered_map<std::string, std::int64_t> hyp_ngrams;
        for (std::size_t i = 0; i + k <= hyp_ids.size(); ++i)
            ++hyp_ngrams[pack(hyp_ids, i, k)];
        for (const auto& [gram, count] : hyp_ngrams) {
            auto it = ref_ngrams.find(gram);
            if (it != ref_ngrams.end())
                stats.matched[k - 1] += count < it->second ? count : it->second;
        }
    }
    return stats;
}

// Character n-gram statistics on whitespace-removed text. N-grams are
// substrings spanning whole Unicode scalars.
inline NgramStats char_ngram_stats(std::string_view hyp_raw, std::string_view ref_raw,
                                   int max_order) {
    NgramStats stats(max_order);
    std::string hyp = remove_whitespace(hyp_raw);
    std::string ref = remove_whitespace(ref_raw);
    std::vector<std::size_t> hyp_off = scalar_offsets(hyp);
    std::vector<std::size_t> ref_off = scalar_offsets(ref);
    std::size_t hyp_n = hyp_off.size() - 1;
    std::size_t ref_n = ref_off.size() - 1;
    stats.hyp_len = static_cast<std::int64_t>(hyp_n);
    stats.ref_len = static_cast<std::int64_t>(ref_n);

    for (int order = 1; order <= max_order; ++order) {
        std::size_t k = static_cast<std::size_t>(order);
        std::int64_t hyp_count = hyp_n >= k ? static_cast<std::int64_t>(hyp_n - k + 1) : 0;
        std::int64_t ref_count = ref_n >= k ? static_cast<std::int64_t>(ref_n - k + 1) : 0;
        stats.hyp_total[k - 1] += hyp_count;
        stats.ref_total[k - 1] += ref_count;
        if (hyp_count == 0 || ref_count == 0)
            continue;
        std::unordered_map<std::string_view, std::int64_t> ref_ngrams;
        for (std::size_t i = 0; i + k <= ref_n; ++i)
            ++ref_ngrams[std::string_view(ref).substr(ref_off[i], ref_off[i + k] - ref_off[i])];
        std::unordered_map<std::string_view, std::int64_t> hyp_ngrams;
        for (std::size_t i = 0; i + k <= hyp_n; ++i)
            ++hyp_ngrams[std::string_view(hyp).substr(hyp_off[i], hyp_off[i + k] - hyp_off[i])];
        for (const auto& [gram, count] : hyp_ngrams) {
            auto it = ref_ngrams.find(gram);
            if (it != ref_ngrams.end())
                stats.matched[k - 1] += count < it->second ? count : it->second;
        }
    }
    return stats;
}

} // namespace detail

// BLEU from pooled statistics: geometric mean of clipped precisions over
// orders 1..4 with brevity penalty exp(1 - r/c) when c < r. Zero matches at
// any order give 0 rather than a smoothed value.
inline double bleu_from_stats(const NgramStats& stats) {
    double log_precision_sum = 0.0;
    for (int k = 0; k < stats.max_order(); ++k) {
        if (stats.matched[k] == 0)
            return 0.0;
        log_precision_sum += std::log(static_cast<double>(stats.matched[k]) /
                                      static_cast<double>(stats.hyp_total[k]));
    }
    double score = std::exp(log_precision_sum / stats.max_order());
    if (stats.hyp_len < stats.ref_len && stats.hyp_len > 0)
        score *= std::exp(1.0 - static_cast<double>(stats.ref_len) /
                                    static_cast<double>(stats.hyp_len));
    return 100.0 * score;
}

inline double corpus_bleu(std::span<const std::string> hypotheses,
                          std::span<const std::string> references, unsigned threads = 1) {
    if (hypotheses.size() != references.size())
        throw LengthMismatchError("hypothesis/reference counts differ");
    if (hypotheses.empty())
        throw EmptyCorpusError("no sentences to score");
    std::vector<NgramStats> per_pair(hypotheses.size(), NgramStats(kBleuMaxOrder));
    parallel_for_index(hypotheses.size(), threads, [&](std::size_t i) {
        per_pair[i] = detail::token_ngram_stats(bleu_tokenize(hypotheses[i]),
                                                bleu_tokenize(references[i]), kBleuMaxOrder);
    });
    NgramStats total(kBleuMaxOrder);
    for (const NgramStats& s : per_pair)
        total.add(s);
    return bleu_from_stats(total);
}

// F_beta over per-order precision/recall averaged arithmetically. Orders
// with no n-grams on either side are skipped; an order present on only one
// side contributes zero precision or recall.
inline double fscore_from_stats(const NgramStats& stats, double beta) {
    double precision_sum = 0.0;
    double recall_sum = 0.0;
    int effective_orders = 0;
    for (int k = 0; k < stats.max_order(); ++k) {
        if (stats.hyp_total[k] == 0 && stats.ref_total[k] == 0)
            continue;
        ++effective_orders;
        if (stats.hyp_total[k] > 0)
            precision_sum += static_cast<double>(stats.matched[k]) /
                             static_cast<double>(stats.hyp_total[k]);
        if (stats.ref_total[k] > 0)
            recall_sum += static_cast<double>(stats.matched[k]) /
                          static_cast<double>(stats.ref_total[k]);
    }
    if (effective_orders == 0)
        return 0.0;
    double precision = precision_sum / effective_orders;
    double recall = recall_sum / effective_orders;
    double beta2 = beta * beta;
    double denom = beta2 * precision + recall;
    if (denom == 0.0)
        return 0.0;
    return 100.0 * (1.0 + beta2) * precision * recall / denom;
}

inline double chrf(std::string_view hypothesis, std::string_view reference,
                   int max_order = kDefaultChrfMaxOrder, double beta = kDefaultChrfBeta) {
    bool hyp_empty = remove_whitespace(hypothesis).empty();
    bool ref_empty = remove_whitespace(reference).empty();
    if (hyp_empty && ref_empty)
        return 100.0;
    if (hyp_empty || ref_empty)
        return 0.0;
    return fscore_from_stats(detail::char_ngram_stats(hypothesis, reference, max_order), beta);
}

struct ChrfPhraseOptions {
    int max_order = kDefaultChrfMaxOrder;
    double beta = kDefaultChrfBeta;
    // micro (default): pool n-gram statistics over all phrase pairs, then
    // compute one F-score. macro: mean of per-phrase-pair chrf scores.
    bool macro = false;
};

namespace detail {

// Order-wise phrase pairs of one sentence; surplus phrases on either side
// pair with the empty string so they cost precision or recall.
template <typename Fn>
void for_each_phrase_pair(const PauseMarkedSentence& hypothesis,
                          const PauseMarkedSentence& reference, Fn&& fn) {
    std::size_t n = hypothesis.phrases.size() > reference.phrases.size()
                        ? hypothesis.phrases.size()
                        : reference.phrases.size();
    for (std::size_t i = 0; i < n; ++i) {
        std::string_view h = i < hypothesis.phrases.size() ? std::string_view(hypothesis.phrases[i])
                                                           : std::string_view();
        std::string_view r = i < reference.phrases.size() ? std::string_view(reference.phrases[i])
                                                          : std::string_view();
        fn(h, r);
    }
}

} // namespace detail

inline double chrf_phrase(const Corpus& corpus, std::span<const PauseMarkedSentence> hypotheses,
                          ChrfPhraseOptions options = {}, unsigned threads = 1) {
    if (hypotheses.size() != corpus.pairs.size())
        throw LengthMismatchError("hypothesis count differs from corpus size");
    if (corpus.empty())
        throw EmptyCorpusError("empty corpus");

    if (!options.macro) {
        std::vector<NgramStats> per_pair(corpus.size(), NgramStats(options.max_order));
        parallel_for_index(corpus.size(), threads, [&](std::size_t i) {
            NgramStats stats(options.max_order);
            detail::for_each_phrase_pair(hypotheses[i], corpus.pairs[i].target,
                                         [&](std::string_view h, std::string_view r) {
                                             stats.add(detail::char_ngram_stats(h, r,
                                                                                options.max_order));
                                         });
            per_pair[i] = std::move(stats);
        });
        NgramStats total(options.max_order);
        for (const NgramStats& s : per_pair)
            total.add(s);
        return fscore_from_stats(total, options.beta);
    }

    struct MacroPart {
        double score_sum = 0.0;
        std::int64_t pair_count = 0;
    };
    std::vector<MacroPart> parts(corpus.size());
    parallel_for_index(corpus.size(), threads, [&](std::size_t i) {
        MacroPart part;
        detail::for_each_phrase_pair(hypotheses[i], corpus.pairs[i].target,
                                     [&](std::string_view h, std::string_view r) {
                                         part.score_sum += chrf(h, r, options.max_order,
                                                                options.beta);
                                         ++part.pair_count;
                                     });
        parts[i] = part;
    });
    double score_sum = 0.0;
    std::int64_t pair_count = 0;
    for (const MacroPart& p : parts) {
        score_sum += p.score_sum;
        pair_count += p.pair_count;
    }
    return pair_count == 0 ? 0.0 : score_sum / static_cast<double>(pair_count);
}

inline double segmentation_accuracy(const Corpus& corpus,
                                    std::span<const PauseMarkedSentence> hypotheses) {
    if (hypotheses.size() != corpus.pairs.size())
        throw LengthMismatchError("hypothesis count differs from corpus size");
    if (corpus.empty())
        throw EmptyCorpusError("empty corpus");
    std::int64_t matching = 0;
    for (std::size_t i = 0; i < corpus.size(); ++i)
        if (hypotheses[i].phrases.size() == corpus.pairs[i].source.phrases.size())
            ++matching;
    return 100.0 * static_cast<double>(matching) / static_cast<double>(corpus.size());
}

namespace detail {

inline bool length_compliant(const PauseMarkedSentence& source,
                             const PauseMarkedSentence& hypothesis, double tolerance) {
    if (hypothesis.phrases.size() != source.phrases.size())
        return false;
    // Boundaries are inclusive; the epsilon absorbs binary rounding of
    // (1 +- tolerance) * L, which sits far below the integer resolution of
    // character counts.
    constexpr double eps = 1e-9;
    for (std::size_t i = 0; i < source.phrases.size(); ++i) {
        double src_len = static_cast<double>(char_length(source.phrases[i]));
        double hyp_len = static_cast<double>(char_length(hypothesis.phrases[i]));
        if (hyp_len < (1.0 - tolerance) * src_len - eps)
            return false;
        if (hyp_len > (1.0 + tolerance) * src_len + eps)
            return false;
    }
    return true;
}

} // namespace detail

// A sentence complies only when its phrase count matches the source and
// every phrase fits the per-phrase character budget, so phrase_lc can never
// exceed segmentation accuracy.
inline double phrase_lc(const Corpus& corpus, std::span<const PauseMarkedSentence> hypotheses,
                        double tolerance = kDefaultLcTolerance) {
    if (hypotheses.size() != corpus.pairs.size())
        throw LengthMismatchError("hypothesis count differs from corpus size");
    if (corpus.empty())
        throw EmptyCorpusError("empty corpus");
    if (tolerance < 0.0)
        throw OutOfRangeError("tolerance must be non-negative");
    std::int64_t compliant = 0;
    for (std::size_t i = 0; i < corpus.size(); ++i)
        if (detail::length_compliant(corpus.pairs[i].source, hypotheses[i], tolerance))
            ++compliant;
    return 100.0 * static_cast<double>(compliant) / static_cast<double>(corpus.size());
}

inline double acceptability(double chrf_phrase_score, double phrase_lc_score) {
    if (chrf_phrase_score < 0.0 || chrf_phrase_score > 100.0)
        throw OutOfRangeError("chrf_phrase outside [0,100]");
    if (phrase_lc_score < 0.0 || phrase_lc_score > 100.0)
        throw OutOfRangeError("phrase_lc outside [0,100]");
    return chrf_phrase_score * phrase_lc_score / 100.0;
}

struct MetricReport {
    double bleu = 0.0;
    double chrf_phrase = 0.0;
    double sa = 0.0;
    double phrase_lc = 0.0;
    double acceptability = 0.0;
    std::size_t sentence_count = 0;
    std::optional<double> smoothness;
};

struct EvalOptions {
    double tolerance = kDefaultLcTolerance;
    int chrf_max_order = kDefaultChrfMaxOrder;
    double chrf_beta = kDefaultChrfBeta;
    bool macro_chrf = false;
    unsigned threads = 1;
};

inline MetricReport evaluate(const Corpus& corpus,
                             std::span<const PauseMarkedSentence> hypotheses,
                             EvalOptions options = {}) {
    if (hypotheses.size() != corpus.pairs.size())
        throw LengthMismatchError("hypothesis count differs from corpus size");
    if (corpus.empty())
        throw EmptyCorpusError("empty corpus");

    std::vector<std::string> hyp_text(corpus.size());
    std::vector<std::string> ref_text(corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        hyp_text[i] = joined_text(hypotheses[i]);
        ref_text[i] = joined_text(corpus.pairs[i].target);
    }

    MetricReport report;
    report.sentence_count = corpus.size();
    report.bleu = corpus_bleu(hyp_text, ref_text, options.threads);
    report.chrf_phrase = chrf_phrase(corpus, hypotheses,
                                     {options.chrf_max_order, options.chrf_beta,
                                      options.macro_chrf},
                                     options.threads);
    report.sa = segmentation_accuracy(corpus, hypotheses);
    report.phrase_lc = phrase_lc(corpus, hypotheses, options.tolerance);
    report.acceptability = acceptability(report.chrf_phrase, report.phrase_lc);
    return report;
}

} // namespace isokit::metrics
