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
// Synthetic pause annotation. Fit an empirical phrase-length histogram from
// an annotated seed corpus, then stamp pause structure onto raw bitext:
// sample phrase lengths for the source, cut at the nearest token
// boundaries, and project the resulting proportions onto the target.
//
// Everything is driven by splitmix64 with per-sentence streams derived from
// (seed, sentence index), so output is byte-identical across runs and
// thread counts.

#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "isokit/align.hpp"
#include "isokit/error.hpp"
#include "isokit/parallel.hpp"
#include "isokit/text.hpp"
#include "isokit/unicode.hpp"

namespace isokit::synth {

inline constexpr std::string_view kRngAlgorithm = "splitmix64";

// splitmix64 (Vigna, public domain reference constants). Chosen for its
// trivially portable, platform-independent sample stream.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, bound) via 128-bit multiply-shift; bias is below
    // bound / 2^64 and irrelevant at corpus scale.
    std::uint64_t next_below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * bound) >> 64);
    }

  private:
    std::uint64_t state_;
};

struct RngState {
    std::uint64_t seed = 0;
};

// Decorrelated per-sentence stream; sequential and parallel runs draw the
// same numbers for sentence i.
inline SplitMix64 sentence_stream(RngState rng, std::uint64_t sentence_index) {
    std::uint64_t z = rng.seed + 0x9E3779B97F4A7C15ULL * (sentence_index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return SplitMix64(z ^ (z >> 31));
}

// Empirical histogram over phrase character lengths.
class PhraseLengthDistribution {
  public:
    PhraseLengthDistribution() = default;

    explicit PhraseLengthDistribution(std::map<std::size_t, std::uint64_t> bins) {
        for (const auto& [length, count] : bins)
            add(length, count);
    }

    void add(std::size_t length, std::uint64_t count = 1) {
        if (length == 0)
            throw OutOfRangeError("phrase length bins start at 1");
        if (count == 0)
            return;
        bins_[length] += count;
        total_ += count;
    }

    const std::map<std::size_t, std::uint64_t>& bins() const { return bins_; }
    std::uint64_t total() const { return total_; }
    bool empty() const { return total_ == 0; }

    std::size_t min_length() const {
        if (bins_.empty())
            throw EmptyInputError("empty distribution");
        return bins_.begin()->first;
    }

    // Draw a length with probability proportional to its count.
    std::size_t sample(SplitMix64& rng) const {
        if (total_ == 0)
            throw EmptyInputError("empty distribution");
        std::uint64_t pick = rng.next_below(total_);
        std::uint64_t cumulative = 0;
        for (const auto& [length, count] : bins_) {
            cumulative += count;
            if (pick < cumulative)
                return length;
        }
        return bins_.rbegin()->first; // unreachable
    }

  private:
    std::map<std::size_t, std::uint64_t> bins_;
    std::uint64_t total_ = 0;
};

inline PhraseLengthDistribution
fit_length_distribution(std::span<const PauseMarkedSentence> annotated) {
    if (annotated.empty())
        throw EmptyInputError("no annotated sentences");
    PhraseLengthDistribution dist;
    for (const PauseMarkedSentence& sentence : annotated)
        for (const std::string& phrase : sentence.phrases)
            dist.add(char_length(phrase));
    return dist;
}

// Cut a raw sentence into phrases whose lengths follow the distribution.
// Each draw L places a cut at the token boundary whose phrase length is
// nearest to L (exact midpoints resolve to the earlier boundary); a
// trailing remainder shorter than the smallest histogram bin merges into
// the final phrase instead of becoming a fragment.
inline PauseMarkedSentence sample_pause_structure(std::string_view raw_sentence,
                                                  const PhraseLengthDistribution& dist,
                                                  SplitMix64& rng,
                                                  std::string_view marker = kDefaultMarker) {
    if (raw_sentence.find(marker) != std::string_view::npos)
        throw ContainsMarkerError("raw sentence already contains the pause marker");
    if (dist.empty())
        throw EmptyInputError("empty distribution");
    std::vector<std::string_view> tokens = split_whitespace(raw_sentence);
    if (tokens.empty())
        throw EmptyLineError("sentence is empty or whitespace only");

    std::size_t t = tokens.size();
    std::vector<std::size_t> prefix(t + 1, 0);
    for (std::size_t i = 0; i < t; ++i)
        prefix[i + 1] = prefix[i] + char_length(tokens[i]);
    // Chars of tokens [a, b) plus joining spaces.
    auto span_chars = [&](std::size_t a, std::size_t b) {
        return prefix[b] - prefix[a] + (b - a - 1);
    };

    PauseMarkedSentence sentence;
    std::size_t begin = 0;
    auto emit = [&](std::size_t end) {
        std::string phrase;
        for (std::size_t i = begin; i < end; ++i) {
            if (i > begin)
                phrase += ' ';
            phrase += tokens[i];
        }
        sentence.phrases.push_back(std::move(phrase));
        begin = end;
    };

    while (begin < t) {
        std::size_t target_len = dist.sample(rng);
        // Nearest boundary: phrase lengths grow with the boundary index, so
        // the first distance minimum is the earlier of any tied pair.
        std::size_t best_end = begin + 1;
        std::size_t best_dist = static_cast<std::size_t>(-1);
        for (std::size_t end = begin + 1; end <= t; ++end) {
            std::size_t len = span_chars(begin, end);
            std::size_t d = len > target_len ? len - target_len : target_len - len;
            if (d < best_dist) {
                best_dist = d;
                best_end = end;
            }
            if (len >= target_len)
                break; // distances only grow past this point
        }
        if (best_end < t && span_chars(best_end, t) < dist.min_length())
            best_end = t; // merge the short remainder into this phrase
        emit(best_end);
    }
    return sentence;
}

struct Reject {
    std::string id;
    std::string reason;
};

struct SynthesisResult {
    Corpus corpus;
    std::vector<Reject> rejects;
};

// Stamp pause structure onto aligned raw bitext. Sources get sampled
// phrase-pause structure; targets get the markers projected at matching
// character proportions, so every emitted pair has equal phrase counts.
// Pairs whose target is too short to hold the sampled structure land in
// the reject list instead of being dropped silently.
inline SynthesisResult synthesize_corpus(std::span<const std::string> sources,
                                         std::span<const std::string> targets,
                                         const PhraseLengthDistribution& dist, RngState rng,
                                         align::CostKind cost = align::CostKind::L1,
                                         unsigned threads = 1,
                                         std::string_view marker = kDefaultMarker) {
    if (sources.size() != targets.size())
        throw LengthMismatchError("source/target counts differ");

    struct Slot {
        bool ok = false;
        BitextPair pair;
        std::string reason;
    };
    std::vector<Slot> slots(sources.size());

    parallel_for_index(sources.size(), threads, [&](std::size_t i) {
        Slot& slot = slots[i];
        slot.pair.id = std::to_string(i + 1);
        SplitMix64 stream = sentence_stream(rng, i);
        try {
            slot.pair.source = sample_pause_structure(sources[i], dist, stream, marker);
        } catch (const Error& e) {
            // Corrupt source lines are hard errors; name the line.
            throw Error(e.kind(), "pair " + slot.pair.id + ": " + e.what());
        }
        try {
            auto proportions = align::source_char_proportions(slot.pair.source);
            slot.pair.target = align::project_pauses(targets[i], proportions, cost).sentence;
            slot.ok = true;
        } catch (const TooFewTokensError& e) {
            slot.reason = e.what();
        }
    });

    SynthesisResult result;
    for (Slot& slot : slots) {
        if (slot.ok)
            result.corpus.pairs.push_back(std::move(slot.pair));
        else
            result.rejects.push_back({std::move(slot.pair.id), std::move(slot.reason)});
    }
    return result;
}

} // namespace isokit::synth
