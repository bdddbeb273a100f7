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
// Shared generators for randomized tests. Everything is seeded by the
// caller so failures reproduce.

#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "isokit/text.hpp"
#include "isokit/timing.hpp"

namespace testsupport {

inline const std::vector<std::string>& word_pool() {
    static const std::vector<std::string> pool = {
        "the",  "cat",   "saß",   "on",    "mat",  "und",  "aber", "wir",   "gehen",
        "nach", "hause", "heute", "très",  "bien", "vite", "どこ", "words", "pause",
        "some", "other", "line",  "stück", "gros", "ok"};
    return pool;
}

inline std::string random_word(std::mt19937_64& rng) {
    const auto& pool = word_pool();
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    return pool[pick(rng)];
}

inline std::string random_text(std::mt19937_64& rng, int min_words, int max_words) {
    std::uniform_int_distribution<int> count(min_words, max_words);
    int n = count(rng);
    std::string text;
    for (int i = 0; i < n; ++i) {
        if (i > 0)
            text += ' ';
        text += random_word(rng);
    }
    return text;
}

inline isokit::PauseMarkedSentence random_sentence(std::mt19937_64& rng, int max_phrases = 4,
                                                   int max_words_per_phrase = 5) {
    std::uniform_int_distribution<int> phrase_count(1, max_phrases);
    isokit::PauseMarkedSentence sentence;
    int n = phrase_count(rng);
    for (int i = 0; i < n; ++i)
        sentence.phrases.push_back(random_text(rng, 1, max_words_per_phrase));
    return sentence;
}

// Hypothesis derived from a reference: sometimes identical, sometimes
// resegmented, mutated, lengthened or shortened — enough variety to move
// every metric away from the trivial corners.
inline isokit::PauseMarkedSentence mutate_sentence(const isokit::PauseMarkedSentence& reference,
                                                   std::mt19937_64& rng) {
    std::uniform_int_distribution<int> mode(0, 4);
    switch (mode(rng)) {
    case 0:
        return reference;
    case 1: { // drop or duplicate one phrase
        isokit::PauseMarkedSentence out = reference;
        if (out.phrases.size() > 1 && rng() % 2 == 0)
            out.phrases.pop_back();
        else
            out.phrases.push_back(out.phrases.back());
        return out;
    }
    case 2: { // replace a word somewhere
        isokit::PauseMarkedSentence out = reference;
        std::uniform_int_distribution<std::size_t> pick(0, out.phrases.size() - 1);
        out.phrases[pick(rng)] = random_text(rng, 1, 4);
        return out;
    }
    case 3: { // resegment the same words into a different phrase count
        std::string joined = isokit::joined_text(reference);
        auto tokens = isokit::split_whitespace(joined);
        std::uniform_int_distribution<std::size_t> count(1, tokens.size());
        std::size_t phrases = count(rng);
        isokit::PauseMarkedSentence out;
        std::size_t begin = 0;
        for (std::size_t p = 0; p < phrases; ++p) {
            std::size_t remaining_phrases = phrases - p - 1;
            std::size_t max_end = tokens.size() - remaining_phrases;
            std::uniform_int_distribution<std::size_t> end_pick(begin + 1, max_end);
            std::size_t end = p + 1 == phrases ? tokens.size() : end_pick(rng);
            std::string phrase;
            for (std::size_t i = begin; i < end; ++i) {
                if (i > begin)
                    phrase += ' ';
                phrase += tokens[i];
            }
            out.phrases.push_back(phrase);
            begin = end;
        }
        return out;
    }
    default:
        return random_sentence(rng);
    }
}

struct SegmentationInstance {
    std::string target_text;
    std::vector<double> proportions;
};

// Small instance within the brute-force enumeration bound: up to max_tokens
// tokens of 1..6 characters, up to max_phrases target proportions taken
// from the character shares of a synthetic source.
inline SegmentationInstance random_segmentation_instance(std::mt19937_64& rng,
                                                         int max_tokens = 12,
                                                         int max_phrases = 5) {
    std::uniform_int_distribution<int> token_count(1, max_tokens);
    std::uniform_int_distribution<int> token_len(1, 6);
    int t = token_count(rng);
    std::string text;
    for (int i = 0; i < t; ++i) {
        if (i > 0)
            text += ' ';
        text += std::string(static_cast<std::size_t>(token_len(rng)), 'a' + i % 26);
    }
    std::uniform_int_distribution<int> phrase_count(1, std::min(max_phrases, t));
    int n = phrase_count(rng);
    std::uniform_int_distribution<int> weight(1, 30);
    std::vector<double> weights(static_cast<std::size_t>(n));
    double total = 0.0;
    for (double& w : weights) {
        w = static_cast<double>(weight(rng));
        total += w;
    }
    SegmentationInstance instance;
    instance.target_text = std::move(text);
    for (double w : weights)
        instance.proportions.push_back(w / total);
    return instance;
}

// Valid dubbing plan: positive durations, gaps at least min_pause plus a
// random amount of slack.
inline isokit::timing::DubbingPlan random_plan(std::mt19937_64& rng, double min_pause = 0.3,
                                               int max_items = 6) {
    std::uniform_int_distribution<int> item_count(1, max_items);
    std::uniform_int_distribution<int> text_len(3, 40);
    std::uniform_real_distribution<double> duration(0.4, 3.0);
    std::uniform_real_distribution<double> slack(0.0, 1.5);
    std::uniform_real_distribution<double> offset(0.0, 5.0);
    isokit::timing::DubbingPlan plan;
    double t = offset(rng);
    int n = item_count(rng);
    for (int i = 0; i < n; ++i) {
        double d = duration(rng);
        plan.items.push_back(
            {std::string(static_cast<std::size_t>(text_len(rng)), 'x'), t, t + d});
        t += d + min_pause + slack(rng);
    }
    return plan;
}

struct RandomEvalCase {
    isokit::Corpus corpus;
    std::vector<isokit::PauseMarkedSentence> hypotheses;
};

inline RandomEvalCase random_eval_case(std::mt19937_64& rng, int min_pairs = 1,
                                       int max_pairs = 10) {
    std::uniform_int_distribution<int> pair_count(min_pairs, max_pairs);
    RandomEvalCase out;
    int n = pair_count(rng);
    for (int i = 0; i < n; ++i) {
        isokit::BitextPair pair;
        pair.id = std::to_string(i + 1);
        pair.source = random_sentence(rng);
        pair.target = random_sentence(rng);
        out.corpus.pairs.push_back(std::move(pair));
        out.hypotheses.push_back(mutate_sentence(out.corpus.pairs.back().target, rng));
    }
    // Guarantee one sentence long enough that a perfect hypothesis matches
    // at every BLEU order.
    out.corpus.pairs[0].target = isokit::PauseMarkedSentence{{"alpha beta gamma delta epsilon"}};
    out.hypotheses[0] = mutate_sentence(out.corpus.pairs[0].target, rng);
    return out;
}

} // namespace testsupport
