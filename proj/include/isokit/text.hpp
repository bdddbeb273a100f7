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
// Pause-marked sentence model.
//
// A spoken sentence is a sequence of phrases separated by audible pauses.
// On disk that is one line of text with a literal marker token between
// phrases:
//
//     But [pause] whose side are you on
//
// The marker must stand alone between whitespace; a marker at the start or
// end of a line, two adjacent markers, or a marker glued to other characters
// all indicate corrupt data and are rejected rather than repaired.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "isokit/error.hpp"
#include "isokit/unicode.hpp"

namespace isokit {

inline constexpr std::string_view kDefaultMarker = "[pause]";
inline constexpr double kDefaultPauseThreshold = 0.3; // seconds of silence

// Phrases in utterance order; pauses are the n-1 implicit separators.
struct PauseMarkedSentence {
    std::vector<std::string> phrases;

    std::size_t phrase_count() const { return phrases.size(); }
    std::size_t pause_count() const { return phrases.empty() ? 0 : phrases.size() - 1; }

    bool operator==(const PauseMarkedSentence&) const = default;
};

struct TimedSegment {
    std::string text;
    double start = 0.0; // seconds
    double end = 0.0;   // seconds

    double duration() const { return end - start; }

    bool operator==(const TimedSegment&) const = default;
};

// Phrases with absolute timestamps; pauses are the inter-segment gaps.
struct TimedSentence {
    std::vector<TimedSegment> segments;

    bool operator==(const TimedSentence&) const = default;
};

struct BitextPair {
    std::string id;
    PauseMarkedSentence source;
    PauseMarkedSentence target;
    std::optional<TimedSentence> source_timing;
};

struct Corpus {
    std::vector<BitextPair> pairs;

    std::size_t size() const { return pairs.size(); }
    bool empty() const { return pairs.empty(); }
};

// Throws unless every phrase is non-empty, trimmed, and marker-free.
inline void validate_sentence(const PauseMarkedSentence& sentence,
                              std::string_view marker = kDefaultMarker) {
    if (sentence.phrases.empty())
        throw EmptyPhraseError("sentence has no phrases");
    for (const std::string& phrase : sentence.phrases) {
        if (trim(phrase).empty())
            throw EmptyPhraseError("empty phrase");
        if (trim(phrase).size() != phrase.size())
            throw EmptyPhraseError("phrase has leading or trailing whitespace");
        if (phrase.find(marker) != std::string::npos)
            throw ContainsMarkerError("phrase contains the pause marker token");
    }
}

inline void validate_timed_sentence(const TimedSentence& sentence,
                                    double pause_threshold = kDefaultPauseThreshold) {
    if (sentence.segments.empty())
        throw InvalidTimingError("timed sentence has no segments");
    for (std::size_t i = 0; i < sentence.segments.size(); ++i) {
        const TimedSegment& seg = sentence.segments[i];
        if (!(seg.end > seg.start))
            throw InvalidTimingError("segment end must be greater than start");
        if (i > 0) {
            double gap = seg.start - sentence.segments[i - 1].end;
            if (gap < pause_threshold)
                throw InvalidTimingError("inter-segment gap below pause threshold");
        }
    }
}

// Parse one pause-marked line. The marker counts only where it stands alone
// between whitespace (or line boundaries). Text inside phrases keeps its
// original spacing so that parse(serialize(s)) == s.
inline void validate_marker(std::string_view marker) {
    if (marker.empty())
        throw OutOfRangeError("pause marker must be non-empty");
    for (char c : marker)
        if (is_ascii_space(c))
            throw OutOfRangeError("pause marker must not contain whitespace");
}

inline PauseMarkedSentence parse_pause_marked(std::string_view line,
                                              std::string_view marker = kDefaultMarker) {
    validate_marker(marker);
    if (trim(line).empty())
        throw EmptyLineError("line is empty or whitespace only");

    std::vector<std::size_t> marker_positions;
    for (std::size_t pos = line.find(marker); pos != std::string_view::npos;
         pos = line.find(marker, pos + 1)) {
        bool left_ok = pos == 0 || is_ascii_space(line[pos - 1]);
        bool right_ok = pos + marker.size() == line.size() || is_ascii_space(line[pos + marker.size()]);
        if (left_ok && right_ok)
            marker_positions.push_back(pos);
        else
            throw ContainsMarkerError("pause marker embedded in a token");
    }

    PauseMarkedSentence sentence;
    std::size_t start = 0;
    for (std::size_t pos : marker_positions) {
        std::string_view piece = trim(line.substr(start, pos - start));
        if (piece.empty())
            throw EmptyPhraseError("pause marker with no phrase before it");
        sentence.phrases.emplace_back(piece);
        start = pos + marker.size();
    }
    std::string_view tail = trim(line.substr(start));
    if (tail.empty())
        throw EmptyPhraseError("pause marker with no phrase after it");
    sentence.phrases.emplace_back(tail);
    return sentence;
}

inline std::string serialize(const PauseMarkedSentence& sentence,
                             std::string_view marker = kDefaultMarker) {
    validate_marker(marker);
    std::string out;
    for (std::size_t i = 0; i < sentence.phrases.size(); ++i) {
        if (i > 0) {
            out += ' ';
            out += marker;
            out += ' ';
        }
        out += sentence.phrases[i];
    }
    return out;
}

// Merge word timings into pause-separated segments. Words closer than
// pause_threshold belong to the same segment; a gap of exactly the
// threshold already counts as a pause.
inline TimedSentence segments_from_word_timings(std::span<const TimedSegment> words,
                                                double pause_threshold = kDefaultPauseThreshold) {
    if (words.empty())
        throw InvalidTimingError("no words");
    TimedSentence sentence;
    for (std::size_t i = 0; i < words.size(); ++i) {
        const TimedSegment& word = words[i];
        if (!(word.end > word.start))
            throw InvalidTimingError("word end must be greater than start");
        if (i > 0 && word.start < words[i - 1].end)
            throw InvalidTimingError("words overlap or are unordered");
        if (i == 0 || word.start - words[i - 1].end >= pause_threshold) {
            sentence.segments.push_back(word);
        } else {
            TimedSegment& seg = sentence.segments.back();
            seg.text += ' ';
            seg.text += word.text;
            seg.end = word.end;
        }
    }
    return sentence;
}

// Phrases joined with single spaces, markers gone: the plain sentence used
// for corpus-level BLEU.
inline std::string joined_text(const PauseMarkedSentence& sentence) {
    std::string out;
    for (std::size_t i = 0; i < sentence.phrases.size(); ++i) {
        if (i > 0)
            out += ' ';
        out += sentence.phrases[i];
    }
    return out;
}

inline void validate_corpus(const Corpus& corpus, std::string_view marker = kDefaultMarker) {
    std::unordered_set<std::string_view> ids;
    for (const BitextPair& pair : corpus.pairs) {
        if (!ids.insert(pair.id).second)
            throw Error("DuplicateId", "duplicate pair id: " + pair.id);
        validate_sentence(pair.source, marker);
        validate_sentence(pair.target, marker);
        if (pair.source_timing) {
            validate_timed_sentence(*pair.source_timing);
            const auto& segs = pair.source_timing->segments;
            if (segs.size() != pair.source.phrases.size())
                throw CountMismatchError("timing segment count differs from phrase count for id " +
                                         pair.id);
            for (std::size_t i = 0; i < segs.size(); ++i)
                if (segs[i].text != pair.source.phrases[i])
                    throw CountMismatchError("timing segment text differs from phrase for id " +
                                             pair.id);
        }
    }
}

} // namespace isokit
