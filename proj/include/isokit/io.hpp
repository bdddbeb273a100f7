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
// On-disk formats:
//   - pause-marked text: UTF-8, one sentence per line, LF, marker tokens
//     space-delimited
//   - timed corpus: JSON Lines, {"id", "segments":[{"text","start","end"}]}
//   - dubbing plans: JSON Lines, {"id", "items":[{"text","start","end","rate"}]}
//   - metric report / length histogram: single JSON documents
//
// Readers collect per-line issues instead of bailing on the first bad line
// so the CLI can report every problem at once. Writers go through a temp
// file plus rename; a crashed run never leaves a half-written output.

#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <unistd.h>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "isokit/error.hpp"
#include "isokit/metrics.hpp"
#include "isokit/synth.hpp"
#include "isokit/text.hpp"
#include "isokit/timing.hpp"

namespace isokit::io {

struct LineIssue {
    std::size_t line_no = 0; // 1-based
    std::string id;          // record id when the format carries one
    std::string message;
};

inline std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

struct PauseMarkedFile {
    std::vector<PauseMarkedSentence> sentences;
    std::vector<LineIssue> issues;

    bool ok() const { return issues.empty(); }
};

inline PauseMarkedFile read_pause_marked_file(const std::filesystem::path& path,
                                              std::string_view marker = kDefaultMarker) {
    PauseMarkedFile file;
    std::vector<std::string> lines = read_lines(path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        try {
            file.sentences.push_back(parse_pause_marked(lines[i], marker));
        } catch (const Error& e) {
            file.issues.push_back({i + 1, std::to_string(i + 1), e.what()});
        }
    }
    return file;
}

struct TimedRecord {
    std::string id;
    TimedSentence sentence;
};

struct TimedFile {
    std::vector<TimedRecord> records;
    std::vector<LineIssue> issues;

    bool ok() const { return issues.empty(); }
};

inline TimedFile read_timed_jsonl(const std::filesystem::path& path,
                                  double pause_threshold = kDefaultPauseThreshold) {
    TimedFile file;
    std::vector<std::string> lines = read_lines(path);
    std::unordered_set<std::string> seen_ids;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string_view line = trim(lines[i]);
        if (line.empty()) {
            file.issues.push_back({i + 1, "", "empty line"});
            continue;
        }
        try {
            nlohmann::json record = nlohmann::json::parse(line);
            TimedRecord timed;
            timed.id = record.at("id").get<std::string>();
            for (const nlohmann::json& seg : record.at("segments")) {
                TimedSegment segment;
                segment.text = std::string(trim(seg.at("text").get<std::string>()));
                segment.start = seg.at("start").get<double>();
                segment.end = seg.at("end").get<double>();
                timed.sentence.segments.push_back(std::move(segment));
            }
            validate_timed_sentence(timed.sentence, pause_threshold);
            for (const TimedSegment& segment : timed.sentence.segments)
                if (segment.text.empty())
                    throw InvalidTimingError("segment text is empty");
            if (!seen_ids.insert(timed.id).second)
                throw Error("DuplicateId", "duplicate id: " + timed.id);
            file.records.push_back(std::move(timed));
        } catch (const nlohmann::json::exception& e) {
            file.issues.push_back({i + 1, "", std::string("bad record: ") + e.what()});
        } catch (const Error& e) {
            file.issues.push_back({i + 1, "", e.what()});
        }
    }
    return file;
}

// Write-temp-then-rename; the destination either keeps its old content or
// gets the complete new one. Non-regular destinations (/dev/null, fifos,
// character devices) are written through directly — renaming over them
// would replace the device node with a plain file.
inline void atomic_write(const std::filesystem::path& path, std::string_view content) {
    std::error_code status_ec;
    std::filesystem::file_status status = std::filesystem::symlink_status(path, status_ec);
    if (!status_ec && std::filesystem::exists(status) &&
        !std::filesystem::is_regular_file(status)) {
        std::ofstream out(path, std::ios::binary);
        if (!out)
            throw IoError("cannot open " + path.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out)
            throw IoError("short write to " + path.string());
        return;
    }
    std::filesystem::path dir = path.parent_path();
    std::filesystem::path tmp =
        (dir.empty() ? std::filesystem::path(".") : dir) /
        (path.filename().string() + ".tmp." + std::to_string(::getpid()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out)
            throw IoError("short write to " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " +
                      ec.message());
    }
}

inline std::string render_pause_marked(std::span<const PauseMarkedSentence> sentences,
                                       std::string_view marker = kDefaultMarker) {
    std::string out;
    for (const PauseMarkedSentence& sentence : sentences) {
        out += serialize(sentence, marker);
        out += '\n';
    }
    return out;
}

inline void write_pause_marked_file(const std::filesystem::path& path,
                                    std::span<const PauseMarkedSentence> sentences,
                                    std::string_view marker = kDefaultMarker) {
    atomic_write(path, render_pause_marked(sentences, marker));
}

inline nlohmann::json report_to_json(const metrics::MetricReport& report) {
    nlohmann::json doc;
    doc["bleu"] = report.bleu;
    doc["chrf_phrase"] = report.chrf_phrase;
    doc["sa"] = report.sa;
    doc["phrase_lc"] = report.phrase_lc;
    doc["acceptability"] = report.acceptability;
    doc["sentence_count"] = report.sentence_count;
    doc["smoothness"] = report.smoothness ? nlohmann::json(*report.smoothness)
                                          : nlohmann::json(nullptr);
    return doc;
}

inline nlohmann::json distribution_to_json(const synth::PhraseLengthDistribution& dist) {
    nlohmann::json bins = nlohmann::json::object();
    for (const auto& [length, count] : dist.bins())
        bins[std::to_string(length)] = count;
    return nlohmann::json{{"bins", bins}, {"total", dist.total()}};
}

inline synth::PhraseLengthDistribution distribution_from_json(const nlohmann::json& doc) {
    synth::PhraseLengthDistribution dist;
    for (const auto& [key, value] : doc.at("bins").items())
        dist.add(static_cast<std::size_t>(std::stoull(key)), value.get<std::uint64_t>());
    if (doc.contains("total") && doc.at("total").get<std::uint64_t>() != dist.total())
        throw OutOfRangeError("histogram total does not match bin counts");
    return dist;
}

inline nlohmann::json plan_to_json(std::string_view id, const timing::DubbingPlan& plan) {
    nlohmann::json items = nlohmann::json::array();
    for (const timing::PlanItem& item : plan.items)
        items.push_back({{"text", item.text},
                         {"start", item.start},
                         {"end", item.end},
                         {"rate", item.rate()}});
    return nlohmann::json{{"id", std::string(id)}, {"items", items}};
}

} // namespace isokit::io
