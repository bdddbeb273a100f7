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
// Dubbing-side timing analysis. A DubbingPlan gives each target phrase the
// time window of its source segment; the speaking rate of an item is
// characters per second over that window. Smoothness measures how stable
// the rate is across adjacent phrases, and relax() trades surplus pause
// time for rate stability without ever shrinking a pause below the minimum
// audible pause.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "isokit/error.hpp"
#include "isokit/text.hpp"
#include "isokit/unicode.hpp"

namespace isokit::timing {

inline constexpr double kDefaultSmoothnessTau = 0.2;
inline constexpr double kDefaultMinPause = kDefaultPauseThreshold;
inline constexpr int kDefaultRelaxIters = 100;

struct PlanItem {
    std::string text;
    double start = 0.0;
    double end = 0.0;

    double duration() const { return end - start; }
    double rate() const { return static_cast<double>(char_length(text)) / duration(); }
};

struct DubbingPlan {
    std::vector<PlanItem> items;
};

inline void validate_plan(const DubbingPlan& plan, double min_pause = kDefaultMinPause) {
    if (plan.items.empty())
        throw InvalidPlanError("plan has no items");
    for (std::size_t i = 0; i < plan.items.size(); ++i) {
        const PlanItem& item = plan.items[i];
        if (!(item.end > item.start))
            throw ZeroDurationError("item duration must be positive");
        if (i > 0 && plan.items[i].start - plan.items[i - 1].end < min_pause - 1e-12)
            throw InvalidPlanError("inter-item gap below min_pause");
    }
}

// Target phrases inherit the source segment windows verbatim.
inline DubbingPlan build_plan(const TimedSentence& source_timing,
                              const PauseMarkedSentence& target) {
    if (source_timing.segments.size() != target.phrases.size())
        throw CountMismatchError("target phrase count differs from source segment count");
    DubbingPlan plan;
    plan.items.reserve(target.phrases.size());
    for (std::size_t i = 0; i < target.phrases.size(); ++i)
        plan.items.push_back(
            {target.phrases[i], source_timing.segments[i].start, source_timing.segments[i].end});
    return plan;
}

// Relative rate step between adjacent items: |r_next / r_prev - 1|.
inline double rate_deviation(const PlanItem& prev, const PlanItem& next) {
    return std::fabs(next.rate() / prev.rate() - 1.0);
}

// Percentage of adjacent phrase pairs whose speaking-rate step stays within
// tau (inclusive). Plans with fewer than two items contribute no pairs;
// no pairs at all scores 100.
inline double smoothness(std::span<const DubbingPlan> plans, double tau = kDefaultSmoothnessTau) {
    if (tau < 0.0)
        throw OutOfRangeError("tau must be non-negative");
    std::int64_t pairs = 0;
    std::int64_t stable = 0;
    for (const DubbingPlan& plan : plans) {
        for (const PlanItem& item : plan.items)
            if (!(item.duration() > 0.0))
                throw ZeroDurationError("item duration must be positive");
        for (std::size_t i = 0; i + 1 < plan.items.size(); ++i) {
            ++pairs;
            if (rate_deviation(plan.items[i], plan.items[i + 1]) <= tau)
                ++stable;
        }
    }
    if (pairs == 0)
        return 100.0;
    return 100.0 * static_cast<double>(stable) / static_cast<double>(pairs);
}

inline double smoothness(const DubbingPlan& plan, double tau = kDefaultSmoothnessTau) {
    return smoothness(std::span<const DubbingPlan>(&plan, 1), tau);
}

// Greedy relaxation. Candidate moves shrink one pause and hand the time to
// its higher-rate neighbour, by exactly the amount that levels the two
// rates (capped by the pause's slack above min_pause). A move is applied
// only if no adjacent-pair deviation anywhere in the plan grows, which is
// what makes smoothness(relax(p), tau) >= smoothness(p, tau) hold for every
// tau, not just the reporting one. First item start and last item end never
// move, so the total utterance span is preserved exactly.
inline DubbingPlan relax(const DubbingPlan& plan, double min_pause = kDefaultMinPause,
                         int max_iters = kDefaultRelaxIters) {
    validate_plan(plan, min_pause);
    DubbingPlan relaxed = plan;
    std::size_t n = relaxed.items.size();
    if (n < 2)
        return relaxed;

    constexpr double kEps = 1e-12;

    auto deviations = [&](const DubbingPlan& p) {
        std::vector<double> devs(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i)
            devs[i] = rate_deviation(p.items[i], p.items[i + 1]);
        return devs;
    };
    auto max_of = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double x : v)
            m = x > m ? x : m;
        return m;
    };

    for (int iter = 0; iter < max_iters; ++iter) {
        std::vector<double> devs = deviations(relaxed);

        double best_score = std::numeric_limits<double>::infinity();
        DubbingPlan best_plan;
        bool found = false;

        for (std::size_t g = 0; g + 1 < n; ++g) {
            double slack = relaxed.items[g + 1].start - relaxed.items[g].end - min_pause;
            if (slack <= kEps)
                continue;
            const PlanItem& left = relaxed.items[g];
            const PlanItem& right = relaxed.items[g + 1];
            double rate_left = left.rate();
            double rate_right = right.rate();
            if (std::fabs(rate_left - rate_right) <= kEps)
                continue;
            bool grow_left = rate_left > rate_right;
            const PlanItem& fast = grow_left ? left : right;
            double slow_rate = grow_left ? rate_right : rate_left;
            // Duration increase that levels the fast item down to slow_rate.
            double needed = static_cast<double>(char_length(fast.text)) / slow_rate -
                            fast.duration();
            double amount = needed < slack ? needed : slack;
            if (amount <= kEps)
                continue;

            DubbingPlan candidate = relaxed;
            if (grow_left)
                candidate.items[g].end += amount;
            else
                candidate.items[g + 1].start -= amount;

            std::vector<double> new_devs = deviations(candidate);
            bool dominated = true;
            for (std::size_t i = 0; i + 1 < n; ++i)
                if (new_devs[i] > devs[i] + kEps) {
                    dominated = false;
                    break;
                }
            if (!dominated || new_devs[g] >= devs[g] - kEps)
                continue;

            double score = max_of(new_devs);
            if (score < best_score) {
                best_score = score;
                best_plan = std::move(candidate);
                found = true;
            }
        }

        if (!found)
            break;
        relaxed = std::move(best_plan);
    }
    return relaxed;
}

} // namespace isokit::timing
