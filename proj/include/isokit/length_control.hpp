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
// Length-control arithmetic for verbosity-constrained decoding: the
// remaining-character ratio, its quantization into eleven buckets (0..10),
// and the ratio-zero stopping rule. Stateless; a decoder owns the state
// value and calls in per step.

#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "isokit/error.hpp"

namespace isokit::lc {

struct LcState {
    std::uint64_t total_chars = 1;     // character budget of the phrase
    std::uint64_t generated_chars = 0; // characters emitted so far
};

// 1 - generated/total, clamped at 0 when generation overshoots the budget
// (decoders emitting multi-character tokens can overshoot by a few chars).
inline double remaining_ratio(LcState state) {
    if (state.total_chars == 0)
        throw ZeroTotalError("total_chars must be at least 1");
    if (state.generated_chars >= state.total_chars)
        return 0.0;
    return 1.0 - static_cast<double>(state.generated_chars) /
                     static_cast<double>(state.total_chars);
}

// Bucket k covers [k/10, (k+1)/10); the top bucket is closed so exactly
// eleven values 0..10 occur.
inline int quantize_ratio(double ratio) {
    if (!(ratio >= 0.0) || !(ratio <= 1.0))
        throw OutOfRangeError("ratio outside [0,1]");
    if (ratio >= 1.0)
        return 10;
    return static_cast<int>(std::floor(ratio * 10.0));
}

// Stop exactly when the budget is spent; bucket 0 alone is not enough
// (ratio 0.05 is bucket 0 but generation continues).
inline bool should_stop(LcState state) {
    return remaining_ratio(state) == 0.0;
}

struct TraceStep {
    std::uint64_t generated = 0;
    double ratio = 0.0;
    int bucket = 0;
    bool stop = false;
};

// Bucket sequence over a full generation: one entry before any output, then
// one after each step. Used by `eval --dump-lc-trace` for decoder debugging.
inline std::vector<TraceStep> bucket_trace(std::uint64_t total_chars,
                                           std::span<const std::uint64_t> step_lengths) {
    std::vector<TraceStep> trace;
    trace.reserve(step_lengths.size() + 1);
    LcState state{total_chars, 0};
    auto record = [&] {
        double ratio = remaining_ratio(state);
        trace.push_back({state.generated_chars, ratio, quantize_ratio(ratio),
                         should_stop(state)});
    };
    record();
    for (std::uint64_t step : step_lengths) {
        state.generated_chars += step;
        record();
    }
    return trace;
}

} // namespace isokit::lc
