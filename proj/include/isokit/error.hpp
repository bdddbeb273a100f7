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

#pragma once

#include <stdexcept>
#include <string>

namespace isokit {

// Base class for all toolkit errors. Every error carries a stable kind()
// string so the CLI can report machine-greppable diagnostics.
class Error : public std::runtime_error {
  public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

  private:
    std::string kind_;
};

#define ISOKIT_DEFINE_ERROR(Name, Kind)                                        \
    class Name : public Error {                                                \
      public:                                                                  \
        explicit Name(const std::string& message) : Error(Kind, message) {}    \
    }

ISOKIT_DEFINE_ERROR(EmptyLineError, "EmptyLine");
ISOKIT_DEFINE_ERROR(EmptyPhraseError, "EmptyPhrase");
ISOKIT_DEFINE_ERROR(ContainsMarkerError, "ContainsMarker");
ISOKIT_DEFINE_ERROR(InvalidTimingError, "InvalidTiming");
ISOKIT_DEFINE_ERROR(LengthMismatchError, "LengthMismatch");
ISOKIT_DEFINE_ERROR(EmptyCorpusError, "EmptyCorpus");
ISOKIT_DEFINE_ERROR(EmptyInputError, "EmptyInput");
ISOKIT_DEFINE_ERROR(OutOfRangeError, "OutOfRange");
ISOKIT_DEFINE_ERROR(TooFewTokensError, "TooFewTokens");
ISOKIT_DEFINE_ERROR(TooLargeError, "TooLarge");
ISOKIT_DEFINE_ERROR(ZeroTotalError, "ZeroTotal");
ISOKIT_DEFINE_ERROR(CountMismatchError, "CountMismatch");
ISOKIT_DEFINE_ERROR(ZeroDurationError, "ZeroDuration");
ISOKIT_DEFINE_ERROR(InvalidPlanError, "InvalidPlan");
ISOKIT_DEFINE_ERROR(IoError, "Io");

#undef ISOKIT_DEFINE_ERROR

} // namespace isokit
