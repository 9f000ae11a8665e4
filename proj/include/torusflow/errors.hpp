// Copyright 2026 The torusflow Authors
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

#ifndef TORUSFLOW_ERRORS_HPP
#define TORUSFLOW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace torusflow {

/// A run description violates a precondition. Maps to exit code 2.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// An API was called with mismatched or malformed arguments.
class UsageError : public std::logic_error {
public:
    explicit UsageError(const std::string& what) : std::logic_error(what) {}
};

/// The discrete solution left its admissible range. Maps to exit code 3.
class BlowUpError : public std::runtime_error {
public:
    BlowUpError(const std::string& what, std::string dump)
        : std::runtime_error(what), dump_(std::move(dump)) {}
    explicit BlowUpError(const std::string& what) : std::runtime_error(what) {}

    const std::string& dump() const noexcept { return dump_; }

private:
    std::string dump_;
};

}  // namespace torusflow

#endif  // TORUSFLOW_ERRORS_HPP
