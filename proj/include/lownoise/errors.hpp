// Copyright 2026 The lownoise Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace lownoise {

/// Shape mismatch or a dimension above the configured cap.
class DimensionError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Input outside the mathematical domain of an operation (e.g. a negative
/// noise parameter).
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// A documented precondition on an argument was violated (non-Hermitian
/// input, non-unit trace, ...).
class ContractViolation : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Bad user-facing request: unknown catalog name, unsupported option.
class UsageError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed channel file. `field()` names the offending JSON path.
class ChannelParseError : public std::runtime_error {
  public:
    ChannelParseError(std::string field, const std::string &what)
        : std::runtime_error(field.empty() ? what : field + ": " + what),
          field_(std::move(field)) {}

    [[nodiscard]] const std::string &field() const noexcept { return field_; }

  private:
    std::string field_;
};

} // namespace lownoise
