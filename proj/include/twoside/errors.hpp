// Copyright 2026 The Authors.
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

#ifndef TWOSIDE_ERRORS_HPP_
#define TWOSIDE_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace twoside {

// Base of every error thrown by the library. kind() is a stable,
// machine-readable tag used by the CLI error records.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

#define TWOSIDE_DEFINE_ERROR(Name, tag)                              \
  class Name : public Error {                                        \
   public:                                                           \
    explicit Name(const std::string& what) : Error(tag, what) {}     \
  };

TWOSIDE_DEFINE_ERROR(DomainError, "domain")
TWOSIDE_DEFINE_ERROR(ConfigError, "config")
TWOSIDE_DEFINE_ERROR(ValidationError, "validation")
TWOSIDE_DEFINE_ERROR(DimensionError, "dimension")
TWOSIDE_DEFINE_ERROR(PreconditionError, "precondition")
TWOSIDE_DEFINE_ERROR(OracleDomainError, "oracle_domain")
TWOSIDE_DEFINE_ERROR(OptimizationError, "optimization")
TWOSIDE_DEFINE_ERROR(EstimationError, "estimation")
TWOSIDE_DEFINE_ERROR(PairingError, "pairing")
TWOSIDE_DEFINE_ERROR(IoError, "io")

#undef TWOSIDE_DEFINE_ERROR

}  // namespace twoside

#endif  // TWOSIDE_ERRORS_HPP_
