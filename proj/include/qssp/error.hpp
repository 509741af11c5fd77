// Copyright 2026 The QSSP Authors
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
#include <string_view>

namespace qssp {

enum class ErrorCode {
  NonStochasticRow,
  NegativeEntry,
  ReducibleChain,
  ConvergenceFailure,
  UnknownSymbol,
  NotUnifilar,
  BlockTooLarge,
  InvalidState,
  InvalidMeasurement,
  IdenticalStates,
  AlphabetMismatch,
  ZeroProbabilitySymbol,
  SampledKindUnsupported,
  InsufficientLinearRegime,
  InvalidArgument,
  InputError,
};

std::string_view to_string(ErrorCode code);

// Domain error carrying a machine-readable code and the offending location
// (state/symbol names, or a JSON pointer for input errors).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string location = {})
      : std::runtime_error(message), code_(code), location_(std::move(location)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& location() const noexcept { return location_; }

 private:
  ErrorCode code_;
  std::string location_;
};

}  // namespace qssp
