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

#include "qssp/error.hpp"

namespace qssp {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonStochasticRow: return "NonStochasticRow";
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::ReducibleChain: return "ReducibleChain";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::UnknownSymbol: return "UnknownSymbol";
    case ErrorCode::NotUnifilar: return "NotUnifilar";
    case ErrorCode::BlockTooLarge: return "BlockTooLarge";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::InvalidMeasurement: return "InvalidMeasurement";
    case ErrorCode::IdenticalStates: return "IdenticalStates";
    case ErrorCode::AlphabetMismatch: return "AlphabetMismatch";
    case ErrorCode::ZeroProbabilitySymbol: return "ZeroProbabilitySymbol";
    case ErrorCode::SampledKindUnsupported: return "SampledKindUnsupported";
    case ErrorCode::InsufficientLinearRegime: return "InsufficientLinearRegime";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InputError: return "InputError";
  }
  return "Unknown";
}

}  // namespace qssp
