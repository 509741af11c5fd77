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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qssp/hmc.hpp"
#include "qssp/measured.hpp"
#include "qssp/metrics.hpp"
#include "qssp/msp.hpp"
#include "qssp/quantum.hpp"

namespace qssp {

using Json = nlohmann::json;

struct Model {
  std::string name;
  LabeledHMC hmc;
  std::optional<std::vector<QubitPureState>> quantum;  // indexed like hmc.alphabet()
  Json quantum_spec;  // quantum_alphabet as written, kept for round trips

  bool is_quantum() const noexcept { return quantum.has_value(); }
  CCQS source() const;  // throws InvalidArgument for classical models
};

// Schema violations throw Error(InputError) with a JSON pointer as location.
Model parse_model(const Json& doc);
Model load_model(const std::filesystem::path& path);
Json read_json(const std::filesystem::path& path);

Json hmc_to_json(const LabeledHMC& hmc);
Json model_to_json(const Model& model);
Json measured_to_json(const MeasuredHMC& measured);
Json msp_to_json(const MixedStatePresentation& msp);
Json metrics_to_json(const MetricsReport& report);
Json error_to_json(const Error& e);

// Two-space indentation and a trailing newline.
std::string pretty(const Json& j);

}  // namespace qssp
