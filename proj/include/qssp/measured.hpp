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

#include <string>
#include <utility>
#include <vector>

#include "qssp/hmc.hpp"
#include "qssp/quantum.hpp"

namespace qssp {

// Classically controlled qubit source: an HMC whose symbols are pure qubit states.
struct CCQS {
  LabeledHMC hmc;
  std::vector<QubitPureState> quantum_alphabet;  // indexed like hmc.alphabet()
  std::string id;
};

// Full check of a source. Nonunifilar controllers are accepted; the warning is returned.
std::vector<std::string> validate_source(const CCQS& source);

struct Provenance {
  std::string source;
  std::string measurement;  // "projective" or a POVM name
  std::vector<std::pair<std::string, double>> parameters;
};

struct MeasuredHMC {
  LabeledHMC hmc;
  Provenance provenance;
};

// Entries below kZeroProbability are set to zero.
MeasuredHMC derive_measured_hmc(const CCQS& source, const Measurement& m,
                                Provenance provenance = {});

// Bloch angles of a basis state equidistant from rho_a and rho_b. gamma rotates the
// basis around the axis through the two states; gamma = 0 is the bisector in their plane.
BlochAngles memoryless_angles(const QubitPureState& rho_a, const QubitPureState& rho_b,
                              double gamma = 0.0);

Measurement memoryless_basis(const QubitPureState& rho_a, const QubitPureState& rho_b,
                             double gamma = 0.0);

struct StatePreservation {
  std::size_t state = 0;
  std::size_t targets = 0;
  bool single_target = false;      // every transition lands on one state
  bool at_most_two_targets = false;
  bool orthogonal_emissions = false;
  bool aligned_measurement = false;  // each outcome is possible towards one target only
  bool predicts_unifilar = false;
};

struct PreservationReport {
  bool predicts_unifilar = true;
  std::vector<StatePreservation> states;
};

PreservationReport unifilarity_preservation_check(const CCQS& source, const Measurement& m);

// True when every labeled matrix is p_x times the internal chain, within tol.
bool is_memoryless(const LabeledHMC& hmc, double tol = 1e-12);

}  // namespace qssp
