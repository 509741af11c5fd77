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

#include "qssp/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qssp/error.hpp"

namespace qssp {

namespace {

Mat2 outer(const QubitPureState& s) {
  const Complex a = s.a(), b = s.b();
  return {a * std::conj(a), a * std::conj(b), b * std::conj(a), b * std::conj(b)};
}

}  // namespace

double max_abs_diff(const Mat2& x, const Mat2& y) {
  return std::max({std::abs(x.a - y.a), std::abs(x.b - y.b), std::abs(x.c - y.c),
                   std::abs(x.d - y.d)});
}

bool is_hermitian(const Mat2& m, double tol) { return max_abs_diff(m, m.adjoint()) <= tol; }

bool is_positive_semidefinite(const Mat2& m, double tol) {
  if (!is_hermitian(m, tol)) return false;
  return m.trace().real() >= -tol && m.det().real() >= -tol;
}

QubitPureState::QubitPureState(Complex a, Complex b) : a_(a), b_(b) {
  const double norm = std::norm(a) + std::norm(b);
  if (!(std::abs(norm - 1.0) <= 1e-12))
    throw Error(ErrorCode::InvalidState, "ket is not normalized");
}

QubitPureState QubitPureState::normalized(Complex a, Complex b) {
  const double norm = std::sqrt(std::norm(a) + std::norm(b));
  if (!(norm > 0.0) || !std::isfinite(norm))
    throw Error(ErrorCode::InvalidState, "ket has zero norm");
  return {a / norm, b / norm};
}

Mat2 QubitPureState::density() const { return outer(*this); }

BlochVector QubitPureState::bloch() const {
  const Complex ab = std::conj(a_) * b_;
  return {2.0 * ab.real(), 2.0 * ab.imag(), std::norm(a_) - std::norm(b_)};
}

Complex QubitPureState::inner(const QubitPureState& other) const {
  return std::conj(a_) * other.a_ + std::conj(b_) * other.b_;
}

QubitPureState QubitPureState::orthogonal() const { return {-std::conj(b_), std::conj(a_)}; }

bool QubitPureState::same_state(const QubitPureState& other, double tol) const {
  return max_abs_diff(density(), other.density()) <= tol;
}

QubitPureState qubit_from_bloch(double theta, double phi) {
  const double two_pi = 2.0 * std::numbers::pi;
  theta = std::remainder(theta, two_pi);
  phi = std::remainder(phi, two_pi);
  return {Complex(std::cos(theta / 2.0), 0.0), std::polar(1.0, phi) * std::sin(theta / 2.0)};
}

BlochAngles angles_of(const BlochVector& r) {
  const double len = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
  const double z = std::clamp(r[2] / len, -1.0, 1.0);
  const double planar = std::hypot(r[0], r[1]);
  return {std::acos(z), planar > 1e-15 ? std::atan2(r[1], r[0]) : 0.0};
}

Measurement::Measurement(std::vector<Mat2> operators, std::vector<std::string> labels,
                         MeasurementKind kind)
    : operators_(std::move(operators)), labels_(std::move(labels)), kind_(kind) {
  if (operators_.empty() || operators_.size() != labels_.size())
    throw Error(ErrorCode::InvalidMeasurement, "one label per operator is required");
  Mat2 total;
  for (std::size_t i = 0; i < operators_.size(); ++i) {
    if (!is_positive_semidefinite(operators_[i]))
      throw Error(ErrorCode::InvalidMeasurement, "operator is not positive semidefinite",
                  "outcome " + labels_[i]);
    total += operators_[i];
  }
  if (max_abs_diff(total, Mat2::identity()) > 1e-10)
    throw Error(ErrorCode::InvalidMeasurement, "operators do not sum to identity");
  if (kind_ == MeasurementKind::Projective) {
    if (operators_.size() != 2)
      throw Error(ErrorCode::InvalidMeasurement, "projective qubit measurement needs two projectors");
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) {
        const Mat2 expect = i == j ? operators_[i] : Mat2{};
        if (max_abs_diff(operators_[i] * operators_[j], expect) > 1e-10)
          throw Error(ErrorCode::InvalidMeasurement, "projectors are not orthogonal");
      }
  }
}

Measurement projective_basis(double theta, double phi) {
  const QubitPureState psi0 = qubit_from_bloch(theta, phi);
  const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
  const Complex e = std::polar(1.0, phi);
  const QubitPureState psi1(Complex(s, 0.0), -e * c);
  return Measurement({psi0.density(), psi1.density()}, {"0", "1"}, MeasurementKind::Projective);
}

double outcome_probability(const Mat2& effect, const QubitPureState& rho) {
  const double p = (effect * rho.density()).trace().real();
  return std::clamp(p, 0.0, 1.0);
}

double trace_distance(const QubitPureState& rho1, const QubitPureState& rho2) {
  const double overlap = std::norm(rho1.inner(rho2));
  return std::sqrt(std::clamp(1.0 - overlap, 0.0, 1.0));
}

Measurement usd_povm(const QubitPureState& psi, const QubitPureState& phi_state) {
  if (psi.same_state(phi_state, 1e-9))
    throw Error(ErrorCode::IdenticalStates, "states cannot be discriminated");
  const double scale = 1.0 / (1.0 + std::abs(phi_state.inner(psi)));
  const Mat2 e_psi = phi_state.orthogonal().density() * scale;
  const Mat2 e_phi = psi.orthogonal().density() * scale;
  Mat2 e_inc = Mat2::identity() - e_psi - e_phi;
  e_inc = (e_inc + e_inc.adjoint()) * 0.5;
  return Measurement({e_psi, e_phi, e_inc}, {"0", "1", "2"}, MeasurementKind::Povm);
}

std::string_view to_string(MeasurementKind kind) {
  return kind == MeasurementKind::Projective ? "projective" : "povm";
}

}  // namespace qssp
