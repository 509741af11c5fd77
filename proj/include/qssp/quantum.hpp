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

#include <array>
#include <complex>
#include <string>
#include <vector>

namespace qssp {

using Complex = std::complex<double>;
using BlochVector = std::array<double, 3>;

// 2x2 complex matrix, row-major.
struct Mat2 {
  Complex a{}, b{}, c{}, d{};

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

  Mat2 adjoint() const { return {std::conj(a), std::conj(c), std::conj(b), std::conj(d)}; }
  Complex trace() const { return a + d; }
  Complex det() const { return a * d - b * c; }

  Mat2& operator+=(const Mat2& o) {
    a += o.a, b += o.b, c += o.c, d += o.d;
    return *this;
  }
  Mat2& operator-=(const Mat2& o) {
    a -= o.a, b -= o.b, c -= o.c, d -= o.d;
    return *this;
  }
  Mat2& operator*=(double s) {
    a *= s, b *= s, c *= s, d *= s;
    return *this;
  }
};

inline Mat2 operator+(Mat2 x, const Mat2& y) { return x += y; }
inline Mat2 operator-(Mat2 x, const Mat2& y) { return x -= y; }
inline Mat2 operator*(Mat2 x, double s) { return x *= s; }
inline Mat2 operator*(const Mat2& x, const Mat2& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
          x.c * y.b + x.d * y.d};
}

// Largest entrywise modulus of x - y.
double max_abs_diff(const Mat2& x, const Mat2& y);

bool is_hermitian(const Mat2& m, double tol = 1e-10);

// Hermitian 2x2 m is PSD iff trace >= 0 and det >= 0.
bool is_positive_semidefinite(const Mat2& m, double tol = 1e-10);

class QubitPureState {
 public:
  // Throws Error(InvalidState) unless |a|^2 + |b|^2 = 1 within 1e-12.
  QubitPureState(Complex a, Complex b);

  // Rescales to unit norm; throws Error(InvalidState) for a zero vector.
  static QubitPureState normalized(Complex a, Complex b);

  Complex a() const noexcept { return a_; }
  Complex b() const noexcept { return b_; }

  Mat2 density() const;
  BlochVector bloch() const;

  // <this|other>
  Complex inner(const QubitPureState& other) const;

  // State orthogonal to this one.
  QubitPureState orthogonal() const;

  // Equality of density matrices, so global phase is ignored.
  bool same_state(const QubitPureState& other, double tol = 1e-10) const;

 private:
  Complex a_;
  Complex b_;
};

QubitPureState qubit_from_bloch(double theta, double phi);

struct BlochAngles {
  double theta = 0.0;
  double phi = 0.0;
};

// Polar and azimuthal angle of a nonzero Bloch vector.
BlochAngles angles_of(const BlochVector& r);

enum class MeasurementKind { Projective, Povm };

class Measurement {
 public:
  // Checks completeness, positivity and, for projective kind, orthogonality.
  // Throws Error(InvalidMeasurement).
  Measurement(std::vector<Mat2> operators, std::vector<std::string> labels, MeasurementKind kind);

  const std::vector<Mat2>& operators() const noexcept { return operators_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  MeasurementKind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return operators_.size(); }

 private:
  std::vector<Mat2> operators_;
  std::vector<std::string> labels_;
  MeasurementKind kind_;
};

Measurement projective_basis(double theta, double phi);

double outcome_probability(const Mat2& effect, const QubitPureState& rho);

double trace_distance(const QubitPureState& rho1, const QubitPureState& rho2);

// Unambiguous discrimination of psi (outcome 0) from phi_state (outcome 1);
// outcome 2 is inconclusive.
Measurement usd_povm(const QubitPureState& psi, const QubitPureState& phi_state);

std::string_view to_string(MeasurementKind kind);

}  // namespace qssp
