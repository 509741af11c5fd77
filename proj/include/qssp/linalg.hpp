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

#include <cstddef>
#include <span>
#include <vector>

namespace qssp {

using Vector = std::vector<double>;

// Dense row-major real matrix. Machines here have at most a few hundred
// states, so nothing fancier is needed.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  Matrix& operator+=(const Matrix& other);
  Matrix& operator*=(double s);

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator*(const Matrix& a, const Matrix& b);

// Row vector times matrix: v * M.
Vector left_multiply(std::span<const double> v, const Matrix& m);

double sum(std::span<const double> v);
double max_abs_diff(std::span<const double> a, std::span<const double> b);

// Solves A x = b by Gaussian elimination with partial pivoting. Returns an
// empty vector when A is numerically singular.
Vector solve_linear(Matrix a, Vector b);

// Stationary distribution of a row-stochastic matrix restricted to a single
// recurrent class, by direct solve of pi (P - I) = 0 with sum(pi) = 1.
Vector stationary_direct(const Matrix& p);

}  // namespace qssp
