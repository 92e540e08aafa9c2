// Copyright 2026 The qsubst Authors
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

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace qsubst {

using Complex = std::complex<double>;

/// Raised when two matrices of different size meet in a binary operation.
class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dense square complex matrix, row-major. Immutable once constructed.
///
/// Entries are always finite. Circuit code only ever builds matrices of
/// dimension 2^k, but the type itself accepts any positive dimension.
class ComplexMatrix {
 public:
  /// dim x dim zero matrix.
  explicit ComplexMatrix(std::size_t dim);
  ComplexMatrix(std::size_t dim, std::vector<Complex> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t dim);

  std::size_t dim() const { return dim_; }
  const Complex& operator()(std::size_t row, std::size_t col) const {
    return entries_[row * dim_ + col];
  }
  std::span<const Complex> entries() const { return entries_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix scaled(Complex factor) const;

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t dim_;
  std::vector<Complex> entries_;
};

/// Standard product a*b. Throws DimensionMismatch if sizes differ.
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);

/// Kronecker product; `a` is the more significant factor.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// True iff every entry of m*m^dagger - I has modulus <= tol.
bool is_unitary(const ComplexMatrix& m, double tol);

/// Largest entrywise |a_ij - b_ij|. Throws DimensionMismatch if sizes differ.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace qsubst
