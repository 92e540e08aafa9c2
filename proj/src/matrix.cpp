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

#include "qsubst/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qsubst {

namespace {

void require_finite(std::span<const Complex> entries) {
  for (const Complex& z : entries) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw std::invalid_argument("ComplexMatrix: non-finite entry");
    }
  }
}

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b,
                      const char* op) {
  if (a.dim() != b.dim()) {
    throw DimensionMismatch(std::string(op) + ": dimension " +
                            std::to_string(a.dim()) + " vs " +
                            std::to_string(b.dim()));
  }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t dim)
    : dim_(dim), entries_(dim * dim) {
  if (dim == 0) throw std::invalid_argument("ComplexMatrix: dim must be >= 1");
}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), entries_(std::move(entries)) {
  if (dim == 0) throw std::invalid_argument("ComplexMatrix: dim must be >= 1");
  if (entries_.size() != dim * dim) {
    throw std::invalid_argument("ComplexMatrix: expected " +
                                std::to_string(dim * dim) + " entries, got " +
                                std::to_string(entries_.size()));
  }
  require_finite(entries_);
}

ComplexMatrix::ComplexMatrix(
    std::initializer_list<std::initializer_list<Complex>> rows)
    : dim_(rows.size()) {
  if (dim_ == 0) throw std::invalid_argument("ComplexMatrix: empty rows");
  entries_.reserve(dim_ * dim_);
  for (const auto& row : rows) {
    if (row.size() != dim_) {
      throw std::invalid_argument("ComplexMatrix: ragged row");
    }
    entries_.insert(entries_.end(), row.begin(), row.end());
  }
  require_finite(entries_);
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  std::vector<Complex> e(dim * dim);
  for (std::size_t i = 0; i < dim; ++i) e[i * dim + i] = 1.0;
  return ComplexMatrix(dim, std::move(e));
}

ComplexMatrix ComplexMatrix::adjoint() const {
  std::vector<Complex> e(dim_ * dim_);
  for (std::size_t r = 0; r < dim_; ++r) {
    for (std::size_t c = 0; c < dim_; ++c) {
      e[c * dim_ + r] = std::conj(entries_[r * dim_ + c]);
    }
  }
  return ComplexMatrix(dim_, std::move(e));
}

ComplexMatrix ComplexMatrix::scaled(Complex factor) const {
  std::vector<Complex> e(entries_);
  for (Complex& z : e) z *= factor;
  return ComplexMatrix(dim_, std::move(e));
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "matmul");
  const std::size_t n = a.dim();
  std::vector<Complex> out(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t k = 0; k < n; ++k) {
      const Complex lhs = a(r, k);
      if (lhs == Complex{}) continue;
      for (std::size_t c = 0; c < n; ++c) out[r * n + c] += lhs * b(k, c);
    }
  }
  return ComplexMatrix(n, std::move(out));
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t na = a.dim();
  const std::size_t nb = b.dim();
  const std::size_t n = na * nb;
  std::vector<Complex> out(n * n);
  for (std::size_t ar = 0; ar < na; ++ar) {
    for (std::size_t ac = 0; ac < na; ++ac) {
      const Complex s = a(ar, ac);
      for (std::size_t br = 0; br < nb; ++br) {
        for (std::size_t bc = 0; bc < nb; ++bc) {
          out[(ar * nb + br) * n + (ac * nb + bc)] = s * b(br, bc);
        }
      }
    }
  }
  return ComplexMatrix(n, std::move(out));
}

bool is_unitary(const ComplexMatrix& m, double tol) {
  const ComplexMatrix prod = matmul(m, m.adjoint());
  return max_abs_diff(prod, ComplexMatrix::identity(m.dim())) <= tol;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "max_abs_diff");
  double worst = 0.0;
  const auto ea = a.entries();
  const auto eb = b.entries();
  for (std::size_t i = 0; i < ea.size(); ++i) {
    worst = std::max(worst, std::abs(ea[i] - eb[i]));
  }
  return worst;
}

}  // namespace qsubst
