// Copyright 2026 The poptlab Authors
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

#include "poptlab/sampling.hpp"

#include <cmath>

namespace poptlab {

ComplexMatrix gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  ComplexMatrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index j = 0; j < g.cols(); ++j)
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  return g;
}

ComplexMatrix haar_unitary(std::size_t dim, Rng& rng) {
  const ComplexMatrix g = gaussian_matrix(dim, dim, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < q.cols(); ++k) {
    const Complex d = r(k, k);
    const double a = std::abs(d);
    q.col(k) *= a > 0.0 ? d / a : Complex(1.0);
  }
  return q;
}

ComplexVector haar_vector(std::size_t dim, Rng& rng) {
  ComplexVector v = gaussian_matrix(dim, 1, rng).col(0);
  return v / v.norm();
}

HermitianOperator gaussian_hermitian(std::size_t dim, Rng& rng) {
  return HermitianOperator::symmetrized(gaussian_matrix(dim, dim, rng));
}

HermitianOperator ginibre_state(std::size_t dim, Rng& rng) {
  const ComplexMatrix g = gaussian_matrix(dim, dim, rng);
  const ComplexMatrix w = g * g.adjoint();
  return HermitianOperator::symmetrized(w / w.trace().real());
}

HermitianOperator random_unit_trace_hermitian(std::size_t dim, Rng& rng) {
  const auto n = static_cast<double>(dim);
  ComplexMatrix h = gaussian_hermitian(dim, rng).matrix() / n;
  h.diagonal().array() -= h.trace() / n;
  h.diagonal().array() += 1.0 / n;
  return HermitianOperator::symmetrized(h);
}

}  // namespace poptlab
