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

#include <numbers>

#include "doctest.h"
#include "poptlab/errors.hpp"
#include "poptlab/operator_core.hpp"
#include "poptlab/sampling.hpp"
#include "support.hpp"

using namespace poptlab;
using namespace poptlab::testing;

TEST_SUITE("operator_core") {

TEST_CASE("tensor follows the Kronecker convention") {
  CHECK(dist(tensor(identity(2), identity(2)), identity(4)) == 0.0);
  CHECK(dist(tensor(diag({1, 0}), diag({0, 1})), diag({0, 1, 0, 0})) == 0.0);
  const ComplexMatrix xx = tensor(pauli::x().matrix(), pauli::x().matrix());
  CHECK(dist(xx * xx, identity(4)) == 0.0);
}

TEST_CASE("tensor is associative") {
  Rng rng(3);
  const ComplexMatrix a = gaussian_matrix(2, 2, rng);
  const ComplexMatrix b = gaussian_matrix(3, 3, rng);
  const ComplexMatrix c = gaussian_matrix(2, 2, rng);
  CHECK(dist(tensor(tensor(a, b), c), tensor(a, tensor(b, c))) <= 1e-12);
}

TEST_CASE("partial trace") {
  Rng rng(1);
  const ComplexMatrix rho = ginibre_state(2, rng).matrix();
  const ComplexMatrix sigma = gaussian_hermitian(3, rng).matrix();
  CHECK(dist(partial_trace(tensor(rho, sigma), {2, 3}, Subsystem::first), rho * sigma.trace()) <= 1e-12);
  CHECK(dist(partial_trace(tensor(rho, sigma), {2, 3}, Subsystem::second), sigma * rho.trace()) <= 1e-12);
  CHECK(dist(partial_trace(max_entangled_state(2), {2, 2}, Subsystem::first), identity(2) / 2.0) <= 1e-15);
  CHECK(dist(partial_trace(identity(4) / 4.0, {2, 2}, Subsystem::second), identity(2) / 2.0) == 0.0);
  CHECK_THROWS_AS(partial_trace(identity(5), {2, 2}, Subsystem::first), DimensionError);
}

TEST_CASE("partial transpose") {
  Rng rng(2);
  const ComplexMatrix rho = gaussian_matrix(2, 2, rng);
  const ComplexMatrix sigma = gaussian_matrix(3, 3, rng);
  CHECK(dist(partial_transpose(tensor(rho, sigma), {2, 3}, Subsystem::first),
             tensor(rho.transpose(), sigma)) <= 1e-15);

  const ComplexMatrix pt = partial_transpose(max_entangled_state(2), {2, 2}, Subsystem::second);
  CHECK(dist(pt, swap_over(2)) <= 1e-15);
  CHECK(eig_hermitian(HermitianOperator(pt)).eigenvalues.minCoeff() == doctest::Approx(-0.5).epsilon(1e-12));

  const ComplexMatrix m = gaussian_matrix(9, 9, rng);
  for (Subsystem side : {Subsystem::first, Subsystem::second}) {
    CHECK(dist(partial_transpose(partial_transpose(m, {3, 3}, side), {3, 3}, side), m) <= 1e-12);
  }
  CHECK_THROWS_AS(partial_transpose(m, {2, 3}, Subsystem::first), DimensionError);
}

TEST_CASE("eigendecomposition") {
  const Spectrum s = eig_hermitian(HermitianOperator(diag({3, 1, 2})));
  CHECK(s.eigenvalues(0) == doctest::Approx(3.0));
  CHECK(s.eigenvalues(1) == doctest::Approx(2.0));
  CHECK(s.eigenvalues(2) == doctest::Approx(1.0));

  const Spectrum px = eig_hermitian(pauli::x());
  CHECK(px.eigenvalues(0) == doctest::Approx(1.0));
  CHECK(px.eigenvalues(1) == doctest::Approx(-1.0));

  const Spectrum sw = eig_hermitian(HermitianOperator(swap_operator(3)));
  int plus = 0;
  int minus = 0;
  for (Eigen::Index i = 0; i < 9; ++i) {
    if (std::abs(sw.eigenvalues(i) - 1.0) < 1e-9) ++plus;
    if (std::abs(sw.eigenvalues(i) + 1.0) < 1e-9) ++minus;
  }
  CHECK(plus == 6);
  CHECK(minus == 3);
}

TEST_CASE("eigenvectors are unitary and reconstruct the input") {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const HermitianOperator a = gaussian_hermitian(6, rng);
    const Spectrum s = eig_hermitian(a);
    const ComplexMatrix& u = s.eigenvectors;
    CHECK(dist(u.adjoint() * u, identity(6)) <= 1e-9);
    CHECK(dist(u * s.eigenvalues.cast<Complex>().asDiagonal() * u.adjoint(), a.matrix()) <= 1e-9);
  }
}

TEST_CASE("positivity test") {
  const PsdResult id = is_psd(HermitianOperator::identity(3), kEigTol);
  CHECK(id.psd);
  CHECK(id.min_eigenvalue == doctest::Approx(1.0));

  const PsdResult sw = is_psd(HermitianOperator(swap_over(3)), kEigTol);
  CHECK_FALSE(sw.psd);
  CHECK(sw.min_eigenvalue == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
  // The witness is an eigenvector for the minimum.
  const ComplexVector w = sw.witness;
  CHECK((w.adjoint() * swap_over(3) * w)(0).real() == doctest::Approx(-1.0 / 3.0));

  Rng rng(5);
  const ComplexVector psi = haar_vector(5, rng);
  const PsdResult pure = is_psd(HermitianOperator::symmetrized(psi * psi.adjoint()), kEigTol);
  CHECK(pure.psd);
  CHECK(std::abs(pure.min_eigenvalue) <= 1e-12);
}

TEST_CASE("Hermitian construction") {
  Rng rng(6);
  const HermitianOperator a = gaussian_hermitian(4, rng);
  CHECK(dist(HermitianOperator(a.matrix()).matrix(), a.matrix()) <= 1e-15);
  ComplexMatrix skew = a.matrix();
  skew(0, 1) += 0.1;
  CHECK_THROWS_AS(HermitianOperator{skew}, InvalidInput);
  CHECK_THROWS_AS(HermitianOperator(ComplexMatrix::Zero(2, 3)), DimensionError);
}

TEST_CASE("Pauli algebra") {
  const HermitianOperator x = pauli::x();
  const HermitianOperator y = pauli::y();
  const HermitianOperator z = pauli::z();
  CHECK(max_norm(anticommutator(x, y).matrix()) == 0.0);
  CHECK(dist(commutator(x, y), Complex(0.0, 2.0) * z.matrix()) == 0.0);
  Rng rng(7);
  const HermitianOperator a = gaussian_hermitian(3, rng);
  CHECK(dist(anticommutator(a, HermitianOperator::identity(3)).matrix(), 2.0 * a.matrix()) <= 1e-15);
  CHECK_THROWS_AS(commutator(a, x), DimensionError);
}

TEST_CASE("Jordan products split the operator product") {
  Rng rng(8);
  for (int trial = 0; trial < 25; ++trial) {
    const HermitianOperator a = gaussian_hermitian(3, rng);
    const HermitianOperator b = gaussian_hermitian(3, rng);
    const ComplexMatrix ab = a.matrix() * b.matrix();
    const ComplexMatrix ba = b.matrix() * a.matrix();
    CHECK(dist(jordan_product(a, b, JordanSign::plus), ab) <= 1e-12);
    CHECK(dist(jordan_product(a, b, JordanSign::minus), ba) <= 1e-12);
    CHECK(dist(jordan_product(a, b, JordanSign::plus) - jordan_product(a, b, JordanSign::minus),
               commutator(a, b)) <= 1e-12);
    CHECK(dist(ab, 0.5 * anticommutator(a, b).matrix() + 0.5 * commutator(a, b)) <= 1e-12);
  }
}

TEST_CASE("conjugation flow") {
  Rng rng(9);
  const HermitianOperator a = gaussian_hermitian(3, rng);
  CHECK(dist(conjugation_flow(0.7, a, a).matrix(), a.matrix()) <= 1e-12);

  const double t = std::numbers::pi / 4;
  CHECK(dist(conjugation_flow(t, pauli::z(), pauli::x()).matrix(), -pauli::y().matrix()) <= 1e-12);

  const HermitianOperator b = gaussian_hermitian(3, rng);
  const double h = 1e-5;
  const ComplexMatrix derivative =
      (conjugation_flow(h, a, b).matrix() - conjugation_flow(-h, a, b).matrix()) / (2 * h);
  CHECK(dist(derivative, Complex(0.0, 1.0) * commutator(a, b)) <= 1e-6);
}

TEST_CASE("conjugation flow preserves spectra") {
  Rng rng(10);
  for (int trial = 0; trial < 10; ++trial) {
    const HermitianOperator a = gaussian_hermitian(4, rng);
    const HermitianOperator b = gaussian_hermitian(4, rng);
    const RealVector before = eig_hermitian(b).eigenvalues;
    const RealVector after = eig_hermitian(conjugation_flow(1.3, a, b)).eigenvalues;
    CHECK((before - after).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("PSD square root") {
  Rng rng(11);
  const HermitianOperator rho = ginibre_state(4, rng);
  const ComplexMatrix r = psd_sqrt(rho).matrix();
  CHECK(dist(r * r, rho.matrix()) <= 1e-12);
}

}  // TEST_SUITE
