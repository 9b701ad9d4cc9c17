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
#include "poptlab/dilation.hpp"
#include "poptlab/errors.hpp"
#include "support.hpp"

using namespace poptlab;
using namespace poptlab::testing;

namespace {

std::vector<HermitianOperator> trine() {
  std::vector<HermitianOperator> out;
  for (int j = 0; j < 3; ++j) {
    const double theta = 2.0 * std::numbers::pi * j / 3.0;
    ComplexVector v(2);
    v << std::cos(theta / 2), std::sin(theta / 2);
    out.push_back(HermitianOperator::symmetrized(2.0 / 3.0 * v * v.adjoint()));
  }
  return out;
}

/// Random POVM with k elements: G_i^dag G_i conjugated by S^{-1/2}.
POVM random_povm(std::size_t d, std::size_t k, Rng& rng) {
  std::vector<ComplexMatrix> raw;
  ComplexMatrix total = ComplexMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < k; ++i) {
    const ComplexMatrix g = gaussian_matrix(d, d, rng);
    raw.push_back(g.adjoint() * g);
    total += raw.back();
  }
  const Spectrum s = eig_hermitian(HermitianOperator::symmetrized(total));
  const ComplexMatrix inv_sqrt = s.eigenvectors *
                                 s.eigenvalues.cwiseSqrt().cwiseInverse().cast<Complex>().asDiagonal() *
                                 s.eigenvectors.adjoint();
  std::vector<HermitianOperator> elements;
  for (const auto& r : raw) elements.push_back(HermitianOperator::symmetrized(inv_sqrt * r * inv_sqrt));
  return POVM(std::move(elements));
}

}  // namespace

TEST_SUITE("dilation") {

TEST_CASE("POVM validation") {
  CHECK_NOTHROW(POVM(trine()));
  CHECK_THROWS_AS(POVM({HermitianOperator::symmetrized(diag({1, -0.1}))}), InvalidPOVM);
  CHECK_THROWS_AS(POVM({HermitianOperator::symmetrized(diag({1, 1.5}))}), InvalidPOVM);
  // Sub-normalized is fine; a declared weight must be matched exactly.
  CHECK_NOTHROW(POVM({HermitianOperator::symmetrized(diag({0.5, 0.2}))}));
  const HermitianOperator weight = HermitianOperator::symmetrized(diag({2, 1}));
  CHECK_NOTHROW(POVM({HermitianOperator::symmetrized(diag({2, 0})), HermitianOperator::symmetrized(diag({0, 1}))}, weight));
  CHECK_THROWS_AS(POVM({HermitianOperator::symmetrized(diag({1, 0}))}, weight), InvalidPOVM);
}

TEST_CASE("Naimark dilation of a PVM") {
  const POVM p({HermitianOperator::symmetrized(diag({1, 0, 0})), HermitianOperator::symmetrized(diag({0, 1, 1}))});
  const Dilation d = naimark_dilate(p);
  CHECK(d.dim_K == 6);
  CHECK(d.residual <= 1e-10);
  REQUIRE(d.pvm_K);
  CHECK(d.pvm_K->size() == 2);
}

TEST_CASE("Naimark dilation of the trine") {
  const POVM p(trine());
  const Dilation d = naimark_dilate(p);
  CHECK(d.dim_K == 6);
  REQUIRE(d.pvm_K);
  CHECK(d.pvm_K->size() == 3);
  for (const auto& q : d.pvm_K->elements()) CHECK(q.rank() == 2);
  CHECK(d.residual <= 1e-8);
  CHECK(dist(d.v.adjoint() * d.v, identity(2)) <= 1e-12);
}

TEST_CASE("Naimark dilation of the trivial POVM") {
  const Dilation d = naimark_dilate(POVM({HermitianOperator::identity(3)}));
  CHECK(d.dim_K == 3);
  CHECK(dist(d.v.adjoint() * d.v, identity(3)) <= 1e-12);
  CHECK(dist(d.v * d.v.adjoint(), identity(3)) <= 1e-12);
  CHECK(dist((*d.pvm_K)[0].matrix(), identity(3)) == 0.0);
}

TEST_CASE("Naimark residuals on random POVMs") {
  Rng rng(1);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t d = 2 + static_cast<std::size_t>(trial % 3);
    const std::size_t k = 1 + static_cast<std::size_t>(trial % 5);
    const POVM p = random_povm(d, k, rng);
    const Dilation dil = naimark_dilate(p);
    CHECK(dil.dim_K == d * k);
    CHECK(dil.residual <= 1e-8);
    CHECK(dist(dil.v.adjoint() * dil.v, p.total().matrix()) <= 1e-8);
  }
}

TEST_CASE("Stinespring dilation of the identity map") {
  const Dilation d = stinespring_dilate(representation_of(maps::identity_map(3)));
  CHECK(d.multiplicity == 1);
  CHECK(d.dim_K == 3);
  CHECK(dist(d.v.adjoint() * d.v, identity(3)) <= 1e-12);
  CHECK(dist(d.v * d.v.adjoint(), identity(3)) <= 1e-12);
  CHECK(d.residual <= 1e-12);
}

TEST_CASE("Stinespring dilation of the depolarizing map") {
  const Dilation d = stinespring_dilate(representation_of(maps::depolarizing_map(3)));
  CHECK(d.multiplicity == 9);
  CHECK(d.residual <= 1e-8);
}

TEST_CASE("transpose map is not completely positive") {
  try {
    stinespring_dilate(representation_of(maps::transpose_map(2)));
    FAIL("expected NotCompletelyPositive");
  } catch (const NotCompletelyPositive& e) {
    CHECK(e.min_eigenvalue() == doctest::Approx(-1.0));
  }
  const Dilation partial = stinespring_dilate(representation_of(maps::transpose_map(2)), false);
  CHECK(partial.residual > 0.1);
}

TEST_CASE("Stinespring dilations of maps of states") {
  Rng rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const LinearMapRep psi = compose_transpose(map_from_state(ginibre_state(12, rng), {3, 4}));
    const Dilation d = stinespring_dilate(psi);
    CHECK(d.residual <= 1e-8);
    CHECK(d.multiplicity == 12);
    const OrthomorphismReport r = orthomorphism_check(representation_map(d), 30, 1, 1e-8);
    CHECK(r.passed);
  }
}

TEST_CASE("orthomorphism checks") {
  const ComplexMatrix ones = identity(2);
  const LinearMap lift{3, 6, [ones](const ComplexMatrix& q) { return tensor(q, ones); }};
  const OrthomorphismReport a = orthomorphism_check(lift, 50, 1, 1e-10);
  CHECK(a.passed);
  CHECK(a.additivity_defect <= 1e-10);

  Rng rng(3);
  CHECK(orthomorphism_check(maps::unitary_conjugation(haar_unitary(3, rng)), 50, 1, 1e-10).passed);
  CHECK(orthomorphism_check(maps::transpose_map(3), 50, 1, 1e-10).passed);

  const OrthomorphismReport dep = orthomorphism_check(maps::depolarizing_map(3), 50, 1, 1e-10);
  CHECK_FALSE(dep.passed);
  CHECK(dep.projection_defect > 0.1);
}

TEST_CASE("context consistency of induced dilations") {
  const Dilation d = stinespring_dilate(representation_of(maps::identity_map(3)));
  Rng rng(4);
  const OverlappingContexts o = overlapping_contexts(3, rng);
  const auto family = induced_context_dilations(d, {o.first, o.second, o.shared, Context::trivial(3)});
  const ConstraintReport r = context_dilation_consistency(family, 1e-10);
  CHECK(r.satisfied);
  CHECK(r.max_violation <= 1e-10);

  CHECK(context_dilation_consistency({family.front()}, 1e-10).satisfied);
}

TEST_CASE("planted context dependence is detected") {
  Rng rng(5);
  const Dilation d = stinespring_dilate(compose_transpose(map_from_state(ginibre_state(9, rng), {3, 3})));
  const OverlappingContexts o = overlapping_contexts(3, rng);
  auto family = induced_context_dilations(d, {o.first, o.second});
  // Rotate the image of the shared projector into the image of another one.
  const std::size_t m = d.multiplicity;
  const ComplexMatrix& u = o.second.basis();
  ComplexMatrix swap01 = identity(3);
  swap01(0, 0) = swap01(1, 1) = 0.0;
  swap01(0, 1) = swap01(1, 0) = 1.0;
  const ComplexMatrix w = tensor(u * swap01 * u.adjoint(), identity(m));
  std::vector<Projection> rotated;
  for (const auto& q : family[1].pvm_K.elements())
    rotated.emplace_back(HermitianOperator::symmetrized(w * q.matrix() * w.adjoint()));
  family[1].pvm_K = PVM(std::move(rotated));
  const ConstraintReport r = context_dilation_consistency(family, 1e-10);
  CHECK_FALSE(r.satisfied);
  CHECK(r.max_violation >= 0.5);
  CHECK_FALSE(r.witness.empty());

  auto mismatched = family;
  mismatched[1].v = 2.0 * mismatched[1].v;
  CHECK_THROWS_AS(context_dilation_consistency(mismatched, 1e-10), InvalidInput);
}

TEST_CASE("dilation JSON") {
  const Json n = dilation_to_json(naimark_dilate(POVM(trine())));
  CHECK(n.at("K") == 6);
  CHECK(n.at("pvm_K").size() == 3);
  const Json s = dilation_to_json(stinespring_dilate(representation_of(maps::identity_map(2))));
  CHECK(s.at("multiplicity") == 1);
  CHECK(s.contains("U"));

  const Json file{{"povm", Json::array({matrix_to_json(diag({1, 0})), matrix_to_json(diag({0, 1}))})}};
  CHECK(povm_from_json(file).size() == 2);
  CHECK_THROWS_AS(povm_from_json(Json::object()), InvalidInput);
}

}  // TEST_SUITE
