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

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "poptlab/bell.hpp"
#include "poptlab/errors.hpp"
#include "poptlab/fixtures.hpp"
#include "support.hpp"

using namespace poptlab;
using namespace poptlab::testing;

namespace {

const double kPi = std::numbers::pi;

ChshSettings tsirelson_angles() {
  return {DichotomicSetting::bloch(0, 0), DichotomicSetting::bloch(kPi / 2, 0),
          DichotomicSetting::bloch(kPi / 4, 0), DichotomicSetting::bloch(-kPi / 4, 0)};
}

}  // namespace

TEST_SUITE("bell") {

TEST_CASE("maximally mixed state has no correlations") {
  const ChshInstance inst{HermitianOperator::symmetrized(identity(4) / 4.0), {2, 2}, tsirelson_angles()};
  CHECK(std::abs(chsh_value(inst)) <= 1e-15);
}

TEST_CASE("Tsirelson angles on the maximally entangled state") {
  // For |Phi+> <A (x) B> = tr(A^T B) / 2, and real X/Z settings give cos(a - b).
  const ChshInstance inst{HermitianOperator(max_entangled_state(2)), {2, 2}, tsirelson_angles()};
  CHECK(chsh_value(inst) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("product state reaches the classical bound") {
  ComplexMatrix rho = ComplexMatrix::Zero(4, 4);
  rho(0, 0) = 1.0;
  const DichotomicSetting z = DichotomicSetting::bloch(0, 0);
  const ChshInstance inst{HermitianOperator(rho), {2, 2}, {z, z, z, z}};
  CHECK(chsh_value(inst) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("dichotomic settings") {
  CHECK_NOTHROW(DichotomicSetting(pauli::x()));
  CHECK_NOTHROW(DichotomicSetting(HermitianOperator::symmetrized(diag({1, -1, 1}))));
  CHECK_THROWS_AS(DichotomicSetting(HermitianOperator::symmetrized(diag({1, 0}))), InvalidSetting);
  CHECK_THROWS_AS(DichotomicSetting(HermitianOperator::symmetrized(diag({1, 2}))), InvalidSetting);
  const DichotomicSetting b = DichotomicSetting::bloch(0.3, 1.1);
  CHECK(dist(b.matrix() * b.matrix(), identity(2)) <= 1e-15);
}

TEST_CASE("dimension mismatch") {
  const ChshInstance inst{HermitianOperator::symmetrized(identity(9) / 9.0), {3, 3}, tsirelson_angles()};
  CHECK_THROWS_AS(chsh_value(inst), DimensionError);
}

TEST_CASE("optimizer reaches Tsirelson on the singlet") {
  ComplexVector psi = ComplexVector::Zero(4);
  psi(1) = 1.0 / std::sqrt(2.0);
  psi(2) = -1.0 / std::sqrt(2.0);
  const HermitianOperator singlet = HermitianOperator::symmetrized(psi * psi.adjoint());
  ChshOptions options;
  options.restarts = 8;
  options.seed = 1;
  const ChshResult r = optimize_chsh(singlet, {2, 2}, options);
  CHECK(std::abs(r.value - 2.0 * std::sqrt(2.0)) <= 1e-4);
  CHECK(r.restarts == 8);
  CHECK(r.min_step_gain >= 0.0);
  // The reported value is reproduced by the reported settings.
  CHECK(chsh_value({singlet, {2, 2}, r.settings}) == doctest::Approx(r.value).epsilon(1e-12));
}

TEST_CASE("optimizer on qutrits stays within the quantum bound for states") {
  GeneratorSpec spec;
  spec.kind = FixtureKind::max_entangled;
  const HermitianOperator rho = generate(spec).state();
  ChshOptions options;
  options.restarts = 4;
  options.seed = 2;
  const ChshResult r = optimize_chsh(rho, {3, 3}, options);
  CHECK(r.value <= 2.0 * std::sqrt(2.0) + 1e-9);
  CHECK(r.value >= 2.0);
  CHECK(chsh_value({rho, {3, 3}, r.settings}) == doctest::Approx(r.value).epsilon(1e-12));
}

TEST_CASE("optimizer is deterministic in the seed") {
  Rng rng(3);
  const HermitianOperator rho = ginibre_state(4, rng);
  ChshOptions options;
  options.restarts = 3;
  options.seed = 9;
  CHECK(optimize_chsh(rho, {2, 2}, options).value == optimize_chsh(rho, {2, 2}, options).value);
}

TEST_CASE("PR box") {
  const TabulatedMeasure box = pr_box_table();
  CHECK(chsh_from_table(box) == doctest::Approx(4.0).epsilon(1e-15));
  const ConstraintReport ns = check_no_signalling(box.scenario(), 1e-12);
  CHECK(ns.satisfied);
  CHECK(ns.max_violation <= 1e-15);
}

TEST_CASE("CHSH of a tabulated operator matches the direct value") {
  const ChshSettings s = tsirelson_angles();
  auto pvm = [](const DichotomicSetting& a) {
    const ComplexMatrix plus = (identity(2) + a.matrix()) / 2.0;
    const ComplexMatrix minus = (identity(2) - a.matrix()) / 2.0;
    return PVM({Projection(HermitianOperator::symmetrized(plus)), Projection(HermitianOperator::symmetrized(minus))});
  };
  const ComplexMatrix rho = max_entangled_state(2);
  const TabulatedMeasure table(tabulate(rho, {2, 2}, {pvm(s.a0), pvm(s.a1)}, {pvm(s.b0), pvm(s.b1)}));
  CHECK(chsh_from_table(table) == doctest::Approx(chsh_value({HermitianOperator(rho), {2, 2}, s})).epsilon(1e-12));
}

TEST_CASE("CHSH JSON") {
  ChshOptions options;
  options.restarts = 1;
  const Json j = chsh_result_to_json(optimize_chsh(HermitianOperator(max_entangled_state(2)), {2, 2}, options));
  CHECK(j.contains("value"));
  CHECK(j.at("settings").contains("A0"));
  CHECK(j.at("settings").contains("B1"));
  CHECK(j.at("restarts") == 1);
}

}  // TEST_SUITE
