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

#include <limits>

#include "doctest.h"
#include "poptlab/classify.hpp"
#include "poptlab/fixtures.hpp"
#include "support.hpp"

using namespace poptlab;
using namespace poptlab::testing;

namespace {

ClassifyConfig fast_config() {
  ClassifyConfig c;
  c.popt_restarts = 16;
  c.samples = 20;
  return c;
}

}  // namespace

TEST_SUITE("classify") {

TEST_CASE("maximally entangled state") {
  const ClassificationReport r = classify(max_entangled_state(3), {3, 3}, fast_config());
  CHECK(r.verdict == Verdict::quantum_state);
  CHECK(r.is_psd);
  CHECK(r.is_popt);
  CHECK_FALSE(r.is_ppt);
  CHECK(r.min_pt_eigenvalue == doctest::Approx(-1.0 / 3.0).epsilon(1e-9));
  CHECK(r.lift == LiftKind::canonical);
  CHECK(r.orientation.tag == Orientation::preserving);
  REQUIRE(r.jordan_defect);
  CHECK(*r.jordan_defect <= 1e-8);
}

TEST_CASE("normalized swap is POPT but not a state") {
  const ClassificationReport r = classify(swap_over(3), {3, 3}, fast_config());
  CHECK(r.verdict == Verdict::popt_only);
  CHECK_FALSE(r.is_psd);
  CHECK(r.min_eigenvalue == doctest::Approx(-1.0 / 3.0).epsilon(1e-9));
  CHECK(dist(r.psd_witness.adjoint() * swap_over(3) * r.psd_witness,
             ComplexMatrix::Constant(1, 1, -1.0 / 3.0)) <= 1e-9);
  CHECK(r.is_popt);
  CHECK(r.popt.min_value >= -1e-8);
  CHECK(r.is_ppt);
  CHECK(r.lift == LiftKind::transposed);
  CHECK(r.orientation.tag == Orientation::reversing);
  REQUIRE(r.orthomorphism);
  CHECK(r.orthomorphism->passed);
}

TEST_CASE("maximally mixed state") {
  const ClassificationReport r = classify(identity(9) / 9.0, {3, 3}, fast_config());
  CHECK(r.verdict == Verdict::quantum_state);
  CHECK(r.is_ppt);
  CHECK(r.lift == LiftKind::canonical);
  CHECK(r.orientation.tag == Orientation::preserving);
}

TEST_CASE("non-POPT operator") {
  // (I - 2 |00><00|) / 7 is negative on a product vector.
  ComplexMatrix rho = identity(9);
  rho(0, 0) = -1.0;
  rho /= 7.0;
  const ClassificationReport r = classify(rho, {3, 3}, fast_config());
  CHECK(r.verdict == Verdict::not_popt);
  CHECK_FALSE(r.is_popt);
  CHECK(r.popt.min_value == doctest::Approx(-1.0 / 7.0).epsilon(1e-6));
  CHECK(r.lift == LiftKind::none);
}

TEST_CASE("invalid inputs") {
  SUBCASE("trace") {
    const ClassificationReport r = classify(identity(9) / 8.0, {3, 3}, fast_config());
    CHECK(r.verdict == Verdict::invalid);
    CHECK_FALSE(r.reasons.empty());
  }
  SUBCASE("not Hermitian") {
    ComplexMatrix rho = identity(9) / 9.0;
    rho(0, 1) = 0.1;
    const ClassificationReport r = classify(rho, {3, 3}, fast_config());
    CHECK(r.verdict == Verdict::invalid);
    CHECK_FALSE(r.is_hermitian);
    CHECK(r.hermiticity_defect == doctest::Approx(0.1));
  }
  SUBCASE("dimensions") {
    CHECK(classify(identity(9) / 9.0, {2, 4}, fast_config()).verdict == Verdict::invalid);
    CHECK(classify(identity(9) / 9.0, {0, 9}, fast_config()).verdict == Verdict::invalid);
  }
  SUBCASE("non-finite entries") {
    ComplexMatrix rho = identity(9) / 9.0;
    rho(4, 4) = std::numeric_limits<double>::quiet_NaN();
    CHECK(classify(rho, {3, 3}, fast_config()).verdict == Verdict::invalid);
  }
  SUBCASE("JSON carries nulls") {
    const Json j = classification_report_to_json(classify(identity(9) / 8.0, {3, 3}, fast_config()));
    CHECK(j.at("verdict") == "invalid");
    CHECK(j.at("is_psd").is_null());
  }
}

TEST_CASE("one-sided flips toggle the orientation, two-sided flips keep the verdict") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    GeneratorSpec spec;
    spec.kind = FixtureKind::haar_pure;
    spec.seed = seed;
    const HermitianOperator rho = generate(spec).state();
    const ClassificationReport a = classify(rho.matrix(), {3, 3}, fast_config());
    CHECK(a.verdict == Verdict::quantum_state);
    CHECK(a.orientation.tag == Orientation::preserving);

    const ComplexMatrix flipped = partial_transpose(rho.matrix(), {3, 3}, Subsystem::first);
    const ClassificationReport b = classify(flipped, {3, 3}, fast_config());
    CHECK(b.verdict == Verdict::popt_only);
    CHECK(b.lift == LiftKind::transposed);
    CHECK(b.orientation.tag == Orientation::reversing);

    const ComplexMatrix twice = partial_transpose(flipped, {3, 3}, Subsystem::second);
    const ClassificationReport c = classify(twice, {3, 3}, fast_config());
    CHECK(c.verdict == a.verdict);
    CHECK(c.orientation.tag == a.orientation.tag);
  }
}

TEST_CASE("transposing the second factor gives the same verdict") {
  Rng rng(3);
  const ComplexMatrix rho = ginibre_state(9, rng).matrix();
  const ComplexMatrix pt1 = partial_transpose(rho, {3, 3}, Subsystem::first);
  const ComplexMatrix pt2 = partial_transpose(rho, {3, 3}, Subsystem::second);
  CHECK(classify(pt1, {3, 3}, fast_config()).verdict == classify(pt2, {3, 3}, fast_config()).verdict);
}

TEST_CASE("report JSON") {
  const Json j = classification_report_to_json(classify(swap_over(3), {3, 3}, fast_config()));
  CHECK(j.at("verdict") == "popt_only");
  CHECK(j.at("lift").at("kind") == "transposed");
  CHECK(j.at("orientation").at("tag") == "reversing");
  CHECK(j.at("min_eigenvalue").get<double>() == doctest::Approx(-1.0 / 3.0));
}

}  // TEST_SUITE
