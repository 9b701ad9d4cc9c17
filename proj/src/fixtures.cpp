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

#include "poptlab/fixtures.hpp"

#include <array>
#include <sstream>

#include "poptlab/contexts.hpp"
#include "poptlab/errors.hpp"
#include "poptlab/sampling.hpp"

namespace poptlab {

namespace {

constexpr std::array<std::pair<FixtureKind, const char*>, 8> kNames{{
    {FixtureKind::haar_pure, "haar_pure"},
    {FixtureKind::ginibre_mixed, "ginibre_mixed"},
    {FixtureKind::max_entangled, "max_entangled"},
    {FixtureKind::swap_popt, "swap_popt"},
    {FixtureKind::pt_of, "pt_of"},
    {FixtureKind::werner, "werner"},
    {FixtureKind::planted_signalling, "planted_signalling"},
    {FixtureKind::planted_contextual, "planted_contextual"},
}};

void require_square(const GeneratorSpec& spec) {
  if (spec.dims.d1 != spec.dims.d2) {
    throw InvalidSpec(to_string(spec.kind) + " needs d1 == d2");
  }
}

void require_dims(const GeneratorSpec& spec, std::size_t min_dim) {
  if (spec.dims.d1 < min_dim || spec.dims.d2 < min_dim) {
    std::ostringstream os;
    os << to_string(spec.kind) << " needs dimensions >= " << min_dim;
    throw InvalidSpec(os.str());
  }
}

double planted_delta(const GeneratorSpec& spec) {
  const double delta = spec.param == 0.0 ? kPlantedMagnitude : spec.param;
  if (!(delta > 0.0) || delta > 1.0 / static_cast<double>(spec.dims.total())) {
    throw InvalidSpec("planted magnitude must lie in (0, 1 / (d1 d2)]");
  }
  return delta;
}

ComplexMatrix state_matrix(const GeneratorSpec& spec) {
  const Dims dims = spec.dims;
  const std::size_t n = dims.total();
  Rng rng(spec.seed);
  switch (spec.kind) {
    case FixtureKind::haar_pure: {
      const ComplexVector v = haar_vector(n, rng);
      return v * v.adjoint();
    }
    case FixtureKind::ginibre_mixed:
      return ginibre_state(n, rng).matrix();
    case FixtureKind::max_entangled: {
      require_square(spec);
      const ComplexVector v = maximally_entangled_vector(dims.d1);
      return v * v.adjoint() / static_cast<double>(dims.d1);
    }
    case FixtureKind::swap_popt:
      require_square(spec);
      return swap_operator(dims.d1) / static_cast<double>(dims.d1);
    case FixtureKind::werner: {
      require_square(spec);
      const double p = spec.param;
      if (!(p >= 0.0 && p <= 1.0)) throw InvalidSpec("werner: p must lie in [0, 1]");
      const double d = static_cast<double>(dims.d1);
      const ComplexMatrix antisym = (identity(n) - swap_operator(dims.d1)) / 2.0;
      return (1.0 - p) * identity(n) / (d * d) + p * 2.0 * antisym / (d * (d - 1.0));
    }
    case FixtureKind::pt_of: {
      if (!spec.inner || *spec.inner == FixtureKind::pt_of ||
          *spec.inner == FixtureKind::planted_signalling ||
          *spec.inner == FixtureKind::planted_contextual) {
        throw InvalidSpec("pt_of needs an operator-valued inner kind");
      }
      GeneratorSpec inner = spec;
      inner.kind = *spec.inner;
      inner.inner.reset();
      return partial_transpose(state_matrix(inner), dims, Subsystem::first);
    }
    case FixtureKind::planted_signalling:
    case FixtureKind::planted_contextual:
      break;
  }
  throw InvalidSpec("not an operator-valued kind");
}

Generated planted_signalling(const GeneratorSpec& spec) {
  const double delta = planted_delta(spec);
  const auto d1 = static_cast<Eigen::Index>(spec.dims.d1);
  const auto d2 = static_cast<Eigen::Index>(spec.dims.d2);
  Scenario s;
  s.dims = spec.dims;
  const Eigen::MatrixXd uniform =
      Eigen::MatrixXd::Constant(d1, d2, 1.0 / static_cast<double>(spec.dims.total()));
  s.table.assign(2, std::vector<Eigen::MatrixXd>(2, uniform));
  // Left marginal of setting 0 now depends on the right setting.
  s.table[0][0](0, 0) += delta;
  s.table[0][0](1, 0) -= delta;
  Certificate c{"signalling_table", std::nullopt, std::nullopt, delta};
  return {TabulatedMeasure(std::move(s)), spec.dims, c};
}

Generated planted_contextual(const GeneratorSpec& spec) {
  const double delta = planted_delta(spec);
  Rng rng(spec.seed);
  const OverlappingContexts left = overlapping_contexts(spec.dims.d1, rng);
  const std::vector<std::size_t> maximal(spec.dims.d2, 1);
  std::vector<PVM> right{pvm_of_context(Context::computational(spec.dims.d2, maximal)),
                         pvm_of_context(Context::fourier(spec.dims.d2, maximal))};
  Partition merge{{0}, {}};
  for (std::size_t i = 1; i < spec.dims.d1; ++i) merge[1].push_back(i);
  std::vector<CoarseGraining> coarse{{Side::left, 0, 2, merge}, {Side::left, 1, 2, merge}};
  const ComplexMatrix mixed = identity(spec.dims.total()) / static_cast<double>(spec.dims.total());
  Scenario s = tabulate(mixed, spec.dims,
                        {pvm_of_context(left.first), pvm_of_context(left.second),
                         pvm_of_context(left.shared)},
                        std::move(right), std::move(coarse));
  // Shift the second context's weight on the shared projector; marginals
  // across the cut are untouched, restriction to the shared context is not.
  for (auto& cell : s.table[1]) {
    cell(0, 0) += delta;
    cell(1, 0) -= delta;
  }
  Certificate c{"contextual_table", std::nullopt, std::nullopt, delta};
  return {TabulatedMeasure(std::move(s)), spec.dims, c};
}

}  // namespace

std::string to_string(FixtureKind k) {
  for (const auto& [kind, name] : kNames)
    if (kind == k) return name;
  return "unknown";
}

FixtureKind fixture_kind_from_string(const std::string& name) {
  for (const auto& [kind, n] : kNames)
    if (name == n) return kind;
  throw InvalidSpec("unknown fixture kind '" + name + "'");
}

Generated generate(const GeneratorSpec& spec) {
  switch (spec.kind) {
    case FixtureKind::planted_signalling:
      require_dims(spec, 2);
      return planted_signalling(spec);
    case FixtureKind::planted_contextual:
      require_dims(spec, 3);
      return planted_contextual(spec);
    default:
      break;
  }
  require_dims(spec, 2);
  const HermitianOperator rho = HermitianOperator::symmetrized(state_matrix(spec));
  const PsdResult psd = is_psd(rho, kEigTol);
  PoptOptions popt;
  popt.restarts = 16;
  popt.seed = spec.seed;
  const PoptCertificate cert = check_popt(rho, spec.dims, popt);
  Certificate c;
  c.declared_class = psd.psd ? "quantum_state" : (cert.is_popt ? "popt_only" : "not_popt");
  c.min_eigenvalue = psd.min_eigenvalue;
  c.popt_min = cert.min_value;
  return {rho, spec.dims, c};
}

Json generated_to_json(const Generated& g) {
  Json j = g.is_state() ? state_to_json(g.state().matrix(), g.dims)
                        : scenario_to_json(g.table().scenario());
  auto opt = [](const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); };
  j["certificate"] = Json{{"declared_class", g.certificate.declared_class},
                          {"min_eigenvalue", opt(g.certificate.min_eigenvalue)},
                          {"popt_min", opt(g.certificate.popt_min)},
                          {"planted_magnitude", opt(g.certificate.planted_magnitude)}};
  return j;
}

}  // namespace poptlab
