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

#pragma once

// Seeded generators for the example classes used by tests and docs: random
// states, maximally entangled and Werner states, swap-type POPT operators,
// partial transposes, and tables with planted violations.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "poptlab/json_io.hpp"
#include "poptlab/measures.hpp"
#include "poptlab/operator_core.hpp"

namespace poptlab {

enum class FixtureKind {
  haar_pure,
  ginibre_mixed,
  max_entangled,
  swap_popt,
  pt_of,
  werner,
  planted_signalling,
  planted_contextual,
};

std::string to_string(FixtureKind k);
/// Throws InvalidSpec for unknown names.
FixtureKind fixture_kind_from_string(const std::string& name);

inline constexpr double kPlantedMagnitude = 0.05;

struct GeneratorSpec {
  FixtureKind kind = FixtureKind::haar_pure;
  Dims dims{3, 3};
  std::uint64_t seed = 0;
  /// werner: mixing weight p in [0, 1]; planted kinds: magnitude (0 means
  /// the default 0.05).
  double param = 0.0;
  /// pt_of: the kind whose partial transpose (first factor) is taken.
  std::optional<FixtureKind> inner;
};

/// Checkable claims attached to a generated object.
struct Certificate {
  /// quantum_state, popt_only, signalling_table or contextual_table.
  std::string declared_class;
  std::optional<double> min_eigenvalue;
  /// Minimum found by check_popt (16 restarts, generator seed).
  std::optional<double> popt_min;
  std::optional<double> planted_magnitude;
};

struct Generated {
  std::variant<HermitianOperator, TabulatedMeasure> object;
  Dims dims;
  Certificate certificate;

  bool is_state() const { return std::holds_alternative<HermitianOperator>(object); }
  const HermitianOperator& state() const { return std::get<HermitianOperator>(object); }
  const TabulatedMeasure& table() const { return std::get<TabulatedMeasure>(object); }
};

/// Deterministic in its input. Throws InvalidSpec for unsupported dimensions
/// or parameters (e.g. d1 != d2 for the symmetric families).
Generated generate(const GeneratorSpec& spec);

/// State JSON or scenario JSON, plus a "certificate" object.
Json generated_to_json(const Generated& g);

}  // namespace poptlab
