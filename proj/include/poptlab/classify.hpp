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

// End-to-end classification of a bipartite Hermitian operator: validity,
// positivity, POPT, PPT, the induced map and its time orientation.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "poptlab/dilation.hpp"
#include "poptlab/jordan.hpp"
#include "poptlab/json_io.hpp"
#include "poptlab/measures.hpp"
#include "poptlab/operator_core.hpp"

namespace poptlab {

struct Tolerances {
  double herm = kHermTol;
  double eig = kEigTol;
  double popt = 1e-8;
  double orientation = 1e-8;
};

struct ClassifyConfig {
  Tolerances tol;
  std::size_t popt_restarts = 64;
  std::size_t samples = 50;
  std::uint64_t seed = 0;
};

enum class Verdict { quantum_state, popt_only, not_popt, invalid };

std::string to_string(Verdict v);

/// How the orientation-corrected map psi = phi o * was lifted to a
/// representation: canonical (psi completely positive, Phi(a) = a (x) 1),
/// transposed (phi completely positive, Phi(a) = a^T (x) 1), or none.
enum class LiftKind { canonical, transposed, none };

std::string to_string(LiftKind k);

struct ClassificationReport {
  Dims dims;
  double trace = 0.0;
  bool is_hermitian = false;
  double hermiticity_defect = 0.0;

  bool is_psd = false;
  double min_eigenvalue = 0.0;
  ComplexVector psd_witness;

  bool is_popt = false;
  PoptCertificate popt;

  bool is_ppt = false;
  double min_pt_eigenvalue = 0.0;

  LiftKind lift = LiftKind::none;
  std::size_t lift_multiplicity = 0;
  /// Only when a lift exists.
  std::optional<double> jordan_defect;
  std::optional<OrthomorphismReport> orthomorphism;
  /// Of the lift when there is one, otherwise of psi itself.
  OrientationVerdict orientation;

  Verdict verdict = Verdict::invalid;
  std::vector<std::string> reasons;
};

/// Never throws on bad operator content; invalid input yields
/// verdict = invalid with reasons. Deterministic under config.seed.
ClassificationReport classify(const ComplexMatrix& rho, Dims dims,
                              const ClassifyConfig& config = {});

Json classification_report_to_json(const ClassificationReport& r);

}  // namespace poptlab
