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

// Dilations: POVMs as compressions of PVMs on a larger space (Naimark),
// completely positive maps as compressions of a representation a -> a (x) 1
// (Stinespring), and the checks that tie such lifts back to projections.

#include <cstdint>
#include <optional>
#include <vector>

#include "poptlab/contexts.hpp"
#include "poptlab/jordan.hpp"
#include "poptlab/json_io.hpp"
#include "poptlab/measures.hpp"
#include "poptlab/operator_core.hpp"

namespace poptlab {

inline constexpr double kPovmTol = 1e-9;
inline constexpr double kCompressionTol = 1e-8;
inline constexpr double kRankCutoff = 1e-10;

/// Positive operator-valued measure, possibly non-normalized: the elements
/// sum to a declared weight operator, or to something below the identity.
class POVM {
 public:
  /// Throws InvalidPOVM if an element is not PSD within tol, if the sum
  /// exceeds the identity (no weight given) or differs from `weight`.
  explicit POVM(std::vector<HermitianOperator> elements,
                std::optional<HermitianOperator> weight = std::nullopt, double tol = kPovmTol);

  const std::vector<HermitianOperator>& elements() const { return elements_; }
  const HermitianOperator& total() const { return total_; }
  std::size_t size() const { return elements_.size(); }
  std::size_t dim() const { return total_.dim(); }

 private:
  std::vector<HermitianOperator> elements_;
  HermitianOperator total_;
};

enum class DilationKind { naimark, stinespring };

struct Dilation {
  DilationKind kind = DilationKind::naimark;
  std::size_t dim_K = 0;
  /// Isometry-like map C^{d2} -> C^K (dim_K x d2).
  ComplexMatrix v;
  /// Naimark case.
  std::optional<PVM> pvm_K;
  /// Stinespring case: Phi(a) = U (a (x) 1_m) U^dag on C^{d_in} (x) C^m, or
  /// U (a^T (x) 1_m) U^dag when `transposed` is set.
  std::size_t d_in = 0;
  std::size_t multiplicity = 0;
  ComplexMatrix u;
  bool transposed = false;
  /// Largest compression error on the inputs (POVM elements or matrix units).
  double residual = 0.0;
};

/// Canonical block dilation: K = d2 k, v stacks the square roots of the
/// elements and pvm_K consists of the k coordinate block projectors.
Dilation naimark_dilate(const POVM& povm);

/// Kraus decomposition from the eigendecomposition of the usual Choi matrix
/// of phi (see standard_choi); multiplicity = numerical rank (cutoff 1e-10).
/// With require_cp a non-PSD Choi matrix throws NotCompletelyPositive;
/// without it, negative eigenvalues are dropped and the loss shows up in
/// `residual`.
Dilation stinespring_dilate(const LinearMapRep& phi, bool require_cp = true,
                            double tol = kEigTol);

/// The representation Phi of a Stinespring dilation, as a map L(C^{d_in}) ->
/// L(C^K). For a Naimark dilation this throws InvalidInput.
LinearMap representation_map(const Dilation& dilation);

/// v^dag x v.
ComplexMatrix compress(const Dilation& dilation, const ComplexMatrix& x);

struct OrthomorphismReport {
  /// ||phi(0)||
  double zero_defect = 0.0;
  /// ||phi(1 - p) - (1 - phi(p))||
  double complement_defect = 0.0;
  /// ||phi(p) phi(q)|| for pq = 0
  double orthogonality_defect = 0.0;
  /// ||phi(p + q) - phi(p) - phi(q)|| for pq = 0
  double additivity_defect = 0.0;
  /// ||phi(p)^2 - phi(p)|| and Hermiticity of phi(p)
  double projection_defect = 0.0;
  std::size_t samples = 0;
  double tolerance = 0.0;
  bool passed = false;
};

/// Samples orthogonal pairs p, q (disjoint index sets of Haar bases) and
/// checks the four orthomorphism conditions plus that images are projections.
OrthomorphismReport orthomorphism_check(const LinearMap& phi, std::size_t samples,
                                        std::uint64_t seed, double tol);

/// A per-context dilation: element i of `pvm_K` is the image of the i-th
/// block projector of `context`.
struct ContextDilation {
  Context context;
  PVM pvm_K;
  ComplexMatrix v;
};

/// Context independence of a family of dilations: every projector shared by
/// two contexts must get the same image. Throws InvalidInput if the
/// dilations do not share K and v.
ConstraintReport context_dilation_consistency(const std::vector<ContextDilation>& family,
                                              double tol);

/// The family induced by the global lift q -> q (x) 1_m with v = w.
std::vector<ContextDilation> induced_context_dilations(const Dilation& dilation,
                                                       const std::vector<Context>& contexts);

Json dilation_to_json(const Dilation& d);
Json orthomorphism_report_to_json(const OrthomorphismReport& r);

/// POVM files: {"povm": [<matrix>, ...], "weight": <matrix>?}.
POVM povm_from_json(const Json& j);

}  // namespace poptlab
