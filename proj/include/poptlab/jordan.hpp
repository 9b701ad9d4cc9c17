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

// Linear maps L(H1) -> L(H2) in the Choi-Jamiolkowski picture and the
// Jordan / commutator analysis used to decide time orientation.
//
// Basis convention (part of the wire format): a map phi is stored as the
// operator
//
//     rho = sum_ij |i><j| (x) phi(|j><i|)
//
// in the computational basis of H1, so that phi(a) = tr_1[rho (a (x) 1)].
// Equivalently rho is the usual Choi matrix of the orientation-corrected
// map phi o *, where * acts on matrix units as |i><j| -> |j><i|.

#include <cstdint>
#include <functional>
#include <string>

#include "poptlab/json_io.hpp"
#include "poptlab/operator_core.hpp"

namespace poptlab {

using MatrixMap = std::function<ComplexMatrix(const ComplexMatrix&)>;

/// A linear map given by how it acts; inputs need not be Hermitian.
struct LinearMap {
  std::size_t d_in = 0;
  std::size_t d_out = 0;
  MatrixMap apply;
};

class LinearMapRep {
 public:
  /// `choi` lives on C^{d_in} (x) C^{d_out}; it is Hermitian exactly when
  /// the map preserves Hermiticity.
  LinearMapRep(std::size_t d_in, std::size_t d_out, HermitianOperator choi);

  /// Builds the representation from the action on matrix units. Throws
  /// InvalidInput if the map is not Hermiticity-preserving.
  static LinearMapRep from_function(std::size_t d_in, std::size_t d_out, const MatrixMap& f);

  std::size_t d_in() const { return d_in_; }
  std::size_t d_out() const { return d_out_; }
  const HermitianOperator& choi() const { return choi_; }

 private:
  std::size_t d_in_;
  std::size_t d_out_;
  HermitianOperator choi_;
};

LinearMapRep map_from_state(const HermitianOperator& rho, Dims dims);

/// Reassembles sum_ij |i><j| (x) phi(|j><i|) by applying phi to matrix units.
HermitianOperator state_from_map(const LinearMapRep& phi);

ComplexMatrix apply_map(const LinearMapRep& phi, const ComplexMatrix& a);
HermitianOperator apply_map(const LinearMapRep& phi, const HermitianOperator& a);

LinearMap as_map(const LinearMapRep& phi);

/// Representation of a -> phi(a^T).
LinearMapRep compose_transpose(const LinearMapRep& phi);

/// Usual Choi matrix sum_ij |i><j| (x) phi(|i><j|), computed through apply_map.
ComplexMatrix standard_choi(const LinearMapRep& phi);

struct CpResult {
  bool completely_positive = false;
  double min_eigenvalue = 0.0;
  ComplexVector witness;
};

/// Complete positivity of the orientation-corrected map phi o *: its Choi
/// matrix sum_ij |i><j| (x) phi(|j><i|) is assembled by applying phi and
/// tested for positivity. For phi = map_from_state(rho) this holds iff rho
/// is PSD.
CpResult is_completely_positive(const LinearMapRep& phi, double tol);

/// max over sampled Hermitian pairs of ||phi({a,b}) - {phi(a),phi(b)}||_max
/// / (||a||_max ||b||_max).
double jordan_defect(const LinearMap& phi, std::size_t samples, std::uint64_t seed);
double jordan_defect(const LinearMapRep& phi, std::size_t samples, std::uint64_t seed);

enum class Orientation { preserving, reversing, neither };

std::string to_string(Orientation o);

struct OrientationVerdict {
  Orientation tag = Orientation::neither;
  double max_defect_preserving = 0.0;
  double max_defect_reversing = 0.0;
  std::size_t sample_count = 0;
  /// Every sampled commutator maps to (numerically) zero; both signs fit and
  /// the tag is reported as neither.
  bool degenerate = false;
  /// Finite-time form phi(Psi(+-t, a) b) = Psi(t, phi(a)) phi(b) at
  /// t in {0.1, 1, pi}, normalized by ||b||_max.
  double finite_time_defect_preserving = 0.0;
  double finite_time_defect_reversing = 0.0;
  /// The finite-time and commutator-sign criteria agree (finite-time
  /// tolerance 1e-6).
  bool finite_time_consistent = true;
};

inline constexpr double kFiniteTimeTol = 1e-6;

/// Commutator-sign classification over sampled Hermitian pairs, validated by
/// the finite-time conjugation-flow form.
OrientationVerdict orientation_verdict(const LinearMap& phi, std::size_t samples,
                                       std::uint64_t seed, double tol);
OrientationVerdict orientation_verdict(const LinearMapRep& phi, std::size_t samples,
                                       std::uint64_t seed, double tol);

Json linear_map_to_json(const LinearMapRep& phi);
Json orientation_verdict_to_json(const OrientationVerdict& v);

namespace maps {
LinearMap identity_map(std::size_t d);
LinearMap transpose_map(std::size_t d);
/// a -> tr(a) 1 / d.
LinearMap depolarizing_map(std::size_t d);
/// a -> u a u^dag.
LinearMap unitary_conjugation(const ComplexMatrix& u);
}  // namespace maps

LinearMapRep representation_of(const LinearMap& f);

}  // namespace poptlab
