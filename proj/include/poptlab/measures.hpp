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

// Product measures mu: P(H1) x P(H2) -> [0, 1]: constraint checks
// (no-signalling, no-disturbance), linear reconstruction of the operator
// rho_mu from an informationally complete grid, and the POPT test.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "poptlab/contexts.hpp"
#include "poptlab/json_io.hpp"
#include "poptlab/operator_core.hpp"

namespace poptlab {

inline constexpr double kTabTol = 1e-9;

enum class Side { left, right };

/// Measure given by an operator: mu(q1, q2) = tr[rho (q1 (x) q2)].
class OperatorBackedMeasure {
 public:
  /// Throws DimensionError on a dims mismatch and InvalidInput unless
  /// tr(rho) = 1 within 1e-9.
  OperatorBackedMeasure(HermitianOperator rho, Dims dims);

  const HermitianOperator& rho() const { return rho_; }
  Dims dims() const { return dims_; }

 private:
  HermitianOperator rho_;
  Dims dims_;
};

/// Declares that setting `coarse` on `side` is the coarse-graining of
/// setting `fine` whose outcome k collects the fine outcomes merge[k].
struct CoarseGraining {
  Side side = Side::left;
  std::size_t fine = 0;
  std::size_t coarse = 0;
  Partition merge;
};

/// table[x][y](i, j) = p(i, j | x, y).
using OutcomeTable = std::vector<std::vector<Eigen::MatrixXd>>;

/// Raw finite scenario. Settings may carry PVMs (empty vectors mean abstract
/// settings known only through their outcome counts). No range checks.
struct Scenario {
  Dims dims;
  std::vector<PVM> left_pvms;
  std::vector<PVM> right_pvms;
  std::vector<CoarseGraining> coarse;
  OutcomeTable table;

  std::size_t left_settings() const { return table.size(); }
  std::size_t right_settings() const { return table.empty() ? 0 : table.front().size(); }
  std::size_t left_outcomes(std::size_t x) const;
  std::size_t right_outcomes(std::size_t y) const;
};

/// A validated finite table: entries in [-tab_tol, 1 + tab_tol], every
/// setting pair normalized within 1e-9, shapes consistent with the PVMs.
class TabulatedMeasure {
 public:
  explicit TabulatedMeasure(Scenario scenario, double tab_tol = kTabTol);

  const Scenario& scenario() const { return scenario_; }
  Dims dims() const { return scenario_.dims; }
  double p(std::size_t x, std::size_t y, std::size_t i, std::size_t j) const {
    return scenario_.table[x][y](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

 private:
  Scenario scenario_;
};

using ProductMeasure = std::variant<OperatorBackedMeasure, TabulatedMeasure>;

struct ConstraintReport {
  bool satisfied = true;
  double max_violation = 0.0;
  double tolerance = 0.0;
  std::string witness;
};

struct PoptCertificate {
  bool is_popt = false;
  double min_value = 0.0;
  ComplexVector psi;
  ComplexVector phi;
  std::size_t restarts_used = 0;
  /// Largest increase of the objective seen between consecutive half-sweeps
  /// (zero up to rounding; the descent is monotone).
  double max_sweep_increase = 0.0;
};

/// tr[rho (q1 (x) q2)] without forming the Kronecker product.
Complex product_expectation(const ComplexMatrix& rho, Dims dims, const ComplexMatrix& q1,
                            const ComplexMatrix& q2);

/// Tabulated measures answer only for elements of their own PVMs (and the
/// identity, read as the marginal of right/left setting 0); anything else
/// throws UnsupportedQuery.
double eval(const ProductMeasure& mu, const Projection& q1, const Projection& q2);
double marginal_left(const ProductMeasure& mu, const Projection& q1);
double marginal_right(const ProductMeasure& mu, const Projection& q2);

/// Tabulate an operator on the given settings. No range validation, so
/// non-POPT operators are allowed.
Scenario tabulate(const ComplexMatrix& rho, Dims dims, std::vector<PVM> left,
                  std::vector<PVM> right, std::vector<CoarseGraining> coarse = {});

ConstraintReport check_no_signalling(const ProductMeasure& mu, const ContextSamplePlan& plan,
                                     double tol);
ConstraintReport check_no_signalling(const Scenario& s, double tol);

/// Tabulated: marginalisation along every declared coarse-graining plus the
/// trivial-context (no-signalling) restrictions. Operator-backed: builds
/// scenarios of overlapping contexts from the plan and checks those.
/// Throws PartitionError on an inconsistent declared structure.
ConstraintReport check_no_disturbance(const ProductMeasure& mu, const ContextSamplePlan& plan,
                                      double tol);
ConstraintReport check_no_disturbance(const Scenario& s, double tol);

/// d^2 rank-1 projectors onto |j>, (|j> + |k>)/sqrt2, (|j> + i|k>)/sqrt2
/// (j < k). Their real span is L(H)_sa.
std::vector<Projection> tomography_family(std::size_t d);

/// Query family used by the reconstruction: the tomography family, the
/// complementary vectors (|j> - |k>)/sqrt2, (|j> - i|k>)/sqrt2 and the
/// identity. The redundancy is what exposes inconsistent oracles.
std::vector<Projection> reconstruction_family(std::size_t d);

/// 1 + d(d-1) maximal PVMs whose elements contain the reconstruction family.
std::vector<PVM> tomography_settings(std::size_t d);

/// Hilbert-Schmidt Gram matrix tr(P_a P_b).
Eigen::MatrixXd hilbert_schmidt_gram(const std::vector<Projection>& family);

using ProductOracle = std::function<double(const Projection&, const Projection&)>;

ProductOracle oracle_of(const ProductMeasure& mu);

struct GleasonOptions {
  /// Allow d = 2 (operator-backed roundtrips only; the correspondence needs
  /// POVMs there).
  bool allow_dim2 = false;
  double residual_threshold = 1e-8;
  double condition_limit = 1e10;
};

struct GleasonResult {
  HermitianOperator rho;
  double residual = 0.0;
  double condition_number = 0.0;
  std::vector<std::string> warnings;
};

/// Unique Hermitian rho with tr[rho (q1 (x) q2)] = oracle(q1, q2) on the
/// product of the reconstruction families, solved as one least-squares
/// problem in a Hermitian product basis.
/// Errors: DimensionError (d < 3 without allow_dim2), ReconstructionError
/// (condition number above the limit), InconsistentOracle (residual above
/// threshold or tr(rho) != 1).
GleasonResult gleason_extend(const ProductOracle& oracle, Dims dims,
                             const GleasonOptions& options = {});

struct PoptOptions {
  std::size_t restarts = 64;
  double tol = 1e-8;
  std::uint64_t seed = 0;
  std::size_t max_sweeps = 2000;
};

/// Minimizes <psi (x) phi| rho |psi (x) phi> over unit product vectors by
/// multistart alternating eigen-iteration. A negative minimum is a proof of
/// non-POPT; is_popt = true holds only up to sampling.
PoptCertificate check_popt(const HermitianOperator& rho, Dims dims,
                           const PoptOptions& options = {});

// JSON
Json constraint_report_to_json(const ConstraintReport& r);
Json popt_certificate_to_json(const PoptCertificate& c);
Json scenario_to_json(const Scenario& s);
/// Parses the tabulated scenario format; structure errors throw
/// InvalidInput / PartitionError.
Scenario scenario_from_json(const Json& j);

/// State files: {"d1": d1, "d2": d2, "rho": <matrix JSON>}.
struct StateFile {
  Dims dims;
  ComplexMatrix rho;
};
Json state_to_json(const ComplexMatrix& rho, Dims dims);
StateFile state_from_json(const Json& j);

}  // namespace poptlab
