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

// CHSH correlations: evaluation on operators and tables, and a multistart
// optimizer over dichotomic observables.

#include <cstdint>

#include "poptlab/json_io.hpp"
#include "poptlab/measures.hpp"
#include "poptlab/operator_core.hpp"

namespace poptlab {

inline constexpr double kSettingTol = 1e-9;

/// Hermitian observable with A^2 = 1 (spectrum in {+1, -1}).
class DichotomicSetting {
 public:
  /// Throws InvalidSetting unless ||A^2 - 1||_max <= tol.
  explicit DichotomicSetting(const HermitianOperator& observable, double tol = kSettingTol);

  /// sin(theta) cos(phi) X + sin(theta) sin(phi) Y + cos(theta) Z.
  static DichotomicSetting bloch(double theta, double phi);

  const HermitianOperator& observable() const { return observable_; }
  const ComplexMatrix& matrix() const { return observable_.matrix(); }
  std::size_t dim() const { return observable_.dim(); }

 private:
  HermitianOperator observable_;
};

struct ChshSettings {
  DichotomicSetting a0;
  DichotomicSetting a1;
  DichotomicSetting b0;
  DichotomicSetting b1;
};

struct ChshInstance {
  HermitianOperator rho;
  Dims dims;
  ChshSettings settings;
};

/// S = <A0 B0> + <A0 B1> + <A1 B0> - <A1 B1> with <A B> = tr[rho (A (x) B)].
/// Throws DimensionError on inconsistent dimensions.
double chsh_value(const ChshInstance& inst);

struct ChshOptions {
  std::size_t restarts = 64;
  std::uint64_t seed = 0;
  std::size_t max_iterations = 400;
};

struct ChshResult {
  double value = 0.0;
  ChshSettings settings;
  std::size_t restarts = 0;
  /// Smallest change of S over accepted line-search steps (non-negative:
  /// steps are accepted only when S increases).
  double min_step_gain = 0.0;
};

/// Multistart gradient ascent (central differences, step 1e-6, backtracking).
/// Qubit sides use Bloch angles; larger sides use U diag(+-1) U^dag with a
/// per-restart signature and the retraction U -> U exp(iH).
ChshResult optimize_chsh(const HermitianOperator& rho, Dims dims, const ChshOptions& options = {});

/// The Popescu-Rohrlich box p(ab|xy) = 1/2 iff a xor b = xy, as an abstract
/// two-setting, two-outcome table.
TabulatedMeasure pr_box_table();

/// CHSH functional of a two-setting, two-outcome table (outcome 0 -> +1).
/// Throws InvalidInput for other shapes.
double chsh_from_table(const TabulatedMeasure& table);

Json chsh_settings_to_json(const ChshSettings& s);
Json chsh_result_to_json(const ChshResult& r);

}  // namespace poptlab
