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

// Dense complex operator kernel. Everything in the library is built on the
// types and functions declared here.

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace poptlab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermTol = 1e-10;
inline constexpr double kEigTol = 1e-9;
inline constexpr double kFlowTol = 1e-9;

/// Local dimensions of a bipartite system H1 (x) H2.
struct Dims {
  std::size_t d1 = 0;
  std::size_t d2 = 0;

  std::size_t total() const { return d1 * d2; }
  friend bool operator==(const Dims&, const Dims&) = default;
};

enum class Subsystem { first, second };

enum class JordanSign { plus, minus };

/// Largest absolute entry.
double max_norm(const ComplexMatrix& m);

/// Throws InvalidInput on NaN/Inf entries.
void require_finite(const ComplexMatrix& m, const char* what = "matrix");

ComplexMatrix identity(std::size_t dim);

/// Self-adjoint operator. The stored matrix is the symmetrized (A + A^dag)/2.
class HermitianOperator {
 public:
  HermitianOperator() = default;

  /// Throws DimensionError for non-square input and InvalidInput when
  /// ||A - A^dag||_max exceeds herm_tol or entries are not finite.
  explicit HermitianOperator(const ComplexMatrix& m, double herm_tol = kHermTol);

  static HermitianOperator identity(std::size_t dim);
  static HermitianOperator zero(std::size_t dim);
  /// Symmetrizes without the tolerance check. For results that are
  /// Hermitian by construction up to rounding.
  static HermitianOperator symmetrized(const ComplexMatrix& m);

  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  const ComplexMatrix& matrix() const { return matrix_; }
  double trace() const { return matrix_.trace().real(); }

 private:
  ComplexMatrix matrix_;
};

/// Orthogonal projection, P^2 = P with spectrum in {0, 1}.
class Projection {
 public:
  Projection() = default;
  explicit Projection(const HermitianOperator& op, double tol = kHermTol);

  /// Projection onto the span of orthonormal columns.
  static Projection onto_columns(const ComplexMatrix& orthonormal_columns);
  static Projection onto_vector(const ComplexVector& v);
  static Projection identity(std::size_t dim);

  const HermitianOperator& op() const { return op_; }
  const ComplexMatrix& matrix() const { return op_.matrix(); }
  std::size_t dim() const { return op_.dim(); }
  std::size_t rank() const { return rank_; }

 private:
  HermitianOperator op_;
  std::size_t rank_ = 0;
};

/// Full spectral decomposition: eigenvalues descending, eigenvectors as
/// orthonormal columns in matching order. Within a degenerate cluster the
/// eigenvector order is arbitrary.
struct Spectrum {
  RealVector eigenvalues;
  ComplexMatrix eigenvectors;
};

struct PsdResult {
  bool psd = false;
  double min_eigenvalue = 0.0;
  ComplexVector witness;
};

/// Kronecker product, (i1 i2, j1 j2) -> a[i1, j1] * b[i2, j2].
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix partial_trace(const ComplexMatrix& m, Dims dims, Subsystem keep);

/// Transpose on one tensor factor in the computational basis.
ComplexMatrix partial_transpose(const ComplexMatrix& m, Dims dims, Subsystem side);

/// Throws NumericalError on non-convergence or when the reconstruction error
/// exceeds eig_tol (relative to max(1, ||a||_max)).
Spectrum eig_hermitian(const HermitianOperator& a, double eig_tol = kEigTol);

PsdResult is_psd(const HermitianOperator& a, double tol);

HermitianOperator anticommutator(const HermitianOperator& a, const HermitianOperator& b);
ComplexMatrix commutator(const HermitianOperator& a, const HermitianOperator& b);

/// a ._+ b = {a,b}/2 + [a,b]/2 (= ab), a ._- b = {a,b}/2 - [a,b]/2 (= ba).
ComplexMatrix jordan_product(const HermitianOperator& a, const HermitianOperator& b,
                             JordanSign sign);

/// exp(i t a) via the spectral decomposition of a.
ComplexMatrix unitary_exp(double t, const HermitianOperator& a);

/// e^{ita} b e^{-ita}.
HermitianOperator conjugation_flow(double t, const HermitianOperator& a,
                                   const HermitianOperator& b);

/// Square root of a PSD operator; eigenvalues in [-tol, 0) are clamped.
HermitianOperator psd_sqrt(const HermitianOperator& a, double tol = kEigTol);

namespace pauli {
HermitianOperator x();
HermitianOperator y();
HermitianOperator z();
}  // namespace pauli

/// Swap operator on C^d (x) C^d.
ComplexMatrix swap_operator(std::size_t d);

/// Unnormalized sum_i |ii>.
ComplexVector maximally_entangled_vector(std::size_t d);

}  // namespace poptlab
