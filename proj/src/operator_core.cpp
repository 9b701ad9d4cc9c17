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

#include "poptlab/operator_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "poptlab/errors.hpp"

namespace poptlab {

namespace {

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    std::ostringstream os;
    os << what << ": expected a nonempty square matrix, got " << m.rows() << "x"
       << m.cols();
    throw DimensionError(os.str());
  }
}

void require_bipartite(const ComplexMatrix& m, Dims dims, const char* what) {
  require_square(m, what);
  if (dims.d1 == 0 || dims.d2 == 0 ||
      static_cast<std::size_t>(m.rows()) != dims.total()) {
    std::ostringstream os;
    os << what << ": matrix of dimension " << m.rows() << " does not match "
       << dims.d1 << "x" << dims.d2;
    throw DimensionError(os.str());
  }
}

void require_same_dim(const HermitianOperator& a, const HermitianOperator& b,
                      const char* what) {
  if (a.dim() != b.dim()) {
    std::ostringstream os;
    os << what << ": dimension mismatch " << a.dim() << " vs " << b.dim();
    throw DimensionError(os.str());
  }
}

}  // namespace

double max_norm(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void require_finite(const ComplexMatrix& m, const char* what) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Complex z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw InvalidInput(std::string(what) + ": non-finite entry");
    }
  }
}

ComplexMatrix identity(std::size_t dim) {
  return ComplexMatrix::Identity(static_cast<Eigen::Index>(dim),
                                 static_cast<Eigen::Index>(dim));
}

HermitianOperator::HermitianOperator(const ComplexMatrix& m, double herm_tol) {
  require_square(m, "HermitianOperator");
  require_finite(m, "HermitianOperator");
  const double defect = max_norm(m - m.adjoint());
  if (defect > herm_tol) {
    std::ostringstream os;
    os << "HermitianOperator: ||A - A^dag||_max = " << defect << " exceeds " << herm_tol;
    throw InvalidInput(os.str());
  }
  matrix_ = 0.5 * (m + m.adjoint());
}

HermitianOperator HermitianOperator::identity(std::size_t dim) {
  return symmetrized(poptlab::identity(dim));
}

HermitianOperator HermitianOperator::zero(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return symmetrized(ComplexMatrix::Zero(n, n));
}

HermitianOperator HermitianOperator::symmetrized(const ComplexMatrix& m) {
  require_square(m, "HermitianOperator");
  HermitianOperator h;
  h.matrix_ = 0.5 * (m + m.adjoint());
  return h;
}

Projection::Projection(const HermitianOperator& op, double tol) : op_(op) {
  const ComplexMatrix& p = op_.matrix();
  const double idempotency = max_norm(p * p - p);
  if (idempotency > tol) {
    std::ostringstream os;
    os << "Projection: ||P^2 - P||_max = " << idempotency << " exceeds " << tol;
    throw InvalidInput(os.str());
  }
  const Spectrum s = eig_hermitian(op_);
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
    const double lambda = s.eigenvalues(i);
    if (std::min(std::abs(lambda), std::abs(lambda - 1.0)) > tol) {
      throw InvalidInput("Projection: eigenvalue outside {0, 1}");
    }
  }
  const double tr = op_.trace();
  rank_ = static_cast<std::size_t>(std::lround(tr));
  if (std::abs(tr - static_cast<double>(rank_)) > std::max(tol, 1e-9)) {
    throw InvalidInput("Projection: trace is not an integer rank");
  }
}

Projection Projection::onto_columns(const ComplexMatrix& columns) {
  return Projection(HermitianOperator::symmetrized(columns * columns.adjoint()));
}

Projection Projection::onto_vector(const ComplexVector& v) {
  const double n = v.norm();
  if (n == 0.0) throw InvalidInput("Projection::onto_vector: zero vector");
  const ComplexVector u = v / n;
  return onto_columns(u);
}

Projection Projection::identity(std::size_t dim) {
  Projection p;
  p.op_ = HermitianOperator::identity(dim);
  p.rank_ = dim;
  return p;
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, Dims dims, Subsystem keep) {
  require_bipartite(m, dims, "partial_trace");
  const auto d1 = static_cast<Eigen::Index>(dims.d1);
  const auto d2 = static_cast<Eigen::Index>(dims.d2);
  if (keep == Subsystem::first) {
    ComplexMatrix out = ComplexMatrix::Zero(d1, d1);
    for (Eigen::Index i = 0; i < d1; ++i)
      for (Eigen::Index j = 0; j < d1; ++j)
        out(i, j) = m.block(i * d2, j * d2, d2, d2).trace();
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(d2, d2);
  for (Eigen::Index i = 0; i < d1; ++i) out += m.block(i * d2, i * d2, d2, d2);
  return out;
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, Dims dims, Subsystem side) {
  require_bipartite(m, dims, "partial_transpose");
  const auto d1 = static_cast<Eigen::Index>(dims.d1);
  const auto d2 = static_cast<Eigen::Index>(dims.d2);
  ComplexMatrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < d1; ++i) {
    for (Eigen::Index j = 0; j < d1; ++j) {
      if (side == Subsystem::first) {
        out.block(i * d2, j * d2, d2, d2) = m.block(j * d2, i * d2, d2, d2);
      } else {
        out.block(i * d2, j * d2, d2, d2) = m.block(i * d2, j * d2, d2, d2).transpose();
      }
    }
  }
  return out;
}

Spectrum eig_hermitian(const HermitianOperator& a, double eig_tol) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eig_hermitian: eigensolver did not converge");
  }
  // Eigen returns ascending order.
  const Eigen::Index n = a.matrix().rows();
  Spectrum s;
  s.eigenvalues = solver.eigenvalues().reverse();
  s.eigenvectors = solver.eigenvectors().rowwise().reverse();
  const ComplexMatrix recon = s.eigenvectors *
                              s.eigenvalues.cast<Complex>().asDiagonal() *
                              s.eigenvectors.adjoint();
  const double scale = std::max(1.0, max_norm(a.matrix()));
  if (max_norm(recon - a.matrix()) > eig_tol * scale ||
      max_norm(s.eigenvectors.adjoint() * s.eigenvectors - identity(n)) > eig_tol) {
    throw NumericalError("eig_hermitian: reconstruction check failed");
  }
  return s;
}

PsdResult is_psd(const HermitianOperator& a, double tol) {
  const Spectrum s = eig_hermitian(a);
  const Eigen::Index last = s.eigenvalues.size() - 1;
  PsdResult r;
  r.min_eigenvalue = s.eigenvalues(last);
  r.witness = s.eigenvectors.col(last);
  r.psd = r.min_eigenvalue >= -tol;
  return r;
}

HermitianOperator anticommutator(const HermitianOperator& a, const HermitianOperator& b) {
  require_same_dim(a, b, "anticommutator");
  return HermitianOperator::symmetrized(a.matrix() * b.matrix() + b.matrix() * a.matrix());
}

ComplexMatrix commutator(const HermitianOperator& a, const HermitianOperator& b) {
  require_same_dim(a, b, "commutator");
  return a.matrix() * b.matrix() - b.matrix() * a.matrix();
}

ComplexMatrix jordan_product(const HermitianOperator& a, const HermitianOperator& b,
                             JordanSign sign) {
  require_same_dim(a, b, "jordan_product");
  const ComplexMatrix sym = 0.5 * anticommutator(a, b).matrix();
  const ComplexMatrix anti = 0.5 * commutator(a, b);
  return sign == JordanSign::plus ? ComplexMatrix(sym + anti) : ComplexMatrix(sym - anti);
}

ComplexMatrix unitary_exp(double t, const HermitianOperator& a) {
  const Spectrum s = eig_hermitian(a);
  ComplexVector phases(s.eigenvalues.size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) {
    phases(i) = std::polar(1.0, t * s.eigenvalues(i));
  }
  return s.eigenvectors * phases.asDiagonal() * s.eigenvectors.adjoint();
}

HermitianOperator conjugation_flow(double t, const HermitianOperator& a,
                                   const HermitianOperator& b) {
  require_same_dim(a, b, "conjugation_flow");
  const ComplexMatrix u = unitary_exp(t, a);
  return HermitianOperator::symmetrized(u * b.matrix() * u.adjoint());
}

HermitianOperator psd_sqrt(const HermitianOperator& a, double tol) {
  const Spectrum s = eig_hermitian(a);
  RealVector roots(s.eigenvalues.size());
  for (Eigen::Index i = 0; i < roots.size(); ++i) {
    const double lambda = s.eigenvalues(i);
    if (lambda < -tol) throw NumericalError("psd_sqrt: operator is not PSD");
    roots(i) = std::sqrt(std::max(lambda, 0.0));
  }
  return HermitianOperator::symmetrized(s.eigenvectors * roots.cast<Complex>().asDiagonal() *
                                        s.eigenvectors.adjoint());
}

namespace pauli {

HermitianOperator x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return HermitianOperator(m);
}

HermitianOperator y() {
  ComplexMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return HermitianOperator(m);
}

HermitianOperator z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return HermitianOperator(m);
}

}  // namespace pauli

ComplexMatrix swap_operator(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  ComplexMatrix s = ComplexMatrix::Zero(n * n, n * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) s(i * n + j, j * n + i) = 1.0;
  return s;
}

ComplexVector maximally_entangled_vector(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  ComplexVector v = ComplexVector::Zero(n * n);
  for (Eigen::Index i = 0; i < n; ++i) v(i * n + i) = 1.0;
  return v;
}

}  // namespace poptlab
