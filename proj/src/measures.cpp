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

#include "poptlab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include "poptlab/errors.hpp"
#include "poptlab/sampling.hpp"

namespace poptlab {

namespace {

constexpr double kLookupTol = 1e-9;

const char* side_name(Side s) { return s == Side::left ? "left" : "right"; }

bool is_identity(const Projection& q) {
  return max_norm(q.matrix() - identity(q.dim())) <= kLookupTol;
}

struct TableIndex {
  std::size_t setting = 0;
  std::size_t outcome = 0;
};

std::optional<TableIndex> find_element(const std::vector<PVM>& pvms, const Projection& q) {
  for (std::size_t x = 0; x < pvms.size(); ++x) {
    if (pvms[x].dim() != q.dim()) continue;
    for (std::size_t i = 0; i < pvms[x].size(); ++i) {
      if (max_norm(pvms[x][i].matrix() - q.matrix()) <= kLookupTol) return TableIndex{x, i};
    }
  }
  return std::nullopt;
}

void validate_declarations(const Scenario& s) {
  for (const CoarseGraining& c : s.coarse) {
    const std::size_t settings =
        c.side == Side::left ? s.left_settings() : s.right_settings();
    if (c.fine >= settings || c.coarse >= settings) {
      std::ostringstream os;
      os << "coarse-graining declaration refers to " << side_name(c.side) << " setting "
         << std::max(c.fine, c.coarse) << " of " << settings;
      throw PartitionError(os.str());
    }
    const std::size_t fine_outcomes =
        c.side == Side::left ? s.left_outcomes(c.fine) : s.right_outcomes(c.fine);
    const std::size_t coarse_outcomes =
        c.side == Side::left ? s.left_outcomes(c.coarse) : s.right_outcomes(c.coarse);
    validate_partition(c.merge, fine_outcomes);
    if (c.merge.size() != coarse_outcomes) {
      throw PartitionError("coarse-graining declaration: merge has " +
                           std::to_string(c.merge.size()) + " groups but the coarse setting has " +
                           std::to_string(coarse_outcomes) + " outcomes");
    }
    const auto& pvms = c.side == Side::left ? s.left_pvms : s.right_pvms;
    if (!pvms.empty()) {
      const PVM merged = coarse_grain(pvms[c.fine], c.merge);
      for (std::size_t k = 0; k < merged.size(); ++k) {
        if (max_norm(merged[k].matrix() - pvms[c.coarse][k].matrix()) > kLookupTol) {
          throw PartitionError("coarse-graining declaration disagrees with the declared PVMs");
        }
      }
    }
  }
}

void validate_shape(const Scenario& s) {
  if (s.table.empty() || s.table.front().empty()) throw InvalidInput("scenario: empty table");
  const std::size_t ny = s.table.front().size();
  for (std::size_t x = 0; x < s.table.size(); ++x) {
    if (s.table[x].size() != ny) throw InvalidInput("scenario: ragged table");
    for (std::size_t y = 0; y < ny; ++y) {
      const auto& block = s.table[x][y];
      if (block.rows() != s.table[x][0].rows() || block.cols() != s.table[0][y].cols() ||
          block.size() == 0) {
        throw InvalidInput("scenario: inconsistent outcome counts");
      }
    }
  }
  auto check_pvms = [](const std::vector<PVM>& pvms, std::size_t settings, std::size_t dim,
                       auto outcomes, const char* side) {
    if (pvms.empty()) return;
    if (pvms.size() != settings) {
      throw InvalidInput(std::string("scenario: ") + side + " PVM count does not match settings");
    }
    for (std::size_t x = 0; x < settings; ++x) {
      if (pvms[x].dim() != dim) throw DimensionError(std::string("scenario: ") + side + " PVM dimension");
      if (pvms[x].size() != outcomes(x)) {
        throw InvalidInput(std::string("scenario: ") + side + " PVM size does not match outcomes");
      }
    }
  };
  check_pvms(s.left_pvms, s.left_settings(), s.dims.d1,
             [&](std::size_t x) { return s.left_outcomes(x); }, "left");
  check_pvms(s.right_pvms, s.right_settings(), s.dims.d2,
             [&](std::size_t y) { return s.right_outcomes(y); }, "right");
}

ConstraintReport finish(double violation, double tol, std::string witness) {
  ConstraintReport r;
  r.max_violation = violation;
  r.tolerance = tol;
  r.satisfied = violation <= tol;
  r.witness = std::move(witness);
  return r;
}

void merge_report(ConstraintReport& into, const ConstraintReport& other) {
  if (other.max_violation > into.max_violation) {
    into.max_violation = other.max_violation;
    into.witness = other.witness;
  }
  into.satisfied = into.max_violation <= into.tolerance;
}

/// Orthonormal basis of L(C^d)_sa in the Hilbert-Schmidt inner product.
std::vector<ComplexMatrix> hermitian_basis(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  const double r = 1.0 / std::numbers::sqrt2;
  std::vector<ComplexMatrix> out;
  for (Eigen::Index j = 0; j < n; ++j) {
    ComplexMatrix e = ComplexMatrix::Zero(n, n);
    e(j, j) = 1.0;
    out.push_back(e);
  }
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = j + 1; k < n; ++k) {
      ComplexMatrix sym = ComplexMatrix::Zero(n, n);
      sym(j, k) = r;
      sym(k, j) = r;
      out.push_back(sym);
      ComplexMatrix anti = ComplexMatrix::Zero(n, n);
      anti(j, k) = Complex(0.0, r);
      anti(k, j) = Complex(0.0, -r);
      out.push_back(anti);
    }
  return out;
}

ComplexVector basis_vector(std::size_t d, std::size_t j) {
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(d));
  v(static_cast<Eigen::Index>(j)) = 1.0;
  return v;
}

ComplexVector superposition(std::size_t d, std::size_t j, std::size_t k, Complex phase) {
  return (basis_vector(d, j) + phase * basis_vector(d, k)) / std::numbers::sqrt2;
}

/// Bottom eigenpair of a small Hermitian matrix.
std::pair<double, ComplexVector> bottom_eigenpair(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (m + m.adjoint()));
  if (solver.info() != Eigen::Success) throw NumericalError("check_popt: eigensolver failed");
  return {solver.eigenvalues()(0), solver.eigenvectors().col(0)};
}

double product_value(const ComplexMatrix& rho, const ComplexVector& psi, const ComplexVector& phi) {
  Eigen::VectorXcd v(psi.size() * phi.size());
  for (Eigen::Index i = 0; i < psi.size(); ++i) v.segment(i * phi.size(), phi.size()) = psi(i) * phi;
  return v.dot(rho * v).real();
}

}  // namespace

std::size_t Scenario::left_outcomes(std::size_t x) const {
  return static_cast<std::size_t>(table.at(x).at(0).rows());
}

std::size_t Scenario::right_outcomes(std::size_t y) const {
  return static_cast<std::size_t>(table.at(0).at(y).cols());
}

OperatorBackedMeasure::OperatorBackedMeasure(HermitianOperator rho, Dims dims)
    : rho_(std::move(rho)), dims_(dims) {
  if (dims_.d1 == 0 || dims_.d2 == 0 || rho_.dim() != dims_.total()) {
    throw DimensionError("OperatorBackedMeasure: operator dimension does not match dims");
  }
  if (std::abs(rho_.trace() - 1.0) > 1e-9) {
    throw InvalidInput("OperatorBackedMeasure: tr(rho) must be 1");
  }
}

TabulatedMeasure::TabulatedMeasure(Scenario scenario, double tab_tol)
    : scenario_(std::move(scenario)) {
  validate_shape(scenario_);
  for (std::size_t x = 0; x < scenario_.left_settings(); ++x)
    for (std::size_t y = 0; y < scenario_.right_settings(); ++y) {
      const Eigen::MatrixXd& block = scenario_.table[x][y];
      if (!block.allFinite()) throw InvalidInput("tabulated measure: non-finite entry");
      if (block.minCoeff() < -tab_tol || block.maxCoeff() > 1.0 + tab_tol) {
        throw InvalidInput("tabulated measure: entry outside [0, 1]");
      }
      if (std::abs(block.sum() - 1.0) > 1e-9) {
        std::ostringstream os;
        os << "tabulated measure: setting pair (" << x << ", " << y << ") sums to "
           << block.sum();
        throw InvalidInput(os.str());
      }
    }
  validate_declarations(scenario_);
}

Complex product_expectation(const ComplexMatrix& rho, Dims dims, const ComplexMatrix& q1,
                            const ComplexMatrix& q2) {
  const auto d1 = static_cast<Eigen::Index>(dims.d1);
  const auto d2 = static_cast<Eigen::Index>(dims.d2);
  if (rho.rows() != d1 * d2 || q1.rows() != d1 || q2.rows() != d2) {
    throw DimensionError("product_expectation: dimension mismatch");
  }
  Complex sum = 0.0;
  for (Eigen::Index i = 0; i < d1; ++i)
    for (Eigen::Index k = 0; k < d1; ++k) {
      const Complex a = q1(k, i);
      if (a == 0.0) continue;
      const auto block = rho.block(i * d2, k * d2, d2, d2);
      // sum_{s,t} block(s, t) q2(t, s)
      sum += a * block.cwiseProduct(q2.transpose()).sum();
    }
  return sum;
}

double eval(const ProductMeasure& mu, const Projection& q1, const Projection& q2) {
  if (const auto* op = std::get_if<OperatorBackedMeasure>(&mu)) {
    const Dims dims = op->dims();
    if (q1.dim() != dims.d1 || q2.dim() != dims.d2) throw DimensionError("eval: dimension mismatch");
    const Complex v = product_expectation(op->rho().matrix(), dims, q1.matrix(), q2.matrix());
    if (std::abs(v.imag()) > 1e-10) throw NumericalError("eval: expectation has an imaginary part");
    return v.real();
  }
  const auto& tab = std::get<TabulatedMeasure>(mu);
  const Scenario& s = tab.scenario();
  if (q1.dim() != s.dims.d1 || q2.dim() != s.dims.d2) throw DimensionError("eval: dimension mismatch");
  const bool id1 = is_identity(q1);
  const bool id2 = is_identity(q2);
  const auto left = id1 ? std::nullopt : find_element(s.left_pvms, q1);
  const auto right = id2 ? std::nullopt : find_element(s.right_pvms, q2);
  if ((!id1 && !left) || (!id2 && !right)) {
    throw UnsupportedQuery("eval: projection is not an element of the tabulated settings");
  }
  if (id1 && id2) return s.table[0][0].sum();
  if (id2) return s.table[left->setting][0].row(static_cast<Eigen::Index>(left->outcome)).sum();
  if (id1) return s.table[0][right->setting].col(static_cast<Eigen::Index>(right->outcome)).sum();
  return tab.p(left->setting, right->setting, left->outcome, right->outcome);
}

double marginal_left(const ProductMeasure& mu, const Projection& q1) {
  const Dims dims = std::visit([](const auto& m) { return m.dims(); }, mu);
  return eval(mu, q1, Projection::identity(dims.d2));
}

double marginal_right(const ProductMeasure& mu, const Projection& q2) {
  const Dims dims = std::visit([](const auto& m) { return m.dims(); }, mu);
  return eval(mu, Projection::identity(dims.d1), q2);
}

Scenario tabulate(const ComplexMatrix& rho, Dims dims, std::vector<PVM> left,
                  std::vector<PVM> right, std::vector<CoarseGraining> coarse) {
  Scenario s;
  s.dims = dims;
  s.table.resize(left.size());
  for (std::size_t x = 0; x < left.size(); ++x) {
    for (std::size_t y = 0; y < right.size(); ++y) {
      Eigen::MatrixXd block(static_cast<Eigen::Index>(left[x].size()),
                            static_cast<Eigen::Index>(right[y].size()));
      for (std::size_t i = 0; i < left[x].size(); ++i)
        for (std::size_t j = 0; j < right[y].size(); ++j)
          block(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
              product_expectation(rho, dims, left[x][i].matrix(), right[y][j].matrix()).real();
      s.table[x].push_back(std::move(block));
    }
  }
  s.left_pvms = std::move(left);
  s.right_pvms = std::move(right);
  s.coarse = std::move(coarse);
  return s;
}

ConstraintReport check_no_signalling(const Scenario& s, double tol) {
  validate_shape(s);
  double worst = 0.0;
  std::string witness = "none";
  for (std::size_t x = 0; x < s.left_settings(); ++x)
    for (std::size_t i = 0; i < s.left_outcomes(x); ++i) {
      const auto row = static_cast<Eigen::Index>(i);
      const double ref = s.table[x][0].row(row).sum();
      for (std::size_t y = 1; y < s.right_settings(); ++y) {
        const double v = std::abs(s.table[x][y].row(row).sum() - ref);
        if (v > worst) {
          worst = v;
          std::ostringstream os;
          os << "left marginal of setting " << x << " outcome " << i
             << " differs between right settings 0 and " << y;
          witness = os.str();
        }
      }
    }
  for (std::size_t y = 0; y < s.right_settings(); ++y)
    for (std::size_t j = 0; j < s.right_outcomes(y); ++j) {
      const auto col = static_cast<Eigen::Index>(j);
      const double ref = s.table[0][y].col(col).sum();
      for (std::size_t x = 1; x < s.left_settings(); ++x) {
        const double v = std::abs(s.table[x][y].col(col).sum() - ref);
        if (v > worst) {
          worst = v;
          std::ostringstream os;
          os << "right marginal of setting " << y << " outcome " << j
             << " differs between left settings 0 and " << x;
          witness = os.str();
        }
      }
    }
  return finish(worst, tol, witness);
}

ConstraintReport check_no_signalling(const ProductMeasure& mu, const ContextSamplePlan& plan,
                                     double tol) {
  if (const auto* tab = std::get_if<TabulatedMeasure>(&mu)) {
    return check_no_signalling(tab->scenario(), tol);
  }
  const auto& op = std::get<OperatorBackedMeasure>(mu);
  const Dims dims = op.dims();
  const ComplexMatrix& rho = op.rho().matrix();
  const auto left = sample_contexts(dims.d1, plan);
  ContextSamplePlan right_plan = plan;
  right_plan.seed = plan.seed + 1;
  const auto right = sample_contexts(dims.d2, right_plan);
  const ComplexMatrix id1 = identity(dims.d1);
  const ComplexMatrix id2 = identity(dims.d2);

  double worst = 0.0;
  std::string witness = "none";
  const std::size_t pairs = std::min(left.size(), right.size());
  for (std::size_t k = 0; k < pairs; ++k) {
    const PVM p = pvm_of_context(left[k]);
    const PVM q = pvm_of_context(right[k]);
    Eigen::MatrixXd values(static_cast<Eigen::Index>(p.size()), static_cast<Eigen::Index>(q.size()));
    for (std::size_t i = 0; i < p.size(); ++i)
      for (std::size_t j = 0; j < q.size(); ++j)
        values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            product_expectation(rho, dims, p[i].matrix(), q[j].matrix()).real();
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double marginal = product_expectation(rho, dims, p[i].matrix(), id2).real();
      const double v = std::abs(values.row(static_cast<Eigen::Index>(i)).sum() - marginal);
      if (v > worst) {
        worst = v;
        witness = "context pair " + std::to_string(k) + ": left outcome " + std::to_string(i);
      }
    }
    for (std::size_t j = 0; j < q.size(); ++j) {
      const double marginal = product_expectation(rho, dims, id1, q[j].matrix()).real();
      const double v = std::abs(values.col(static_cast<Eigen::Index>(j)).sum() - marginal);
      if (v > worst) {
        worst = v;
        witness = "context pair " + std::to_string(k) + ": right outcome " + std::to_string(j);
      }
    }
  }
  return finish(worst, tol, witness);
}

ConstraintReport check_no_disturbance(const Scenario& s, double tol) {
  validate_shape(s);
  validate_declarations(s);
  double worst = 0.0;
  std::string witness = "none";
  for (const CoarseGraining& c : s.coarse) {
    const bool left = c.side == Side::left;
    const std::size_t others = left ? s.right_settings() : s.left_settings();
    for (std::size_t o = 0; o < others; ++o) {
      const Eigen::MatrixXd& fine = left ? s.table[c.fine][o] : s.table[o][c.fine];
      const Eigen::MatrixXd& coarse = left ? s.table[c.coarse][o] : s.table[o][c.coarse];
      for (std::size_t k = 0; k < c.merge.size(); ++k) {
        const auto kk = static_cast<Eigen::Index>(k);
        const std::size_t other_outcomes = static_cast<std::size_t>(left ? fine.cols() : fine.rows());
        for (std::size_t m = 0; m < other_outcomes; ++m) {
          const auto mm = static_cast<Eigen::Index>(m);
          double restricted = 0.0;
          for (std::size_t idx : c.merge[k]) {
            const auto ii = static_cast<Eigen::Index>(idx);
            restricted += left ? fine(ii, mm) : fine(mm, ii);
          }
          const double direct = left ? coarse(kk, mm) : coarse(mm, kk);
          const double v = std::abs(restricted - direct);
          if (v > worst) {
            worst = v;
            std::ostringstream os;
            os << side_name(c.side) << " setting " << c.fine << " restricted to setting "
               << c.coarse << " (outcome " << k << "), against " << (left ? "right" : "left")
               << " setting " << o << " outcome " << m;
            witness = os.str();
          }
        }
      }
    }
  }
  ConstraintReport r = finish(worst, tol, witness);
  merge_report(r, check_no_signalling(s, tol));
  return r;
}

ConstraintReport check_no_disturbance(const ProductMeasure& mu, const ContextSamplePlan& plan,
                                      double tol) {
  if (const auto* tab = std::get_if<TabulatedMeasure>(&mu)) {
    return check_no_disturbance(tab->scenario(), tol);
  }
  const auto& op = std::get<OperatorBackedMeasure>(mu);
  const Dims dims = op.dims();
  Rng rng(plan.seed);
  ConstraintReport total = finish(0.0, tol, "none");
  auto declarations = [](Side side, std::size_t d) {
    Partition merge{{0}, {}};
    for (std::size_t i = 1; i < d; ++i) merge[1].push_back(i);
    return std::vector<CoarseGraining>{{side, 0, 2, merge}, {side, 1, 2, merge}};
  };
  for (std::size_t k = 0; k < plan.random_contexts; ++k) {
    const OverlappingContexts l = overlapping_contexts(dims.d1, rng);
    const OverlappingContexts r = overlapping_contexts(dims.d2, rng);
    auto coarse = declarations(Side::left, dims.d1);
    auto right_coarse = declarations(Side::right, dims.d2);
    coarse.insert(coarse.end(), right_coarse.begin(), right_coarse.end());
    const Scenario s = tabulate(
        op.rho().matrix(), dims,
        {pvm_of_context(l.first), pvm_of_context(l.second), pvm_of_context(l.shared)},
        {pvm_of_context(r.first), pvm_of_context(r.second), pvm_of_context(r.shared)},
        std::move(coarse));
    ConstraintReport one = check_no_disturbance(s, tol);
    if (one.max_violation > total.max_violation) {
      one.witness = "scenario " + std::to_string(k) + ": " + one.witness;
    }
    merge_report(total, one);
  }
  return total;
}

std::vector<Projection> tomography_family(std::size_t d) {
  if (d < 2) throw DimensionError("tomography_family: need d >= 2");
  std::vector<Projection> out;
  for (std::size_t j = 0; j < d; ++j) out.push_back(Projection::onto_vector(basis_vector(d, j)));
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = j + 1; k < d; ++k) {
      out.push_back(Projection::onto_vector(superposition(d, j, k, 1.0)));
      out.push_back(Projection::onto_vector(superposition(d, j, k, Complex(0.0, 1.0))));
    }
  return out;
}

std::vector<Projection> reconstruction_family(std::size_t d) {
  std::vector<Projection> out = tomography_family(d);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = j + 1; k < d; ++k) {
      out.push_back(Projection::onto_vector(superposition(d, j, k, -1.0)));
      out.push_back(Projection::onto_vector(superposition(d, j, k, Complex(0.0, -1.0))));
    }
  out.push_back(Projection::identity(d));
  return out;
}

std::vector<PVM> tomography_settings(std::size_t d) {
  if (d < 2) throw DimensionError("tomography_settings: need d >= 2");
  std::vector<PVM> out;
  std::vector<Projection> computational;
  for (std::size_t j = 0; j < d; ++j) computational.push_back(Projection::onto_vector(basis_vector(d, j)));
  out.emplace_back(computational);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = j + 1; k < d; ++k)
      for (Complex phase : {Complex(1.0), Complex(0.0, 1.0)}) {
        std::vector<Projection> elements{Projection::onto_vector(superposition(d, j, k, phase)),
                                         Projection::onto_vector(superposition(d, j, k, -phase))};
        for (std::size_t l = 0; l < d; ++l)
          if (l != j && l != k) elements.push_back(Projection::onto_vector(basis_vector(d, l)));
        out.emplace_back(std::move(elements));
      }
  return out;
}

Eigen::MatrixXd hilbert_schmidt_gram(const std::vector<Projection>& family) {
  const auto n = static_cast<Eigen::Index>(family.size());
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b)
      g(a, b) = (family[static_cast<std::size_t>(a)].matrix() *
                 family[static_cast<std::size_t>(b)].matrix())
                    .trace()
                    .real();
  return g;
}

ProductOracle oracle_of(const ProductMeasure& mu) {
  return [mu](const Projection& q1, const Projection& q2) { return eval(mu, q1, q2); };
}

GleasonResult gleason_extend(const ProductOracle& oracle, Dims dims, const GleasonOptions& options) {
  GleasonResult result;
  for (std::size_t d : {dims.d1, dims.d2}) {
    if (d < 2 || (d == 2 && !options.allow_dim2)) {
      throw DimensionError("gleason_extend: local dimensions must be >= 3");
    }
  }
  if (dims.d1 == 2 || dims.d2 == 2) {
    result.warnings.push_back(
        "dimension 2: the measure/operator correspondence requires POVMs here; "
        "the reconstruction is only meaningful for operator-backed oracles");
  }
  const auto family1 = reconstruction_family(dims.d1);
  const auto family2 = reconstruction_family(dims.d2);
  const auto basis1 = hermitian_basis(dims.d1);
  const auto basis2 = hermitian_basis(dims.d2);

  auto coefficients = [](const std::vector<Projection>& family, const std::vector<ComplexMatrix>& basis) {
    Eigen::MatrixXd a(static_cast<Eigen::Index>(family.size()), static_cast<Eigen::Index>(basis.size()));
    for (std::size_t r = 0; r < family.size(); ++r)
      for (std::size_t c = 0; c < basis.size(); ++c)
        a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            (basis[c] * family[r].matrix()).trace().real();
    return a;
  };
  const Eigen::MatrixXd a = coefficients(family1, basis1);
  const Eigen::MatrixXd b = coefficients(family2, basis2);

  const Eigen::Index rows = a.rows() * b.rows();
  const Eigen::Index cols = a.cols() * b.cols();
  Eigen::MatrixXd system(rows, cols);
  Eigen::VectorXd values(rows);
  for (Eigen::Index p = 0; p < a.rows(); ++p)
    for (Eigen::Index q = 0; q < b.rows(); ++q) {
      const Eigen::Index row = p * b.rows() + q;
      for (Eigen::Index alpha = 0; alpha < a.cols(); ++alpha)
        system.row(row).segment(alpha * b.cols(), b.cols()) = a(p, alpha) * b.row(q);
      values(row) = oracle(family1[static_cast<std::size_t>(p)], family2[static_cast<std::size_t>(q)]);
    }
  if (!values.allFinite()) throw InconsistentOracle("gleason_extend: oracle returned non-finite values",
                                                    std::numeric_limits<double>::infinity());

  Eigen::BDCSVD<Eigen::MatrixXd> svd(system, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double smallest = sv(sv.size() - 1);
  result.condition_number = smallest > 0.0 ? sv(0) / smallest : std::numeric_limits<double>::infinity();
  if (!(result.condition_number <= options.condition_limit)) {
    throw ReconstructionError("gleason_extend: system is ill-conditioned");
  }
  const Eigen::VectorXd c = svd.solve(values);
  result.residual = (system * c - values).cwiseAbs().maxCoeff();
  if (result.residual > options.residual_threshold) {
    std::ostringstream os;
    os << "gleason_extend: residual " << result.residual
       << " exceeds threshold; the oracle is not a linear functional on products";
    throw InconsistentOracle(os.str(), result.residual);
  }

  const auto n = static_cast<Eigen::Index>(dims.total());
  ComplexMatrix rho = ComplexMatrix::Zero(n, n);
  for (std::size_t alpha = 0; alpha < basis1.size(); ++alpha)
    for (std::size_t beta = 0; beta < basis2.size(); ++beta) {
      const double coeff = c(static_cast<Eigen::Index>(alpha * basis2.size() + beta));
      if (coeff != 0.0) rho += coeff * tensor(basis1[alpha], basis2[beta]);
    }
  result.rho = HermitianOperator::symmetrized(rho);
  if (std::abs(result.rho.trace() - 1.0) > 1e-9) {
    throw InconsistentOracle("gleason_extend: oracle(1, 1) != 1, measure is not normalized",
                             std::abs(result.rho.trace() - 1.0));
  }
  return result;
}

PoptCertificate check_popt(const HermitianOperator& rho, Dims dims, const PoptOptions& options) {
  if (rho.dim() != dims.total() || dims.d1 == 0 || dims.d2 == 0) {
    throw DimensionError("check_popt: operator dimension does not match dims");
  }
  if (std::abs(rho.trace() - 1.0) > 1e-9) throw InvalidInput("check_popt: tr(rho) must be 1");
  const auto d1 = static_cast<Eigen::Index>(dims.d1);
  const auto d2 = static_cast<Eigen::Index>(dims.d2);
  const ComplexMatrix& m = rho.matrix();

  PoptCertificate cert;
  cert.min_value = std::numeric_limits<double>::infinity();
  const std::size_t restarts = std::max<std::size_t>(options.restarts, 1);
  for (std::size_t r = 0; r < restarts; ++r) {
    Rng rng(options.seed + r);
    ComplexVector phi = haar_vector(dims.d2, rng);
    ComplexVector psi;
    double previous = std::numeric_limits<double>::infinity();
    double value = previous;
    for (std::size_t sweep = 0; sweep < options.max_sweeps; ++sweep) {
      // Conditioned operator on H1: (1 (x) <phi|) rho (1 (x) |phi>).
      ComplexMatrix left(d1, d1);
      for (Eigen::Index i = 0; i < d1; ++i)
        for (Eigen::Index k = 0; k < d1; ++k)
          left(i, k) = phi.dot(m.block(i * d2, k * d2, d2, d2) * phi);
      auto [v1, new_psi] = bottom_eigenpair(left);
      psi = new_psi;
      ComplexMatrix right = ComplexMatrix::Zero(d2, d2);
      for (Eigen::Index i = 0; i < d1; ++i)
        for (Eigen::Index k = 0; k < d1; ++k)
          right += std::conj(psi(i)) * psi(k) * m.block(i * d2, k * d2, d2, d2);
      auto [v2, new_phi] = bottom_eigenpair(right);
      phi = new_phi;
      if (std::isfinite(previous)) cert.max_sweep_increase = std::max(cert.max_sweep_increase, v1 - previous);
      cert.max_sweep_increase = std::max(cert.max_sweep_increase, v2 - v1);
      value = v2;
      if (previous - value < 1e-15) break;
      previous = value;
    }
    const double recomputed = product_value(m, psi, phi);
    if (recomputed < cert.min_value) {
      cert.min_value = recomputed;
      cert.psi = psi;
      cert.phi = phi;
    }
  }
  cert.restarts_used = restarts;
  cert.is_popt = cert.min_value >= -options.tol;
  return cert;
}

Json constraint_report_to_json(const ConstraintReport& r) {
  return Json{{"satisfied", r.satisfied},
              {"max_violation", r.max_violation},
              {"tolerance", r.tolerance},
              {"witness", r.witness}};
}

Json popt_certificate_to_json(const PoptCertificate& c) {
  return Json{{"is_popt", c.is_popt},
              {"min_value", c.min_value},
              {"witness_psi", vector_to_json(c.psi)},
              {"witness_phi", vector_to_json(c.phi)},
              {"restarts_used", c.restarts_used},
              {"max_sweep_increase", c.max_sweep_increase}};
}

Json scenario_to_json(const Scenario& s) {
  Json left = Json::array();
  for (const auto& p : s.left_pvms) left.push_back(pvm_to_json(p));
  Json right = Json::array();
  for (const auto& p : s.right_pvms) right.push_back(pvm_to_json(p));
  Json coarse = Json::array();
  for (const auto& c : s.coarse) {
    coarse.push_back(Json{{"side", side_name(c.side)}, {"fine", c.fine}, {"coarse", c.coarse}, {"merge", c.merge}});
  }
  Json table = Json::array();
  for (const auto& row : s.table) {
    Json jr = Json::array();
    for (const auto& block : row) {
      Json jb = Json::array();
      for (Eigen::Index i = 0; i < block.rows(); ++i) {
        Json line = Json::array();
        for (Eigen::Index j = 0; j < block.cols(); ++j) line.push_back(block(i, j));
        jb.push_back(line);
      }
      jr.push_back(jb);
    }
    table.push_back(jr);
  }
  return Json{{"d1", s.dims.d1}, {"d2", s.dims.d2}, {"left_pvms", left}, {"right_pvms", right},
              {"coarse", coarse}, {"table", table}};
}

Scenario scenario_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("d1") || !j.contains("d2") || !j.contains("table")) {
    throw InvalidInput("scenario JSON: expected {\"d1\", \"d2\", \"table\", ...}");
  }
  Scenario s;
  s.dims = {j.at("d1").get<std::size_t>(), j.at("d2").get<std::size_t>()};
  if (j.contains("left_pvms"))
    for (const auto& p : j.at("left_pvms")) s.left_pvms.push_back(pvm_from_json(p));
  if (j.contains("right_pvms"))
    for (const auto& p : j.at("right_pvms")) s.right_pvms.push_back(pvm_from_json(p));
  if (j.contains("coarse")) {
    for (const auto& c : j.at("coarse")) {
      CoarseGraining cg;
      const std::string side = c.value("side", std::string("left"));
      if (side != "left" && side != "right") throw PartitionError("coarse-graining: side must be left or right");
      cg.side = side == "left" ? Side::left : Side::right;
      cg.fine = c.at("fine").get<std::size_t>();
      cg.coarse = c.at("coarse").get<std::size_t>();
      cg.merge = c.at("merge").get<Partition>();
      s.coarse.push_back(std::move(cg));
    }
  }
  const Json& table = j.at("table");
  if (!table.is_array()) throw InvalidInput("scenario JSON: table must be a nested array");
  for (const auto& row : table) {
    std::vector<Eigen::MatrixXd> blocks;
    for (const auto& jb : row) {
      const auto rows = static_cast<Eigen::Index>(jb.size());
      const auto cols = rows > 0 ? static_cast<Eigen::Index>(jb[0].size()) : 0;
      Eigen::MatrixXd block(rows, cols);
      for (Eigen::Index i = 0; i < rows; ++i) {
        if (static_cast<Eigen::Index>(jb[static_cast<std::size_t>(i)].size()) != cols) {
          throw InvalidInput("scenario JSON: ragged outcome block");
        }
        for (Eigen::Index k = 0; k < cols; ++k)
          block(i, k) = jb[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)].get<double>();
      }
      blocks.push_back(std::move(block));
    }
    s.table.push_back(std::move(blocks));
  }
  validate_shape(s);
  return s;
}

Json state_to_json(const ComplexMatrix& rho, Dims dims) {
  return Json{{"d1", dims.d1}, {"d2", dims.d2}, {"rho", matrix_to_json(rho)}};
}

StateFile state_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("d1") || !j.contains("d2") || !j.contains("rho")) {
    throw InvalidInput("state JSON: expected {\"d1\", \"d2\", \"rho\"}");
  }
  StateFile f{{j.at("d1").get<std::size_t>(), j.at("d2").get<std::size_t>()},
              matrix_from_json(j.at("rho"))};
  if (f.dims.d1 == 0 || f.dims.d2 == 0 ||
      static_cast<std::size_t>(f.rho.rows()) != f.dims.total() || f.rho.rows() != f.rho.cols()) {
    throw DimensionError("state JSON: rho does not match d1 * d2");
  }
  return f;
}

}  // namespace poptlab
