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

#include "poptlab/bell.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <random>

#include "poptlab/errors.hpp"
#include "poptlab/sampling.hpp"

namespace poptlab {

namespace {

constexpr double kFdStep = 1e-6;
constexpr double kSign[2][2] = {{1.0, 1.0}, {1.0, -1.0}};

/// M(i, k) = sum_{s,t} rho[(i,s),(k,t)] b(t, s), so tr[rho (a (x) b)] = tr[a M].
ComplexMatrix contract_right(const ComplexMatrix& rho, Dims dims, const ComplexMatrix& b) {
  const auto d1 = static_cast<Eigen::Index>(dims.d1);
  const auto d2 = static_cast<Eigen::Index>(dims.d2);
  ComplexMatrix m(d1, d1);
  for (Eigen::Index i = 0; i < d1; ++i)
    for (Eigen::Index k = 0; k < d1; ++k)
      m(i, k) = (rho.block(i * d2, k * d2, d2, d2).array() * b.transpose().array()).sum();
  return m;
}

/// N(s, t) = sum_{i,k} rho[(i,s),(k,t)] a(k, i), so tr[rho (a (x) b)] = tr[b N].
ComplexMatrix contract_left(const ComplexMatrix& rho, Dims dims, const ComplexMatrix& a) {
  const auto d1 = static_cast<Eigen::Index>(dims.d1);
  const auto d2 = static_cast<Eigen::Index>(dims.d2);
  ComplexMatrix n = ComplexMatrix::Zero(d2, d2);
  for (Eigen::Index i = 0; i < d1; ++i)
    for (Eigen::Index k = 0; k < d1; ++k)
      if (a(k, i) != 0.0) n += a(k, i) * rho.block(i * d2, k * d2, d2, d2);
  return n;
}

double trace_product(const ComplexMatrix& a, const ComplexMatrix& m) {
  return (a.transpose().array() * m.array()).sum().real();
}

/// Orthonormal basis of the d x d Hermitian matrices.
std::vector<HermitianOperator> hermitian_basis(std::size_t d) {
  std::vector<HermitianOperator> out;
  const auto n = static_cast<Eigen::Index>(d);
  const double r = 1.0 / std::sqrt(2.0);
  for (Eigen::Index j = 0; j < n; ++j) {
    ComplexMatrix e = ComplexMatrix::Zero(n, n);
    e(j, j) = 1.0;
    out.push_back(HermitianOperator::symmetrized(e));
  }
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = j + 1; k < n; ++k) {
      ComplexMatrix re = ComplexMatrix::Zero(n, n);
      re(j, k) = r;
      re(k, j) = r;
      out.push_back(HermitianOperator::symmetrized(re));
      ComplexMatrix im = ComplexMatrix::Zero(n, n);
      im(j, k) = Complex(0.0, -r);
      im(k, j) = Complex(0.0, r);
      out.push_back(HermitianOperator::symmetrized(im));
    }
  return out;
}

/// One dichotomic observable in the optimizer's parametrization.
struct Param {
  std::size_t d = 2;
  double theta = 0.0;
  double phi = 0.0;
  ComplexMatrix u;
  ComplexMatrix signature;

  std::size_t count() const { return d == 2 ? 2 : d * d; }

  ComplexMatrix matrix() const {
    if (d == 2) return DichotomicSetting::bloch(theta, phi).matrix();
    return u * signature * u.adjoint();
  }

  /// Observable after moving parameter k by h.
  ComplexMatrix moved_matrix(const std::vector<HermitianOperator>& basis, std::size_t k,
                             double h) const {
    if (d == 2) {
      return DichotomicSetting::bloch(theta + (k == 0 ? h : 0.0), phi + (k == 1 ? h : 0.0)).matrix();
    }
    // Second-order expansion of exp(i h E); the truncation error is O(h^3).
    const ComplexMatrix& e = basis[k].matrix();
    const ComplexMatrix w = poptlab::identity(d) + Complex(0.0, h) * e - 0.5 * h * h * e * e;
    const ComplexMatrix v = u * w;
    return v * signature * v.adjoint();
  }

  Param stepped(const std::vector<HermitianOperator>& basis, const Eigen::VectorXd& g,
                double t) const {
    Param out = *this;
    if (d == 2) {
      out.theta += t * g(0);
      out.phi += t * g(1);
      return out;
    }
    ComplexMatrix h = ComplexMatrix::Zero(u.rows(), u.cols());
    for (std::size_t k = 0; k < basis.size(); ++k) h += g(static_cast<Eigen::Index>(k)) * basis[k].matrix();
    out.u = u * unitary_exp(t, HermitianOperator::symmetrized(h));
    return out;
  }
};

Param random_param(std::size_t d, Rng& rng) {
  Param p;
  p.d = d;
  if (d == 2) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    p.theta = 0.5 * angle(rng);
    p.phi = angle(rng);
    return p;
  }
  p.u = haar_unitary(d, rng);
  std::uniform_int_distribution<std::size_t> plus(1, d - 1);
  const std::size_t n_plus = plus(rng);
  p.signature = ComplexMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i)
    p.signature(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = i < n_plus ? 1.0 : -1.0;
  return p;
}

struct State {
  std::array<Param, 4> obs;  // A0, A1, B0, B1
};

double value_of(const ComplexMatrix& rho, Dims dims, const std::array<ComplexMatrix, 4>& m) {
  double s = 0.0;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      s += kSign[x][y] * product_expectation(rho, dims, m[static_cast<std::size_t>(x)],
                                             m[static_cast<std::size_t>(2 + y)]).real();
  return s;
}

std::array<ComplexMatrix, 4> matrices(const State& st) {
  return {st.obs[0].matrix(), st.obs[1].matrix(), st.obs[2].matrix(), st.obs[3].matrix()};
}

/// Central-difference gradient. S is linear in each observable, so moving
/// observable k only changes tr[A_k R_k] with R_k the reduced operator of
/// the other three.
std::array<Eigen::VectorXd, 4> gradient(const ComplexMatrix& rho, Dims dims, const State& st,
                                        const std::array<ComplexMatrix, 4>& m,
                                        const std::vector<HermitianOperator>& basis1,
                                        const std::vector<HermitianOperator>& basis2) {
  std::array<Eigen::VectorXd, 4> g;
  for (std::size_t k = 0; k < 4; ++k) {
    ComplexMatrix reduced;
    if (k < 2) {
      reduced = contract_right(rho, dims, kSign[k][0] * m[2] + kSign[k][1] * m[3]);
    } else {
      reduced = contract_left(rho, dims, kSign[0][k - 2] * m[0] + kSign[1][k - 2] * m[1]);
    }
    const auto& basis = k < 2 ? basis1 : basis2;
    const Param& p = st.obs[k];
    g[k].resize(static_cast<Eigen::Index>(p.count()));
    for (std::size_t c = 0; c < p.count(); ++c) {
      const double up = trace_product(p.moved_matrix(basis, c, kFdStep), reduced);
      const double down = trace_product(p.moved_matrix(basis, c, -kFdStep), reduced);
      g[k](static_cast<Eigen::Index>(c)) = (up - down) / (2.0 * kFdStep);
    }
  }
  return g;
}

ChshSettings settings_of(const State& st) {
  auto make = [](const Param& p) {
    return DichotomicSetting(HermitianOperator::symmetrized(p.matrix()));
  };
  return {make(st.obs[0]), make(st.obs[1]), make(st.obs[2]), make(st.obs[3])};
}

}  // namespace

DichotomicSetting::DichotomicSetting(const HermitianOperator& observable, double tol)
    : observable_(observable) {
  const ComplexMatrix& a = observable_.matrix();
  const double defect = max_norm(a * a - poptlab::identity(observable_.dim()));
  if (observable_.dim() == 0 || defect > tol) {
    throw InvalidSetting("DichotomicSetting: observable does not square to the identity");
  }
}

DichotomicSetting DichotomicSetting::bloch(double theta, double phi) {
  const ComplexMatrix a = std::sin(theta) * std::cos(phi) * pauli::x().matrix() +
                          std::sin(theta) * std::sin(phi) * pauli::y().matrix() +
                          std::cos(theta) * pauli::z().matrix();
  return DichotomicSetting(HermitianOperator::symmetrized(a));
}

double chsh_value(const ChshInstance& inst) {
  const Dims dims = inst.dims;
  if (inst.rho.dim() != dims.total()) throw DimensionError("chsh_value: rho does not match dims");
  const auto& s = inst.settings;
  if (s.a0.dim() != dims.d1 || s.a1.dim() != dims.d1 || s.b0.dim() != dims.d2 ||
      s.b1.dim() != dims.d2) {
    throw DimensionError("chsh_value: settings do not match dims");
  }
  return value_of(inst.rho.matrix(), dims,
                  {s.a0.matrix(), s.a1.matrix(), s.b0.matrix(), s.b1.matrix()});
}

ChshResult optimize_chsh(const HermitianOperator& rho, Dims dims, const ChshOptions& options) {
  if (rho.dim() != dims.total() || dims.d1 < 2 || dims.d2 < 2) {
    throw DimensionError("optimize_chsh: need dims >= 2 matching rho");
  }
  const ComplexMatrix& r = rho.matrix();
  const auto basis1 = hermitian_basis(dims.d1);
  const auto basis2 = hermitian_basis(dims.d2);
  Rng rng(options.seed);

  std::optional<State> best;
  double best_value = -std::numeric_limits<double>::infinity();
  double min_gain = std::numeric_limits<double>::infinity();
  const std::size_t restarts = std::max<std::size_t>(1, options.restarts);

  for (std::size_t run = 0; run < restarts; ++run) {
    State st;
    st.obs = {random_param(dims.d1, rng), random_param(dims.d1, rng),
              random_param(dims.d2, rng), random_param(dims.d2, rng)};
    auto m = matrices(st);
    double s = value_of(r, dims, m);
    double t = 1.0;
    for (std::size_t it = 0; it < options.max_iterations; ++it) {
      const auto g = gradient(r, dims, st, m, basis1, basis2);
      double gnorm2 = 0.0;
      for (const auto& gk : g) gnorm2 += gk.squaredNorm();
      if (gnorm2 < 1e-20) break;
      bool accepted = false;
      for (t = std::min(4.0, 2.0 * t); t > 1e-12; t *= 0.5) {
        State trial = st;
        for (std::size_t k = 0; k < 4; ++k)
          trial.obs[k] = st.obs[k].stepped(k < 2 ? basis1 : basis2, g[k], t);
        const auto tm = matrices(trial);
        const double ts = value_of(r, dims, tm);
        if (ts > s) {
          min_gain = std::min(min_gain, ts - s);
          const bool converged = ts - s < 1e-13;
          st = std::move(trial);
          m = tm;
          s = ts;
          accepted = !converged;
          break;
        }
      }
      if (!accepted) break;
    }
    if (s > best_value) {
      best_value = s;
      best = st;
    }
  }

  ChshResult out{0.0, settings_of(*best), restarts,
                 std::isfinite(min_gain) ? min_gain : 0.0};
  out.value = chsh_value({rho, dims, out.settings});
  return out;
}

TabulatedMeasure pr_box_table() {
  Scenario s;
  s.dims = {2, 2};
  s.table.assign(2, std::vector<Eigen::MatrixXd>(2, Eigen::MatrixXd::Zero(2, 2)));
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          if ((a ^ b) == (x & y)) s.table[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)](a, b) = 0.5;
  return TabulatedMeasure(std::move(s));
}

double chsh_from_table(const TabulatedMeasure& table) {
  const Scenario& s = table.scenario();
  if (s.left_settings() != 2 || s.right_settings() != 2) {
    throw InvalidInput("chsh_from_table: need two settings per side");
  }
  double value = 0.0;
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 2; ++y) {
      const Eigen::MatrixXd& p = s.table[x][y];
      if (p.rows() != 2 || p.cols() != 2) throw InvalidInput("chsh_from_table: need two outcomes");
      const double correlator = p(0, 0) - p(0, 1) - p(1, 0) + p(1, 1);
      value += kSign[x][y] * correlator;
    }
  return value;
}

Json chsh_settings_to_json(const ChshSettings& s) {
  return Json{{"A0", matrix_to_json(s.a0.matrix())},
              {"A1", matrix_to_json(s.a1.matrix())},
              {"B0", matrix_to_json(s.b0.matrix())},
              {"B1", matrix_to_json(s.b1.matrix())}};
}

Json chsh_result_to_json(const ChshResult& r) {
  return Json{{"value", r.value}, {"settings", chsh_settings_to_json(r.settings)}, {"restarts", r.restarts}};
}

}  // namespace poptlab
