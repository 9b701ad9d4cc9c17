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

#include "poptlab/dilation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "poptlab/errors.hpp"
#include "poptlab/sampling.hpp"

namespace poptlab {

namespace {

ComplexMatrix matrix_unit(std::size_t d, std::size_t i, std::size_t j) {
  const auto n = static_cast<Eigen::Index>(d);
  ComplexMatrix e = ComplexMatrix::Zero(n, n);
  e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
  return e;
}

ComplexMatrix columns(const ComplexMatrix& basis, const std::vector<std::size_t>& idx) {
  ComplexMatrix out(basis.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k)
    out.col(static_cast<Eigen::Index>(k)) = basis.col(static_cast<Eigen::Index>(idx[k]));
  return out;
}

}  // namespace

POVM::POVM(std::vector<HermitianOperator> elements, std::optional<HermitianOperator> weight,
           double tol)
    : elements_(std::move(elements)) {
  if (elements_.empty()) throw InvalidPOVM("POVM: no elements");
  const std::size_t d = elements_.front().dim();
  ComplexMatrix sum = ComplexMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (elements_[i].dim() != d) throw DimensionError("POVM: elements of different dimension");
    const PsdResult psd = is_psd(elements_[i], tol);
    if (!psd.psd) {
      std::ostringstream os;
      os << "POVM: element " << i << " is not PSD (min eigenvalue " << psd.min_eigenvalue << ")";
      throw InvalidPOVM(os.str());
    }
    sum += elements_[i].matrix();
  }
  total_ = HermitianOperator::symmetrized(sum);
  if (weight) {
    if (weight->dim() != d) throw DimensionError("POVM: weight has the wrong dimension");
    if (max_norm(sum - weight->matrix()) > tol) {
      throw InvalidPOVM("POVM: elements do not sum to the declared weight");
    }
  } else {
    const PsdResult slack =
        is_psd(HermitianOperator::symmetrized(poptlab::identity(d) - sum), tol);
    if (!slack.psd) throw InvalidPOVM("POVM: elements sum to more than the identity");
  }
}

Dilation naimark_dilate(const POVM& povm) {
  const std::size_t d = povm.dim();
  const std::size_t k = povm.size();
  const auto n = static_cast<Eigen::Index>(d);
  Dilation out;
  out.kind = DilationKind::naimark;
  out.dim_K = d * k;
  out.v = ComplexMatrix::Zero(static_cast<Eigen::Index>(out.dim_K), n);
  std::vector<Projection> blocks;
  blocks.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const auto offset = static_cast<Eigen::Index>(i) * n;
    out.v.block(offset, 0, n, n) = psd_sqrt(povm.elements()[i], kPovmTol).matrix();
    ComplexMatrix cols = ComplexMatrix::Zero(static_cast<Eigen::Index>(out.dim_K), n);
    cols.block(offset, 0, n, n) = poptlab::identity(d);
    blocks.push_back(Projection::onto_columns(cols));
  }
  out.pvm_K = PVM(std::move(blocks));
  for (std::size_t i = 0; i < k; ++i) {
    out.residual = std::max(out.residual, max_norm(compress(out, (*out.pvm_K)[i].matrix()) -
                                                   povm.elements()[i].matrix()));
  }
  if (out.residual > kCompressionTol) {
    std::ostringstream os;
    os << "naimark_dilate: compression residual " << out.residual;
    throw NumericalError(os.str());
  }
  return out;
}

Dilation stinespring_dilate(const LinearMapRep& phi, bool require_cp, double tol) {
  const std::size_t din = phi.d_in();
  const std::size_t dout = phi.d_out();
  const HermitianOperator choi = HermitianOperator::symmetrized(standard_choi(phi));
  const Spectrum spec = eig_hermitian(choi);
  const double min_eig = spec.eigenvalues.minCoeff();
  if (require_cp && min_eig < -tol) {
    std::ostringstream os;
    os << "stinespring_dilate: Choi matrix has eigenvalue " << min_eig;
    throw NotCompletelyPositive(os.str(), min_eig);
  }
  std::vector<Eigen::Index> kept;
  for (Eigen::Index k = 0; k < spec.eigenvalues.size(); ++k)
    if (spec.eigenvalues(k) > kRankCutoff) kept.push_back(k);

  Dilation out;
  out.kind = DilationKind::stinespring;
  out.d_in = din;
  out.multiplicity = kept.size();
  out.dim_K = din * out.multiplicity;
  const auto m = static_cast<Eigen::Index>(out.multiplicity);
  out.v = ComplexMatrix::Zero(static_cast<Eigen::Index>(out.dim_K), static_cast<Eigen::Index>(dout));
  // Kraus operator K_k(s, i) = sqrt(lambda_k) x_k(i dout + s); v = sum_k K_k^dag (x) |k>.
  for (Eigen::Index k = 0; k < m; ++k) {
    const Eigen::Index e = kept[static_cast<std::size_t>(k)];
    const double scale = std::sqrt(spec.eigenvalues(e));
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(din); ++i)
      for (Eigen::Index s = 0; s < static_cast<Eigen::Index>(dout); ++s)
        out.v(i * m + k, s) =
            std::conj(scale * spec.eigenvectors(i * static_cast<Eigen::Index>(dout) + s, e));
  }
  out.u = poptlab::identity(out.dim_K);
  if (out.multiplicity > 0) {
    const LinearMap rep = representation_map(out);
    for (std::size_t i = 0; i < din; ++i)
      for (std::size_t j = 0; j < din; ++j) {
        const ComplexMatrix unit = matrix_unit(din, i, j);
        out.residual = std::max(out.residual,
                                max_norm(compress(out, rep.apply(unit)) - apply_map(phi, unit)));
      }
  } else {
    out.residual = max_norm(choi.matrix());
  }
  if (require_cp && out.residual > kCompressionTol) {
    std::ostringstream os;
    os << "stinespring_dilate: compression residual " << out.residual;
    throw NumericalError(os.str());
  }
  return out;
}

LinearMap representation_map(const Dilation& dilation) {
  if (dilation.kind != DilationKind::stinespring) {
    throw InvalidInput("representation_map: not a Stinespring dilation");
  }
  const ComplexMatrix u = dilation.u;
  const ComplexMatrix ones = poptlab::identity(dilation.multiplicity);
  const bool transposed = dilation.transposed;
  return {dilation.d_in, dilation.dim_K, [u, ones, transposed](const ComplexMatrix& a) {
            const ComplexMatrix lifted =
                transposed ? tensor(ComplexMatrix(a.transpose()), ones) : tensor(a, ones);
            return ComplexMatrix(u * lifted * u.adjoint());
          }};
}

ComplexMatrix compress(const Dilation& dilation, const ComplexMatrix& x) {
  if (x.rows() != static_cast<Eigen::Index>(dilation.dim_K) || x.cols() != x.rows()) {
    throw DimensionError("compress: operator does not act on the dilation space");
  }
  return dilation.v.adjoint() * x * dilation.v;
}

OrthomorphismReport orthomorphism_check(const LinearMap& phi, std::size_t samples,
                                        std::uint64_t seed, double tol) {
  OrthomorphismReport r;
  r.samples = samples;
  r.tolerance = tol;
  const std::size_t d = phi.d_in;
  const auto dk = static_cast<Eigen::Index>(phi.d_out);
  const ComplexMatrix one_K = ComplexMatrix::Identity(dk, dk);
  const ComplexMatrix zero_in = ComplexMatrix::Zero(static_cast<Eigen::Index>(d),
                                                    static_cast<Eigen::Index>(d));
  r.zero_defect = max_norm(phi.apply(zero_in));

  Rng rng(seed);
  std::vector<std::size_t> order(d);
  for (std::size_t s = 0; s < samples; ++s) {
    const ComplexMatrix basis = haar_unitary(d, rng);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    // p takes the first a indices, q the next b (q = 0 when d = 1).
    std::uniform_int_distribution<std::size_t> pick_a(1, std::max<std::size_t>(1, d - 1));
    const std::size_t a = d == 1 ? 1 : pick_a(rng);
    std::uniform_int_distribution<std::size_t> pick_b(d == a ? 0 : 1, d - a);
    const std::size_t b = pick_b(rng);
    const std::vector<std::size_t> ps(order.begin(), order.begin() + static_cast<long>(a));
    const std::vector<std::size_t> qs(order.begin() + static_cast<long>(a),
                                      order.begin() + static_cast<long>(a + b));
    const ComplexMatrix p = Projection::onto_columns(columns(basis, ps)).matrix();
    const ComplexMatrix q = qs.empty() ? zero_in : Projection::onto_columns(columns(basis, qs)).matrix();

    const ComplexMatrix fp = phi.apply(p);
    const ComplexMatrix fq = phi.apply(q);
    r.complement_defect = std::max(
        r.complement_defect, max_norm(phi.apply(poptlab::identity(d) - p) - (one_K - fp)));
    r.orthogonality_defect = std::max(r.orthogonality_defect, max_norm(fp * fq));
    r.additivity_defect = std::max(r.additivity_defect, max_norm(phi.apply(p + q) - fp - fq));
    r.projection_defect = std::max({r.projection_defect, max_norm(fp * fp - fp),
                                    max_norm(fp - fp.adjoint())});
  }
  r.passed = r.zero_defect <= tol && r.complement_defect <= tol &&
             r.orthogonality_defect <= tol && r.additivity_defect <= tol &&
             r.projection_defect <= tol;
  return r;
}

ConstraintReport context_dilation_consistency(const std::vector<ContextDilation>& family,
                                              double tol) {
  ConstraintReport report;
  report.tolerance = tol;
  if (family.empty()) return report;
  const ComplexMatrix& v0 = family.front().v;
  for (const auto& entry : family) {
    if (entry.pvm_K.dim() != family.front().pvm_K.dim()) {
      throw InvalidInput("context_dilation_consistency: dilations act on different spaces");
    }
    if (entry.v.rows() != v0.rows() || entry.v.cols() != v0.cols() ||
        max_norm(entry.v - v0) > tol) {
      throw InvalidInput("context_dilation_consistency: dilations use different isometries");
    }
    if (entry.pvm_K.size() != entry.context.blocks()) {
      throw InvalidInput("context_dilation_consistency: PVM size does not match the context");
    }
  }
  std::vector<PVM> pvms;
  pvms.reserve(family.size());
  for (const auto& entry : family) pvms.push_back(pvm_of_context(entry.context));

  for (std::size_t a = 0; a < family.size(); ++a)
    for (std::size_t b = a + 1; b < family.size(); ++b)
      for (std::size_t i = 0; i < pvms[a].size(); ++i)
        for (std::size_t j = 0; j < pvms[b].size(); ++j) {
          if (max_norm(pvms[a][i].matrix() - pvms[b][j].matrix()) > tol) continue;
          // The complement 1 - q is shared too; its images differ by the same amount.
          const double gap =
              max_norm(family[a].pvm_K[i].matrix() - family[b].pvm_K[j].matrix());
          if (gap > report.max_violation) {
            report.max_violation = gap;
            std::ostringstream os;
            os << "projector " << i << " of context " << a << " = projector " << j
               << " of context " << b << ", images differ by " << gap;
            report.witness = os.str();
          }
        }
  report.satisfied = report.max_violation <= tol;
  return report;
}

std::vector<ContextDilation> induced_context_dilations(const Dilation& dilation,
                                                       const std::vector<Context>& contexts) {
  const LinearMap rep = representation_map(dilation);
  std::vector<ContextDilation> out;
  out.reserve(contexts.size());
  for (const Context& c : contexts) {
    if (c.dim() != dilation.d_in) throw DimensionError("induced_context_dilations: dimension mismatch");
    std::vector<Projection> images;
    const PVM pvm = pvm_of_context(c);
    for (const Projection& q : pvm.elements())
      images.emplace_back(HermitianOperator::symmetrized(rep.apply(q.matrix())), kContextTol);
    out.push_back({c, PVM(std::move(images)), dilation.v});
  }
  return out;
}

Json dilation_to_json(const Dilation& d) {
  Json j{{"K", d.dim_K}, {"v", matrix_to_json(d.v)}, {"residual", d.residual}};
  if (d.kind == DilationKind::naimark) {
    j["pvm_K"] = pvm_to_json(*d.pvm_K);
  } else {
    j["U"] = matrix_to_json(d.u);
    j["multiplicity"] = d.multiplicity;
    j["transposed"] = d.transposed;
  }
  return j;
}

Json orthomorphism_report_to_json(const OrthomorphismReport& r) {
  return Json{{"zero_defect", r.zero_defect},
              {"complement_defect", r.complement_defect},
              {"orthogonality_defect", r.orthogonality_defect},
              {"additivity_defect", r.additivity_defect},
              {"projection_defect", r.projection_defect},
              {"samples", r.samples},
              {"tolerance", r.tolerance},
              {"passed", r.passed}};
}

POVM povm_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("povm") || !j.at("povm").is_array()) {
    throw InvalidInput("POVM JSON: expected {\"povm\": [<matrix>, ...]}");
  }
  std::vector<HermitianOperator> elements;
  for (const auto& m : j.at("povm")) elements.emplace_back(matrix_from_json(m), 1e-9);
  std::optional<HermitianOperator> weight;
  if (j.contains("weight")) weight = HermitianOperator(matrix_from_json(j.at("weight")), 1e-9);
  return POVM(std::move(elements), std::move(weight));
}

}  // namespace poptlab
