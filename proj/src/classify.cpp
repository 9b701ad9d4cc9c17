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

#include "poptlab/classify.hpp"

#include <cmath>
#include <sstream>

#include "poptlab/errors.hpp"

namespace poptlab {

namespace {

constexpr double kTraceTol = 1e-9;

bool all_finite(const ComplexMatrix& m) {
  return m.real().allFinite() && m.imag().allFinite();
}

Json optional_number(const std::optional<double>& x) {
  return x ? Json(*x) : Json(nullptr);
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::quantum_state:
      return "quantum_state";
    case Verdict::popt_only:
      return "popt_only";
    case Verdict::not_popt:
      return "not_popt";
    case Verdict::invalid:
      break;
  }
  return "invalid";
}

std::string to_string(LiftKind k) {
  switch (k) {
    case LiftKind::canonical:
      return "canonical";
    case LiftKind::transposed:
      return "transposed";
    case LiftKind::none:
      break;
  }
  return "none";
}

ClassificationReport classify(const ComplexMatrix& rho, Dims dims, const ClassifyConfig& config) {
  ClassificationReport r;
  r.dims = dims;

  if (rho.rows() != rho.cols() || dims.d1 == 0 || dims.d2 == 0 ||
      rho.rows() != static_cast<Eigen::Index>(dims.total())) {
    r.reasons.push_back("operator dimension does not match d1 * d2");
    return r;
  }
  if (!all_finite(rho)) {
    r.reasons.push_back("operator has non-finite entries");
    return r;
  }
  r.trace = rho.trace().real();
  r.hermiticity_defect = max_norm(rho - rho.adjoint());
  r.is_hermitian = r.hermiticity_defect <= config.tol.herm;
  if (!r.is_hermitian) {
    std::ostringstream os;
    os << "not Hermitian (defect " << r.hermiticity_defect << ")";
    r.reasons.push_back(os.str());
  }
  if (std::abs(rho.trace() - Complex(1.0)) > kTraceTol) {
    std::ostringstream os;
    os << "trace is " << r.trace << ", expected 1";
    r.reasons.push_back(os.str());
  }
  if (!r.reasons.empty()) return r;

  const HermitianOperator h = HermitianOperator::symmetrized(rho);
  const PsdResult psd = is_psd(h, config.tol.eig);
  r.is_psd = psd.psd;
  r.min_eigenvalue = psd.min_eigenvalue;
  r.psd_witness = psd.witness;

  PoptOptions popt;
  popt.restarts = config.popt_restarts;
  popt.tol = config.tol.popt;
  popt.seed = config.seed;
  r.popt = check_popt(h, dims, popt);
  r.is_popt = r.popt.is_popt;

  const HermitianOperator pt =
      HermitianOperator::symmetrized(partial_transpose(h.matrix(), dims, Subsystem::first));
  const PsdResult ppt = is_psd(pt, config.tol.eig);
  r.is_ppt = ppt.psd;
  r.min_pt_eigenvalue = ppt.min_eigenvalue;

  // phi(a) = tr_1[rho (a (x) 1)] and psi = phi o *. psi is completely
  // positive iff rho is PSD; phi is iff the partial transpose is.
  const LinearMapRep phi = map_from_state(h, dims);
  const LinearMapRep psi = compose_transpose(phi);
  std::optional<Dilation> lift;
  if (r.is_psd) {
    lift = stinespring_dilate(psi, true, config.tol.eig);
    r.lift = LiftKind::canonical;
  } else if (r.is_ppt) {
    lift = stinespring_dilate(phi, true, config.tol.eig);
    lift->transposed = true;
    r.lift = LiftKind::transposed;
  }

  if (lift) {
    const LinearMap rep = representation_map(*lift);
    r.lift_multiplicity = lift->multiplicity;
    r.jordan_defect = jordan_defect(rep, config.samples, config.seed);
    r.orthomorphism = orthomorphism_check(rep, config.samples, config.seed, config.tol.orientation);
    r.orientation = orientation_verdict(rep, config.samples, config.seed, config.tol.orientation);
  } else {
    r.orientation = orientation_verdict(psi, config.samples, config.seed, config.tol.orientation);
  }

  if (r.is_psd) {
    r.verdict = Verdict::quantum_state;
  } else if (r.is_popt) {
    r.verdict = Verdict::popt_only;
  } else {
    r.verdict = Verdict::not_popt;
  }
  return r;
}

Json classification_report_to_json(const ClassificationReport& r) {
  Json j;
  j["dims"] = Json{{"d1", r.dims.d1}, {"d2", r.dims.d2}};
  j["verdict"] = to_string(r.verdict);
  j["reasons"] = r.reasons;
  j["trace"] = r.trace;
  j["is_hermitian"] = r.is_hermitian;
  j["hermiticity_defect"] = r.hermiticity_defect;
  if (r.verdict == Verdict::invalid) {
    for (const char* key : {"is_psd", "min_eigenvalue", "psd_witness", "is_popt", "popt_certificate",
                            "is_ppt", "min_pt_eigenvalue", "lift", "jordan_defect",
                            "orthomorphism", "orientation"})
      j[key] = nullptr;
    return j;
  }
  j["is_psd"] = r.is_psd;
  j["min_eigenvalue"] = r.min_eigenvalue;
  j["psd_witness"] = vector_to_json(r.psd_witness);
  j["is_popt"] = r.is_popt;
  j["popt_certificate"] = popt_certificate_to_json(r.popt);
  j["is_ppt"] = r.is_ppt;
  j["min_pt_eigenvalue"] = r.min_pt_eigenvalue;
  j["lift"] = Json{{"kind", to_string(r.lift)}, {"multiplicity", r.lift_multiplicity}};
  j["jordan_defect"] = optional_number(r.jordan_defect);
  j["orthomorphism"] = r.orthomorphism ? orthomorphism_report_to_json(*r.orthomorphism) : Json(nullptr);
  j["orientation"] = orientation_verdict_to_json(r.orientation);
  return j;
}

}  // namespace poptlab
