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

#include "poptlab/jordan.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
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

void require_out_dim(const ComplexMatrix& image, std::size_t d_out) {
  if (image.rows() != static_cast<Eigen::Index>(d_out) ||
      image.cols() != static_cast<Eigen::Index>(d_out)) {
    throw DimensionError("linear map returned an image of the wrong dimension");
  }
}

/// sum_ij |i><j| (x) f(unit(i, j) or unit(j, i)).
ComplexMatrix assemble(std::size_t d_in, std::size_t d_out, const MatrixMap& f, bool swapped) {
  const auto din = static_cast<Eigen::Index>(d_in);
  const auto dout = static_cast<Eigen::Index>(d_out);
  ComplexMatrix out(din * dout, din * dout);
  for (std::size_t i = 0; i < d_in; ++i)
    for (std::size_t j = 0; j < d_in; ++j) {
      const ComplexMatrix image = swapped ? f(matrix_unit(d_in, j, i)) : f(matrix_unit(d_in, i, j));
      require_out_dim(image, d_out);
      out.block(static_cast<Eigen::Index>(i) * dout, static_cast<Eigen::Index>(j) * dout, dout, dout) = image;
    }
  return out;
}

double normalized(double defect, const ComplexMatrix& a, const ComplexMatrix& b) {
  const double scale = max_norm(a) * max_norm(b);
  return scale > 0.0 ? defect / scale : defect;
}

HermitianOperator hermitian_image(const LinearMap& phi, const HermitianOperator& a) {
  const ComplexMatrix image = phi.apply(a.matrix());
  require_out_dim(image, phi.d_out);
  return HermitianOperator::symmetrized(image);
}

}  // namespace

LinearMapRep::LinearMapRep(std::size_t d_in, std::size_t d_out, HermitianOperator choi)
    : d_in_(d_in), d_out_(d_out), choi_(std::move(choi)) {
  if (d_in_ == 0 || d_out_ == 0 || choi_.dim() != d_in_ * d_out_) {
    throw DimensionError("LinearMapRep: choi dimension does not match d_in * d_out");
  }
}

LinearMapRep LinearMapRep::from_function(std::size_t d_in, std::size_t d_out, const MatrixMap& f) {
  const ComplexMatrix rho = assemble(d_in, d_out, f, /*swapped=*/true);
  const double defect = max_norm(rho - rho.adjoint());
  if (defect > 1e-9 * std::max(1.0, max_norm(rho))) {
    throw InvalidInput("LinearMapRep::from_function: map does not preserve Hermiticity");
  }
  return LinearMapRep(d_in, d_out, HermitianOperator::symmetrized(rho));
}

LinearMapRep map_from_state(const HermitianOperator& rho, Dims dims) {
  if (dims.d1 == 0 || dims.d2 == 0 || rho.dim() != dims.total()) {
    throw DimensionError("map_from_state: operator dimension does not match dims");
  }
  return LinearMapRep(dims.d1, dims.d2, rho);
}

ComplexMatrix apply_map(const LinearMapRep& phi, const ComplexMatrix& a) {
  if (a.rows() != static_cast<Eigen::Index>(phi.d_in()) || a.cols() != a.rows()) {
    throw DimensionError("apply_map: input dimension does not match d_in");
  }
  const auto din = static_cast<Eigen::Index>(phi.d_in());
  const auto dout = static_cast<Eigen::Index>(phi.d_out());
  const ComplexMatrix& rho = phi.choi().matrix();
  // tr_1[rho (a (x) 1)] = sum_{i,k} a(k, i) rho_{(i, .), (k, .)}
  ComplexMatrix out = ComplexMatrix::Zero(dout, dout);
  for (Eigen::Index i = 0; i < din; ++i)
    for (Eigen::Index k = 0; k < din; ++k)
      if (a(k, i) != 0.0) out += a(k, i) * rho.block(i * dout, k * dout, dout, dout);
  return out;
}

HermitianOperator apply_map(const LinearMapRep& phi, const HermitianOperator& a) {
  return HermitianOperator::symmetrized(apply_map(phi, a.matrix()));
}

LinearMap as_map(const LinearMapRep& phi) {
  return {phi.d_in(), phi.d_out(), [phi](const ComplexMatrix& a) { return apply_map(phi, a); }};
}

HermitianOperator state_from_map(const LinearMapRep& phi) {
  const MatrixMap f = [&phi](const ComplexMatrix& a) { return apply_map(phi, a); };
  return HermitianOperator::symmetrized(assemble(phi.d_in(), phi.d_out(), f, /*swapped=*/true));
}

LinearMapRep compose_transpose(const LinearMapRep& phi) {
  return LinearMapRep(phi.d_in(), phi.d_out(),
                      HermitianOperator::symmetrized(partial_transpose(
                          phi.choi().matrix(), {phi.d_in(), phi.d_out()}, Subsystem::first)));
}

ComplexMatrix standard_choi(const LinearMapRep& phi) {
  const MatrixMap f = [&phi](const ComplexMatrix& a) { return apply_map(phi, a); };
  return assemble(phi.d_in(), phi.d_out(), f, /*swapped=*/false);
}

CpResult is_completely_positive(const LinearMapRep& phi, double tol) {
  // (phi o *)(|i><j|) = phi(|j><i|).
  const MatrixMap corrected = [&phi](const ComplexMatrix& a) {
    return apply_map(phi, ComplexMatrix(a.transpose()));
  };
  const ComplexMatrix choi = assemble(phi.d_in(), phi.d_out(), corrected, /*swapped=*/false);
  const PsdResult psd = is_psd(HermitianOperator::symmetrized(choi), tol);
  return {psd.psd, psd.min_eigenvalue, psd.witness};
}

double jordan_defect(const LinearMap& phi, std::size_t samples, std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const HermitianOperator a = gaussian_hermitian(phi.d_in, rng);
    const HermitianOperator b = gaussian_hermitian(phi.d_in, rng);
    const ComplexMatrix lhs = phi.apply(anticommutator(a, b).matrix());
    const ComplexMatrix rhs = anticommutator(hermitian_image(phi, a), hermitian_image(phi, b)).matrix();
    worst = std::max(worst, normalized(max_norm(lhs - rhs), a.matrix(), b.matrix()));
  }
  return worst;
}

double jordan_defect(const LinearMapRep& phi, std::size_t samples, std::uint64_t seed) {
  return jordan_defect(as_map(phi), samples, seed);
}

std::string to_string(Orientation o) {
  switch (o) {
    case Orientation::preserving:
      return "preserving";
    case Orientation::reversing:
      return "reversing";
    case Orientation::neither:
      break;
  }
  return "neither";
}

OrientationVerdict orientation_verdict(const LinearMap& phi, std::size_t samples,
                                       std::uint64_t seed, double tol) {
  constexpr double kTimes[] = {0.1, 1.0, std::numbers::pi};
  Rng rng(seed);
  OrientationVerdict v;
  v.sample_count = samples;
  for (std::size_t s = 0; s < samples; ++s) {
    const HermitianOperator a = gaussian_hermitian(phi.d_in, rng);
    const HermitianOperator b = gaussian_hermitian(phi.d_in, rng);
    const HermitianOperator fa = hermitian_image(phi, a);
    const HermitianOperator fb = hermitian_image(phi, b);
    const ComplexMatrix image_of_commutator = phi.apply(commutator(a, b));
    const ComplexMatrix commutator_of_images = commutator(fa, fb);
    v.max_defect_preserving = std::max(
        v.max_defect_preserving,
        normalized(max_norm(image_of_commutator - commutator_of_images), a.matrix(), b.matrix()));
    v.max_defect_reversing = std::max(
        v.max_defect_reversing,
        normalized(max_norm(image_of_commutator + commutator_of_images), a.matrix(), b.matrix()));

    if (s < std::size(kTimes)) {
      const double t = kTimes[s];
      const ComplexMatrix evolved_image = conjugation_flow(t, fa, fb).matrix();
      const ComplexMatrix forward = phi.apply(conjugation_flow(t, a, b).matrix());
      const ComplexMatrix backward = phi.apply(conjugation_flow(-t, a, b).matrix());
      const double scale = std::max(max_norm(b.matrix()), 1e-300);
      v.finite_time_defect_preserving =
          std::max(v.finite_time_defect_preserving, max_norm(forward - evolved_image) / scale);
      v.finite_time_defect_reversing =
          std::max(v.finite_time_defect_reversing, max_norm(backward - evolved_image) / scale);
    }
  }
  const bool preserves = v.max_defect_preserving <= tol;
  const bool reverses = v.max_defect_reversing <= tol;
  v.degenerate = preserves && reverses;
  if (preserves && v.max_defect_preserving < v.max_defect_reversing) {
    v.tag = Orientation::preserving;
  } else if (reverses && v.max_defect_reversing < v.max_defect_preserving) {
    v.tag = Orientation::reversing;
  } else {
    v.tag = Orientation::neither;
  }
  if (samples > 0) {
    v.finite_time_consistent =
        (v.finite_time_defect_preserving <= kFiniteTimeTol) == preserves &&
        (v.finite_time_defect_reversing <= kFiniteTimeTol) == reverses;
  }
  return v;
}

OrientationVerdict orientation_verdict(const LinearMapRep& phi, std::size_t samples,
                                       std::uint64_t seed, double tol) {
  return orientation_verdict(as_map(phi), samples, seed, tol);
}

Json linear_map_to_json(const LinearMapRep& phi) {
  return Json{{"d_in", phi.d_in()}, {"d_out", phi.d_out()}, {"choi", matrix_to_json(phi.choi().matrix())}};
}

Json orientation_verdict_to_json(const OrientationVerdict& v) {
  return Json{{"tag", to_string(v.tag)},
              {"max_defect_preserving", v.max_defect_preserving},
              {"max_defect_reversing", v.max_defect_reversing},
              {"sample_count", v.sample_count},
              {"degenerate", v.degenerate},
              {"finite_time_defect_preserving", v.finite_time_defect_preserving},
              {"finite_time_defect_reversing", v.finite_time_defect_reversing},
              {"finite_time_consistent", v.finite_time_consistent}};
}

namespace maps {

LinearMap identity_map(std::size_t d) {
  return {d, d, [](const ComplexMatrix& a) { return a; }};
}

LinearMap transpose_map(std::size_t d) {
  return {d, d, [](const ComplexMatrix& a) { return ComplexMatrix(a.transpose()); }};
}

LinearMap depolarizing_map(std::size_t d) {
  return {d, d, [d](const ComplexMatrix& a) {
            return ComplexMatrix(a.trace() * identity(d) / static_cast<double>(d));
          }};
}

LinearMap unitary_conjugation(const ComplexMatrix& u) {
  const auto d = static_cast<std::size_t>(u.rows());
  return {d, d, [u](const ComplexMatrix& a) { return ComplexMatrix(u * a * u.adjoint()); }};
}

}  // namespace maps

LinearMapRep representation_of(const LinearMap& f) {
  return LinearMapRep::from_function(f.d_in, f.d_out, f.apply);
}

}  // namespace poptlab
