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

#include <cmath>

#include "doctest.h"
#include "poptlab/operator_core.hpp"
#include "poptlab/sampling.hpp"

namespace poptlab::testing {

inline double dist(const ComplexMatrix& a, const ComplexMatrix& b) { return max_norm(a - b); }

inline ComplexMatrix diag(std::initializer_list<double> values) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(values.size()),
                                        static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) {
    m(i, i) = v;
    ++i;
  }
  return m;
}

inline ComplexVector ket(std::size_t d, std::size_t i) {
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(d));
  v(static_cast<Eigen::Index>(i)) = 1.0;
  return v;
}

/// |Phi+><Phi+| with the normalized maximally entangled vector.
inline ComplexMatrix max_entangled_state(std::size_t d) {
  const ComplexVector v = maximally_entangled_vector(d) / std::sqrt(static_cast<double>(d));
  return v * v.adjoint();
}

inline ComplexMatrix swap_over(std::size_t d) { return swap_operator(d) / static_cast<double>(d); }

}  // namespace poptlab::testing
