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

// Seeded random ensembles. All generators take the engine by reference so
// callers control stream derivation; identical seeds give identical output.

#include <cstdint>
#include <random>

#include "poptlab/operator_core.hpp"

namespace poptlab {

using Rng = std::mt19937_64;

/// Entries i.i.d. standard complex Gaussian (real and imaginary parts N(0, 1/2)).
ComplexMatrix gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng);

/// Haar unitary: QR of a complex Gaussian matrix with the R diagonal phases
/// pushed into Q.
ComplexMatrix haar_unitary(std::size_t dim, Rng& rng);

/// Haar-random unit vector.
ComplexVector haar_vector(std::size_t dim, Rng& rng);

/// Gaussian unitary ensemble sample, (G + G^dag)/2.
HermitianOperator gaussian_hermitian(std::size_t dim, Rng& rng);

/// Ginibre mixed state G G^dag / tr(G G^dag); full rank almost surely.
HermitianOperator ginibre_state(std::size_t dim, Rng& rng);

/// Random Hermitian operator with unit trace; generally indefinite.
HermitianOperator random_unit_trace_hermitian(std::size_t dim, Rng& rng);

}  // namespace poptlab
