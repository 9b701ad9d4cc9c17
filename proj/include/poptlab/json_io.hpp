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

// Repo-wide JSON encodings for matrices and vectors:
//   matrix: {"dims": [r, c], "re": [row-major reals], "im": [row-major reals]}
//   vector: {"re": [...], "im": [...]}

#include "json.hpp"

#include "poptlab/operator_core.hpp"

namespace poptlab {

using Json = nlohmann::json;

Json matrix_to_json(const ComplexMatrix& m);
/// Throws InvalidInput on a malformed object or non-finite values.
ComplexMatrix matrix_from_json(const Json& j);

Json vector_to_json(const ComplexVector& v);
ComplexVector vector_from_json(const Json& j);

Json real_vector_to_json(const RealVector& v);

}  // namespace poptlab
