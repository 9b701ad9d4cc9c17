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

// Contexts (commutative subalgebras) of L(H), their projection-valued
// measures, and the componentwise order on product contexts.

#include <cstdint>
#include <vector>

#include "poptlab/json_io.hpp"
#include "poptlab/operator_core.hpp"
#include "poptlab/sampling.hpp"

namespace poptlab {

inline constexpr double kContextTol = 1e-9;

using Partition = std::vector<std::vector<std::size_t>>;

/// Throws PartitionError unless the blocks are nonempty, disjoint and cover
/// {0, ..., n - 1}.
void validate_partition(const Partition& partition, std::size_t n);

/// An orthonormal basis together with a partition of its index set. The
/// algebra is spanned by the block projectors; a single block is the trivial
/// context C1.
class Context {
 public:
  Context(ComplexMatrix basis, Partition partition);

  static Context computational(std::size_t dim, const std::vector<std::size_t>& shape);
  static Context fourier(std::size_t dim, const std::vector<std::size_t>& shape);
  static Context trivial(std::size_t dim);

  std::size_t dim() const { return static_cast<std::size_t>(basis_.rows()); }
  const ComplexMatrix& basis() const { return basis_; }
  const Partition& partition() const { return partition_; }
  std::size_t blocks() const { return partition_.size(); }

  /// Same basis with the partition blocks merged according to `merge`.
  Context merged(const Partition& merge) const;

 private:
  ComplexMatrix basis_;
  Partition partition_;
};

/// Mutually orthogonal projections summing to the identity. Outcome labels
/// are the indices 0..k-1.
class PVM {
 public:
  explicit PVM(std::vector<Projection> elements, double tol = kContextTol);

  const std::vector<Projection>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  std::size_t dim() const { return elements_.front().dim(); }
  const Projection& operator[](std::size_t i) const { return elements_[i]; }

 private:
  std::vector<Projection> elements_;
};

struct ProductContext {
  Context left;
  Context right;
};

/// Consecutive-block partition for the given block sizes.
Partition partition_from_shape(const std::vector<std::size_t>& shape);

/// Haar basis with the given block sizes; deterministic under seed.
Context random_context(std::size_t dim, const std::vector<std::size_t>& shape,
                       std::uint64_t seed);

PVM pvm_of_context(const Context& v);

/// True iff every projector of `coarse` is a sum of projectors of `fine`.
bool refines(const Context& fine, const Context& coarse, double tol = kContextTol);

/// (a.left, a.right) <= (b.left, b.right) componentwise, i.e. each component
/// of `a` is a subalgebra of the matching component of `b`.
bool product_order_leq(const ProductContext& a, const ProductContext& b,
                       double tol = kContextTol);

/// Equality as sets of projectors (order-insensitive).
bool same_context(const Context& a, const Context& b, double tol = kContextTol);

PVM coarse_grain(const PVM& pvm, const Partition& merge);

/// Sampling plan for checks quantified over all contexts: structured
/// families followed by `random_contexts` Haar contexts with random shapes.
struct ContextSamplePlan {
  std::size_t random_contexts = 200;
  std::uint64_t seed = 0;
  bool structured = true;
};

std::vector<Context> sample_contexts(std::size_t dim, const ContextSamplePlan& plan);

/// Two maximal contexts that share exactly the rank-1 projector onto their
/// first basis vector, plus the two-block sub-context {q, 1 - q} they share.
struct OverlappingContexts {
  Context first;
  Context second;
  Context shared;
};

OverlappingContexts overlapping_contexts(std::size_t dim, Rng& rng);

Json context_to_json(const Context& v);
Context context_from_json(const Json& j);
Json pvm_to_json(const PVM& pvm);
PVM pvm_from_json(const Json& j);

}  // namespace poptlab
