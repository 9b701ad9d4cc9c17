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

#include "poptlab/contexts.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "poptlab/errors.hpp"

namespace poptlab {

void validate_partition(const Partition& partition, std::size_t n) {
  std::vector<bool> seen(n, false);
  std::size_t covered = 0;
  for (const auto& block : partition) {
    if (block.empty()) throw PartitionError("partition: empty block");
    for (std::size_t idx : block) {
      if (idx >= n) {
        std::ostringstream os;
        os << "partition: index " << idx << " out of range [0, " << n << ")";
        throw PartitionError(os.str());
      }
      if (seen[idx]) throw PartitionError("partition: blocks are not disjoint");
      seen[idx] = true;
      ++covered;
    }
  }
  if (covered != n) throw PartitionError("partition: blocks do not cover the index set");
}

Partition partition_from_shape(const std::vector<std::size_t>& shape) {
  Partition p;
  std::size_t next = 0;
  for (std::size_t size : shape) {
    if (size == 0) throw PartitionError("partition shape: zero block size");
    std::vector<std::size_t> block(size);
    for (auto& idx : block) idx = next++;
    p.push_back(std::move(block));
  }
  return p;
}

namespace {

std::size_t shape_total(const std::vector<std::size_t>& shape) {
  std::size_t total = 0;
  for (std::size_t s : shape) total += s;
  return total;
}

void require_shape(std::size_t dim, const std::vector<std::size_t>& shape) {
  if (shape_total(shape) != dim) {
    std::ostringstream os;
    os << "partition shape sums to " << shape_total(shape) << ", expected " << dim;
    throw PartitionError(os.str());
  }
}

std::vector<std::size_t> random_shape(std::size_t dim, Rng& rng) {
  // Random composition of dim; biased toward maximal contexts.
  std::bernoulli_distribution cut(0.75);
  std::vector<std::size_t> shape{1};
  for (std::size_t i = 1; i < dim; ++i) {
    if (cut(rng)) {
      shape.push_back(1);
    } else {
      ++shape.back();
    }
  }
  return shape;
}

}  // namespace

Context::Context(ComplexMatrix basis, Partition partition)
    : basis_(std::move(basis)), partition_(std::move(partition)) {
  if (basis_.rows() != basis_.cols() || basis_.rows() == 0) {
    throw DimensionError("Context: basis must be a nonempty square matrix");
  }
  require_finite(basis_, "Context basis");
  const double defect =
      max_norm(basis_.adjoint() * basis_ - poptlab::identity(dim()));
  if (defect > kContextTol) {
    std::ostringstream os;
    os << "Context: basis is not unitary (defect " << defect << ")";
    throw InvalidInput(os.str());
  }
  validate_partition(partition_, dim());
}

Context Context::computational(std::size_t dim, const std::vector<std::size_t>& shape) {
  require_shape(dim, shape);
  return Context(poptlab::identity(dim), partition_from_shape(shape));
}

Context Context::fourier(std::size_t dim, const std::vector<std::size_t>& shape) {
  require_shape(dim, shape);
  const auto n = static_cast<Eigen::Index>(dim);
  ComplexMatrix f(n, n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(dim));
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k)
      f(j, k) = std::polar(norm, 2.0 * std::numbers::pi * static_cast<double>(j * k) /
                                     static_cast<double>(dim));
  return Context(f, partition_from_shape(shape));
}

Context Context::trivial(std::size_t dim) {
  return computational(dim, {dim});
}

Context Context::merged(const Partition& merge) const {
  validate_partition(merge, blocks());
  Partition out;
  for (const auto& group : merge) {
    std::vector<std::size_t> block;
    for (std::size_t b : group)
      block.insert(block.end(), partition_[b].begin(), partition_[b].end());
    out.push_back(std::move(block));
  }
  return Context(basis_, std::move(out));
}

PVM::PVM(std::vector<Projection> elements, double tol) : elements_(std::move(elements)) {
  if (elements_.empty()) throw InvalidInput("PVM: no elements");
  const std::size_t d = elements_.front().dim();
  ComplexMatrix sum = ComplexMatrix::Zero(static_cast<Eigen::Index>(d),
                                          static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (elements_[i].dim() != d) throw DimensionError("PVM: elements of different dimension");
    sum += elements_[i].matrix();
    for (std::size_t j = i + 1; j < elements_.size(); ++j) {
      if (max_norm(elements_[i].matrix() * elements_[j].matrix()) > tol) {
        throw InvalidInput("PVM: elements are not mutually orthogonal");
      }
    }
  }
  if (max_norm(sum - poptlab::identity(d)) > tol) {
    throw InvalidInput("PVM: elements do not sum to the identity");
  }
}

Context random_context(std::size_t dim, const std::vector<std::size_t>& shape,
                       std::uint64_t seed) {
  require_shape(dim, shape);
  Rng rng(seed);
  return Context(haar_unitary(dim, rng), partition_from_shape(shape));
}

PVM pvm_of_context(const Context& v) {
  std::vector<Projection> elements;
  elements.reserve(v.blocks());
  for (const auto& block : v.partition()) {
    ComplexMatrix cols(v.basis().rows(), static_cast<Eigen::Index>(block.size()));
    for (std::size_t k = 0; k < block.size(); ++k)
      cols.col(static_cast<Eigen::Index>(k)) = v.basis().col(static_cast<Eigen::Index>(block[k]));
    elements.push_back(Projection::onto_columns(cols));
  }
  return PVM(std::move(elements));
}

bool refines(const Context& fine, const Context& coarse, double tol) {
  if (fine.dim() != coarse.dim()) throw DimensionError("refines: dimension mismatch");
  const PVM f = pvm_of_context(fine);
  const PVM c = pvm_of_context(coarse);
  for (const Projection& cq : c.elements()) {
    ComplexMatrix sum = ComplexMatrix::Zero(cq.matrix().rows(), cq.matrix().cols());
    for (const Projection& fq : f.elements()) {
      const ComplexMatrix overlap = cq.matrix() * fq.matrix();
      if (max_norm(overlap - fq.matrix()) <= tol) {
        sum += fq.matrix();
      } else if (max_norm(overlap) > tol) {
        return false;
      }
    }
    if (max_norm(sum - cq.matrix()) > tol) return false;
  }
  return true;
}

bool product_order_leq(const ProductContext& a, const ProductContext& b, double tol) {
  return refines(b.left, a.left, tol) && refines(b.right, a.right, tol);
}

bool same_context(const Context& a, const Context& b, double tol) {
  return refines(a, b, tol) && refines(b, a, tol);
}

PVM coarse_grain(const PVM& pvm, const Partition& merge) {
  validate_partition(merge, pvm.size());
  std::vector<Projection> out;
  out.reserve(merge.size());
  for (const auto& group : merge) {
    ComplexMatrix sum = ComplexMatrix::Zero(pvm[0].matrix().rows(), pvm[0].matrix().cols());
    for (std::size_t idx : group) sum += pvm[idx].matrix();
    out.emplace_back(HermitianOperator::symmetrized(sum));
  }
  return PVM(std::move(out));
}

std::vector<Context> sample_contexts(std::size_t dim, const ContextSamplePlan& plan) {
  std::vector<Context> out;
  if (plan.structured) {
    const std::vector<std::size_t> maximal(dim, 1);
    out.push_back(Context::computational(dim, maximal));
    out.push_back(Context::fourier(dim, maximal));
    if (dim > 1) {
      std::vector<std::size_t> split{dim - 1, 1};
      out.push_back(Context::computational(dim, split));
      out.push_back(Context::fourier(dim, split));
    }
    out.push_back(Context::trivial(dim));
  }
  Rng rng(plan.seed);
  for (std::size_t k = 0; k < plan.random_contexts; ++k) {
    const auto shape = random_shape(dim, rng);
    out.emplace_back(haar_unitary(dim, rng), partition_from_shape(shape));
  }
  return out;
}

OverlappingContexts overlapping_contexts(std::size_t dim, Rng& rng) {
  if (dim < 2) throw DimensionError("overlapping_contexts: need dim >= 2");
  const ComplexMatrix u = haar_unitary(dim, rng);
  const auto rest = static_cast<Eigen::Index>(dim - 1);
  ComplexMatrix rotated = u;
  rotated.rightCols(rest) = u.rightCols(rest) * haar_unitary(dim - 1, rng);
  const std::vector<std::size_t> maximal(dim, 1);
  return {Context(u, partition_from_shape(maximal)),
          Context(rotated, partition_from_shape(maximal)),
          Context(u, partition_from_shape({1, dim - 1}))};
}

Json context_to_json(const Context& v) {
  return Json{{"dim", v.dim()}, {"basis", matrix_to_json(v.basis())}, {"partition", v.partition()}};
}

Context context_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("basis") || !j.contains("partition")) {
    throw InvalidInput("context JSON: expected {\"dim\", \"basis\", \"partition\"}");
  }
  Context v(matrix_from_json(j.at("basis")), j.at("partition").get<Partition>());
  if (j.contains("dim") && j.at("dim").get<std::size_t>() != v.dim()) {
    throw DimensionError("context JSON: dim does not match basis");
  }
  return v;
}

Json pvm_to_json(const PVM& pvm) {
  Json out = Json::array();
  for (const auto& p : pvm.elements()) out.push_back(matrix_to_json(p.matrix()));
  return out;
}

PVM pvm_from_json(const Json& j) {
  if (!j.is_array()) throw InvalidInput("PVM JSON: expected an array of matrices");
  std::vector<Projection> elements;
  for (const auto& m : j) elements.emplace_back(HermitianOperator(matrix_from_json(m), 1e-9), 1e-9);
  return PVM(std::move(elements));
}

}  // namespace poptlab
