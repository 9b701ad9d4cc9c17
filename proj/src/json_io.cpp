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

#include "poptlab/json_io.hpp"

#include <cmath>
#include <string>

#include "poptlab/errors.hpp"

namespace poptlab {

namespace {

std::vector<double> finite_array(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw InvalidInput(std::string("expected array field \"") + key + "\"");
  }
  std::vector<double> out;
  out.reserve(j.at(key).size());
  for (const auto& x : j.at(key)) {
    if (!x.is_number()) throw InvalidInput(std::string("non-numeric entry in \"") + key + "\"");
    const double v = x.get<double>();
    if (!std::isfinite(v)) throw InvalidInput("non-finite matrix entry");
    out.push_back(v);
  }
  return out;
}

}  // namespace

Json matrix_to_json(const ComplexMatrix& m) {
  Json re = Json::array();
  Json im = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      re.push_back(m(i, k).real());
      im.push_back(m(i, k).imag());
    }
  return Json{{"dims", {m.rows(), m.cols()}}, {"re", re}, {"im", im}};
}

ComplexMatrix matrix_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("dims") || !j.at("dims").is_array() ||
      j.at("dims").size() != 2) {
    throw InvalidInput("matrix JSON: expected {\"dims\": [r, c], \"re\": [...], \"im\": [...]}");
  }
  const auto rows = j.at("dims")[0].get<long long>();
  const auto cols = j.at("dims")[1].get<long long>();
  if (rows <= 0 || cols <= 0) throw InvalidInput("matrix JSON: dims must be positive");
  const std::vector<double> re = finite_array(j, "re");
  const std::vector<double> im = finite_array(j, "im");
  const auto n = static_cast<std::size_t>(rows * cols);
  if (re.size() != n || im.size() != n) {
    throw InvalidInput("matrix JSON: entry count does not match dims");
  }
  ComplexMatrix m(rows, cols);
  for (long long i = 0; i < rows; ++i)
    for (long long k = 0; k < cols; ++k) {
      const auto idx = static_cast<std::size_t>(i * cols + k);
      m(i, k) = Complex(re[idx], im[idx]);
    }
  return m;
}

Json vector_to_json(const ComplexVector& v) {
  Json re = Json::array();
  Json im = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    re.push_back(v(i).real());
    im.push_back(v(i).imag());
  }
  return Json{{"re", re}, {"im", im}};
}

ComplexVector vector_from_json(const Json& j) {
  if (!j.is_object()) throw InvalidInput("vector JSON: expected {\"re\": [...], \"im\": [...]}");
  const std::vector<double> re = finite_array(j, "re");
  const std::vector<double> im = finite_array(j, "im");
  if (re.size() != im.size()) throw InvalidInput("vector JSON: re/im length mismatch");
  ComplexVector v(static_cast<Eigen::Index>(re.size()));
  for (std::size_t i = 0; i < re.size(); ++i) v(static_cast<Eigen::Index>(i)) = Complex(re[i], im[i]);
  return v;
}

Json real_vector_to_json(const RealVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

}  // namespace poptlab
