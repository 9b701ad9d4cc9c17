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

// poptlab: command-line front end.
//
// Exit codes:
//   classify  0 quantum_state, 10 popt_only, 20 not_popt, 30 invalid input
//   extend    40 inconsistent oracle, 41 incomplete grid
//   check     2 constraint violated
//   any       1 I/O or parse error, 30 invalid input

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "poptlab/bell.hpp"
#include "poptlab/classify.hpp"
#include "poptlab/dilation.hpp"
#include "poptlab/errors.hpp"
#include "poptlab/fixtures.hpp"
#include "poptlab/measures.hpp"

namespace {

using poptlab::Json;

constexpr int kExitIo = 1;
constexpr int kExitViolation = 2;
constexpr int kExitInvalid = 30;
constexpr int kExitInconsistent = 40;
constexpr int kExitIncomplete = 41;

struct RunConfig {
  poptlab::Tolerances tol;
  double tol_constraint = poptlab::kTabTol;
  std::size_t restarts = 64;
  std::size_t samples = 50;
  std::size_t contexts = 200;
  std::uint64_t seed = 0;
  std::string format = "json";
  std::string output;
};

/// I/O and parse failures, reported with exit code 1.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Json read_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::ostringstream os;
    os << path << ":" << line << ":" << column << ": JSON parse error: " << e.what();
    throw IoError(os.str());
  }
}

std::string render_text(const Json& j, const std::string& prefix = "") {
  std::ostringstream os;
  for (const auto& [key, value] : j.items()) {
    if (value.is_object() && !value.contains("re")) {
      os << render_text(value, prefix + key + ".");
    } else if (value.is_string()) {
      os << prefix << key << ": " << value.get<std::string>() << "\n";
    } else {
      os << prefix << key << ": " << value.dump() << "\n";
    }
  }
  return os.str();
}

/// Writes the whole report in one go; files go through a rename.
void emit(const Json& report, const RunConfig& cfg) {
  const std::string body = cfg.format == "text" ? render_text(report) : report.dump(2) + "\n";
  if (cfg.output.empty()) {
    std::cout << body << std::flush;
    return;
  }
  const std::string tmp = cfg.output + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + tmp + "'");
    out << body;
    if (!out.flush()) throw IoError("cannot write '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, cfg.output, ec);
  if (ec) throw IoError("cannot move report to '" + cfg.output + "': " + ec.message());
}

poptlab::ClassifyConfig classify_config(const RunConfig& cfg) {
  poptlab::ClassifyConfig c;
  c.tol = cfg.tol;
  c.popt_restarts = cfg.restarts;
  c.samples = cfg.samples;
  c.seed = cfg.seed;
  return c;
}

int cmd_classify(const std::string& path, const RunConfig& cfg) {
  const poptlab::StateFile f = poptlab::state_from_json(read_json(path));
  const auto report = poptlab::classify(f.rho, f.dims, classify_config(cfg));
  emit(poptlab::classification_report_to_json(report), cfg);
  switch (report.verdict) {
    case poptlab::Verdict::quantum_state:
      return 0;
    case poptlab::Verdict::popt_only:
      return 10;
    case poptlab::Verdict::not_popt:
      return 20;
    case poptlab::Verdict::invalid:
      break;
  }
  return kExitInvalid;
}

/// Reconstruction-family projectors missing from a side's settings.
std::vector<std::string> missing_queries(const std::vector<poptlab::PVM>& pvms, std::size_t d,
                                         const char* side) {
  std::vector<std::string> missing;
  if (d < 2) return missing;
  const auto family = poptlab::reconstruction_family(d);
  for (std::size_t k = 0; k < family.size(); ++k) {
    if (family[k].rank() == d) continue;  // identity: answered by marginals
    bool found = false;
    for (const auto& pvm : pvms)
      for (const auto& q : pvm.elements())
        if (poptlab::max_norm(q.matrix() - family[k].matrix()) <= 1e-9) found = true;
    if (!found) missing.push_back(std::string(side) + " reconstruction projector " + std::to_string(k));
  }
  return missing;
}

int cmd_extend(const std::string& path, const RunConfig& cfg, bool allow_dim2) {
  poptlab::Scenario s = poptlab::scenario_from_json(read_json(path));
  auto missing = missing_queries(s.left_pvms, s.dims.d1, "left");
  const auto right = missing_queries(s.right_pvms, s.dims.d2, "right");
  missing.insert(missing.end(), right.begin(), right.end());
  if (!missing.empty()) {
    std::cerr << "extend: table does not cover the reconstruction grid; missing:\n";
    for (const auto& m : missing) std::cerr << "  " << m << "\n";
    emit(Json{{"error", "incomplete grid"}, {"missing", missing}}, cfg);
    return kExitIncomplete;
  }
  const poptlab::Dims dims = s.dims;
  const poptlab::ProductMeasure mu = poptlab::TabulatedMeasure(std::move(s), cfg.tol_constraint);
  poptlab::GleasonOptions opts;
  opts.allow_dim2 = allow_dim2;
  try {
    const auto result = poptlab::gleason_extend(poptlab::oracle_of(mu), dims, opts);
    Json out = poptlab::state_to_json(result.rho.matrix(), dims);
    out["residual"] = result.residual;
    out["condition_number"] = result.condition_number;
    out["warnings"] = result.warnings;
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
    emit(out, cfg);
    return 0;
  } catch (const poptlab::InconsistentOracle& e) {
    std::cerr << "extend: " << e.what() << "\n";
    emit(Json{{"error", "inconsistent oracle"}, {"residual", e.residual()}}, cfg);
    return kExitInconsistent;
  } catch (const poptlab::UnsupportedQuery& e) {
    std::cerr << "extend: " << e.what() << "\n";
    emit(Json{{"error", "incomplete grid"}, {"missing", Json::array({e.what()})}}, cfg);
    return kExitIncomplete;
  }
}

int cmd_tabulate(const std::string& path, const RunConfig& cfg) {
  const poptlab::StateFile f = poptlab::state_from_json(read_json(path));
  const auto s = poptlab::tabulate(f.rho, f.dims, poptlab::tomography_settings(f.dims.d1),
                                   poptlab::tomography_settings(f.dims.d2));
  emit(poptlab::scenario_to_json(s), cfg);
  return 0;
}

int cmd_dilate(const std::string& path, const RunConfig& cfg) {
  const Json input = read_json(path);
  if (input.is_object() && input.contains("povm")) {
    emit(poptlab::dilation_to_json(poptlab::naimark_dilate(poptlab::povm_from_json(input))), cfg);
    return 0;
  }
  const poptlab::StateFile f = poptlab::state_from_json(input);
  const auto phi = poptlab::map_from_state(poptlab::HermitianOperator(f.rho, cfg.tol.herm), f.dims);
  try {
    const auto d = poptlab::stinespring_dilate(poptlab::compose_transpose(phi), true, cfg.tol.eig);
    emit(poptlab::dilation_to_json(d), cfg);
    return 0;
  } catch (const poptlab::NotCompletelyPositive& e) {
    std::cerr << "dilate: " << e.what() << "\n";
    emit(Json{{"error", "not completely positive"}, {"min_eigenvalue", e.min_eigenvalue()}}, cfg);
    return kExitViolation;
  }
}

int cmd_chsh(const std::string& path, const RunConfig& cfg) {
  const poptlab::StateFile f = poptlab::state_from_json(read_json(path));
  poptlab::ChshOptions opts;
  opts.restarts = cfg.restarts;
  opts.seed = cfg.seed;
  const auto result =
      poptlab::optimize_chsh(poptlab::HermitianOperator(f.rho, cfg.tol.herm), f.dims, opts);
  emit(poptlab::chsh_result_to_json(result), cfg);
  return 0;
}

int cmd_check(const std::string& which, const std::string& path, const RunConfig& cfg) {
  const Json input = read_json(path);
  const bool tabulated = input.is_object() && input.contains("table");
  if (which == "popt" || which == "psd") {
    if (tabulated) throw poptlab::InvalidInput("check " + which + " needs a state file");
    const poptlab::StateFile f = poptlab::state_from_json(input);
    const poptlab::HermitianOperator rho(f.rho, cfg.tol.herm);
    if (which == "psd") {
      const auto r = poptlab::is_psd(rho, cfg.tol.eig);
      emit(Json{{"psd", r.psd},
                {"min_eigenvalue", r.min_eigenvalue},
                {"witness", poptlab::vector_to_json(r.witness)}},
           cfg);
      return r.psd ? 0 : kExitViolation;
    }
    poptlab::PoptOptions opts;
    opts.restarts = cfg.restarts;
    opts.tol = cfg.tol.popt;
    opts.seed = cfg.seed;
    const auto c = poptlab::check_popt(rho, f.dims, opts);
    emit(poptlab::popt_certificate_to_json(c), cfg);
    return c.is_popt ? 0 : kExitViolation;
  }

  poptlab::ConstraintReport report;
  poptlab::ContextSamplePlan plan;
  plan.random_contexts = cfg.contexts;
  plan.seed = cfg.seed;
  const bool signalling = which == "no-signalling";
  if (tabulated) {
    // Range and normalization are not required to expose a violation.
    const poptlab::Scenario s = poptlab::scenario_from_json(input);
    report = signalling ? poptlab::check_no_signalling(s, cfg.tol_constraint)
                        : poptlab::check_no_disturbance(s, cfg.tol_constraint);
  } else {
    const poptlab::StateFile f = poptlab::state_from_json(input);
    const poptlab::ProductMeasure mu =
        poptlab::OperatorBackedMeasure(poptlab::HermitianOperator(f.rho, cfg.tol.herm), f.dims);
    report = signalling ? poptlab::check_no_signalling(mu, plan, cfg.tol_constraint)
                        : poptlab::check_no_disturbance(mu, plan, cfg.tol_constraint);
  }
  if (!report.satisfied) std::cerr << "check " << which << ": violated: " << report.witness << "\n";
  emit(poptlab::constraint_report_to_json(report), cfg);
  return report.satisfied ? 0 : kExitViolation;
}

int cmd_generate(const std::string& kind, std::size_t d1, std::size_t d2, double param,
                 const std::string& inner, const RunConfig& cfg) {
  poptlab::GeneratorSpec spec;
  spec.kind = poptlab::fixture_kind_from_string(kind);
  spec.dims = {d1, d2 == 0 ? d1 : d2};
  spec.seed = cfg.seed;
  spec.param = param;
  if (!inner.empty()) spec.inner = poptlab::fixture_kind_from_string(inner);
  emit(poptlab::generated_to_json(poptlab::generate(spec)), cfg);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"poptlab: product measures, POPT operators and quantum states"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;

  app.add_option("--tol-herm", cfg.tol.herm, "Hermiticity tolerance")
      ->envname("POPTLAB_TOL_HERM")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--tol-eig", cfg.tol.eig, "eigenvalue (PSD) tolerance")
      ->envname("POPTLAB_TOL_EIG")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--tol-popt", cfg.tol.popt, "POPT tolerance")
      ->envname("POPTLAB_TOL_POPT")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--tol-orientation", cfg.tol.orientation, "orientation defect tolerance")
      ->envname("POPTLAB_TOL_ORIENTATION")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--tol-constraint", cfg.tol_constraint, "constraint check tolerance")
      ->envname("POPTLAB_TOL_CONSTRAINT")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--restarts", cfg.restarts, "optimizer restarts")
      ->envname("POPTLAB_RESTARTS")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--samples", cfg.samples, "sampled pairs per orientation verdict")
      ->envname("POPTLAB_SAMPLES")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--contexts", cfg.contexts, "random contexts for constraint checks")
      ->envname("POPTLAB_CONTEXTS")->capture_default_str();
  app.add_option("--seed", cfg.seed, "random seed")->envname("POPTLAB_SEED")->capture_default_str();
  app.add_option("--format", cfg.format, "report format")
      ->envname("POPTLAB_FORMAT")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
  app.add_option("-o,--output", cfg.output, "write the report to a file instead of stdout");

  std::string path;
  std::string which;
  std::string kind;
  std::string inner;
  std::size_t d1 = 0;
  std::size_t d2 = 0;
  double param = 0.0;
  bool allow_dim2 = false;

  auto* classify = app.add_subcommand("classify", "classify a state file");
  classify->add_option("path", path, "state JSON")->required();
  auto* extend = app.add_subcommand("extend", "reconstruct an operator from a tabulated grid");
  extend->add_option("path", path, "scenario JSON")->required();
  extend->add_flag("--allow-dim2", allow_dim2, "accept qubit factors (warning)");
  auto* tabulate = app.add_subcommand("tabulate", "tabulate a state on the reconstruction grid");
  tabulate->add_option("path", path, "state JSON")->required();
  auto* dilate = app.add_subcommand("dilate", "Naimark dilation of a POVM or Stinespring dilation of a state's map");
  dilate->add_option("path", path, "POVM or state JSON")->required();
  auto* chsh = app.add_subcommand("chsh", "optimize the CHSH value of a state");
  chsh->add_option("path", path, "state JSON")->required();
  auto* check = app.add_subcommand("check", "run one constraint check");
  check->add_option("which", which, "constraint")
      ->required()->check(CLI::IsMember({"no-signalling", "no-disturbance", "popt", "psd"}));
  check->add_option("path", path, "state or scenario JSON")->required();
  auto* generate = app.add_subcommand("generate", "generate a fixture");
  generate->add_option("kind", kind, "fixture kind")->required();
  generate->add_option("d1", d1, "first dimension")->required();
  generate->add_option("d2", d2, "second dimension (default d1)");
  generate->add_option("--param", param, "werner weight or planted magnitude");
  generate->add_option("--inner", inner, "inner kind for pt_of");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*classify) return cmd_classify(path, cfg);
    if (*extend) return cmd_extend(path, cfg, allow_dim2);
    if (*tabulate) return cmd_tabulate(path, cfg);
    if (*dilate) return cmd_dilate(path, cfg);
    if (*chsh) return cmd_chsh(path, cfg);
    if (*check) return cmd_check(which, path, cfg);
    if (*generate) return cmd_generate(kind, d1, d2, param, inner, cfg);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const Json::exception& e) {
    std::cerr << "error: malformed input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const poptlab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitIo;
}
