// Copyright 2026 qsd Contributors
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

#include "qsd/problem_io.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "qsd/helstrom.hpp"

namespace qsd {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) {
  throw std::invalid_argument(message);
}

void reject_unknown_keys(const json& object, const std::set<std::string>& known,
                         const std::string& where) {
  for (const auto& item : object.items()) {
    if (!known.count(item.key())) {
      fail("unknown key \"" + item.key() + "\" in " + where);
    }
  }
}

const json& require_key(const json& object, const std::string& key,
                        const std::string& where) {
  auto it = object.find(key);
  if (it == object.end()) {
    fail("missing key \"" + key + "\" in " + where);
  }
  return *it;
}

Matrix parse_matrix(const json& entries, Eigen::Index dim, const std::string& where) {
  if (!entries.is_array() || entries.size() != static_cast<std::size_t>(dim * dim)) {
    fail(where + " must be a row-major array of " + std::to_string(dim * dim) +
         " [re, im] pairs");
  }
  Matrix m(dim, dim);
  for (Eigen::Index a = 0; a < dim; ++a) {
    for (Eigen::Index b = 0; b < dim; ++b) {
      const json& pair = entries[static_cast<std::size_t>(a * dim + b)];
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
          !pair[1].is_number()) {
        fail(where + " entry " + std::to_string(a * dim + b) +
             " must be a [re, im] pair");
      }
      m(a, b) = Complex(pair[0].get<double>(), pair[1].get<double>());
    }
  }
  return m;
}

json matrix_to_json(const Matrix& m) {
  json entries = json::array();
  for (Eigen::Index a = 0; a < m.rows(); ++a) {
    for (Eigen::Index b = 0; b < m.cols(); ++b) {
      entries.push_back({m(a, b).real(), m(a, b).imag()});
    }
  }
  return entries;
}

json parse_text(const std::string& text, const std::string& what) {
  json parsed = json::parse(text, nullptr, false);
  if (parsed.is_discarded()) {
    fail(what + " is not valid JSON");
  }
  return parsed;
}

}  // namespace

ProblemFile parse_problem_json(const std::string& text) {
  const json doc = parse_text(text, "problem document");
  if (!doc.is_object()) fail("problem document must be a JSON object");
  reject_unknown_keys(doc,
                      {"dimension", "num_states", "num_prior_outcomes", "prior_povm",
                       "frequencies", "true_states", "num_design_outcomes"},
                      "problem document");

  const auto dim = require_key(doc, "dimension", "problem document").get<Eigen::Index>();
  const auto num_states =
      require_key(doc, "num_states", "problem document").get<Eigen::Index>();
  const auto num_outcomes =
      require_key(doc, "num_prior_outcomes", "problem document").get<Eigen::Index>();
  if (dim < 1) fail("\"dimension\" must be a positive integer");
  if (num_states < 1) fail("\"num_states\" must be a positive integer");
  if (num_outcomes < 1) fail("\"num_prior_outcomes\" must be a positive integer");

  const json& povm_json = require_key(doc, "prior_povm", "problem document");
  if (!povm_json.is_array() ||
      povm_json.size() != static_cast<std::size_t>(num_outcomes)) {
    fail("\"prior_povm\" must list num_prior_outcomes elements");
  }
  std::vector<HermitianOperator> elements;
  for (std::size_t k = 0; k < povm_json.size(); ++k) {
    const std::string where = "prior_povm element " + std::to_string(k);
    try {
      elements.emplace_back(parse_matrix(povm_json[k], dim, where));
    } catch (const std::invalid_argument& e) {
      fail(where + ": " + e.what());
    }
  }
  PovmSet prior = [&]() -> PovmSet {
    try {
      return PovmSet(std::move(elements));
    } catch (const std::invalid_argument& e) {
      fail(std::string("prior POVM rejected: ") + e.what());
    }
  }();

  const json& freq_json = require_key(doc, "frequencies", "problem document");
  if (!freq_json.is_array() || freq_json.size() != static_cast<std::size_t>(num_states)) {
    fail("\"frequencies\" must have one row per state");
  }
  Eigen::MatrixXd f(num_states, num_outcomes);
  for (Eigen::Index i = 0; i < num_states; ++i) {
    const json& row = freq_json[static_cast<std::size_t>(i)];
    if (!row.is_array() || row.size() != static_cast<std::size_t>(num_outcomes)) {
      fail("frequencies row " + std::to_string(i) + " must have " +
           std::to_string(num_outcomes) + " entries");
    }
    for (Eigen::Index k = 0; k < num_outcomes; ++k) {
      const json& cell = row[static_cast<std::size_t>(k)];
      if (!cell.is_number()) {
        fail("frequencies entry (" + std::to_string(i) + "," + std::to_string(k) +
             ") must be a number");
      }
      f(i, k) = cell.get<double>();
    }
  }
  FrequencyTable frequencies = [&]() -> FrequencyTable {
    try {
      return FrequencyTable(std::move(f));
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
  }();

  Eigen::Index num_design = num_states;
  if (auto it = doc.find("num_design_outcomes"); it != doc.end()) {
    num_design = it->get<Eigen::Index>();
  }
  MlseProblem problem(std::move(prior), std::move(frequencies), num_design);

  std::optional<std::vector<DensityMatrix>> true_states;
  if (auto it = doc.find("true_states"); it != doc.end()) {
    if (!it->is_array() || it->size() != static_cast<std::size_t>(num_states)) {
      fail("\"true_states\" must list num_states matrices");
    }
    std::vector<DensityMatrix> states;
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string where = "true_states entry " + std::to_string(i);
      try {
        states.emplace_back(HermitianOperator(parse_matrix((*it)[i], dim, where)));
      } catch (const std::invalid_argument& e) {
        fail(where + ": " + e.what());
      }
    }
    true_states = std::move(states);
  }
  return ProblemFile{std::move(problem), std::move(true_states)};
}

ProblemFile read_problem_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::invalid_argument("cannot open problem file " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_problem_json(buffer.str());
}

std::string problem_to_json(const MlseProblem& problem,
                            const std::vector<DensityMatrix>* true_states) {
  json doc;
  doc["dimension"] = problem.dim();
  doc["num_states"] = problem.num_states();
  doc["num_prior_outcomes"] = problem.num_prior_outcomes();
  json povm = json::array();
  for (const auto& element : problem.prior_povm().elements()) {
    povm.push_back(matrix_to_json(element.matrix()));
  }
  doc["prior_povm"] = std::move(povm);
  json freq = json::array();
  for (Eigen::Index i = 0; i < problem.num_states(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < problem.num_prior_outcomes(); ++k) {
      row.push_back(problem.frequencies().matrix()(i, k));
    }
    freq.push_back(std::move(row));
  }
  doc["frequencies"] = std::move(freq);
  if (true_states) {
    json states = json::array();
    for (const auto& rho : *true_states) {
      states.push_back(matrix_to_json(rho.matrix()));
    }
    doc["true_states"] = std::move(states);
  }
  return doc.dump(2) + "\n";
}

void write_problem_file(const std::filesystem::path& path, const MlseProblem& problem,
                        const std::vector<DensityMatrix>* true_states) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  out << problem_to_json(problem, true_states);
  if (!out) {
    throw std::runtime_error("failed writing " + path.string());
  }
}

SolveReport solve_problem_file(const std::filesystem::path& path,
                               const MlseOptions& options) {
  ProblemFile file = read_problem_file(path);
  MlseResult result = run_mlse(file.problem, options);

  SolveReport report{std::move(result), {}, std::nullopt, std::nullopt, std::nullopt};
  for (const auto& rho : report.result.est_states) {
    report.est_purities.push_back(rho.purity());
  }
  if (file.true_states) {
    std::vector<double> purities;
    for (const auto& rho : *file.true_states) {
      purities.push_back(rho.purity());
    }
    report.true_purities = std::move(purities);
    if (file.true_states->size() == 2) {
      report.er_designed =
          exact_error_rate_of_design(report.result.opt_povm, *file.true_states);
      report.er_helstrom_true =
          helstrom_two_state((*file.true_states)[0], (*file.true_states)[1]).error_rate;
    }
  }
  return report;
}

std::string solve_report_json(const SolveReport& report) {
  json doc;
  doc["converged"] = report.result.converged;
  doc["iterations"] = report.result.iterations;
  doc["residual"] = report.result.residual;
  doc["loglik_final"] = report.result.loglik_trace.back();
  json states = json::array();
  for (const auto& rho : report.result.est_states) {
    states.push_back(matrix_to_json(rho.matrix()));
  }
  doc["est_states"] = std::move(states);
  json povm = json::array();
  for (const auto& element : report.result.opt_povm.elements()) {
    povm.push_back(matrix_to_json(element.matrix()));
  }
  doc["opt_povm"] = std::move(povm);
  doc["est_purities"] = report.est_purities;
  if (report.true_purities) doc["true_purities"] = *report.true_purities;
  if (report.er_designed) doc["er_designed"] = *report.er_designed;
  if (report.er_helstrom_true) doc["er_helstrom_true"] = *report.er_helstrom_true;
  return doc.dump(2) + "\n";
}

SweepConfig parse_sweep_config_json(const std::string& text) {
  const json doc = parse_text(text, "sweep config");
  if (!doc.is_object()) fail("sweep config must be a JSON object");
  reject_unknown_keys(doc, {"alpha_grid", "d1", "d2", "settings", "shots", "seeds", "mlse"},
                      "sweep config");

  SweepConfig config;
  const json& grid = require_key(doc, "alpha_grid", "sweep config");
  if (!grid.is_object()) fail("\"alpha_grid\" must be an object");
  reject_unknown_keys(grid, {"start", "stop", "count"}, "alpha_grid");
  config.alpha_grid.start = require_key(grid, "start", "alpha_grid").get<double>();
  config.alpha_grid.stop = require_key(grid, "stop", "alpha_grid").get<double>();
  config.alpha_grid.count = require_key(grid, "count", "alpha_grid").get<int>();

  config.d1 = require_key(doc, "d1", "sweep config").get<double>();
  config.d2 = require_key(doc, "d2", "sweep config").get<double>();

  const json& settings = require_key(doc, "settings", "sweep config");
  if (!settings.is_array() || settings.empty()) {
    fail("\"settings\" must be a non-empty array of axis names");
  }
  for (const json& axis : settings) {
    if (!axis.is_string() || axis.get<std::string>().size() != 1) {
      fail("settings entries must be \"x\", \"y\" or \"z\"");
    }
    config.settings.push_back(axis_from_name(axis.get<std::string>()[0]));
  }

  const json& shots = require_key(doc, "shots", "sweep config");
  if (shots.is_string()) {
    if (shots.get<std::string>() != "inf") {
      fail("\"shots\" must be a positive integer or \"inf\"");
    }
    config.shots = std::nullopt;
  } else if (shots.is_number_unsigned() && shots.get<std::uint64_t>() >= 1) {
    config.shots = shots.get<std::uint64_t>();
  } else {
    fail("\"shots\" must be a positive integer or \"inf\"");
  }

  const json& seeds = require_key(doc, "seeds", "sweep config");
  if (!seeds.is_array() || seeds.empty()) {
    fail("\"seeds\" must be a non-empty array of unsigned integers");
  }
  for (const json& seed : seeds) {
    if (!seed.is_number_unsigned()) {
      fail("\"seeds\" entries must be unsigned integers");
    }
    config.seeds.push_back(seed.get<std::uint64_t>());
  }

  if (auto it = doc.find("mlse"); it != doc.end()) {
    if (!it->is_object()) fail("\"mlse\" must be an object");
    reject_unknown_keys(*it, {"tol", "max_iter", "prob_floor", "pinv_threshold", "damping"},
                        "mlse options");
    if (auto opt = it->find("tol"); opt != it->end()) config.mlse.tol = opt->get<double>();
    if (auto opt = it->find("max_iter"); opt != it->end()) {
      config.mlse.max_iter = opt->get<long>();
    }
    if (auto opt = it->find("prob_floor"); opt != it->end()) {
      config.mlse.prob_floor = opt->get<double>();
    }
    if (auto opt = it->find("pinv_threshold"); opt != it->end()) {
      config.mlse.pinv_threshold = opt->get<double>();
    }
    if (auto opt = it->find("damping"); opt != it->end()) {
      config.mlse.damping = opt->get<double>();
      if (!(config.mlse.damping > 0.0 && config.mlse.damping <= 1.0)) {
        fail("\"damping\" must lie in (0, 1]");
      }
    }
  }
  return config;
}

SweepConfig read_sweep_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::invalid_argument("cannot open sweep config " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_sweep_config_json(buffer.str());
}

}  // namespace qsd
