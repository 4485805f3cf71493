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

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qsd/calibsim.hpp"
#include "qsd/helstrom.hpp"
#include "qsd/problem_io.hpp"
#include "qsd/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalidInput = 1;
constexpr int kExitNotConverged = 2;

void print_matrix(const std::string& name, const qsd::Matrix& m) {
  std::cout << name << " =\n";
  for (Eigen::Index a = 0; a < m.rows(); ++a) {
    std::cout << "  [";
    for (Eigen::Index b = 0; b < m.cols(); ++b) {
      const qsd::Complex z = m(a, b);
      std::cout << (b ? ", " : "") << qsd::format_double(z.real());
      if (z.imag() != 0.0) {
        std::cout << (z.imag() > 0 ? "+" : "") << qsd::format_double(z.imag()) << "i";
      }
    }
    std::cout << "]\n";
  }
}

std::optional<std::uint64_t> parse_shots(const std::string& text) {
  if (text == "inf") return std::nullopt;
  std::size_t consumed = 0;
  const std::uint64_t shots = std::stoull(text, &consumed);
  if (consumed != text.size() || shots < 1) {
    throw std::invalid_argument("--shots expects a positive integer or \"inf\"");
  }
  return shots;
}

int run_helstrom(double alpha, double d1, double d2) {
  const qsd::DensityMatrix rho1 = qsd::make_state({alpha, d1, +1});
  const qsd::DensityMatrix rho2 = qsd::make_state({alpha, d2, -1});
  const qsd::DiscriminationReport report = qsd::helstrom_two_state(rho1, rho2);
  std::cout << "error_rate = " << qsd::format_double(report.error_rate) << "\n";
  print_matrix("Pi_1", report.povm.element(0).matrix());
  print_matrix("Pi_2", report.povm.element(1).matrix());
  std::cout << "extremal_residual = " << qsd::format_double(report.extremal_residual)
            << "\n";
  return kExitOk;
}

int run_oracle(double alpha, double d1, double d2, int grid) {
  const qsd::DensityMatrix rho1 = qsd::make_state({alpha, d1, +1});
  const qsd::DensityMatrix rho2 = qsd::make_state({alpha, d2, -1});
  const double er = qsd::brute_force_oracle(rho1, rho2, grid);
  std::cout << "oracle_error_rate = " << qsd::format_double(er) << "\n";
  return kExitOk;
}

int run_sweep_command(const std::string& config_path, const std::string& out_path,
                      unsigned threads) {
  const qsd::SweepConfig config = qsd::read_sweep_config(config_path);
  const std::vector<qsd::SweepRow> rows = qsd::run_sweep(config, threads);
  qsd::write_sweep_csv(rows, out_path);
  std::size_t failed = 0;
  for (const auto& row : rows) {
    if (row.error) ++failed;
  }
  std::cout << "wrote " << rows.size() << " rows to " << out_path;
  if (failed > 0) std::cout << " (" << failed << " failed points)";
  std::cout << "\n";
  return kExitOk;
}

int run_simulate(double alpha, double d, const std::string& sign_text,
                 const std::string& settings_text, const std::string& shots_text,
                 std::uint64_t seed, const std::string& out_path) {
  if (sign_text != "+" && sign_text != "-") {
    throw std::invalid_argument("--sign expects + or -");
  }
  const int sign = sign_text == "+" ? +1 : -1;
  const std::vector<qsd::Axis> settings = qsd::parse_axes(settings_text);
  const qsd::DensityMatrix rho = qsd::make_state({alpha, d, sign});

  qsd::CalibrationConfig config{{rho}, settings, parse_shots(shots_text), seed};
  const qsd::FrequencyTable frequencies = qsd::sample_frequencies(config);
  const qsd::MlseProblem problem(qsd::make_prior_povm(settings), frequencies);
  const std::vector<qsd::DensityMatrix> truth{rho};
  qsd::write_problem_file(out_path, problem, &truth);

  std::cout << "wrote calibration dataset to " << out_path << "\nfrequencies =";
  for (Eigen::Index k = 0; k < frequencies.num_outcomes(); ++k) {
    std::cout << " " << qsd::format_double(frequencies.matrix()(0, k));
  }
  std::cout << "\n";
  return kExitOk;
}

int run_solve(const std::string& problem_path, std::optional<double> tol,
              std::optional<long> max_iter) {
  qsd::MlseOptions options;
  if (tol) options.tol = *tol;
  if (max_iter) options.max_iter = *max_iter;
  const qsd::SolveReport report = qsd::solve_problem_file(problem_path, options);
  std::cout << qsd::solve_report_json(report);
  return report.result.converged ? kExitOk : kExitNotConverged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum-error discrimination design from calibration data"};
  app.require_subcommand(1);

  double alpha = 0.0, d1 = 1.0, d2 = 1.0, d = 1.0;
  int grid = 400;
  unsigned threads = 0;
  std::uint64_t seed = 0;
  std::string config_path, out_path, problem_path, sign_text, settings_text, shots_text;
  std::optional<double> tol;
  std::optional<long> max_iter;

  CLI::App* helstrom = app.add_subcommand(
      "helstrom", "Exact optimal measurement for a known state pair");
  helstrom->add_option("--alpha", alpha, "Angle in radians, in [0, pi/4]")->required();
  helstrom->add_option("--d1", d1, "Off-diagonal scale of the first state")->required();
  helstrom->add_option("--d2", d2, "Off-diagonal scale of the second state")->required();

  CLI::App* oracle = app.add_subcommand(
      "oracle", "Brute-force projective-measurement search for a state pair");
  oracle->add_option("--alpha", alpha, "Angle in radians, in [0, pi/4]")->required();
  oracle->add_option("--d1", d1, "Off-diagonal scale of the first state")->required();
  oracle->add_option("--d2", d2, "Off-diagonal scale of the second state")->required();
  oracle->add_option("--grid", grid, "Grid steps per Bloch angle");

  CLI::App* sweep = app.add_subcommand("sweep", "Run an error-rate sweep to CSV");
  sweep->add_option("--config", config_path, "Sweep config JSON")->required();
  sweep->add_option("--out", out_path, "Output CSV path")->required();
  sweep->add_option("--threads", threads, "Worker threads (0 = all cores)");

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Sample one calibration dataset and write it as a problem file");
  simulate->add_option("--alpha", alpha, "Angle in radians, in [0, pi/4]")->required();
  simulate->add_option("--d", d, "Off-diagonal scale")->required();
  simulate->add_option("--sign", sign_text, "+ or -")->required();
  simulate->add_option("--settings", settings_text, "Comma separated axes, e.g. x,y")
      ->required();
  simulate->add_option("--shots", shots_text, "Shots per setting, or \"inf\"")
      ->required();
  simulate->add_option("--seed", seed, "Sampling seed");
  simulate->add_option("--out", out_path, "Output problem file")->required();

  CLI::App* solve = app.add_subcommand("solve", "Solve a problem file");
  solve->add_option("--problem", problem_path, "Problem JSON file")->required();
  solve->add_option("--tol", [&tol](const std::vector<std::string>& v) {
    tol = std::stod(v.front());
    return true;
  }, "Convergence tolerance");
  solve->add_option("--max-iter", [&max_iter](const std::vector<std::string>& v) {
    max_iter = std::stol(v.front());
    return true;
  }, "Iteration cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalidInput;
  }

  try {
    if (app.got_subcommand(helstrom)) return run_helstrom(alpha, d1, d2);
    if (app.got_subcommand(oracle)) return run_oracle(alpha, d1, d2, grid);
    if (app.got_subcommand(sweep)) return run_sweep_command(config_path, out_path, threads);
    if (app.got_subcommand(simulate)) {
      return run_simulate(alpha, d, sign_text, settings_text, shots_text, seed, out_path);
    }
    if (app.got_subcommand(solve)) return run_solve(problem_path, tol, max_iter);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  }
  return kExitInvalidInput;
}
