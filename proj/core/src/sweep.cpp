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

#include "qsd/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <thread>

#include "qsd/helstrom.hpp"

namespace qsd {

namespace {

void validate(const SweepConfig& config) {
  const AlphaGrid& g = config.alpha_grid;
  if (g.count < 2) {
    throw std::invalid_argument("alpha grid count must be at least 2");
  }
  if (!(g.start >= 0.0 && g.stop <= M_PI / 4 && g.start <= g.stop)) {
    throw std::invalid_argument("alpha grid must lie within [0, pi/4]");
  }
  if (!(config.d1 >= 0.0 && config.d1 <= 1.0) ||
      !(config.d2 >= 0.0 && config.d2 <= 1.0)) {
    throw std::invalid_argument("d1 and d2 must lie in [0, 1]");
  }
  if (config.seeds.empty()) {
    throw std::invalid_argument("sweep needs at least one seed");
  }
  if (config.settings.empty()) {
    throw std::invalid_argument("sweep needs at least one measurement setting");
  }
}

SweepRow run_point(const SweepConfig& config, double alpha, std::uint64_t seed) {
  SweepRow row;
  row.alpha = alpha;
  row.seed = seed;

  const DensityMatrix rho1 = make_state({alpha, config.d1, +1});
  const DensityMatrix rho2 = make_state({alpha, config.d2, -1});
  const std::vector<DensityMatrix> true_states{rho1, rho2};

  row.er_helstrom_true = helstrom_two_state(rho1, rho2).error_rate;
  row.er_pure_bound = helstrom_bound_pure(std::cos(2.0 * alpha));

  try {
    CalibrationConfig calib{true_states, config.settings, config.shots, seed};
    const FrequencyTable frequencies = sample_frequencies(calib);
    const MlseProblem problem(make_prior_povm(config.settings), frequencies);
    const MlseResult result = run_mlse(problem, config.mlse);

    row.er_designed = exact_error_rate_of_design(result.opt_povm, true_states);
    row.loglik_final = result.loglik_trace.back();
    row.iterations = result.iterations;
    row.residual = result.residual;
    row.converged = result.converged;
  } catch (const std::exception& e) {
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    row.error = e.what();
    row.er_designed = nan;
    row.loglik_final = nan;
    row.residual = nan;
    row.iterations = 0;
    row.converged = false;
  }
  return row;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepConfig& config, unsigned num_threads) {
  validate(config);

  struct Point {
    double alpha;
    std::uint64_t seed;
  };
  std::vector<Point> points;
  const AlphaGrid& g = config.alpha_grid;
  for (int t = 0; t < g.count; ++t) {
    const double alpha =
        g.start + (g.stop - g.start) * static_cast<double>(t) / (g.count - 1);
    for (std::uint64_t seed : config.seeds) {
      points.push_back({alpha, seed});
    }
  }

  std::vector<SweepRow> rows(points.size());
  if (num_threads == 0) {
    num_threads = std::max(1u, std::thread::hardware_concurrency());
  }
  num_threads = std::min<unsigned>(num_threads, points.size());

  if (num_threads <= 1) {
    for (std::size_t idx = 0; idx < points.size(); ++idx) {
      rows[idx] = run_point(config, points[idx].alpha, points[idx].seed);
    }
  } else {
    // Each worker claims the next unprocessed point; every point writes only
    // its own row, so the result is identical to the sequential order.
    std::atomic<std::size_t> cursor{0};
    std::vector<std::thread> workers;
    workers.reserve(num_threads);
    for (unsigned w = 0; w < num_threads; ++w) {
      workers.emplace_back([&] {
        for (;;) {
          const std::size_t idx = cursor.fetch_add(1);
          if (idx >= points.size()) return;
          rows[idx] = run_point(config, points[idx].alpha, points[idx].seed);
        }
      });
    }
    for (auto& worker : workers) worker.join();
  }

  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return a.alpha != b.alpha ? a.alpha < b.alpha : a.seed < b.seed;
  });
  return rows;
}

std::string format_double(double value) {
  char buffer[64];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) {
    throw std::runtime_error("double formatting failed");
  }
  return std::string(buffer, end);
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string csv(kSweepCsvHeader);
  csv += '\n';
  for (const SweepRow& row : rows) {
    csv += format_double(row.alpha);
    csv += ',';
    csv += std::to_string(row.seed);
    csv += ',';
    csv += format_double(row.er_designed);
    csv += ',';
    csv += format_double(row.er_helstrom_true);
    csv += ',';
    csv += format_double(row.er_pure_bound);
    csv += ',';
    csv += format_double(row.loglik_final);
    csv += ',';
    csv += std::to_string(row.iterations);
    csv += ',';
    csv += format_double(row.residual);
    csv += ',';
    csv += row.converged ? '1' : '0';
    csv += '\n';
  }
  return csv;
}

void write_sweep_csv(const std::vector<SweepRow>& rows,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  out << sweep_csv(rows);
  if (!out) {
    throw std::runtime_error("failed writing " + path.string());
  }
}

}  // namespace qsd
