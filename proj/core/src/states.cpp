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

#include "qsd/states.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace qsd {

DensityMatrix::DensityMatrix(HermitianOperator op, double trace_tol, double psd_tol)
    : op_(std::move(op)) {
  const double tr = op_.trace();
  if (std::abs(tr - 1.0) > trace_tol) {
    throw std::invalid_argument("density matrix trace " + std::to_string(tr) +
                                " deviates from 1 beyond " + std::to_string(trace_tol));
  }
  if (!is_psd(op_, psd_tol)) {
    throw std::invalid_argument("density matrix is not PSD: min eigenvalue " +
                                std::to_string(min_eigenvalue(op_)));
  }
}

double DensityMatrix::purity() const { return trace_product(op_, op_); }

PovmSet::PovmSet(std::vector<HermitianOperator> elements, std::vector<std::string> labels,
                 double psd_tol, double completeness_tol)
    : elements_(std::move(elements)), labels_(std::move(labels)) {
  if (elements_.empty()) {
    throw std::invalid_argument("POVM must have at least one element");
  }
  if (labels_.empty()) {
    labels_.reserve(elements_.size());
    for (std::size_t k = 0; k < elements_.size(); ++k) {
      labels_.push_back("E" + std::to_string(k));
    }
  }
  if (labels_.size() != elements_.size()) {
    throw std::invalid_argument("POVM has " + std::to_string(elements_.size()) +
                                " elements but " + std::to_string(labels_.size()) +
                                " labels");
  }
  const Eigen::Index d = elements_.front().dim();
  Matrix sum = Matrix::Zero(d, d);
  for (std::size_t k = 0; k < elements_.size(); ++k) {
    if (elements_[k].dim() != d) {
      throw std::invalid_argument("POVM element " + std::to_string(k) +
                                  " has mismatched dimension");
    }
    if (!is_psd(elements_[k], psd_tol)) {
      throw std::invalid_argument("POVM element " + std::to_string(k) +
                                  " is not PSD: min eigenvalue " +
                                  std::to_string(min_eigenvalue(elements_[k])));
    }
    sum += elements_[k].matrix();
  }
  const double deviation = (sum - Matrix::Identity(d, d)).norm();
  if (deviation > completeness_tol) {
    throw std::invalid_argument(
        "POVM completeness check failed: element sum deviates from identity by " +
        std::to_string(deviation));
  }
}

PovmSet::PovmSet(std::vector<HermitianOperator> elements, double psd_tol,
                 double completeness_tol)
    : PovmSet(std::move(elements), std::vector<std::string>{}, psd_tol,
              completeness_tol) {}

DensityMatrix make_state(const StateParams& params) {
  if (!(params.alpha >= 0.0 && params.alpha <= M_PI / 4)) {
    throw std::invalid_argument("alpha " + std::to_string(params.alpha) +
                                " outside [0, pi/4]");
  }
  if (!(params.d >= 0.0 && params.d <= 1.0)) {
    throw std::invalid_argument("d " + std::to_string(params.d) + " outside [0, 1]");
  }
  if (params.sign != 1 && params.sign != -1) {
    throw std::invalid_argument("sign must be +1 or -1");
  }
  const double c = std::cos(params.alpha);
  const double s = std::sin(params.alpha);
  const double off = params.sign * params.d * c * s;
  Matrix m(2, 2);
  m << Complex(c * c, 0), Complex(off, 0), Complex(off, 0), Complex(s * s, 0);
  return DensityMatrix(HermitianOperator(std::move(m)));
}

char axis_name(Axis axis) {
  switch (axis) {
    case Axis::X: return 'x';
    case Axis::Y: return 'y';
    case Axis::Z: return 'z';
  }
  throw std::invalid_argument("unknown axis");
}

Axis axis_from_name(char name) {
  switch (name) {
    case 'x': return Axis::X;
    case 'y': return Axis::Y;
    case 'z': return Axis::Z;
    default:
      throw std::invalid_argument(std::string("unknown axis '") + name +
                                  "', expected x, y or z");
  }
}

std::vector<Axis> parse_axes(const std::string& text) {
  std::vector<Axis> axes;
  std::string token;
  for (std::size_t pos = 0; pos <= text.size(); ++pos) {
    if (pos == text.size() || text[pos] == ',') {
      if (token.size() != 1) {
        throw std::invalid_argument("bad axis token '" + token + "' in '" + text + "'");
      }
      axes.push_back(axis_from_name(token[0]));
      token.clear();
    } else if (!std::isspace(static_cast<unsigned char>(text[pos]))) {
      token += text[pos];
    }
  }
  return axes;
}

HermitianOperator pauli_projector(Axis axis, int direction) {
  if (direction != 1 && direction != -1) {
    throw std::invalid_argument("direction must be +1 or -1");
  }
  const double s = direction;
  Matrix m(2, 2);
  switch (axis) {
    case Axis::X:
      m << Complex(0.5, 0), Complex(0.5 * s, 0), Complex(0.5 * s, 0), Complex(0.5, 0);
      break;
    case Axis::Y:
      m << Complex(0.5, 0), Complex(0, -0.5 * s), Complex(0, 0.5 * s), Complex(0.5, 0);
      break;
    case Axis::Z:
      m << Complex(0.5 * (1 + s), 0), Complex(0, 0), Complex(0, 0),
          Complex(0.5 * (1 - s), 0);
      break;
  }
  return HermitianOperator(std::move(m));
}

PovmSet make_prior_povm(const std::vector<Axis>& settings) {
  if (settings.empty()) {
    throw std::invalid_argument("prior POVM needs at least one setting");
  }
  std::set<Axis> seen(settings.begin(), settings.end());
  if (seen.size() != settings.size()) {
    throw std::invalid_argument("duplicate axis in prior POVM settings");
  }
  const double scale = 1.0 / static_cast<double>(settings.size());
  std::vector<HermitianOperator> elements;
  std::vector<std::string> labels;
  for (Axis axis : settings) {
    for (int direction : {+1, -1}) {
      elements.push_back(HermitianOperator::symmetrized(
          scale * pauli_projector(axis, direction).matrix()));
      labels.push_back(std::string(direction > 0 ? "+" : "-") + axis_name(axis));
    }
  }
  return PovmSet(std::move(elements), std::move(labels));
}

Eigen::MatrixXd born_table(const std::vector<DensityMatrix>& states, const PovmSet& povm) {
  if (states.empty()) {
    throw std::invalid_argument("born_table needs at least one state");
  }
  Eigen::MatrixXd table(states.size(), povm.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t k = 0; k < povm.size(); ++k) {
      const double p = trace_product(states[i].op(), povm.element(k));
      table(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          std::clamp(p, 0.0, 1.0);
    }
  }
  return table;
}

}  // namespace qsd
