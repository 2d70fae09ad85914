/*
 * Copyright (c) intentcube authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <Eigen/Dense>
#include <cmath>

#include "intentcube/error.hpp"
#include "intentcube/mdcore/csv.hpp"
#include "intentcube/models/algorithms.hpp"
#include "intentcube/models/stats.hpp"

namespace intentcube {

double kendall_tau_b(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw Error("kendall_tau_b: length mismatch");
  double concordant = 0, discordant = 0, tie_x = 0, tie_y = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      if (dx == 0 && dy == 0) continue;
      if (dx == 0) {
        tie_x += 1;
      } else if (dy == 0) {
        tie_y += 1;
      } else if ((dx > 0) == (dy > 0)) {
        concordant += 1;
      } else {
        discordant += 1;
      }
    }
  }
  const double denom = std::sqrt((concordant + discordant + tie_x) * (concordant + discordant + tie_y));
  return denom > 0 ? (concordant - discordant) / denom : 0.0;
}

Model correlation(CubePtr cube, const std::string& measure, const std::string& attribute, double threshold) {
  if (!cube) throw PlanError("correlation needs a cube");
  const auto y = cube->column(measure);
  const auto x = attribute_column(*cube, attribute);
  const std::size_t n = y.size();
  if (n < 3) throw ExecutionError("correlation needs at least 3 cells, cube " + cube->name() + " has " + std::to_string(n));
  if (!(stats::variance(x) > 0)) throw ExecutionError("attribute " + attribute + " has zero variance");
  if (!(stats::variance(y) > 0)) throw ExecutionError("measure " + measure + " has zero variance");

  const double r = stats::pearson(x, y);
  std::vector<double> participation(n), in(n), out(n);
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < n; ++i) {
    xs.clear();
    ys.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      xs.push_back(x[j]);
      ys.push_back(y[j]);
    }
    const double without = stats::pearson(xs, ys);
    participation[i] = std::isfinite(without) ? r - without : 0.0;
    in[i] = std::abs(participation[i]) > threshold ? 1.0 : 0.0;
    out[i] = 1.0 - in[i];
  }

  Model m;
  m.type = "correlation";
  m.measure = measure;
  m.cube = cube;
  m.binding = {{"measure", measure}, {"attribute", attribute}, {"threshold", format_number(threshold)}};
  m.components.push_back(ModelComponent::numeric("Participation", std::move(participation)));
  m.components.push_back(ModelComponent::bitmap("Participating", std::move(in), "participation"));
  m.components.push_back(ModelComponent::bitmap("Non-participating", std::move(out), "participation"));
  m.characterization["pearson"] = r;
  m.characterization["kendall_tau"] = kendall_tau_b(x, y);
  return m;
}

Model regression(CubePtr cube, const std::string& measure, const std::vector<std::string>& attributes, double threshold) {
  if (!cube) throw PlanError("regression needs a cube");
  if (attributes.empty()) throw PlanError("regression needs at least one attribute");
  const auto y = cube->column(measure);
  const auto n = static_cast<Eigen::Index>(y.size());
  const auto p = static_cast<Eigen::Index>(attributes.size()) + 1;
  if (n < p) {
    throw ExecutionError("regression on " + std::to_string(attributes.size()) + " attributes needs at least " +
                         std::to_string(p) + " cells, cube " + cube->name() + " has " + std::to_string(n));
  }
  Eigen::MatrixXd x(n, p);
  x.col(0).setOnes();
  for (std::size_t a = 0; a < attributes.size(); ++a) {
    const auto col = attribute_column(*cube, attributes[a]);
    for (Eigen::Index i = 0; i < n; ++i) x(i, static_cast<Eigen::Index>(a) + 1) = col[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd target = Eigen::Map<const Eigen::VectorXd>(y.data(), n);

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(1e-10);
  if (qr.rank() < p) {
    std::string names;
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index r = qr.rank(); r < p; ++r) {
      const auto c = perm(r);
      names += (names.empty() ? "" : ", ") + (c == 0 ? std::string("intercept") : attributes[static_cast<std::size_t>(c - 1)]);
    }
    throw ExecutionError("regression design is rank deficient; collinear: " + names);
  }
  const Eigen::VectorXd beta = qr.solve(target);
  const Eigen::VectorXd fitted = x * beta;
  const Eigen::VectorXd resid = target - fitted;

  const double sse = resid.squaredNorm();
  const double mean = target.mean();
  const double sst = (target.array() - mean).square().sum();
  const auto dof = n - p;
  const double sd = dof > 0 ? std::sqrt(sse / static_cast<double>(dof)) : 0.0;

  std::vector<double> expected(fitted.data(), fitted.data() + n);
  std::vector<double> discrepancy(resid.data(), resid.data() + n);
  std::vector<double> above(static_cast<std::size_t>(n)), below(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < above.size(); ++i) {
    above[i] = sd > 0 && std::abs(discrepancy[i]) > threshold * sd ? 1.0 : 0.0;
    below[i] = 1.0 - above[i];
  }

  Model m;
  m.type = "regression";
  m.measure = measure;
  m.cube = cube;
  m.binding = {{"measure", measure}, {"threshold", format_number(threshold)}};
  for (const auto& a : attributes) m.binding.emplace_back("attribute", a);
  m.components.push_back(ModelComponent::numeric("Expected", std::move(expected)));
  m.components.push_back(ModelComponent::numeric("Discrepancy", std::move(discrepancy)));
  m.components.push_back(ModelComponent::bitmap("Above", std::move(above), "regression"));
  m.components.push_back(ModelComponent::bitmap("Below", std::move(below), "regression"));
  m.characterization["r2"] = sst > 0 ? 1.0 - sse / sst : (sse == 0 ? 1.0 : 0.0);
  m.characterization["residual_sd"] = sd;
  m.characterization["intercept"] = beta(0);
  for (std::size_t a = 0; a < attributes.size(); ++a) {
    m.characterization["coef_" + attributes[a]] = beta(static_cast<Eigen::Index>(a) + 1);
  }
  return m;
}

}  // namespace intentcube
