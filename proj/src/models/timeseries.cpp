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
#include <algorithm>
#include <cmath>

#include "intentcube/error.hpp"
#include "intentcube/mdcore/csv.hpp"
#include "intentcube/mdcore/extend.hpp"
#include "intentcube/models/algorithms.hpp"

namespace intentcube {

namespace {

std::size_t time_axis(const Cube& cube, const std::string& time_dimension) {
  const auto dot = time_dimension.find('.');
  const std::string dim = time_dimension.substr(0, dot);
  const int a = cube.axis_of(dim);
  if (a < 0) throw PlanError("cube " + cube.name() + " has no time dimension " + dim);
  if (dot != std::string::npos) {
    const auto& axis = cube.axes()[static_cast<std::size_t>(a)];
    if (axis.dimension->level_index(time_dimension.substr(dot + 1)) != axis.level) {
      throw PlanError("cube " + cube.name() + " is not grouped at " + time_dimension);
    }
  }
  return static_cast<std::size_t>(a);
}

// Cells of each series (same coordinates off the time axis), ordered by time.
std::vector<std::vector<std::size_t>> series_of(const Cube& cube, std::size_t time) {
  std::vector<std::string> keys;
  for (std::size_t a = 0; a < cube.axes().size(); ++a) {
    if (a != time) keys.push_back(cube.axes()[a].dimension->name());
  }
  auto classes = equivalence_classes(cube, Scope::Subcube, keys);
  for (auto& c : classes) {
    std::sort(c.begin(), c.end(), [&](std::size_t x, std::size_t y) {
      return cube.cell(x).coords[time].ordinal < cube.cell(y).coords[time].ordinal;
    });
  }
  return classes;
}

void check_window(int window) {
  if (window < 1 || window % 2 == 0) throw PlanError("moving-average window must be odd and positive, got " + std::to_string(window));
}

std::vector<double> moving_average(const std::vector<double>& v, int window) {
  const int n = static_cast<int>(v.size());
  const int half = (window - 1) / 2;
  std::vector<double> out(v.size());
  for (int t = 0; t < n; ++t) {
    const int r = std::min({half, t, n - 1 - t});
    double s = 0;
    for (int j = t - r; j <= t + r; ++j) s += v[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(t)] = s / (2 * r + 1);
  }
  return out;
}

std::vector<double> seasonal(const std::vector<double>& detrended, int period) {
  std::vector<double> out(detrended.size(), 0.0);
  if (period <= 1) return out;
  std::vector<double> sum(static_cast<std::size_t>(period), 0.0);
  std::vector<int> count(static_cast<std::size_t>(period), 0);
  for (std::size_t t = 0; t < detrended.size(); ++t) {
    sum[t % static_cast<std::size_t>(period)] += detrended[t];
    ++count[t % static_cast<std::size_t>(period)];
  }
  double centre = 0;
  int phases = 0;
  for (std::size_t p = 0; p < sum.size(); ++p) {
    if (count[p] == 0) continue;
    sum[p] /= count[p];
    centre += sum[p];
    ++phases;
  }
  centre /= phases;
  for (std::size_t t = 0; t < detrended.size(); ++t) out[t] = sum[t % static_cast<std::size_t>(period)] - centre;
  return out;
}

std::vector<double> gather(const std::vector<double>& column, const std::vector<std::size_t>& cells) {
  std::vector<double> out;
  out.reserve(cells.size());
  for (auto i : cells) out.push_back(column[i]);
  return out;
}

// Time member label `steps` positions after the last member of the level.
std::string member_after(const Level& level, int steps) {
  const auto members = level.members();
  std::vector<double> numeric;
  for (const auto& m : members) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(m, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != m.size()) {
      numeric.clear();
      break;
    }
    numeric.push_back(v);
  }
  if (!numeric.empty()) {
    const double step = numeric.size() > 1 ? numeric.back() - numeric[numeric.size() - 2] : 1.0;
    return format_number(numeric.back() + step * steps);
  }
  return members.back() + "+" + std::to_string(steps);
}

struct Fit {
  std::vector<double> forecast;
  std::vector<double> coefficients;
  double rmse = 0;
  bool drift = false;
};

Fit fit_ar(const std::vector<double>& y, int p, int k) {
  const int n = static_cast<int>(y.size());
  Fit fit;
  const int rows = n - p;
  if (rows >= p + 1) {
    Eigen::MatrixXd x(rows, p + 1);
    Eigen::VectorXd target(rows);
    for (int r = 0; r < rows; ++r) {
      const int t = r + p;
      x(r, 0) = 1.0;
      for (int j = 1; j <= p; ++j) x(r, j) = y[static_cast<std::size_t>(t - j)];
      target(r) = y[static_cast<std::size_t>(t)];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    qr.setThreshold(1e-10);
    if (qr.rank() == p + 1) {
      const Eigen::VectorXd beta = qr.solve(target);
      fit.coefficients.assign(beta.data(), beta.data() + beta.size());
      fit.rmse = std::sqrt((x * beta - target).squaredNorm() / rows);
      std::vector<double> hist = y;
      for (int i = 0; i < k; ++i) {
        double next = beta(0);
        for (int j = 1; j <= p; ++j) next += beta(j) * hist[hist.size() - static_cast<std::size_t>(j)];
        hist.push_back(next);
        fit.forecast.push_back(next);
      }
      return fit;
    }
  }
  // Drift: last value plus the mean step.
  fit.drift = true;
  const double step = n > 1 ? (y.back() - y.front()) / (n - 1) : 0.0;
  double ss = 0;
  for (int t = 1; t < n; ++t) {
    const double e = y[static_cast<std::size_t>(t)] - (y[static_cast<std::size_t>(t - 1)] + step);
    ss += e * e;
  }
  fit.rmse = n > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
  fit.coefficients = {step};
  for (int i = 1; i <= k; ++i) fit.forecast.push_back(y.back() + step * i);
  return fit;
}

}  // namespace

Model ts_decompose(CubePtr cube, const std::string& measure, const std::string& time_dimension, int window, int period) {
  if (!cube) throw PlanError("ts_decompose needs a cube");
  check_window(window);
  if (period < 0) throw PlanError("period must be non-negative");
  const auto time = time_axis(*cube, time_dimension);
  const auto v = cube->column(measure);
  std::vector<double> trend(v.size()), season(v.size()), noise(v.size());
  for (const auto& cells : series_of(*cube, time)) {
    if (cells.size() < 2) throw ExecutionError("series in cube " + cube->name() + " has fewer than 2 points");
    const auto y = gather(v, cells);
    const auto t = moving_average(y, window);
    std::vector<double> detrended(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) detrended[i] = y[i] - t[i];
    const auto s = seasonal(detrended, period);
    for (std::size_t i = 0; i < cells.size(); ++i) {
      trend[cells[i]] = t[i];
      season[cells[i]] = s[i];
      noise[cells[i]] = y[i] - t[i] - s[i];
    }
  }
  Model m;
  m.type = "ts_decompose";
  m.measure = measure;
  m.cube = cube;
  m.binding = {{"measure", measure}, {"time", time_dimension}, {"window", std::to_string(window)},
               {"period", std::to_string(period)}};
  m.components.push_back(ModelComponent::numeric("Trend", std::move(trend)));
  m.components.push_back(ModelComponent::numeric("Seasonality", std::move(season)));
  m.components.push_back(ModelComponent::numeric("Noise", std::move(noise)));
  return m;
}

Model ar_predict(CubePtr cube, const std::string& measure, const std::string& time_dimension, int k, int order, int window) {
  if (!cube) throw PlanError("ar_predict needs a cube");
  if (k < 1) throw PlanError("ar_predict needs k >= 1");
  if (order < 1) throw PlanError("ar_predict needs order >= 1");
  check_window(window);
  const auto time = time_axis(*cube, time_dimension);
  const auto& time_axis_def = cube->axes()[time];
  const Level& level = time_axis_def.dimension->level(time_axis_def.level);
  const auto v = cube->column(measure);

  struct Planned {
    std::vector<std::size_t> cells;
    std::vector<double> trend;
    Fit fit;
  };
  std::vector<Planned> plans;
  int needed = 0;
  for (auto& cells : series_of(*cube, time)) {
    if (static_cast<int>(cells.size()) <= order) {
      throw ExecutionError("series of " + std::to_string(cells.size()) + " points is too short for order " + std::to_string(order));
    }
    Planned p;
    const auto y = gather(v, cells);
    p.trend = moving_average(y, window);
    p.fit = fit_ar(p.trend, order, k);
    const int last = cube->cell(cells.back()).coords[time].ordinal;
    needed = std::max(needed, last + k - static_cast<int>(level.size()) + 1);
    p.cells = std::move(cells);
    plans.push_back(std::move(p));
  }

  std::vector<std::string> appended;
  for (int i = 1; i <= needed; ++i) appended.push_back(member_after(level, i));
  auto dim = appended.empty() ? time_axis_def.dimension
                              : time_axis_def.dimension->with_appended_members(time_axis_def.level, appended);
  std::vector<Axis> axes = cube->axes();
  axes[time].dimension = dim;

  std::vector<Cell> cells;
  for (std::size_t i = 0; i < cube->size(); ++i) cells.push_back({cube->cell(i).coords, {v[i]}});
  for (const auto& p : plans) {
    const auto& last = cube->cell(p.cells.back()).coords;
    for (int i = 0; i < k; ++i) {
      auto coords = last;
      coords[time].ordinal += i + 1;
      cells.push_back({coords, {p.fit.forecast[static_cast<std::size_t>(i)]}});
    }
  }
  auto extended = std::make_shared<const Cube>(cube->name() + "_forecast", axes, std::vector<std::string>{measure}, cells);

  const std::size_t n = extended->size();
  std::vector<double> known(n, 0.0), predicted(n, 0.0), trend(n, 0.0);
  std::size_t drift = 0;
  double rmse = 0;
  for (const auto& p : plans) {
    for (std::size_t i = 0; i < p.cells.size(); ++i) {
      const auto at = *extended->find(cube->cell(p.cells[i]).coords);
      known[at] = 1.0;
      trend[at] = p.trend[i];
    }
    const auto& last = cube->cell(p.cells.back()).coords;
    for (int i = 0; i < k; ++i) {
      auto coords = last;
      coords[time].ordinal += i + 1;
      const auto at = *extended->find(coords);
      predicted[at] = 1.0;
      trend[at] = p.fit.forecast[static_cast<std::size_t>(i)];
    }
    drift += p.fit.drift ? 1 : 0;
    rmse += p.fit.rmse;
  }

  Model m;
  m.type = "ar_predict";
  m.measure = measure;
  m.cube = extended;
  m.binding = {{"measure", measure}, {"time", time_dimension}, {"k", std::to_string(k)},
               {"order", std::to_string(order)}, {"window", std::to_string(window)}};
  m.components.push_back(ModelComponent::bitmap("Known", std::move(known), "forecast"));
  m.components.push_back(ModelComponent::bitmap("Predicted", std::move(predicted), "forecast"));
  m.components.push_back(ModelComponent::numeric("Trend", std::move(trend)));
  m.characterization["rmse"] = plans.empty() ? 0.0 : rmse / static_cast<double>(plans.size());
  m.characterization["drift_fallback"] = static_cast<double>(drift);
  m.characterization["order"] = order;
  if (plans.size() == 1) {
    const auto& coef = plans.front().fit.coefficients;
    if (plans.front().fit.drift) {
      m.characterization["drift_step"] = coef.front();
      m.warnings.push_back("autoregression is singular; predicted with drift");
    } else {
      m.characterization["intercept"] = coef.front();
      for (std::size_t j = 1; j < coef.size(); ++j) m.characterization["phi_" + std::to_string(j)] = coef[j];
    }
  } else if (drift > 0) {
    m.warnings.push_back(std::to_string(drift) + " series predicted with drift");
  }
  return m;
}

}  // namespace intentcube
