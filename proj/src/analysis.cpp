// Copyright 2026 The qcav Authors
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

#include "qcav/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

namespace qcav {

double empty_cavity_intensity(double eta, double kappa, double delta_cap) {
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
  return eta * eta / (kappa * kappa + delta_cap * delta_cap);
}

double NormalizedSeries::weight(std::size_t i) const {
  if (t.size() < 2) return 0.0;
  if (i + 1 < t.size()) return t[i + 1] - t[i];
  return t[i] - t[i - 1];
}

NormalizedSeries NormalizedSeries::tail(double t_from) const {
  NormalizedSeries out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] >= t_from) {
      out.t.push_back(t[i]);
      out.ratio.push_back(ratio[i]);
      out.phase.push_back(phase[i]);
    }
  }
  return out;
}

NormalizedSeries normalized_series(const TrajectoryRecord& record, const ModelParams& params) {
  const double i0 = empty_cavity_intensity(params.eta, params.kappa, params.delta_cap);
  if (!(i0 > 0.0)) throw std::invalid_argument("normalization needs a non-zero drive");
  NormalizedSeries s;
  s.t = record.t;
  s.ratio.reserve(record.size());
  s.phase.reserve(record.size());
  for (std::size_t i = 0; i < record.size(); ++i) {
    s.ratio.push_back(std::max(0.0, record.n_photons[i]) / i0);
    s.phase.push_back(std::atan2(record.field[i].imag(), record.field[i].real()));
  }
  return s;
}

AxisSpec AxisSpec::uniform(HistogramVariable variable, double lo, double hi, int bins) {
  if (bins < 1 || !(hi > lo)) throw std::invalid_argument("histogram axis needs bins >= 1 and hi > lo");
  AxisSpec a;
  a.variable = variable;
  a.edges.resize(static_cast<std::size_t>(bins) + 1);
  for (int k = 0; k <= bins; ++k) a.edges[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / bins;
  return a;
}

double HistogramSet::total(std::size_t column) const {
  double s = underflow.at(column) + overflow.at(column);
  for (double m : mass.at(column)) s += m;
  return s;
}

std::vector<double> HistogramSet::fractions(std::size_t column) const {
  const double tot = total(column);
  std::vector<double> f = mass.at(column);
  for (double& x : f) x = tot > 0.0 ? x / tot : 0.0;
  return f;
}

namespace {

void check_edges(const AxisSpec& axis) {
  if (axis.edges.size() < 2) throw std::invalid_argument("histogram needs at least one bin");
  for (std::size_t k = 1; k < axis.edges.size(); ++k) {
    if (!(axis.edges[k] > axis.edges[k - 1])) throw std::invalid_argument("bin edges must be strictly increasing");
  }
}

void accumulate(const NormalizedSeries& s, const AxisSpec& axis, std::vector<double>& mass, double& under,
                double& over) {
  const auto& e = axis.edges;
  const auto& values = axis.variable == HistogramVariable::Ratio ? s.ratio : s.phase;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double v = values[i];
    const double w = s.weight(i);
    if (v < e.front()) {
      under += w;
    } else if (v > e.back()) {
      over += w;
    } else {
      auto it = std::upper_bound(e.begin(), e.end(), v);
      auto bin = static_cast<std::size_t>(std::distance(e.begin(), it)) - 1;
      bin = std::min(bin, mass.size() - 1);
      mass[bin] += w;
    }
  }
}

}  // namespace

HistogramSet histogram(const NormalizedSeries& series, const AxisSpec& axis) {
  const double key = 0.0;
  HistogramSet h = histogram(std::span<const NormalizedSeries>(&series, 1), std::span<const double>(&key, 1), axis);
  h.sweep_values.clear();
  return h;
}

HistogramSet histogram(std::span<const NormalizedSeries> series, std::span<const double> sweep_keys,
                       const AxisSpec& axis) {
  check_edges(axis);
  if (series.empty() || series.size() != sweep_keys.size())
    throw std::invalid_argument("histogram needs one sweep key per series");
  HistogramSet h;
  h.axis = axis;
  h.sweep_values.assign(sweep_keys.begin(), sweep_keys.end());
  std::sort(h.sweep_values.begin(), h.sweep_values.end());
  h.sweep_values.erase(std::unique(h.sweep_values.begin(), h.sweep_values.end()), h.sweep_values.end());
  const std::size_t bins = axis.edges.size() - 1;
  h.mass.assign(h.sweep_values.size(), std::vector<double>(bins, 0.0));
  h.underflow.assign(h.sweep_values.size(), 0.0);
  h.overflow.assign(h.sweep_values.size(), 0.0);
  for (std::size_t k = 0; k < series.size(); ++k) {
    if (series[k].size() < 2) throw std::invalid_argument("histogram series must span a time interval");
    const auto col = static_cast<std::size_t>(
        std::distance(h.sweep_values.begin(), std::find(h.sweep_values.begin(), h.sweep_values.end(), sweep_keys[k])));
    accumulate(series[k], axis, h.mass[col], h.underflow[col], h.overflow[col]);
  }
  return h;
}

std::vector<double> histogram_peaks(const HistogramSet& h, std::size_t column, int radius, double min_fraction) {
  const auto f = h.fractions(column);
  const auto& e = h.axis.edges;
  std::vector<double> peaks;
  const auto n = static_cast<long>(f.size());
  for (long k = 0; k < n; ++k) {
    if (f[static_cast<std::size_t>(k)] < min_fraction) continue;
    bool top = true;
    for (long j = std::max(0L, k - radius); j <= std::min(n - 1, k + radius) && top; ++j) {
      if (j != k && f[static_cast<std::size_t>(j)] >= f[static_cast<std::size_t>(k)]) top = false;
    }
    if (top) peaks.push_back(0.5 * (e[static_cast<std::size_t>(k)] + e[static_cast<std::size_t>(k) + 1]));
  }
  return peaks;
}

double BranchAssignment::mean_dwell(bool include_dim) const {
  double sum = 0.0;
  int count = 0;
  for (const auto& s : segments) {
    if (!include_dim && s.label == kDimLabel) continue;
    sum += s.dwell();
    ++count;
  }
  return count > 0 ? sum / count : std::numeric_limits<double>::quiet_NaN();
}

double branch_ratio(const BranchSolution& branch, const ModelParams& params) {
  if (!branch.state) throw std::invalid_argument("branch ratio requested for a non-physical branch");
  return branch.state->n / empty_cavity_intensity(params.eta, params.kappa, params.delta_cap);
}

namespace {

double wrap_phase(double x) {
  constexpr double pi = std::numbers::pi;
  x = std::remainder(x, 2.0 * pi);
  return x <= -pi ? x + 2.0 * pi : x;
}

struct Run {
  int label;
  std::size_t first;
  std::size_t last;
  double t_start;
  double t_end;
  long prev;
  long next;
  bool alive;
};

}  // namespace

BranchAssignment classify_and_dwell(const NormalizedSeries& series, std::span<const BranchSolution> branches,
                                    const ModelParams& params, const ClassifyOptions& options) {
  struct Attractor {
    int u;
    double ratio;
    double phase;
  };
  std::vector<Attractor> attractors;
  for (const auto& b : branches) {
    if (b.state) attractors.push_back({b.u, branch_ratio(b, params), b.state->phase});
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& a : attractors) {
    lo = std::min(lo, a.ratio);
    hi = std::max(hi, a.ratio);
  }
  const double ratio_scale = (attractors.size() >= 2 && hi - lo > 1e-12) ? hi - lo : 1.0;
  constexpr double phase_scale = std::numbers::pi;

  BranchAssignment out;
  const std::size_t n = series.size();
  out.labels.resize(n, kDimLabel);
  for (std::size_t i = 0; i < n; ++i) {
    if (series.ratio[i] < options.dim_threshold || attractors.empty()) continue;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& a : attractors) {
      const double dr = (series.ratio[i] - a.ratio) / ratio_scale;
      const double dp = wrap_phase(series.phase[i] - a.phase) / phase_scale;
      const double d = dr * dr + dp * dp;
      if (d < best) {
        best = d;
        out.labels[i] = a.u;
      }
    }
  }
  if (n == 0) return out;

  std::vector<Run> runs;
  for (std::size_t i = 0; i < n; ++i) {
    const double t_end = series.t[i] + series.weight(i);
    if (!runs.empty() && runs.back().label == out.labels[i]) {
      runs.back().last = i;
      runs.back().t_end = t_end;
    } else {
      const long idx = static_cast<long>(runs.size());
      runs.push_back({out.labels[i], i, i, series.t[i], t_end, idx - 1, -1, true});
      if (idx > 0) runs[static_cast<std::size_t>(idx - 1)].next = idx;
    }
  }

  // Shortest-first merging; ties go to the earlier run.
  using Key = std::pair<double, long>;
  std::priority_queue<Key, std::vector<Key>, std::greater<>> queue;
  for (std::size_t k = 0; k < runs.size(); ++k) queue.push({runs[k].t_end - runs[k].t_start, static_cast<long>(k)});
  long alive = static_cast<long>(runs.size());

  auto absorb = [&](long into, long from) {
    Run& a = runs[static_cast<std::size_t>(into)];
    Run& b = runs[static_cast<std::size_t>(from)];
    a.first = std::min(a.first, b.first);
    a.last = std::max(a.last, b.last);
    a.t_start = std::min(a.t_start, b.t_start);
    a.t_end = std::max(a.t_end, b.t_end);
    b.alive = false;
    if (b.prev >= 0 && b.prev != into) runs[static_cast<std::size_t>(b.prev)].next = into;
    if (b.next >= 0 && b.next != into) runs[static_cast<std::size_t>(b.next)].prev = into;
    if (b.prev == into) a.next = b.next;
    if (b.next == into) a.prev = b.prev;
    --alive;
  };

  while (!queue.empty() && alive > 1) {
    const auto [dwell, k] = queue.top();
    queue.pop();
    Run& r = runs[static_cast<std::size_t>(k)];
    if (!r.alive || std::abs((r.t_end - r.t_start) - dwell) > 0.0) continue;
    if (dwell >= options.min_dwell) break;
    const long left = r.prev;
    const long right = r.next;
    long into;
    if (left >= 0 && right >= 0) {
      const Run& lr = runs[static_cast<std::size_t>(left)];
      const Run& rr = runs[static_cast<std::size_t>(right)];
      if (lr.label == rr.label) {
        absorb(left, k);
        absorb(left, right);
        into = left;
      } else {
        into = (rr.t_end - rr.t_start) > (lr.t_end - lr.t_start) ? right : left;
        absorb(into, k);
      }
    } else {
      into = left >= 0 ? left : right;
      absorb(into, k);
    }
    const Run& m = runs[static_cast<std::size_t>(into)];
    queue.push({m.t_end - m.t_start, into});
  }

  for (const auto& r : runs) {
    if (!r.alive) continue;
    for (std::size_t i = r.first; i <= r.last; ++i) out.labels[i] = r.label;
  }
  // Rebuild segments in time order from the merged labels.
  for (std::size_t i = 0; i < n; ++i) {
    const double t_end = series.t[i] + series.weight(i);
    if (!out.segments.empty() && out.segments.back().label == out.labels[i]) {
      out.segments.back().t_end = t_end;
    } else {
      out.segments.push_back({out.labels[i], series.t[i], t_end});
    }
  }
  return out;
}

std::optional<LinearResponse> linear_response_reference(const ModelParams& params) {
  if (params.delta_cap == 0.0) return std::nullopt;
  constexpr double emitters = 3.0;
  const double shifted = params.delta_cap - emitters * params.g * params.g / params.delta_cap;
  LinearResponse r;
  r.alpha = params.eta / complex(params.kappa, -shifted);
  r.n_photons = std::norm(r.alpha);
  return r;
}

double time_average(const NormalizedSeries& series, double t_from, double t_to) {
  double sum = 0.0;
  double weight = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (series.t[i] < t_from || series.t[i] > t_to) continue;
    const double w = series.weight(i);
    sum += w * series.ratio[i];
    weight += w;
  }
  if (!(weight > 0.0)) throw std::invalid_argument("time-average window contains no samples");
  return sum / weight;
}

}  // namespace qcav
