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

#pragma once

#include <complex>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "qcav/mcwf.hpp"
#include "qcav/model.hpp"
#include "qcav/superquant.hpp"

namespace qcav {

/// I0(Delta) = eta^2 / (kappa^2 + Delta^2), the detuned empty-cavity photon number.
double empty_cavity_intensity(double eta, double kappa, double delta_cap);

/// Observables normalized for comparison with the quasi-coherent branches.
struct NormalizedSeries {
  std::vector<double> t;
  std::vector<double> ratio;  ///< <a^dag a> / I0
  std::vector<double> phase;  ///< arg <a> in (-pi, pi]

  std::size_t size() const { return t.size(); }
  /// Time represented by sample i: the gap to the next sample, or the previous gap for the last.
  double weight(std::size_t i) const;
  /// Samples with t >= t_from.
  NormalizedSeries tail(double t_from) const;
};

NormalizedSeries normalized_series(const TrajectoryRecord& record, const ModelParams& params);

/// Which observable a histogram bins.
enum class HistogramVariable { Ratio, Phase };

struct AxisSpec {
  HistogramVariable variable = HistogramVariable::Ratio;
  std::vector<double> edges;  ///< strictly increasing

  static AxisSpec uniform(HistogramVariable variable, double lo, double hi, int bins);
};

/// Time-weighted histogram, one column per sweep value (a single column without a sweep).
struct HistogramSet {
  AxisSpec axis;
  std::vector<double> sweep_values;    ///< empty without a sweep
  std::vector<std::vector<double>> mass;  ///< [column][bin], in units of time
  std::vector<double> underflow;
  std::vector<double> overflow;

  /// Sum over bins plus under/overflow of one column.
  double total(std::size_t column = 0) const;
  /// mass / total.
  std::vector<double> fractions(std::size_t column = 0) const;
};

/// Throws std::invalid_argument for an empty series or invalid edges.
HistogramSet histogram(const NormalizedSeries& series, const AxisSpec& axis);
/// One column per (series, sweep value) pair. Several series may share a sweep value; they are
/// pooled into the same column. Columns are in ascending sweep value.
HistogramSet histogram(std::span<const NormalizedSeries> series, std::span<const double> sweep_keys,
                       const AxisSpec& axis);

/// Local maxima of a histogram column: bins strictly above their neighbours within `radius` bins
/// that carry at least `min_fraction` of the column mass. Returns bin centres.
std::vector<double> histogram_peaks(const HistogramSet& h, std::size_t column, int radius, double min_fraction);

inline constexpr int kDimLabel = 0;

struct Segment {
  int label = kDimLabel;  ///< ladder index u, or kDimLabel
  double t_start = 0.0;
  double t_end = 0.0;
  double dwell() const { return t_end - t_start; }
};

struct BranchAssignment {
  std::vector<int> labels;  ///< per sample, after merging
  std::vector<Segment> segments;

  /// Mean dwell over segments with the given filter (all non-dim segments by default).
  double mean_dwell(bool include_dim = false) const;
};

struct ClassifyOptions {
  double dim_threshold = 0.05;  ///< ratio below which a sample is dim
  double min_dwell = 5.0;       ///< segments shorter than this are merged into neighbours
};

/// Nearest-attractor classification in the (ratio, phase) plane. The ratio axis is scaled by the
/// spread of the branch ratios (1 if fewer than two distinct branches) and the phase axis by pi,
/// with phase differences wrapped to (-pi, pi]. Non-physical branches are ignored.
BranchAssignment classify_and_dwell(const NormalizedSeries& series, std::span<const BranchSolution> branches,
                                    const ModelParams& params, const ClassifyOptions& options = {});

/// Dispersive (linear-polarizability) amplitude eta / (kappa - i (Delta - 3 g^2 / Delta)).
struct LinearResponse {
  complex alpha;
  double n_photons = 0.0;
};

/// std::nullopt at Delta = 0, where the formula is singular.
std::optional<LinearResponse> linear_response_reference(const ModelParams& params);

/// Time-weighted mean of the ratio over samples with t in [t_from, t_to]. Throws
/// std::invalid_argument when the window holds no samples.
double time_average(const NormalizedSeries& series, double t_from, double t_to);

/// Branch ratio n_u / I0 for a physical branch.
double branch_ratio(const BranchSolution& branch, const ModelParams& params);

}  // namespace qcav
