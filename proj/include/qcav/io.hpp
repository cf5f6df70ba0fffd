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

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "qcav/analysis.hpp"
#include "qcav/mcwf.hpp"
#include "qcav/steady.hpp"
#include "qcav/superquant.hpp"

namespace qcav::io {

/// printf("%.17g"): round-trips every double.
std::string format_double(double x);

/// Header `t,n_ph,re_a,im_a,leak`. `time_unit` divides every time value.
void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& rec, double time_unit = 1.0);
/// Header `t,channel`.
void write_jumps_csv(std::ostream& os, const TrajectoryRecord& rec, double time_unit = 1.0);

/// Reads the sample columns of a trajectory CSV (jumps are not part of the file). Accepts
/// optional spaces after the commas. Throws std::runtime_error on malformed input.
TrajectoryRecord read_trajectory_csv(std::istream& is);
TrajectoryRecord read_trajectory_csv(const std::filesystem::path& path);

/// Header `n,u,lambda_exact,lambda_approx,spacing_exact,spacing_approx`. Manifolds 0..2 are
/// numerical only and leave u, lambda_approx and the spacings empty. `frequency_unit`
/// multiplies every eigenvalue and spacing.
void write_spectrum_csv(std::ostream& os, double g, double delta_cap, int n_max, double frequency_unit = 1.0);

/// Header `u,zeta,physical,n,phase,n_quadratic`; non-physical rows leave the last three empty.
void write_branches_csv(std::ostream& os, std::span<const BranchSolution> branches);

/// Header `eta,delta,mask`; bit k of mask is kLadderIndices[k].
void write_map_csv(std::ostream& os, const SolutionMap& map);

/// Header `bin_lo,bin_hi,mass` or `bin_lo,bin_hi,mass,sweep_value`; mass is the fraction of
/// the column's sampled time.
void write_histogram_csv(std::ostream& os, const HistogramSet& h);

/// Header `u,t_start,t_end`; dim segments are written as `dim`.
void write_dwell_csv(std::ostream& os, const BranchAssignment& assignment, double time_unit = 1.0);

/// Expectations and diagnostics of a steady-state solve as a JSON document.
std::string steady_state_json(const SteadyStateResult& result, double frequency_unit = 1.0);

}  // namespace qcav::io
