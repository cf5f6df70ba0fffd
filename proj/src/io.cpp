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

#include "qcav/io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "qcav/spectrum.hpp"

namespace qcav::io {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& rec, double time_unit) {
  os << "t,n_ph,re_a,im_a,leak\n";
  for (std::size_t i = 0; i < rec.size(); ++i) {
    os << format_double(rec.t[i] / time_unit) << ',' << format_double(rec.n_photons[i]) << ','
       << format_double(rec.field[i].real()) << ',' << format_double(rec.field[i].imag()) << ','
       << format_double(rec.leak[i]) << '\n';
  }
}

void write_jumps_csv(std::ostream& os, const TrajectoryRecord& rec, double time_unit) {
  os << "t,channel\n";
  for (const auto& j : rec.jumps) os << format_double(j.t / time_unit) << ',' << j.channel << '\n';
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : field.substr(b, e - b + 1));
  }
  return out;
}

}  // namespace

TrajectoryRecord read_trajectory_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("trajectory CSV is empty");
  const std::vector<std::string> expected{"t", "n_ph", "re_a", "im_a", "leak"};
  if (split_fields(line) != expected) throw std::runtime_error("unexpected trajectory CSV header: " + line);
  TrajectoryRecord rec;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto f = split_fields(line);
    if (f.size() != 5) throw std::runtime_error("trajectory CSV line " + std::to_string(lineno) + ": expected 5 fields");
    try {
      rec.t.push_back(std::stod(f[0]));
      rec.n_photons.push_back(std::stod(f[1]));
      rec.field.emplace_back(std::stod(f[2]), std::stod(f[3]));
      rec.leak.push_back(std::stod(f[4]));
    } catch (const std::logic_error&) {
      throw std::runtime_error("trajectory CSV line " + std::to_string(lineno) + ": not a number");
    }
    if (rec.leak.back() >= kLeakThreshold) rec.truncation_invalid = true;
  }
  return rec;
}

TrajectoryRecord read_trajectory_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_trajectory_csv(in);
}

void write_spectrum_csv(std::ostream& os, double g, double delta_cap, int n_max, double frequency_unit) {
  os << "n,u,lambda_exact,lambda_approx,spacing_exact,spacing_approx\n";
  const auto f = [&](double x) { return format_double(x * frequency_unit); };
  for (int n = 0; n <= std::min(n_max, 2); ++n) {
    const auto s = numerical_block_eigenvalues(n, g, delta_cap);
    for (double lam : s.eigenvalues) os << n << ",," << f(lam) << ",,,\n";
  }
  for (int n = 3; n <= n_max; ++n) {
    for (int u : kLadderIndices) {
      const auto sp = ladder_spacing(u, n, g, delta_cap);
      os << n << ',' << u << ',' << f(closed_form_eigenvalue(u, n, g, delta_cap)) << ',' << f(ladder_eigenvalue_approx(u, n, g, delta_cap)) << ','
         << f(sp.exact) << ',' << f(sp.approx) << '\n';
    }
  }
}

void write_branches_csv(std::ostream& os, std::span<const BranchSolution> branches) {
  os << "u,zeta,physical,n,phase,n_quadratic\n";
  for (const auto& b : branches) {
    os << b.u << ',' << format_double(b.zeta) << ',' << (b.physical ? 1 : 0);
    if (b.state) {
      os << ',' << format_double(b.state->n) << ',' << format_double(b.state->phase) << ','
         << format_double(b.state->n_from_quadratic);
    } else {
      os << ",,,";
    }
    os << '\n';
  }
}

void write_map_csv(std::ostream& os, const SolutionMap& map) {
  os << "eta,delta,mask\n";
  for (std::size_t i = 0; i < map.etas.size(); ++i) {
    for (std::size_t j = 0; j < map.deltas.size(); ++j) {
      os << format_double(map.etas[i]) << ',' << format_double(map.deltas[j]) << ','
         << static_cast<unsigned>(map.at(i, j)) << '\n';
    }
  }
}

void write_histogram_csv(std::ostream& os, const HistogramSet& h) {
  const bool sweep = !h.sweep_values.empty();
  os << (sweep ? "bin_lo,bin_hi,mass,sweep_value\n" : "bin_lo,bin_hi,mass\n");
  for (std::size_t c = 0; c < h.mass.size(); ++c) {
    const auto frac = h.fractions(c);
    for (std::size_t k = 0; k < frac.size(); ++k) {
      os << format_double(h.axis.edges[k]) << ',' << format_double(h.axis.edges[k + 1]) << ','
         << format_double(frac[k]);
      if (sweep) os << ',' << format_double(h.sweep_values[c]);
      os << '\n';
    }
  }
}

void write_dwell_csv(std::ostream& os, const BranchAssignment& assignment, double time_unit) {
  os << "u,t_start,t_end\n";
  for (const auto& s : assignment.segments) {
    if (s.label == kDimLabel) {
      os << "dim";
    } else {
      os << s.label;
    }
    os << ',' << format_double(s.t_start / time_unit) << ',' << format_double(s.t_end / time_unit) << '\n';
  }
}

std::string steady_state_json(const SteadyStateResult& result, double frequency_unit) {
  nlohmann::ordered_json j;
  j["solved"] = result.solved;
  j["degenerate"] = result.degenerate;
  j["sector_size"] = result.sector_size;
  j["n_photons"] = result.n_photons;
  j["re_a"] = result.field.real();
  j["im_a"] = result.field.imag();
  j["residual"] = result.residual * frequency_unit;
  j["trace_error"] = result.check.trace_error;
  j["hermiticity_error"] = result.check.hermiticity_error;
  j["min_eigenvalue"] = result.check.min_eigenvalue;
  return j.dump(2) + "\n";
}

}  // namespace qcav::io
