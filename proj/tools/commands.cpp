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

#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qcav/analysis.hpp"
#include "qcav/io.hpp"
#include "qcav/mcwf.hpp"
#include "qcav/model.hpp"
#include "qcav/steady.hpp"
#include "qcav/superquant.hpp"
#include "qcav/version.hpp"

namespace qcav::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string num(double x) { return io::format_double(x); }

// What a prepared command reports back once it has run.
struct Outcome {
  std::string status = "ok";
  int code = kExitOk;
  std::vector<std::string> outputs;
};

// A fully validated run: canonical arguments (every default resolved) plus the work itself.
struct Prepared {
  std::string subcommand;
  std::vector<std::string> args;
  fs::path out_dir;
  std::function<void(Outcome&)> compute;
};

fs::path resolve_out(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') return env;
  return ".";
}

template <class F>
void write_file(const fs::path& dir, const std::string& name, Outcome& outcome, F&& body) {
  fs::create_directories(dir);
  const fs::path path = dir / name;
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  body(os);
  os.flush();
  if (!os) throw std::runtime_error("write failed: " + path.string());
  outcome.outputs.push_back(name);
}

void require_finite(double x, const char* flag) {
  if (!std::isfinite(x)) throw ArgumentError(std::string(flag) + " must be finite");
}

// ---- model flags shared by most subcommands ----

struct ModelFlags {
  double g = 0.0;
  double eta = 0.0;
  double delta = 0.0;
  double gamma = 0.0;
  double kappa_unit = 1.0;  // output unit only; rates are given in units of kappa
  std::string emitters = "collective";
  std::optional<int> cutoff;

  void add(CLI::App* app, bool with_eta = true, bool with_decay = true) {
    app->add_option("--g", g, "coupling, units of kappa")->capture_default_str();
    if (with_eta) app->add_option("--eta", eta, "drive amplitude, units of kappa")->capture_default_str();
    app->add_option("--delta", delta, "detuning, units of kappa")->capture_default_str();
    app->add_option("--kappa", kappa_unit, "kappa in output units; times are divided and frequencies multiplied by it")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    if (with_decay) {
      app->add_option("--gamma", gamma, "single-emitter decay rate, units of kappa")->capture_default_str();
      app->add_option("--emitters", emitters, "collective | distinct")
          ->capture_default_str()
          ->check(CLI::IsMember({"collective", "distinct"}));
    }
  }

  ModelParams params() const {
    ModelParams p;
    p.g = g;
    p.eta = eta;
    p.delta_cap = delta;
    p.kappa = 1.0;
    p.gamma = gamma;
    p.emitters = emitters == "distinct" ? EmitterKind::Distinct : EmitterKind::Collective;
    return p;
  }

  void check() const {
    require_finite(g, "--g");
    require_finite(eta, "--eta");
    require_finite(delta, "--delta");
    require_finite(gamma, "--gamma");
    require_finite(kappa_unit, "--kappa");
  }

  std::vector<std::string> canonical(bool with_eta = true, bool with_decay = true) const {
    std::vector<std::string> a{"--g", num(g)};
    if (with_eta) a.insert(a.end(), {"--eta", num(eta)});
    a.insert(a.end(), {"--delta", num(delta), "--kappa", num(kappa_unit)});
    if (with_decay) a.insert(a.end(), {"--gamma", num(gamma), "--emitters", emitters});
    return a;
  }
};

ModelParams checked_params(const ModelFlags& m) {
  m.check();
  ModelParams p = m.params();
  p.validate();
  return p;
}

// Fock cutoff from the branch photon numbers alone (the drive term of the guidance is left out;
// the leak flag enforces adequacy instead).
int auto_cutoff(const ModelParams& p) {
  double n_max = 0.0;
  if (p.eta > 0.0) {
    for (const auto& b : branch_solutions(p)) {
      if (b.state) n_max = std::max(n_max, b.state->n);
    }
    n_max = std::max(n_max, empty_cavity_intensity(p.eta, p.kappa, p.delta_cap));
  }
  return std::max(20, recommended_cutoff(0.0, n_max));
}

// ---- trajectory flags ----

struct TrajectoryFlags {
  double t_final = 100.0;
  double stride = 0.1;
  std::optional<double> dt;
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;

  void add(CLI::App* app) {
    app->add_option("--t-final", t_final, "simulated time, units of 1/kappa")->capture_default_str();
    app->add_option("--stride", stride, "sampling interval, units of 1/kappa")->capture_default_str();
    app->add_option("--dt", dt, "integrator step bound (default: largest allowed by the step guard)");
    app->add_option("--seed", seed, "RNG seed")->capture_default_str();
    app->add_option("--stream", stream, "first RNG stream index")->capture_default_str();
  }

  TrajectoryConfig config(const ModelParams& p, const CompositeSpace& space) const {
    require_finite(t_final, "--t-final");
    require_finite(stride, "--stride");
    TrajectoryConfig c;
    c.t_final = t_final;
    c.record_stride = stride;
    c.base_dt = dt ? *dt : kStepGuard / frequency_scale(p, space);
    c.seed = seed;
    c.stream = stream;
    c.validate(p, space);
    return c;
  }

  static std::vector<std::string> canonical(const TrajectoryConfig& c) {
    return {"--t-final", num(c.t_final), "--stride", num(c.record_stride), "--dt", num(c.base_dt),
            "--seed", std::to_string(c.seed), "--stream", std::to_string(c.stream)};
  }
};

CompositeSpace make_space(const ModelParams& p, int cutoff) {
  if (cutoff < 1) throw ArgumentError("--cutoff must be >= 1");
  return CompositeSpace(FockSpace(cutoff), EmitterSpace(p.emitters));
}

// ---- subcommands ----

struct SpectrumCmd {
  ModelFlags m;
  int n_max = 50;
  std::string out;

  void add(CLI::App& app) {
    auto* s = app.add_subcommand("spectrum", "undriven manifold eigenvalues and ladder spacings");
    m.add(s, false, false);
    s->add_option("--n-max", n_max, "largest excitation number")->capture_default_str()->check(CLI::NonNegativeNumber);
    s->add_option("--out", out, "output directory");
  }

  Prepared prepare() const {
    m.check();
    Prepared p{"spectrum", {}, resolve_out(out), {}};
    p.args = {"spectrum"};
    auto c = m.canonical(false, false);
    p.args.insert(p.args.end(), c.begin(), c.end());
    p.args.insert(p.args.end(), {"--n-max", std::to_string(n_max), "--out", p.out_dir.string()});
    p.compute = [m = m, n_max = n_max, dir = p.out_dir](Outcome& o) {
      write_file(dir, "spectrum.csv", o, [&](std::ostream& os) {
        io::write_spectrum_csv(os, m.g * m.kappa_unit, m.delta * m.kappa_unit, n_max);
      });
    };
    return p;
  }
};

struct BranchesCmd {
  ModelFlags m;
  std::string out;

  void add(CLI::App& app) {
    auto* s = app.add_subcommand("branches", "quasi-coherent branch amplitudes and physicality");
    m.add(s, true, false);
    s->add_option("--out", out, "output directory");
  }

  Prepared prepare() const {
    ModelParams params = checked_params(m);
    if (!(params.eta > 0.0)) throw ArgumentError("--eta must be positive");
    Prepared p{"branches", {"branches"}, resolve_out(out), {}};
    auto c = m.canonical(true, false);
    p.args.insert(p.args.end(), c.begin(), c.end());
    p.args.insert(p.args.end(), {"--out", p.out_dir.string()});
    p.compute = [params, dir = p.out_dir](Outcome& o) {
      const auto b = branch_solutions(params);
      write_file(dir, "branches.csv", o, [&](std::ostream& os) { io::write_branches_csv(os, b); });
      for (const auto& br : b) {
        std::cout << "u=" << br.u << (br.physical ? " physical" : " -");
        if (br.state) std::cout << " n/I0=" << branch_ratio(br, params) << " phase=" << br.state->phase;
        std::cout << '\n';
      }
    };
    return p;
  }
};

struct MapCmd {
  double g = 0.0;
  double kappa_unit = 1.0;
  double eta_min = 0.5, eta_max = 20.0;
  double delta_min = -3.0, delta_max = 3.0;
  int resolution = 101;
  std::string out;

  void add(CLI::App& app) {
    auto* s = app.add_subcommand("map", "branch physicality over an (eta, delta) grid");
    s->add_option("--g", g, "coupling, units of kappa")->capture_default_str();
    s->add_option("--kappa", kappa_unit, "kappa in output units")->capture_default_str()->check(CLI::PositiveNumber);
    s->add_option("--eta-min", eta_min)->capture_default_str();
    s->add_option("--eta-max", eta_max)->capture_default_str();
    s->add_option("--delta-min", delta_min, "dimensionless detuning Delta/kappa")->capture_default_str();
    s->add_option("--delta-max", delta_max)->capture_default_str();
    s->add_option("--resolution", resolution, "grid points per axis")->capture_default_str();
    s->add_option("--out", out, "output directory");
  }

  Prepared prepare() const {
    for (double x : {g, eta_min, eta_max, delta_min, delta_max}) require_finite(x, "map range");
    if (!(eta_min > 0.0) || !(eta_max > eta_min)) throw ArgumentError("need 0 < --eta-min < --eta-max");
    if (!(delta_max > delta_min)) throw ArgumentError("need --delta-min < --delta-max");
    if (resolution < 2) throw ArgumentError("--resolution must be >= 2");
    Prepared p{"map", {}, resolve_out(out), {}};
    p.args = {"map", "--g", num(g), "--kappa", num(kappa_unit), "--eta-min", num(eta_min), "--eta-max", num(eta_max),
              "--delta-min", num(delta_min), "--delta-max", num(delta_max), "--resolution", std::to_string(resolution),
              "--out", p.out_dir.string()};
    p.compute = [*this, dir = p.out_dir](Outcome& o) {
      SolutionMap map = solution_map(g, 1.0, {eta_min, eta_max}, {delta_min, delta_max}, resolution);
      for (double& e : map.etas) e *= kappa_unit;
      write_file(dir, "map.csv", o, [&](std::ostream& os) { io::write_map_csv(os, map); });
    };
    return p;
  }
};

void flag_truncation(const TrajectoryRecord& rec, const std::string& what, Outcome& o) {
  if (!rec.truncation_invalid) return;
  std::cerr << "qcav: " << what << ": top Fock levels carry " << rec.max_leak() << " > " << kLeakThreshold
            << "; raise --cutoff\n";
  o.status = "truncation";
  o.code = kExitNumerical;
}

struct TrajectoryCmd {
  ModelFlags m;
  TrajectoryFlags t;
  std::string out;

  void add(CLI::App& app) {
    auto* s = app.add_subcommand("trajectory", "one quantum-jump trajectory");
    m.add(s);
    s->add_option("--cutoff", m.cutoff, "Fock cutoff (default: from the branch photon numbers)");
    t.add(s);
    s->add_option("--out", out, "output directory");
  }

  Prepared prepare() const {
    const ModelParams params = checked_params(m);
    const CompositeSpace space = make_space(params, m.cutoff ? *m.cutoff : auto_cutoff(params));
    const TrajectoryConfig config = t.config(params, space);
    Prepared p{"trajectory", {"trajectory"}, resolve_out(out), {}};
    auto c = m.canonical();
    p.args.insert(p.args.end(), c.begin(), c.end());
    p.args.insert(p.args.end(), {"--cutoff", std::to_string(space.fock().cutoff())});
    auto tc = TrajectoryFlags::canonical(config);
    p.args.insert(p.args.end(), tc.begin(), tc.end());
    p.args.insert(p.args.end(), {"--out", p.out_dir.string()});
    const double unit = m.kappa_unit;
    p.compute = [params, space, config, unit, dir = p.out_dir](Outcome& o) {
      const TrajectoryRecord rec = run_trajectory(params, space, config);
      write_file(dir, "trajectory.csv", o, [&](std::ostream& os) { io::write_trajectory_csv(os, rec, unit); });
      write_file(dir, "jumps.csv", o, [&](std::ostream& os) { io::write_jumps_csv(os, rec, unit); });
      flag_truncation(rec, "trajectory", o);
    };
    return p;
  }
};

struct Sweep {
  std::string name;
  std::vector<double> values;
};

Sweep parse_sweep(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos) throw ArgumentError("--sweep expects name=lo:hi:step");
  Sweep s{spec.substr(0, eq), {}};
  if (s.name != "eta" && s.name != "delta" && s.name != "g" && s.name != "gamma")
    throw ArgumentError("--sweep parameter must be one of eta, delta, g, gamma");
  std::vector<double> parts;
  std::stringstream ss(spec.substr(eq + 1));
  std::string tok;
  while (std::getline(ss, tok, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::logic_error&) {
      throw ArgumentError("--sweep: not a number: '" + tok + "'");
    }
  }
  if (parts.size() != 3) throw ArgumentError("--sweep expects name=lo:hi:step");
  const double lo = parts[0], hi = parts[1], step = parts[2];
  if (!(step > 0.0) || !(hi >= lo) || !std::isfinite(hi)) throw ArgumentError("--sweep needs lo <= hi and step > 0");
  const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
  if (count > 100000) throw ArgumentError("--sweep has too many points");
  for (long k = 0; k < count; ++k) s.values.push_back(lo + static_cast<double>(k) * step);
  return s;
}

ModelParams with_sweep(ModelParams p, const std::string& name, double v) {
  if (name == "eta") p.eta = v;
  else if (name == "delta") p.delta_cap = v;
  else if (name == "g") p.g = v;
  else if (name == "gamma") p.gamma = v;
  return p;
}

std::string indexed_name(const char* stem, std::size_t a, std::size_t b) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%03zu_%04zu.csv", stem, a, b);
  return buf;
}

struct EnsembleCmd {
  ModelFlags m;
  TrajectoryFlags t;
  std::string sweep;
  int trajectories = 10;
  int workers = 1;
  std::string out;

  void add(CLI::App& app) {
    auto* s = app.add_subcommand("ensemble", "independent trajectories, optionally over a parameter sweep");
    m.add(s);
    s->add_option("--cutoff", m.cutoff, "Fock cutoff (default: from the largest sweep point)");
    t.add(s);
    s->add_option("--sweep", sweep, "name=lo:hi:step with name in eta, delta, g, gamma");
    s->add_option("--trajectories", trajectories, "trajectories per sweep point")->capture_default_str()->check(CLI::PositiveNumber);
    s->add_option("--workers", workers, "worker threads; results do not depend on it")->capture_default_str()->check(CLI::PositiveNumber);
    s->add_option("--out", out, "output directory");
  }

  Prepared prepare() const {
    const ModelParams base = checked_params(m);
    Sweep sw;
    if (!sweep.empty()) sw = parse_sweep(sweep);
    std::vector<ModelParams> points;
    if (sw.values.empty()) {
      points.push_back(base);
    } else {
      for (double v : sw.values) {
        points.push_back(with_sweep(base, sw.name, v));
        points.back().validate();
      }
    }
    int cutoff = 1;
    if (m.cutoff) {
      cutoff = *m.cutoff;
    } else {
      for (const auto& p : points) cutoff = std::max(cutoff, auto_cutoff(p));
    }
    const CompositeSpace space = make_space(base, cutoff);
    // Every point must satisfy the step guard with the same resolved dt.
    TrajectoryConfig config;
    {
      TrajectoryFlags tf = t;
      if (!tf.dt) {
        double scale = 0.0;
        for (const auto& p : points) scale = std::max(scale, frequency_scale(p, space));
        tf.dt = kStepGuard / scale;
      }
      config = tf.config(points.front(), space);
      for (const auto& p : points) config.validate(p, space);
    }
    Prepared p{"ensemble", {"ensemble"}, resolve_out(out), {}};
    auto c = m.canonical();
    p.args.insert(p.args.end(), c.begin(), c.end());
    p.args.insert(p.args.end(), {"--cutoff", std::to_string(cutoff)});
    auto tc = TrajectoryFlags::canonical(config);
    p.args.insert(p.args.end(), tc.begin(), tc.end());
    if (!sweep.empty()) p.args.insert(p.args.end(), {"--sweep", sweep});
    p.args.insert(p.args.end(), {"--trajectories", std::to_string(trajectories), "--workers", std::to_string(workers),
                                 "--out", p.out_dir.string()});
    const double unit = m.kappa_unit;
    const int n = trajectories, w = workers;
    p.compute = [points, sw, space, config, unit, n, w, dir = p.out_dir](Outcome& o) {
      const bool swept = !sw.values.empty();
      std::ostringstream summary;
      summary << (swept ? "sweep_value," : "") << "trajectory,stream,mean_n_ph,jumps,max_leak\n";
      bool truncated = false;
      for (std::size_t s = 0; s < points.size(); ++s) {
        TrajectoryConfig cs = config;
        cs.stream = config.stream + s * static_cast<std::uint64_t>(n);
        const auto recs = run_ensemble(points[s], space, cs, n, w);
        for (std::size_t k = 0; k < recs.size(); ++k) {
          const auto& rec = recs[k];
          write_file(dir, indexed_name("traj", s, k), o,
                     [&](std::ostream& os) { io::write_trajectory_csv(os, rec, unit); });
          double sum = 0.0, span = 0.0;
          for (std::size_t i = 0; i + 1 < rec.size(); ++i) {
            const double h = rec.t[i + 1] - rec.t[i];
            sum += 0.5 * (rec.n_photons[i] + rec.n_photons[i + 1]) * h;
            span += h;
          }
          if (swept) summary << num(sw.values[s] * unit) << ',';
          summary << k << ',' << cs.stream + k << ',' << num(span > 0.0 ? sum / span : rec.n_photons.front()) << ','
                  << rec.jumps.size() << ',' << num(rec.max_leak()) << '\n';
          truncated = truncated || rec.truncation_invalid;
        }
      }
      write_file(dir, "ensemble.csv", o, [&](std::ostream& os) { os << summary.str(); });
      if (truncated) {
        std::cerr << "qcav: ensemble: at least one trajectory exceeded the leak threshold " << kLeakThreshold
                  << " (see max_leak in ensemble.csv); raise --cutoff\n";
        o.status = "truncation";
        o.code = kExitNumerical;
      }
    };
    return p;
  }
};

struct SteadyCmd {
  ModelFlags m;
  std::string out;

  void add(CLI::App& app) {
    auto* s = app.add_subcommand("steady", "Liouvillian steady state");
    m.add(s);
    m.cutoff = 20;
    s->add_option("--cutoff", m.cutoff, "Fock cutoff")->capture_default_str();
    s->add_option("--out", out, "output directory");
  }

  Prepared prepare() const {
    const ModelParams params = checked_params(m);
    const CompositeSpace space = make_space(params, m.cutoff.value_or(20));
    if (space.dim() > kMaxOracleDim)
      throw ArgumentError("Hilbert dimension " + std::to_string(space.dim()) + " exceeds the steady-state limit " +
                          std::to_string(kMaxOracleDim));
    Prepared p{"steady", {"steady"}, resolve_out(out), {}};
    auto c = m.canonical();
    p.args.insert(p.args.end(), c.begin(), c.end());
    p.args.insert(p.args.end(), {"--cutoff", std::to_string(space.fock().cutoff()), "--out", p.out_dir.string()});
    const double unit = m.kappa_unit;
    p.compute = [params, space, unit, dir = p.out_dir](Outcome& o) {
      const SteadyStateResult r = steady_state(params, space);
      write_file(dir, "steady.json", o, [&](std::ostream& os) { os << io::steady_state_json(r, unit); });
      std::cout << "n_ph=" << num(r.n_photons) << " a=" << num(r.field.real()) << (r.field.imag() < 0 ? "" : "+")
                << num(r.field.imag()) << "i" << (r.degenerate ? " (degenerate null space, sector solve)" : "") << '\n';
      if (!r.solved || !r.check.valid()) {
        std::cerr << "qcav: steady: no valid unique stationary state (residual " << r.residual << ")\n";
        o.status = "unsolved";
        o.code = kExitNumerical;
      }
    };
    return p;
  }
};

struct HistCmd {
  ModelFlags m;
  std::vector<std::string> files;
  std::string variable = "ratio";
  int bins = 100;
  std::optional<double> lo, hi;
  double t_from = 0.0;
  std::vector<double> sweep_values;
  std::string sweep_name = "eta";
  bool dwell = false;
  double min_dwell = ClassifyOptions{}.min_dwell;
  double dim_threshold = ClassifyOptions{}.dim_threshold;
  std::string out;

  void add(CLI::App& app) {
    auto* s = app.add_subcommand("hist", "time-weighted histograms and dwell segments from trajectory CSVs");
    m.add(s);
    s->add_option("files", files, "trajectory CSV files")->required()->check(CLI::ExistingFile);
    s->add_option("--variable", variable, "ratio | phase")->capture_default_str()->check(CLI::IsMember({"ratio", "phase"}));
    s->add_option("--bins", bins)->capture_default_str()->check(CLI::PositiveNumber);
    s->add_option("--lo", lo, "lower edge (default 0 for ratio, -pi for phase)");
    s->add_option("--hi", hi, "upper edge (default 2.5 for ratio, pi for phase)");
    s->add_option("--t-from", t_from, "discard samples before this time")->capture_default_str();
    s->add_option("--sweep-values", sweep_values, "one column key per file")->delimiter(',');
    s->add_option("--sweep-name", sweep_name, "parameter the sweep values set, per file")
        ->capture_default_str()
        ->check(CLI::IsMember({"eta", "delta", "g", "gamma"}));
    s->add_flag("--dwell", dwell, "also write dwell segments per file");
    s->add_option("--min-dwell", min_dwell, "segments shorter than this are merged, units of 1/kappa")->capture_default_str();
    s->add_option("--dim-threshold", dim_threshold, "ratio below which a sample is dim")->capture_default_str();
    s->add_option("--out", out, "output directory");
  }

  Prepared prepare() const {
    const ModelParams params = checked_params(m);
    std::vector<ModelParams> per_file(files.size(), params);
    for (std::size_t i = 0; i < sweep_values.size() && i < files.size(); ++i) {
      per_file[i] = with_sweep(params, sweep_name, sweep_values[i]);
      per_file[i].validate();
    }
    for (const auto& q : per_file) {
      if (!(q.eta > 0.0)) throw ArgumentError("--eta must be positive");
    }
    const bool ratio = variable == "ratio";
    const double l = lo.value_or(ratio ? 0.0 : -std::numbers::pi);
    const double h = hi.value_or(ratio ? 2.5 : std::numbers::pi);
    require_finite(l, "--lo");
    require_finite(h, "--hi");
    require_finite(t_from, "--t-from");
    if (!(h > l)) throw ArgumentError("--lo must be below --hi");
    if (!sweep_values.empty() && sweep_values.size() != files.size())
      throw ArgumentError("--sweep-values needs one value per file");
    if (!(min_dwell >= 0.0) || !(dim_threshold >= 0.0)) throw ArgumentError("--min-dwell and --dim-threshold must be >= 0");
    for (const auto& f : files) {
      if (!fs::is_regular_file(f)) throw ArgumentError("not a file: " + f);
    }
    Prepared p{"hist", {"hist"}, resolve_out(out), {}};
    auto c = m.canonical();
    p.args.insert(p.args.end(), c.begin(), c.end());
    p.args.insert(p.args.end(), {"--variable", variable, "--bins", std::to_string(bins), "--lo", num(l), "--hi", num(h),
                                 "--t-from", num(t_from)});
    if (!sweep_values.empty()) {
      std::string joined;
      for (double v : sweep_values) joined += (joined.empty() ? "" : ",") + num(v);
      p.args.insert(p.args.end(), {"--sweep-values", joined, "--sweep-name", sweep_name});
    }
    if (dwell) p.args.push_back("--dwell");
    p.args.insert(p.args.end(), {"--min-dwell", num(min_dwell), "--dim-threshold", num(dim_threshold), "--out",
                                 p.out_dir.string()});
    for (const auto& f : files) p.args.push_back(fs::absolute(f).string());

    const AxisSpec axis = AxisSpec::uniform(ratio ? HistogramVariable::Ratio : HistogramVariable::Phase, l, h, bins);
    const double unit = m.kappa_unit;
    p.compute = [*this, per_file, axis, unit, dir = p.out_dir](Outcome& o) {
      std::vector<NormalizedSeries> series;
      for (std::size_t i = 0; i < files.size(); ++i) {
        TrajectoryRecord rec = io::read_trajectory_csv(fs::path(files[i]));
        for (double& t : rec.t) t *= unit;
        series.push_back(normalized_series(rec, per_file[i]).tail(t_from * unit));
      }
      HistogramSet hs;
      if (sweep_values.empty()) {
        std::vector<double> keys(series.size(), 0.0);
        hs = histogram(series, keys, axis);
        hs.sweep_values.clear();
      } else {
        hs = histogram(series, sweep_values, axis);
      }
      write_file(dir, "histogram.csv", o, [&](std::ostream& os) { io::write_histogram_csv(os, hs); });
      if (dwell) {
        ClassifyOptions opt;
        opt.min_dwell = min_dwell * unit;
        opt.dim_threshold = dim_threshold;
        for (std::size_t i = 0; i < series.size(); ++i) {
          const auto b = branch_solutions(per_file[i]);
          const auto a = classify_and_dwell(series[i], b, per_file[i], opt);
          write_file(dir, indexed_name("dwell", 0, i), o, [&](std::ostream& os) { io::write_dwell_csv(os, a, unit); });
        }
      }
    };
    return p;
  }
};

// numbers stay numbers in the manifest
json typed_value(const std::string& v) {
  if (!v.empty()) {
    char* end = nullptr;
    const long long i = std::strtoll(v.c_str(), &end, 10);
    if (*end == '\0') return i;
    const double d = std::strtod(v.c_str(), &end);
    if (*end == '\0' && std::isfinite(d)) return d;
  }
  return v;
}

json config_object(const std::vector<std::string>& args) {
  json cfg = json::object();
  json positional = json::array();
  for (std::size_t i = 1; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.rfind("--", 0) == 0) {
      const std::string key = a.substr(2);
      if (i + 1 < args.size() && args[i + 1].rfind("--", 0) != 0) {
        cfg[key] = typed_value(args[++i]);
      } else {
        cfg[key] = true;
      }
    } else {
      positional.push_back(a);
    }
  }
  if (!positional.empty()) cfg["files"] = positional;
  return cfg;
}

void write_manifest(const Prepared& p, const Outcome& o) {
  json j;
  j["tool"] = "qcav";
  j["version"] = kVersion;
  j["subcommand"] = p.subcommand;
  j["args"] = p.args;
  j["config"] = config_object(p.args);
  j["status"] = o.status;
  j["outputs"] = o.outputs;
  fs::create_directories(p.out_dir);
  std::ofstream os(p.out_dir / "manifest.json", std::ios::binary);
  if (!os) throw std::runtime_error("cannot write manifest in " + p.out_dir.string());
  os << j.dump(2) << '\n';
}

std::vector<std::string> replay_args(const std::string& manifest, const std::string& out_override) {
  std::ifstream in(manifest);
  if (!in) throw ArgumentError("cannot open manifest " + manifest);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ArgumentError("manifest is not valid JSON: " + std::string(e.what()));
  }
  if (!j.contains("args") || !j["args"].is_array()) throw ArgumentError("manifest has no args array");
  auto args = j["args"].get<std::vector<std::string>>();
  if (!out_override.empty()) {
    for (std::size_t i = 0; i + 1 < args.size(); ++i) {
      if (args[i] == "--out") args[i + 1] = out_override;
    }
  }
  return args;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"qcav: driven cavity coupled to three emitters"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(0, 1);
  std::string replay, replay_out;
  app.add_option("--replay", replay, "rerun the configuration stored in a manifest.json");
  app.add_option("--replay-out", replay_out, "output directory for --replay (default: the manifest's)");

  SpectrumCmd spectrum;
  BranchesCmd branches;
  MapCmd map;
  TrajectoryCmd trajectory;
  EnsembleCmd ensemble;
  SteadyCmd steady;
  HistCmd hist;
  spectrum.add(app);
  branches.add(app);
  map.add(app);
  trajectory.add(app);
  ensemble.add(app);
  steady.add(app);
  hist.add(app);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitArgumentError;
  }

  if (!replay.empty()) {
    if (!app.get_subcommands().empty()) {
      std::cerr << "qcav: --replay cannot be combined with a subcommand\n";
      return kExitArgumentError;
    }
    try {
      return run(replay_args(replay, replay_out));
    } catch (const ArgumentError& e) {
      std::cerr << "qcav: " << e.what() << '\n';
      return kExitArgumentError;
    }
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return kExitArgumentError;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  Prepared prepared;
  try {
    if (name == "spectrum") prepared = spectrum.prepare();
    else if (name == "branches") prepared = branches.prepare();
    else if (name == "map") prepared = map.prepare();
    else if (name == "trajectory") prepared = trajectory.prepare();
    else if (name == "ensemble") prepared = ensemble.prepare();
    else if (name == "steady") prepared = steady.prepare();
    else prepared = hist.prepare();
  } catch (const std::invalid_argument& e) {  // ArgumentError, ConfigError, DimensionError
    std::cerr << "qcav " << name << ": " << e.what() << '\n';
    return kExitArgumentError;
  } catch (const std::domain_error& e) {
    std::cerr << "qcav " << name << ": " << e.what() << '\n';
    return kExitArgumentError;
  }

  Outcome outcome;
  int code = kExitOk;
  try {
    prepared.compute(outcome);
    code = outcome.code;
  } catch (const StepSizeError& e) {
    std::cerr << "qcav " << name << ": " << e.what() << '\n';
    outcome.status = "step_size";
    code = kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "qcav " << name << ": " << e.what() << '\n';
    outcome.status = "error";
    code = kExitFailure;
  }
  try {
    write_manifest(prepared, outcome);
  } catch (const std::exception& e) {
    std::cerr << "qcav: " << e.what() << '\n';
    return code == kExitOk ? kExitFailure : code;
  }
  return code;
}

}  // namespace qcav::cli
