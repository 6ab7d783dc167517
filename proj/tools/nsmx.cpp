// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end for the nsmx library.
//
//   nsmx simulate        one nsm or mhd run
//   nsmx sweep           eps sweep against the mhd reference
//   nsmx scaling-check   diffusive-scaling residual consistency
//   nsmx residual-check  finite-difference residual calibration
//   nsmx inspect FILE    print a snapshot header and field summaries
//
// Exit codes: 0 success, 2 configuration error, 3 numerical abort,
// 4 partially failed sweep.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "nsmx/harness.hpp"

namespace {

nsmx::RunConfig load_base_config(const std::string& config_path) {
  if (config_path.empty()) return {};
  std::ifstream in(config_path, std::ios::binary);
  if (!in) throw nsmx::ConfigError("cannot open config file " + config_path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw nsmx::ConfigError(std::string("invalid config JSON: ") + e.what());
  }
  return nsmx::parse_config(j);
}

// Common flags shared by simulate and sweep. Flags override the config file.
struct CommonOpts {
  std::string config_path;
  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "JSON config file");
  }
};

void add_run_flags(CLI::App* app, nsmx::RunConfig& c, std::string& dt_str) {
  app->add_option("--n", c.n, "grid points per direction");
  app->add_option("--t-end", c.t_end, "final time");
  app->add_option("--dt", dt_str, "time step, a number or 'auto'");
  app->add_option("--sample-every", c.sample_every, "steps between samples");
  app->add_option("--ic", c.ic.name, "initial data family");
  app->add_option("--amplitude", c.ic.amplitude, "initial data amplitude");
  app->add_option("--seed", c.ic.seed, "seed for random-smooth data");
  app->add_option("--decay-rate", c.ic.decay_rate,
                  "spectral decay for random-smooth data");
  app->add_option("--cutoff", c.cutoff, "mollifier cutoff (0 = band limit)");
  app->add_option("--nu", c.nu, "viscosity");
  app->add_option("--mu", c.mu, "resistivity (limit system)");
  app->add_option("--threshold-c", c.threshold_c, "smallness threshold constant");
  app->add_option("--output-dir", c.output_dir, "output directory");
  app->add_option("--snapshot-every", c.snapshot_every,
                  "samples between snapshots (0 disables)");
}

void apply_dt(nsmx::RunConfig& c, const std::string& dt_str) {
  if (dt_str.empty()) return;
  if (dt_str == "auto") {
    c.dt_auto = true;
    return;
  }
  try {
    size_t pos = 0;
    c.dt = std::stod(dt_str, &pos);
    if (pos != dt_str.size()) throw std::invalid_argument(dt_str);
    c.dt_auto = false;
  } catch (const std::exception&) {
    throw nsmx::ConfigError("--dt expects a number or 'auto', got '" + dt_str +
                            "'");
  }
}

int cmd_inspect(const std::string& path) {
  const nsmx::Snapshot snap = nsmx::read_snapshot(path);
  std::cout << snap.header.dump(2) << '\n';
  const auto names = snap.header.at("fields").get<std::vector<std::string>>();
  for (size_t i = 0; i < names.size(); ++i) {
    double lo = snap.payload[i][0], hi = lo, sum = 0.0;
    for (double v : snap.payload[i]) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      sum += v;
    }
    std::printf("%-4s min %.6e max %.6e mean %.6e\n", names[i].c_str(), lo, hi,
                sum / static_cast<double>(snap.payload[i].size()));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nsmx: pseudo-spectral Navier-Stokes-Maxwell / MHD suite"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "run one nsm or mhd simulation");
  CommonOpts sim_common;
  sim_common.attach(sim);
  nsmx::RunConfig sim_flags;
  std::string sim_dt, sim_system;
  double sim_eps = -1.0;
  add_run_flags(sim, sim_flags, sim_dt);
  sim->add_option("--system", sim_system, "nsm or mhd");
  sim->add_option("--eps", sim_eps, "dielectric parameter (nsm)");

  // sweep
  auto* swp = app.add_subcommand("sweep", "eps sweep against the mhd limit");
  CommonOpts swp_common;
  swp_common.attach(swp);
  nsmx::RunConfig swp_flags;
  std::string swp_dt;
  std::vector<double> swp_eps_list;
  bool swp_serial = false;
  add_run_flags(swp, swp_flags, swp_dt);
  swp->add_option("--eps-list", swp_eps_list,
                  "strictly decreasing eps values");
  swp->add_flag("--serial", swp_serial, "disable concurrent eps runs");

  // scaling-check
  auto* scl = app.add_subcommand("scaling-check",
                                 "diffusive-scaling residual consistency");
  int scl_n = 64;
  std::vector<int> scl_m = {1, 2, 3};
  double scl_tol = 1e-9;
  scl->add_option("--n", scl_n, "grid points per direction");
  scl->add_option("--m", scl_m, "integer scaling factors");
  scl->add_option("--tol", scl_tol, "relative tolerance");

  // residual-check
  auto* res = app.add_subcommand("residual-check",
                                 "finite-difference residual calibration");
  int res_n = 64;
  double res_eps = 1.0, res_h = 0.02;
  res->add_option("--n", res_n, "grid points per direction");
  res->add_option("--eps", res_eps, "dielectric parameter");
  res->add_option("--stencil-h", res_h, "base stencil half-width");

  // inspect
  auto* ins = app.add_subcommand("inspect", "print a snapshot summary");
  std::string ins_path;
  ins->add_option("file", ins_path, "snapshot file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) {
      nsmx::RunConfig c = load_base_config(sim_common.config_path);
      // flags override the file-provided values
      if (!sim_system.empty()) c.system = sim_system;
      auto take = [&](const char* name, auto& dst, const auto& src) {
        if (sim->count(name) > 0) dst = src;
      };
      take("--n", c.n, sim_flags.n);
      take("--t-end", c.t_end, sim_flags.t_end);
      take("--sample-every", c.sample_every, sim_flags.sample_every);
      take("--ic", c.ic.name, sim_flags.ic.name);
      take("--amplitude", c.ic.amplitude, sim_flags.ic.amplitude);
      take("--seed", c.ic.seed, sim_flags.ic.seed);
      take("--decay-rate", c.ic.decay_rate, sim_flags.ic.decay_rate);
      take("--cutoff", c.cutoff, sim_flags.cutoff);
      take("--nu", c.nu, sim_flags.nu);
      take("--mu", c.mu, sim_flags.mu);
      take("--threshold-c", c.threshold_c, sim_flags.threshold_c);
      take("--output-dir", c.output_dir, sim_flags.output_dir);
      take("--snapshot-every", c.snapshot_every, sim_flags.snapshot_every);
      if (sim_eps > 0.0) c.eps = sim_eps;
      apply_dt(c, sim_dt);
      if (c.system != "nsm" && c.system != "mhd") {
        throw nsmx::ConfigError("simulate requires --system nsm or mhd");
      }
      c.validate();
      const auto r = nsmx::run_single(c);
      std::cout << "wrote " << r.dir.string() << " (" << r.steps
                << " steps, final t " << r.final_t << ")\n";
      if (r.exit_code != 0) std::cerr << "aborted: " << r.error << '\n';
      return r.exit_code;
    }

    if (*swp) {
      nsmx::RunConfig c = load_base_config(swp_common.config_path);
      c.system = "sweep";
      auto take = [&](const char* name, auto& dst, const auto& src) {
        if (swp->count(name) > 0) dst = src;
      };
      take("--n", c.n, swp_flags.n);
      take("--t-end", c.t_end, swp_flags.t_end);
      take("--sample-every", c.sample_every, swp_flags.sample_every);
      take("--ic", c.ic.name, swp_flags.ic.name);
      take("--amplitude", c.ic.amplitude, swp_flags.ic.amplitude);
      take("--seed", c.ic.seed, swp_flags.ic.seed);
      take("--decay-rate", c.ic.decay_rate, swp_flags.ic.decay_rate);
      take("--cutoff", c.cutoff, swp_flags.cutoff);
      take("--nu", c.nu, swp_flags.nu);
      take("--mu", c.mu, swp_flags.mu);
      take("--threshold-c", c.threshold_c, swp_flags.threshold_c);
      take("--output-dir", c.output_dir, swp_flags.output_dir);
      take("--snapshot-every", c.snapshot_every, swp_flags.snapshot_every);
      if (!swp_eps_list.empty()) c.eps_list = swp_eps_list;
      if (swp_serial) c.parallel = false;
      apply_dt(c, swp_dt);
      c.validate();
      const auto r = nsmx::run_sweep(c);
      std::cout << "wrote " << r.dir.string() << '\n';
      for (const auto& rec : r.records) {
        std::printf("eps %-10.3g sup-H1(u) %.6e sup-H1(B) %.6e\n", rec.eps,
                    rec.sup_t_h1_u, rec.sup_t_h1_B);
      }
      if (r.has_fit) {
        std::printf("fitted order %.3f, vanishing-term slopes %.3f / %.3f\n",
                    r.fitted_order, r.vanishing_slope_1, r.vanishing_slope_2);
      }
      for (const auto& f : r.failures) std::cerr << "failed: " << f << '\n';
      return r.exit_code;
    }

    if (*scl) {
      const auto r = nsmx::run_scaling_check(nsmx::Grid(scl_n), scl_m, scl_tol);
      for (const auto& e : r.entries) {
        std::printf("m=%d max relative error %.3e  %s\n", e.m, e.max_rel_err,
                    e.pass ? "ok" : "FAIL");
      }
      return r.pass ? 0 : 3;
    }

    if (*res) {
      const auto r =
          nsmx::run_residual_check(nsmx::Grid(res_n), res_eps, res_h);
      for (const auto& e : r.entries) {
        std::printf("%-9s err(h) %.3e err(h/2) %.3e ratio %.3f\n",
                    e.equation.c_str(), e.err_h, e.err_h2, e.ratio);
      }
      return r.pass ? 0 : 3;
    }

    if (*ins) return cmd_inspect(ins_path);
  } catch (const nsmx::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const nsmx::SolverError& e) {
    std::cerr << "numerical abort: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
