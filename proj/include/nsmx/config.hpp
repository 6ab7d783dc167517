// SPDX-License-Identifier: Apache-2.0

#ifndef NSMX_CONFIG_HPP
#define NSMX_CONFIG_HPP

#include <json.hpp>

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nsmx/initial_data.hpp"

namespace nsmx {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string system = "nsm";  // nsm | mhd | sweep | scaling-check | residual-check
  int n = 64;
  double t_end = 1.0;
  double dt = 1e-3;
  bool dt_auto = false;
  int sample_every = 10;
  IcParams ic;
  double eps = 1e-2;
  std::vector<double> eps_list;
  int cutoff = 0;  // 0 -> band limit n/3
  double nu = 1.0;
  double mu = 1.0;
  double threshold_c = 1.0;
  std::string output_dir;
  int snapshot_every = 0;  // samples between snapshots, 0 disables
  bool parallel = true;
  std::vector<int> scaling_m = {1, 2, 3};

  int effective_cutoff() const { return cutoff > 0 ? cutoff : n / 3; }

  void validate() const {
    static const std::set<std::string> systems = {
        "nsm", "mhd", "sweep", "scaling-check", "residual-check"};
    if (!systems.contains(system)) {
      throw ConfigError("unknown system '" + system + "'");
    }
    if (n < 8 || n % 2 != 0) throw ConfigError("n must be even and >= 8");
    if (t_end < 0.0) throw ConfigError("t_end must be >= 0");
    if (!dt_auto && dt <= 0.0) throw ConfigError("dt must be positive or \"auto\"");
    if (sample_every < 1) throw ConfigError("sample_every must be >= 1");
    if (eps <= 0.0) throw ConfigError("eps must be positive");
    if (system == "sweep") {
      if (eps_list.empty()) throw ConfigError("sweep requires a nonempty eps_list");
      for (size_t i = 1; i < eps_list.size(); ++i) {
        if (eps_list[i] >= eps_list[i - 1]) {
          throw ConfigError("eps_list must be strictly decreasing");
        }
      }
      for (double e : eps_list) {
        if (e <= 0.0) throw ConfigError("eps_list entries must be positive");
      }
    }
    if (cutoff < 0 || cutoff > n / 3) {
      throw ConfigError("cutoff must lie in [0, n/3]");
    }
  }
};

namespace detail {

inline void require_known_keys(const nlohmann::json& j,
                               const std::set<std::string>& known,
                               const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known.contains(it.key())) {
      throw ConfigError("unknown config key '" + it.key() + "' in " + where);
    }
  }
}

}  // namespace detail

inline RunConfig parse_config(const nlohmann::json& j) {
  detail::require_known_keys(
      j,
      {"system", "n", "t_end", "dt", "sample_every", "ic", "eps", "eps_list",
       "cutoff", "nu", "mu", "threshold_c", "output_dir", "snapshot_every",
       "parallel", "scaling_m"},
      "config");
  RunConfig c;
  try {
    if (j.contains("system")) c.system = j.at("system").get<std::string>();
    if (j.contains("n")) c.n = j.at("n").get<int>();
    if (j.contains("t_end")) c.t_end = j.at("t_end").get<double>();
    if (j.contains("dt")) {
      if (j.at("dt").is_string()) {
        if (j.at("dt").get<std::string>() != "auto") {
          throw ConfigError("dt must be a number or \"auto\"");
        }
        c.dt_auto = true;
      } else {
        c.dt = j.at("dt").get<double>();
      }
    }
    if (j.contains("sample_every")) c.sample_every = j.at("sample_every").get<int>();
    if (j.contains("ic")) {
      const auto& ic = j.at("ic");
      detail::require_known_keys(ic, {"name", "amplitude", "seed", "decay_rate"},
                                 "ic");
      if (ic.contains("name")) c.ic.name = ic.at("name").get<std::string>();
      if (ic.contains("amplitude")) c.ic.amplitude = ic.at("amplitude").get<double>();
      if (ic.contains("seed")) c.ic.seed = ic.at("seed").get<unsigned long>();
      if (ic.contains("decay_rate")) c.ic.decay_rate = ic.at("decay_rate").get<double>();
    }
    if (j.contains("eps")) c.eps = j.at("eps").get<double>();
    if (j.contains("eps_list")) c.eps_list = j.at("eps_list").get<std::vector<double>>();
    if (j.contains("cutoff")) c.cutoff = j.at("cutoff").get<int>();
    if (j.contains("nu")) c.nu = j.at("nu").get<double>();
    if (j.contains("mu")) c.mu = j.at("mu").get<double>();
    if (j.contains("threshold_c")) c.threshold_c = j.at("threshold_c").get<double>();
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("snapshot_every")) c.snapshot_every = j.at("snapshot_every").get<int>();
    if (j.contains("parallel")) c.parallel = j.at("parallel").get<bool>();
    if (j.contains("scaling_m")) c.scaling_m = j.at("scaling_m").get<std::vector<int>>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  c.validate();
  return c;
}

inline nlohmann::json config_to_json(const RunConfig& c) {
  nlohmann::json j;
  j["system"] = c.system;
  j["n"] = c.n;
  j["t_end"] = c.t_end;
  if (c.dt_auto) {
    j["dt"] = "auto";
  } else {
    j["dt"] = c.dt;
  }
  j["sample_every"] = c.sample_every;
  j["ic"] = {{"name", c.ic.name},
             {"amplitude", c.ic.amplitude},
             {"seed", c.ic.seed},
             {"decay_rate", c.ic.decay_rate}};
  j["eps"] = c.eps;
  if (!c.eps_list.empty()) j["eps_list"] = c.eps_list;
  j["cutoff"] = c.cutoff;
  j["nu"] = c.nu;
  j["mu"] = c.mu;
  j["threshold_c"] = c.threshold_c;
  j["output_dir"] = c.output_dir;
  j["snapshot_every"] = c.snapshot_every;
  j["parallel"] = c.parallel;
  j["scaling_m"] = c.scaling_m;
  return j;
}

}  // namespace nsmx

#endif
