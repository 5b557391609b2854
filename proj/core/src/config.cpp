#include "condist/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace condist {

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += "\n";
    out += parts[i];
  }
  return out;
}

class Checker {
 public:
  explicit Checker(const nlohmann::json& j) : root_(j) {}

  void reject_unknown_keys(const nlohmann::json& obj, const std::string& where,
                           const std::set<std::string>& allowed) {
    if (!obj.is_object()) {
      fail(where + ": expected a JSON object");
      return;
    }
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (!allowed.count(it.key())) fail(where + ": unknown key '" + it.key() + "'");
    }
  }

  template <class T>
  void read(const nlohmann::json& obj, const std::string& key, T& out) {
    if (!obj.is_object() || !obj.contains(key)) return;
    try {
      out = obj.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      fail("field '" + key + "' has the wrong type");
    }
  }

  void fail(std::string msg) { violations_.push_back(std::move(msg)); }
  bool ok() const { return violations_.empty(); }
  void throw_if_failed() const {
    if (!violations_.empty()) throw ConfigError(violations_);
  }

 private:
  const nlohmann::json& root_;
  std::vector<std::string> violations_;
};

std::vector<KernelFamily> parse_w_families(Checker& chk, const nlohmann::json& kernel_obj,
                                           int d) {
  std::vector<KernelFamily> fams(static_cast<std::size_t>(d), KernelFamily::epanechnikov);
  if (!kernel_obj.is_object() || !kernel_obj.contains("w")) return fams;
  const auto& w = kernel_obj.at("w");
  try {
    if (w.is_string()) {
      const KernelFamily f = kernel_family_from_string(w.get<std::string>());
      std::fill(fams.begin(), fams.end(), f);
    } else if (w.is_array()) {
      if (static_cast<int>(w.size()) != d) {
        chk.fail("kernel.w: expected " + std::to_string(d) + " per-axis families");
        return fams;
      }
      for (int l = 0; l < d; ++l) {
        fams[static_cast<std::size_t>(l)] = kernel_family_from_string(w[l].get<std::string>());
      }
    } else {
      chk.fail("kernel.w: expected a family name or a list of family names");
    }
  } catch (const std::exception& e) {
    chk.fail(std::string("kernel.w: ") + e.what());
  }
  return fams;
}

KernelFamily parse_k_family(Checker& chk, const nlohmann::json& kernel_obj) {
  if (!kernel_obj.is_object() || !kernel_obj.contains("k")) return KernelFamily::epanechnikov;
  try {
    return kernel_family_from_string(kernel_obj.at("k").get<std::string>());
  } catch (const std::exception& e) {
    chk.fail(std::string("kernel.k: ") + e.what());
    return KernelFamily::epanechnikov;
  }
}

nlohmann::ordered_json kernel_echo(const std::vector<KernelFamily>& w, KernelFamily k) {
  nlohmann::ordered_json out;
  nlohmann::ordered_json wj = nlohmann::ordered_json::array();
  for (auto f : w) wj.push_back(to_string(f));
  out["w"] = wj;
  out["k"] = to_string(k);
  return out;
}

}  // namespace

std::string to_string(Command cmd) {
  switch (cmd) {
    case Command::estimate: return "estimate";
    case Command::bias: return "bias";
    case Command::rates: return "rates";
    case Command::alr: return "alr";
    case Command::equicont: return "equicont";
    case Command::clt: return "clt";
    case Command::kernels_check: return "kernels-check";
    case Command::fixtures: return "fixtures";
  }
  return "?";
}

ConfigError::ConfigError(const std::vector<std::string>& v)
    : std::runtime_error(join(v)), violations(v) {}

KernelSpec ExperimentConfig::kernel_spec() const {
  std::vector<UnivariateKernel> axes;
  axes.reserve(w_families.size());
  for (auto f : w_families) axes.push_back(UnivariateKernel{f});
  return KernelSpec(std::move(axes), UnivariateKernel{k_family});
}

KernelSpec EstimateConfig::kernel_spec() const {
  std::vector<UnivariateKernel> axes;
  axes.reserve(w_families.size());
  for (auto f : w_families) axes.push_back(UnivariateKernel{f});
  return KernelSpec(std::move(axes), UnivariateKernel{k_family});
}

nlohmann::ordered_json ExperimentConfig::echo() const {
  nlohmann::ordered_json j;
  j["command"] = to_string(command);
  j["dgp"] = to_string(dgp);
  j["kernel"] = kernel_echo(w_families, k_family);
  j["n_schedule"] = n_schedule;
  j["bandwidth"] = {{"c", bandwidth.c}, {"gamma", bandwidth.gamma}, {"rho", bandwidth.rho}};
  j["replications"] = replications;
  j["grid"] = {{"m_y", grid.m_y}, {"m_x", grid.m_x}};
  j["seed"] = seed;
  if (y_box) j["y_box"] = {y_box->first, y_box->second};
  if (command == Command::equicont) {
    j["delta"] = {{"c", delta.c}, {"gamma", delta.gamma}};
  }
  if (command == Command::rates) {
    j["estimator"] = estimator == Estimator::smoothed ? "smoothed" : "unsmoothed";
  }
  if (command == Command::bias) j["h_set"] = h_set;
  if (command == Command::alr) j["x_fine"] = x_fine;
  return j;
}

nlohmann::ordered_json EstimateConfig::echo() const {
  nlohmann::ordered_json j;
  j["command"] = "estimate";
  j["dgp"] = to_string(dgp);
  j["kernel"] = kernel_echo(w_families, k_family);
  j["n"] = n;
  j["h1"] = h1;
  j["h2"] = h2;
  j["grid"] = {{"m_y", grid.m_y}, {"m_x", grid.m_x}};
  j["seed"] = seed;
  j["clamp"] = clamp;
  j["ridge"] = ridge;
  j["write_sample"] = write_sample;
  return j;
}

Loaded<ExperimentConfig> load_experiment_config(const nlohmann::json& j, Command cmd) {
  Checker chk(j);
  ExperimentConfig cfg;
  cfg.command = cmd;

  chk.reject_unknown_keys(j, "config",
                          {"dgp", "kernel", "n_schedule", "bandwidth", "replications", "grid",
                           "seed", "y_box", "delta", "estimator", "h_set", "x_fine"});

  std::string dgp_name = "A";
  chk.read(j, "dgp", dgp_name);
  try {
    cfg.dgp = dgp_id_from_string(dgp_name);
  } catch (const std::exception& e) {
    chk.fail(std::string("dgp: ") + e.what());
  }
  const int d = make_dgp(cfg.dgp)->dim();

  if (j.is_object() && j.contains("kernel")) {
    const auto& kj = j.at("kernel");
    chk.reject_unknown_keys(kj, "kernel", {"w", "k"});
    cfg.w_families = parse_w_families(chk, kj, d);
    cfg.k_family = parse_k_family(chk, kj);
  } else {
    cfg.w_families.assign(static_cast<std::size_t>(d), KernelFamily::epanechnikov);
  }

  chk.read(j, "n_schedule", cfg.n_schedule);
  if (cfg.n_schedule.empty()) chk.fail("n_schedule: must not be empty");
  for (auto n : cfg.n_schedule) {
    if (n < 1) chk.fail("n_schedule: entries must be positive");
  }
  for (std::size_t i = 1; i < cfg.n_schedule.size(); ++i) {
    if (cfg.n_schedule[i] <= cfg.n_schedule[i - 1]) {
      chk.fail("n_schedule: must be strictly increasing");
      break;
    }
  }
  if (cmd == Command::rates && cfg.n_schedule.size() < 4) {
    chk.fail("n_schedule: rate experiments need at least 4 sizes");
  }

  if (j.is_object() && j.contains("bandwidth")) {
    const auto& bj = j.at("bandwidth");
    chk.reject_unknown_keys(bj, "bandwidth", {"c", "gamma", "rho"});
    chk.read(bj, "c", cfg.bandwidth.c);
    chk.read(bj, "gamma", cfg.bandwidth.gamma);
    chk.read(bj, "rho", cfg.bandwidth.rho);
  }
  if (!(cfg.bandwidth.c > 0.0)) chk.fail("bandwidth.c: must be positive");
  if (!(cfg.bandwidth.rho > 0.0)) chk.fail("bandwidth.rho: must be positive");
  if (!(cfg.bandwidth.gamma > 0.0 && cfg.bandwidth.gamma < 1.0 / d)) {
    chk.fail("bandwidth.gamma: must lie in (0, 1/d) = (0, " + std::to_string(1.0 / d) + ")");
  }

  chk.read(j, "replications", cfg.replications);
  if (cfg.replications < 1) chk.fail("replications: must be >= 1");

  if (j.is_object() && j.contains("grid")) {
    const auto& gj = j.at("grid");
    chk.reject_unknown_keys(gj, "grid", {"m_y", "m_x"});
    chk.read(gj, "m_y", cfg.grid.m_y);
    chk.read(gj, "m_x", cfg.grid.m_x);
  }
  if (cfg.grid.m_y < 2) chk.fail("grid.m_y: must be >= 2");
  if (cfg.grid.m_x < 2) chk.fail("grid.m_x: must be >= 2");

  chk.read(j, "seed", cfg.seed);

  if (j.is_object() && j.contains("y_box")) {
    std::vector<double> yb;
    chk.read(j, "y_box", yb);
    if (yb.size() != 2 || !(yb[0] < yb[1])) {
      chk.fail("y_box: expected [lo, hi] with lo < hi");
    } else {
      cfg.y_box = {yb[0], yb[1]};
    }
  }

  if (j.is_object() && j.contains("delta")) {
    const auto& dj = j.at("delta");
    chk.reject_unknown_keys(dj, "delta", {"c", "gamma"});
    chk.read(dj, "c", cfg.delta.c);
    chk.read(dj, "gamma", cfg.delta.gamma);
    if (!(cfg.delta.c > 0.0)) chk.fail("delta.c: must be positive");
    if (!(cfg.delta.gamma > 0.0)) chk.fail("delta.gamma: must be positive (delta_n = o(1))");
  }

  if (j.is_object() && j.contains("estimator")) {
    std::string est;
    chk.read(j, "estimator", est);
    if (est == "smoothed") {
      cfg.estimator = Estimator::smoothed;
    } else if (est == "unsmoothed") {
      cfg.estimator = Estimator::unsmoothed;
    } else {
      chk.fail("estimator: expected 'smoothed' or 'unsmoothed'");
    }
  }

  chk.read(j, "h_set", cfg.h_set);
  if (cfg.h_set.empty()) chk.fail("h_set: must not be empty");
  for (double h : cfg.h_set) {
    if (!(h > 0.0)) chk.fail("h_set: entries must be positive");
  }
  for (std::size_t i = 1; i < cfg.h_set.size(); ++i) {
    if (cfg.h_set[i] >= cfg.h_set[i - 1]) {
      chk.fail("h_set: must be strictly decreasing");
      break;
    }
  }

  chk.read(j, "x_fine", cfg.x_fine);
  if (cfg.x_fine < 8) chk.fail("x_fine: must be >= 8");

  if ((cmd == Command::alr || cmd == Command::equicont || cmd == Command::clt) && d != 1) {
    chk.fail(to_string(cmd) + ": only d = 1 data-generating processes are supported");
  }

  chk.throw_if_failed();

  // Theorem side conditions under h1 = c n^{-gamma}: these are warnings, not
  // errors, because exploratory rules are legitimate.
  Loaded<ExperimentConfig> out{std::move(cfg), {}};
  const double gamma = out.config.bandwidth.gamma;
  if (cmd == Command::alr && gamma < 1.0 / (d + 4)) {
    out.warnings.push_back(
        "bandwidth.gamma < 1/(d+4): the rule violates 'n h1^{d+4} / |log h1| bounded'");
  }
  if (cmd == Command::clt) {
    if (gamma <= 0.25) {
      out.warnings.push_back("bandwidth.gamma <= 1/4: the rule violates 'sqrt(n) h1^2 -> 0'");
    }
    if (gamma >= 0.5) {
      out.warnings.push_back(
          "bandwidth.gamma >= 1/2: the rule violates 'sqrt(n) h1 / |log h1| -> infinity'");
    }
  }
  if (out.config.replications < 100 && cmd != Command::bias) {
    out.warnings.push_back("replications < 100: statistical summaries will be noisy");
  }
  return out;
}

Loaded<EstimateConfig> load_estimate_config(const nlohmann::json& j) {
  Checker chk(j);
  EstimateConfig cfg;

  chk.reject_unknown_keys(j, "config",
                          {"dgp", "kernel", "n", "h1", "h2", "grid", "seed", "clamp", "ridge",
                           "write_sample"});

  std::string dgp_name = "A";
  chk.read(j, "dgp", dgp_name);
  try {
    cfg.dgp = dgp_id_from_string(dgp_name);
  } catch (const std::exception& e) {
    chk.fail(std::string("dgp: ") + e.what());
  }
  const int d = make_dgp(cfg.dgp)->dim();

  if (j.is_object() && j.contains("kernel")) {
    const auto& kj = j.at("kernel");
    chk.reject_unknown_keys(kj, "kernel", {"w", "k"});
    cfg.w_families = parse_w_families(chk, kj, d);
    cfg.k_family = parse_k_family(chk, kj);
  } else {
    cfg.w_families.assign(static_cast<std::size_t>(d), KernelFamily::epanechnikov);
  }

  chk.read(j, "n", cfg.n);
  if (cfg.n < 1) chk.fail("n: must be >= 1");
  chk.read(j, "h1", cfg.h1);
  if (!(cfg.h1 > 0.0) || !std::isfinite(cfg.h1)) chk.fail("h1: must be positive and finite");
  chk.read(j, "h2", cfg.h2);
  if (!(cfg.h2 > 0.0) || !std::isfinite(cfg.h2)) chk.fail("h2: must be positive and finite");

  if (j.is_object() && j.contains("grid")) {
    const auto& gj = j.at("grid");
    chk.reject_unknown_keys(gj, "grid", {"m_y", "m_x"});
    chk.read(gj, "m_y", cfg.grid.m_y);
    chk.read(gj, "m_x", cfg.grid.m_x);
  }
  if (cfg.grid.m_y < 2) chk.fail("grid.m_y: must be >= 2");
  if (cfg.grid.m_x < 2) chk.fail("grid.m_x: must be >= 2");

  chk.read(j, "seed", cfg.seed);
  chk.read(j, "clamp", cfg.clamp);
  chk.read(j, "ridge", cfg.ridge);
  if (cfg.ridge < 0.0) chk.fail("ridge: must be >= 0");
  chk.read(j, "write_sample", cfg.write_sample);

  chk.throw_if_failed();
  return {std::move(cfg), {}};
}

nlohmann::json parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open config file: " + path.string()});
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError({std::string("config parse error: ") + e.what()});
  }
}

}  // namespace condist
