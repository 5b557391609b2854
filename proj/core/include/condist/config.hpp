#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "condist/dgp.hpp"
#include "condist/kernels.hpp"
#include "condist/llr.hpp"

namespace condist {

enum class Command { estimate, bias, rates, alr, equicont, clt, kernels_check, fixtures };

std::string to_string(Command cmd);

// All validation failures from one load attempt, newline-joined.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::vector<std::string>& violations);
  std::vector<std::string> violations;
};

struct BandwidthRule {
  double c = 1.0;
  double gamma = 0.2;  // h1 = c * n^{-gamma}
  double rho = 1.0;    // h2 = rho * h1

  double h1(std::int64_t n) const { return c * std::pow(static_cast<double>(n), -gamma); }
  double h2(std::int64_t n) const { return rho * h1(n); }
};

struct DeltaRule {
  double c = 1.0;
  double gamma = 0.5;  // delta_n = c * n^{-gamma}

  double delta(std::int64_t n) const { return c * std::pow(static_cast<double>(n), -gamma); }
};

struct GridSpec {
  int m_y = 201;
  int m_x = 51;
};

struct ExperimentConfig {
  Command command = Command::rates;
  DgpId dgp = DgpId::A;
  std::vector<KernelFamily> w_families;  // resolved to the dgp dimension
  KernelFamily k_family = KernelFamily::epanechnikov;
  std::vector<std::int64_t> n_schedule = {500, 2000, 8000, 32000};
  BandwidthRule bandwidth;
  int replications = 200;
  GridSpec grid;
  std::uint64_t seed = 20240817;
  std::optional<std::pair<double, double>> y_box;
  DeltaRule delta;
  Estimator estimator = Estimator::smoothed;
  std::vector<double> h_set = {0.2, 0.1, 0.05};
  int x_fine = 2001;

  // Runtime knob, not configuration: never echoed into reports.
  int threads = 1;

  KernelSpec kernel_spec() const;
  std::shared_ptr<const Dgp> make_dgp_instance() const { return make_dgp(dgp); }
  std::pair<double, double> effective_y_box(const Dgp& d) const {
    return y_box ? *y_box : d.y_range();
  }
  nlohmann::ordered_json echo() const;
};

struct EstimateConfig {
  DgpId dgp = DgpId::A;
  std::vector<KernelFamily> w_families;
  KernelFamily k_family = KernelFamily::epanechnikov;
  std::int64_t n = 2000;
  double h1 = 0.2;
  double h2 = 0.2;
  GridSpec grid;
  std::uint64_t seed = 20240817;
  bool clamp = false;
  double ridge = 0.0;
  bool write_sample = true;

  KernelSpec kernel_spec() const;
  nlohmann::ordered_json echo() const;
};

template <class Config>
struct Loaded {
  Config config;
  std::vector<std::string> warnings;  // theorem side-condition notices
};

Loaded<ExperimentConfig> load_experiment_config(const nlohmann::json& j, Command cmd);
Loaded<EstimateConfig> load_estimate_config(const nlohmann::json& j);

nlohmann::json parse_config_file(const std::filesystem::path& path);

}  // namespace condist
