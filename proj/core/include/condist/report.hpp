#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace condist {

// Serializable experiment outcome. Everything that goes into the files is
// kept in deterministic insertion order; wall-clock data never enters, so
// reruns with the same config and seed are byte-identical at any thread
// count.
struct SimulationReport {
  std::string experiment;
  nlohmann::ordered_json config;
  nlohmann::ordered_json records = nlohmann::ordered_json::array();
  nlohmann::ordered_json aggregates = nlohmann::ordered_json::array();  // rows n/stat/value
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  std::vector<std::pair<double, double>> loglog;  // (log n, log median sup error), optional

  nlohmann::ordered_json to_json() const;

  // <experiment>_report.json, <experiment>_aggregates.csv, and when loglog
  // data is present, <experiment>_loglog.csv.
  void write_files(const std::filesystem::path& out_dir) const;
};

void append_aggregate(SimulationReport& report, std::int64_t n, const std::string& stat,
                      double value);

// Small statistics helpers shared by the engines.
double median(std::vector<double> values);
double mean(const std::vector<double>& values);
double variance(const std::vector<double>& values);  // unbiased
double skewness(const std::vector<double>& values);
double excess_kurtosis(const std::vector<double>& values);

struct SlopeFit {
  double slope = 0.0;
  double stderr_slope = 0.0;
  double intercept = 0.0;
};

// OLS of y on x.
SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace condist
