#include "condist/report.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "condist/io.hpp"

namespace condist {

nlohmann::ordered_json SimulationReport::to_json() const {
  nlohmann::ordered_json j;
  j["experiment"] = experiment;
  j["config"] = config;
  j["records"] = records;
  j["aggregates"] = aggregates;
  j["summary"] = summary;
  return j;
}

void SimulationReport::write_files(const std::filesystem::path& out_dir) const {
  std::filesystem::create_directories(out_dir);
  write_text_file(out_dir / (experiment + "_report.json"), to_json().dump(2) + "\n");

  std::string csv = "experiment,n,stat,value\n";
  for (const auto& row : aggregates) {
    csv += experiment + "," + row.at("n").dump() + "," +
           row.at("stat").get<std::string>() + "," +
           format_double(row.at("value").get<double>()) + "\n";
  }
  write_text_file(out_dir / (experiment + "_aggregates.csv"), csv);

  if (!loglog.empty()) {
    std::string ll = "log_n,log_median_sup_error\n";
    for (const auto& [ln, le] : loglog) {
      ll += format_double(ln) + "," + format_double(le) + "\n";
    }
    write_text_file(out_dir / (experiment + "_loglog.csv"), ll);
  }
}

void append_aggregate(SimulationReport& report, std::int64_t n, const std::string& stat,
                      double value) {
  nlohmann::ordered_json row;
  row["n"] = n;
  row["stat"] = stat;
  row["value"] = value;
  report.aggregates.push_back(std::move(row));
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median: empty input");
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size();
  return m % 2 == 1 ? values[m / 2] : 0.5 * (values[m / 2 - 1] + values[m / 2]);
}

double mean(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("mean: empty input");
  double acc = 0.0;
  for (double v : values) acc += v;
  return acc / static_cast<double>(values.size());
}

double variance(const std::vector<double>& values) {
  if (values.size() < 2) throw std::invalid_argument("variance: need at least 2 values");
  const double m = mean(values);
  double acc = 0.0;
  for (double v : values) acc += (v - m) * (v - m);
  return acc / static_cast<double>(values.size() - 1);
}

double skewness(const std::vector<double>& values) {
  const double m = mean(values);
  double m2 = 0.0, m3 = 0.0;
  for (double v : values) {
    const double d = v - m;
    m2 += d * d;
    m3 += d * d * d;
  }
  const double n = static_cast<double>(values.size());
  m2 /= n;
  m3 /= n;
  return m3 / std::pow(m2, 1.5);
}

double excess_kurtosis(const std::vector<double>& values) {
  const double m = mean(values);
  double m2 = 0.0, m4 = 0.0;
  for (double v : values) {
    const double d = v - m;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  const double n = static_cast<double>(values.size());
  m2 /= n;
  m4 /= n;
  return m4 / (m2 * m2) - 3.0;
}

SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 3) {
    throw std::invalid_argument("fit_slope: need matched inputs with >= 3 points");
  }
  const double mx = mean(x);
  const double my = mean(y);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - fit.intercept - fit.slope * x[i];
    rss += r * r;
  }
  fit.stderr_slope = std::sqrt(rss / static_cast<double>(x.size() - 2) / sxx);
  return fit;
}

}  // namespace condist
