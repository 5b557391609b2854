#pragma once

#include <vector>

#include "condist/config.hpp"
#include "condist/report.hpp"
#include "condist/sample.hpp"

namespace condist {

// Monte Carlo experiments behind the CLI subcommands. Replications are
// independent seed streams aggregated in index order, so the resulting
// report is byte-identical at any thread count.

// Bias-expansion halving study (deterministic, quadrature only): for each h
// in h_set with h1 = h2 = h, the sup over an interior grid of
// |(beta0_bar - F) - prediction| must shrink faster than h^2, and near the
// boundary the support-aware form must beat the diagonal interior form.
SimulationReport run_bias_experiment(const ExperimentConfig& cfg);

// Uniform sup-norm error of the smoothed or unsmoothed estimator over the
// n-schedule; fits the log-log slope of the median sup error.
SimulationReport run_rate_experiment(const ExperimentConfig& cfg);

// Remainder of the asymptotic linear representation: per replication the
// sup over the grid of || H1(beta_hat - beta_bar) - Xi^{-1} mean score ||,
// normalized by |log h1| / (n h1^d).
SimulationReport run_alr_experiment(const ExperimentConfig& cfg);

// Stochastic equicontinuity modulus over response pairs delta_n apart,
// normalized by sqrt(|log h1|/(n h1^d)) * delta_n/h2 + |log h1|/(n h1^d).
SimulationReport run_equicontinuity_experiment(const ExperimentConfig& cfg);

// CLT for the integrated conditional CDF: moments of sqrt(n)(theta_hat -
// theta) across replications against the quadrature variance.
SimulationReport run_clt_experiment(const ExperimentConfig& cfg);

// Dispatch on cfg.command.
SimulationReport run_experiment(const ExperimentConfig& cfg);

// Grid helpers shared with the CLI.
std::vector<double> linspace(double lo, double hi, int m);
std::vector<Eigen::VectorXd> make_x_grid(const SupportBox& support, int m_x);

// Sample-driven response grid: m_y equally spaced points spanning
// [min Y - pad, max Y + pad] plus one point below and one above where the
// estimator is exactly constant.
std::vector<double> sample_y_grid(const Sample& sample, double pad, int m_y);

}  // namespace condist
