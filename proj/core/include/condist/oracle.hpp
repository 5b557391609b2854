#pragma once

#include <Eigen/Core>

#include <utility>
#include <vector>

#include "condist/dgp.hpp"
#include "condist/kernels.hpp"
#include "condist/llr.hpp"
#include "condist/support.hpp"

namespace condist::oracle {

// Population design moments restricted to the support:
//   Omega(x, h1) = int r(u) r(u)' w(u) 1{x + h1 u in box} du.
// With a box support the integration region is an exact sub-box, so every
// entry factorizes into per-axis partial moments.
struct OmegaReport {
  Eigen::MatrixXd omega;
  double eig_min = 0.0;
  double eig_max = 0.0;
};

OmegaReport omega(const Eigen::VectorXd& x, double h1, const SupportBox& support,
                  const KernelSpec& spec);

// Xi(x, h1) = int r(u) r(u)' w(u) f_X(x + h1 u) du.
Eigen::MatrixXd xi_pop(const Eigen::VectorXd& x, double h1, const Dgp& dgp,
                       const KernelSpec& spec);

// Ftilde(y|x) = E[K((y - Y)/h2) | X = x] = int k(v) F(y - h2 v | x) dv.
double smoothed_cdf(double y, const Eigen::VectorXd& x, double h2, const Dgp& dgp,
                    const KernelSpec& spec, double abs_tol = 1e-11);

// upsilon(y,x,h1,h2) = int r(u) w(u) Ftilde(y|x+h1 u) f_X(x+h1 u) du over the
// support-clipped sub-box; nested quadrature with the Ftilde integral inside.
Eigen::VectorXd upsilon_pop(double y, const Eigen::VectorXd& x, const Bandwidths& bw,
                            const Dgp& dgp, const KernelSpec& spec);

// Deterministic target of the local fit at fixed bandwidths:
// solves Xi(x,h1) (H1 beta_bar) = upsilon(y,x,h1,h2) from nested quadrature.
struct PseudoTrue {
  Eigen::VectorXd beta_bar;  // (beta0_bar, slope block)
  Eigen::VectorXd h1_beta;   // solver-scale vector (beta0_bar, h1 * slopes)
  Eigen::MatrixXd xi;
  Eigen::VectorXd upsilon;
};

PseudoTrue pseudo_true(double y, const Eigen::VectorXd& x, const Bandwidths& bw, const Dgp& dgp,
                       const KernelSpec& spec);

// Second-order bias expansion of beta0_bar - F with explicit kernel second
// moments. Interior points use the diagonal form; boundary points use the
// general form with Omega^{-1} and support-restricted moment integrals.
struct BiasPrediction {
  double leading_x = 0.0;  // h1^2 term
  double leading_y = 0.0;  // h2^2 term
  double total = 0.0;
  bool interior = false;
};

BiasPrediction bias_prediction(double y, const Eigen::VectorXd& x, const Bandwidths& bw,
                               const Dgp& dgp, const KernelSpec& spec, const SupportBox& support);

// The diagonal (interior) form evaluated regardless of the location of x;
// used to quantify how much the general form gains near the boundary.
BiasPrediction bias_prediction_interior_form(double y, const Eigen::VectorXd& x,
                                             const Bandwidths& bw, const Dgp& dgp,
                                             const KernelSpec& spec);

// Asymptotic variance of sqrt(n) (theta_hat - theta) for d = 1:
//   V = int ( int_{ylo}^{yhi} (1{s <= y} - F(y|t)) dy )^2 f(s,t) dt ds.
double clt_variance(const Dgp& dgp, std::pair<double, double> y_box, double abs_tol = 1e-8);

// Integrated conditional CDF over [ylo, yhi] x support (d = 1).
double theta(const Dgp& dgp, std::pair<double, double> y_box, double abs_tol = 1e-9);

// Eigenvalue envelope of Omega and Xi over an x-grid and bandwidth list;
// freezing [1/C, C] from this sweep pins the invertibility band.
struct EigSweep {
  double eig_min = 0.0;
  double eig_max = 0.0;
};

EigSweep eig_range_sweep(const Dgp& dgp, const KernelSpec& spec,
                         const std::vector<double>& h_values, int grid_points);

// Tabulated Ftilde(y_g | x) on a fine uniform x-grid (d = 1): population
// context reused across Monte Carlo replications. Cubic interpolation in x;
// with the default grid the interpolation error is orders of magnitude
// below the remainder scales it feeds.
class FtildeTable {
 public:
  FtildeTable(const Dgp& dgp, const KernelSpec& spec, double h2, std::vector<double> y_grid,
              int n_x = 2001);

  struct InterpWeights {
    int base = 0;
    double w[4] = {0, 0, 0, 0};
  };

  // Interpolation stencil at x; reusable across all y rows.
  InterpWeights prepare(double x) const;

  double value(std::size_t y_index, const InterpWeights& iw) const {
    const double* row = &values_[y_index * static_cast<std::size_t>(n_x_)];
    return iw.w[0] * row[iw.base] + iw.w[1] * row[iw.base + 1] + iw.w[2] * row[iw.base + 2] +
           iw.w[3] * row[iw.base + 3];
  }

  double operator()(std::size_t y_index, double x) const { return value(y_index, prepare(x)); }

  const std::vector<double>& y_grid() const { return y_grid_; }

 private:
  std::vector<double> y_grid_;
  int n_x_;
  double x_lo_, dx_;
  std::vector<double> values_;  // row-major [y][x]
};

}  // namespace condist::oracle
