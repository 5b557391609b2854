#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "condist/kernels.hpp"
#include "condist/sample.hpp"

namespace condist {

struct Bandwidths {
  double h1 = 0.0;  // covariate bandwidth
  double h2 = 0.0;  // response-smoothing bandwidth

  bool valid() const {
    return h1 > 0.0 && h2 > 0.0 && std::isfinite(h1) && std::isfinite(h2);
  }
};

struct FitOptions {
  bool clamp_unit_interval = false;  // clamp beta0 to [0, 1]
  double ridge = 0.0;                // optional ridge added to the local design
  double min_eig_tol = 1e-12;        // singularity threshold
};

// Local window is empty or rank-deficient; nothing sensible to report.
struct SingularDesign : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Solved local fit at one (y, x): intercept estimate of F(y|x), slope
// estimate of the x-gradient, and solver diagnostics.
struct LocalFit {
  double beta0 = 0.0;
  Eigen::VectorXd grad;
  double min_eig = 0.0;
  int n_local = 0;
};

// Everything about a local window that depends on the evaluation point x
// and h1 only: kernel weights, scaled regressors, the local design matrix,
// and its factorization. One instance serves every y on a grid column.
//
// Window observations are kept in increasing-response order with prefix
// sums of r*w, so responses that are saturated at 0 or 1 cost nothing and
// only the |y - Y_i| < h2 band is evaluated per y.
class LocalDesign {
 public:
  LocalDesign(const Sample& sample, const Eigen::VectorXd& x, double h1, const KernelSpec& spec,
              const FitOptions& options = {});

  // (1/(n h1^d)) sum r(u_i) r(u_i)' w(u_i)
  const Eigen::MatrixXd& xi() const { return xi_; }
  double min_eig() const { return min_eig_; }
  int n_local() const { return static_cast<int>(yw_.size()); }
  bool singular() const { return singular_; }
  int dim() const { return d_; }

  // (1/(n h1^d)) sum r(u_i) resp(i) w(u_i); resp receives the window
  // position j (responses sorted by Y) and may read y_window()[j].
  template <class Resp>
  Eigen::VectorXd weighted_moment(Resp&& resp) const {
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(d_ + 1);
    const int p = d_ + 1;
    for (std::size_t j = 0; j < yw_.size(); ++j) {
      const double r = resp(j);
      if (r == 0.0) continue;
      const double* row = &rw_[j * static_cast<std::size_t>(p)];
      for (int c = 0; c < p; ++c) acc[c] += r * row[c];
    }
    return acc * inv_nh1d_;
  }

  // Smoothed local response vector at y.
  Eigen::VectorXd response_smoothed(double y, double h2, const KernelSpec& spec) const;

  // Unsmoothed (indicator) local response vector at y.
  Eigen::VectorXd response_unsmoothed(double y) const;

  // Solve the local normal equations for an arbitrary response vector.
  LocalFit solve(const Eigen::VectorXd& upsilon) const;

  LocalFit fit_smoothed(double y, double h2, const KernelSpec& spec) const {
    return solve(response_smoothed(y, h2, spec));
  }
  LocalFit fit_unsmoothed(double y) const { return solve(response_unsmoothed(y)); }

  // Window responses sorted ascending and original sample indices.
  const std::vector<double>& y_window() const { return yw_; }
  const std::vector<int>& window_indices() const { return idx_; }
  // r(u_j) * w_j laid out row-major with stride dim()+1.
  const std::vector<double>& scaled_regressors() const { return rw_; }
  double weight(std::size_t j) const { return w_[j]; }

 private:
  int d_ = 0;
  double h1_ = 0.0;
  double inv_nh1d_ = 0.0;
  FitOptions options_;
  std::vector<int> idx_;      // original indices, Y-ascending
  std::vector<double> yw_;    // responses, ascending
  std::vector<double> w_;     // kernel weights
  std::vector<double> rw_;    // rows r(u_j) * w_j, stride d+1
  std::vector<double> prefix_;  // prefix sums of rw_, stride d+1 (prefix_[0..p) = 0)
  Eigen::MatrixXd xi_;
  Eigen::LDLT<Eigen::MatrixXd> ldlt_;
  double min_eig_ = 0.0;
  bool singular_ = true;
};

// One-off wrappers matching the display formulas; surface evaluation reuses
// one LocalDesign per grid column and is numerically identical.
Eigen::MatrixXd design_matrix(const Sample& sample, const Eigen::VectorXd& x, double h1,
                              const KernelSpec& spec);
Eigen::VectorXd local_response(const Sample& sample, double y, const Eigen::VectorXd& x,
                               const Bandwidths& bw, const KernelSpec& spec);
LocalFit fit_smoothed(const Sample& sample, double y, const Eigen::VectorXd& x,
                      const Bandwidths& bw, const KernelSpec& spec, const FitOptions& opt = {});
LocalFit fit_unsmoothed(const Sample& sample, double y, const Eigen::VectorXd& x, double h1,
                        const KernelSpec& spec, const FitOptions& opt = {});

// Smoothed conditional CDF of the response given X = x, supplied by the
// caller (population-backed in experiments).
using FtildeFn = std::function<double(double y, const Eigen::VectorXd& x)>;

// Influence summand r((Xi-x)/h1) (K((y-Yi)/h2) - Ftilde(y|Xi)) w((Xi-x)/h1).
Eigen::VectorXd score(double yi, const Eigen::VectorXd& xi_obs, double y,
                      const Eigen::VectorXd& x, const Bandwidths& bw, const KernelSpec& spec,
                      const FtildeFn& ftilde);

enum class Estimator { smoothed, unsmoothed };

struct ColumnDiagnostics {
  bool ok = false;
  double min_eig = 0.0;
  int n_local = 0;
  int mono_violations = 0;  // adjacent y-grid decreases of beta0 beyond 1e-12
};

// Batch evaluation over a y-grid x x-grid; failed columns are recorded as
// missing (NaN) with a diagnostic, never imputed.
struct Surface {
  std::vector<double> y_grid;
  std::vector<Eigen::VectorXd> x_grid;
  Eigen::MatrixXd values;               // m_y x m_x, beta0
  std::vector<Eigen::MatrixXd> grads;   // d matrices, each m_y x m_x
  std::vector<ColumnDiagnostics> columns;
};

Surface evaluate_surface(const Sample& sample, const std::vector<double>& y_grid,
                         const std::vector<Eigen::VectorXd>& x_grid, const Bandwidths& bw,
                         const KernelSpec& spec, Estimator estimator = Estimator::smoothed,
                         const FitOptions& opt = {});

}  // namespace condist
