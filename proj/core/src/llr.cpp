#include "condist/llr.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace condist {

LocalDesign::LocalDesign(const Sample& sample, const Eigen::VectorXd& x, double h1,
                         const KernelSpec& spec, const FitOptions& options)
    : d_(sample.dim()), h1_(h1), options_(options) {
  if (!(h1 > 0.0) || !std::isfinite(h1)) throw std::invalid_argument("LocalDesign: need h1 > 0");
  if (x.size() != d_) throw std::invalid_argument("LocalDesign: x dimension mismatch");
  if (spec.dim() != d_) throw std::invalid_argument("LocalDesign: kernel dimension mismatch");

  const std::int64_t n = sample.size();
  const double inv_h1 = 1.0 / h1;
  inv_nh1d_ = 1.0 / (static_cast<double>(n) * std::pow(h1, d_));

  // Collect the nonzero-weight window in sample order.
  std::vector<double> u_flat;
  std::vector<double> w_tmp;
  std::vector<double> y_tmp;
  std::vector<int> idx_tmp;
  Eigen::VectorXd u(d_);
  for (std::int64_t i = 0; i < n; ++i) {
    double w = 1.0;
    bool inside = true;
    for (int l = 0; l < d_; ++l) {
      const double ul = (sample.x(i, l) - x[l]) * inv_h1;
      if (ul < -1.0 || ul > 1.0) {
        inside = false;
        break;
      }
      u[l] = ul;
      w *= spec.w_axes[static_cast<std::size_t>(l)].value(ul);
    }
    if (!inside || w == 0.0) continue;
    idx_tmp.push_back(static_cast<int>(i));
    y_tmp.push_back(sample.y[i]);
    w_tmp.push_back(w);
    for (int l = 0; l < d_; ++l) u_flat.push_back(u[l]);
  }

  // Fix the reduction order: ascending response, ties by sample index.
  std::vector<int> order(idx_tmp.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (y_tmp[static_cast<std::size_t>(a)] != y_tmp[static_cast<std::size_t>(b)])
      return y_tmp[static_cast<std::size_t>(a)] < y_tmp[static_cast<std::size_t>(b)];
    return idx_tmp[static_cast<std::size_t>(a)] < idx_tmp[static_cast<std::size_t>(b)];
  });

  const std::size_t m = order.size();
  const int p = d_ + 1;
  idx_.resize(m);
  yw_.resize(m);
  w_.resize(m);
  rw_.assign(m * static_cast<std::size_t>(p), 0.0);
  prefix_.assign((m + 1) * static_cast<std::size_t>(p), 0.0);
  xi_ = Eigen::MatrixXd::Zero(p, p);

  for (std::size_t j = 0; j < m; ++j) {
    const std::size_t src = static_cast<std::size_t>(order[j]);
    idx_[j] = idx_tmp[src];
    yw_[j] = y_tmp[src];
    w_[j] = w_tmp[src];
    double* row = &rw_[j * static_cast<std::size_t>(p)];
    row[0] = w_[j];
    for (int l = 0; l < d_; ++l) row[l + 1] = u_flat[src * static_cast<std::size_t>(d_) + l] * w_[j];
    const double* prev = &prefix_[j * static_cast<std::size_t>(p)];
    double* next = &prefix_[(j + 1) * static_cast<std::size_t>(p)];
    for (int c = 0; c < p; ++c) next[c] = prev[c] + row[c];
    // Upper triangle of sum w r r'; row[c] already carries one factor w.
    const double* ub = row;  // r(u) * w
    for (int c = 0; c < p; ++c) {
      const double rc = (c == 0) ? 1.0 : u_flat[src * static_cast<std::size_t>(d_) + (c - 1)];
      for (int c2 = c; c2 < p; ++c2) xi_(c, c2) += ub[c2] * rc;
    }
  }
  for (int c = 0; c < p; ++c)
    for (int c2 = 0; c2 < c; ++c2) xi_(c, c2) = xi_(c2, c);
  xi_ *= inv_nh1d_;

  if (options_.ridge > 0.0) xi_ += options_.ridge * Eigen::MatrixXd::Identity(p, p);

  if (static_cast<int>(m) >= p) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(xi_, Eigen::EigenvaluesOnly);
    min_eig_ = eig.eigenvalues().minCoeff();
  } else {
    min_eig_ = 0.0;
  }
  singular_ = static_cast<int>(m) < p || min_eig_ < options_.min_eig_tol;
  if (!singular_) ldlt_.compute(xi_);
}

Eigen::VectorXd LocalDesign::response_smoothed(double y, double h2, const KernelSpec& spec) const {
  const int p = d_ + 1;
  // K((y - Y)/h2) saturates at 1 for Y <= y - h2 and 0 for Y >= y + h2.
  const auto lo = std::upper_bound(yw_.begin(), yw_.end(), y - h2);
  const auto hi = std::lower_bound(lo, yw_.end(), y + h2);
  const std::size_t j1 = static_cast<std::size_t>(lo - yw_.begin());
  const std::size_t j2 = static_cast<std::size_t>(hi - yw_.begin());
  Eigen::VectorXd acc(p);
  const double* pre = &prefix_[j1 * static_cast<std::size_t>(p)];
  for (int c = 0; c < p; ++c) acc[c] = pre[c];
  const double inv_h2 = 1.0 / h2;
  for (std::size_t j = j1; j < j2; ++j) {
    const double kv = spec.k.cdf((y - yw_[j]) * inv_h2);
    if (kv == 0.0) continue;
    const double* row = &rw_[j * static_cast<std::size_t>(p)];
    for (int c = 0; c < p; ++c) acc[c] += kv * row[c];
  }
  return acc * inv_nh1d_;
}

Eigen::VectorXd LocalDesign::response_unsmoothed(double y) const {
  const int p = d_ + 1;
  const auto lo = std::upper_bound(yw_.begin(), yw_.end(), y);
  const std::size_t j1 = static_cast<std::size_t>(lo - yw_.begin());
  Eigen::VectorXd acc(p);
  const double* pre = &prefix_[j1 * static_cast<std::size_t>(p)];
  for (int c = 0; c < p; ++c) acc[c] = pre[c];
  return acc * inv_nh1d_;
}

LocalFit LocalDesign::solve(const Eigen::VectorXd& upsilon) const {
  if (singular_) {
    throw SingularDesign("local design is singular: n_local=" + std::to_string(n_local()) +
                         ", min_eig=" + std::to_string(min_eig_));
  }
  const Eigen::VectorXd scaled = ldlt_.solve(upsilon);  // H1 * beta
  LocalFit fit;
  fit.beta0 = scaled[0];
  if (options_.clamp_unit_interval) fit.beta0 = std::min(1.0, std::max(0.0, fit.beta0));
  fit.grad = scaled.tail(d_) / h1_;
  fit.min_eig = min_eig_;
  fit.n_local = n_local();
  return fit;
}

Eigen::MatrixXd design_matrix(const Sample& sample, const Eigen::VectorXd& x, double h1,
                              const KernelSpec& spec) {
  return LocalDesign(sample, x, h1, spec).xi();
}

Eigen::VectorXd local_response(const Sample& sample, double y, const Eigen::VectorXd& x,
                               const Bandwidths& bw, const KernelSpec& spec) {
  if (!bw.valid()) throw std::invalid_argument("local_response: invalid bandwidths");
  return LocalDesign(sample, x, bw.h1, spec).response_smoothed(y, bw.h2, spec);
}

LocalFit fit_smoothed(const Sample& sample, double y, const Eigen::VectorXd& x,
                      const Bandwidths& bw, const KernelSpec& spec, const FitOptions& opt) {
  if (!bw.valid()) throw std::invalid_argument("fit_smoothed: invalid bandwidths");
  if (!sample.support.contains(x)) throw std::domain_error("fit_smoothed: x outside support box");
  return LocalDesign(sample, x, bw.h1, spec, opt).fit_smoothed(y, bw.h2, spec);
}

LocalFit fit_unsmoothed(const Sample& sample, double y, const Eigen::VectorXd& x, double h1,
                        const KernelSpec& spec, const FitOptions& opt) {
  if (!(h1 > 0.0)) throw std::invalid_argument("fit_unsmoothed: need h1 > 0");
  if (!sample.support.contains(x)) throw std::domain_error("fit_unsmoothed: x outside support box");
  return LocalDesign(sample, x, h1, spec, opt).fit_unsmoothed(y);
}

Eigen::VectorXd score(double yi, const Eigen::VectorXd& xi_obs, double y,
                      const Eigen::VectorXd& x, const Bandwidths& bw, const KernelSpec& spec,
                      const FtildeFn& ftilde) {
  if (!bw.valid()) throw std::invalid_argument("score: invalid bandwidths");
  const int d = static_cast<int>(x.size());
  Eigen::VectorXd out = Eigen::VectorXd::Zero(d + 1);
  double w = 1.0;
  Eigen::VectorXd u(d);
  for (int l = 0; l < d; ++l) {
    u[l] = (xi_obs[l] - x[l]) / bw.h1;
    if (u[l] < -1.0 || u[l] > 1.0) return out;
    w *= spec.w_axes[static_cast<std::size_t>(l)].value(u[l]);
  }
  if (w == 0.0) return out;
  const double resid = spec.eval_K((y - yi) / bw.h2) - ftilde(y, xi_obs);
  out[0] = resid * w;
  for (int l = 0; l < d; ++l) out[l + 1] = u[l] * resid * w;
  return out;
}

Surface evaluate_surface(const Sample& sample, const std::vector<double>& y_grid,
                         const std::vector<Eigen::VectorXd>& x_grid, const Bandwidths& bw,
                         const KernelSpec& spec, Estimator estimator, const FitOptions& opt) {
  if (y_grid.empty() || x_grid.empty()) {
    throw std::invalid_argument("evaluate_surface: empty grid");
  }
  if (estimator == Estimator::smoothed && !bw.valid()) {
    throw std::invalid_argument("evaluate_surface: invalid bandwidths");
  }
  const int d = sample.dim();
  const std::size_t my = y_grid.size();
  const std::size_t mx = x_grid.size();
  Surface surf;
  surf.y_grid = y_grid;
  surf.x_grid = x_grid;
  surf.values = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(my),
                                          static_cast<Eigen::Index>(mx),
                                          std::numeric_limits<double>::quiet_NaN());
  surf.grads.assign(static_cast<std::size_t>(d),
                    Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(my),
                                              static_cast<Eigen::Index>(mx),
                                              std::numeric_limits<double>::quiet_NaN()));
  surf.columns.resize(mx);

  for (std::size_t c = 0; c < mx; ++c) {
    const LocalDesign design(sample, x_grid[c], bw.h1, spec, opt);
    ColumnDiagnostics& diag = surf.columns[c];
    diag.min_eig = design.min_eig();
    diag.n_local = design.n_local();
    if (design.singular()) {
      diag.ok = false;
      continue;
    }
    diag.ok = true;
    for (std::size_t g = 0; g < my; ++g) {
      const LocalFit fit = estimator == Estimator::smoothed
                               ? design.fit_smoothed(y_grid[g], bw.h2, spec)
                               : design.fit_unsmoothed(y_grid[g]);
      surf.values(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(c)) = fit.beta0;
      for (int l = 0; l < d; ++l) {
        surf.grads[static_cast<std::size_t>(l)](static_cast<Eigen::Index>(g),
                                                static_cast<Eigen::Index>(c)) = fit.grad[l];
      }
      if (g > 0 && surf.values(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(c)) <
                       surf.values(static_cast<Eigen::Index>(g - 1),
                                   static_cast<Eigen::Index>(c)) -
                           1e-12) {
        ++diag.mono_violations;
      }
    }
  }
  return surf;
}

}  // namespace condist
