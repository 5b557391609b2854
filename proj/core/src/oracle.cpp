#include "condist/oracle.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "condist/quadrature.hpp"

namespace condist::oracle {

namespace {

struct AxisRange {
  double lo, hi;  // integration range in u, already clipped to the box
};

AxisRange clipped_range(double x, double h1, double a, double b) {
  return {std::max(-1.0, (a - x) / h1), std::min(1.0, (b - x) / h1)};
}

// Partial moments int_lo^hi u^p w(u) du for p = 0..3 on one axis.
std::array<double, 4> axis_moments(const UnivariateKernel& kern, const AxisRange& r,
                                   double abs_tol) {
  if (r.lo >= r.hi) return {0.0, 0.0, 0.0, 0.0};
  return quad::integrate_vec<4>(
      [&](double u) {
        const double w = kern.value(u);
        return std::array<double, 4>{w, u * w, u * u * w, u * u * u * w};
      },
      r.lo, r.hi, abs_tol);
}

// Entry of int r(u) u^(extra) w(u) du from per-axis moments: component c of
// r contributes one power of u_{c-1} for c >= 1.
double assemble_product(const std::vector<std::array<double, 4>>& m, int d,
                        const std::vector<int>& powers) {
  double prod = 1.0;
  for (int l = 0; l < d; ++l) prod *= m[static_cast<std::size_t>(l)][static_cast<std::size_t>(
      powers[static_cast<std::size_t>(l)])];
  return prod;
}

double quad_tol_for_dim(int d) { return d == 1 ? 1e-10 : 1e-8; }

}  // namespace

OmegaReport omega(const Eigen::VectorXd& x, double h1, const SupportBox& support,
                  const KernelSpec& spec) {
  const int d = support.dim();
  if (!support.contains(x)) throw std::domain_error("omega: x outside the support box");
  const double tol = quad_tol_for_dim(d);
  std::vector<std::array<double, 4>> m;
  m.reserve(static_cast<std::size_t>(d));
  for (int l = 0; l < d; ++l) {
    m.push_back(axis_moments(spec.w_axes[static_cast<std::size_t>(l)],
                             clipped_range(x[l], h1, support.lower[l], support.upper[l]), tol));
  }
  OmegaReport rep;
  rep.omega.resize(d + 1, d + 1);
  std::vector<int> powers(static_cast<std::size_t>(d), 0);
  for (int c = 0; c <= d; ++c) {
    for (int c2 = c; c2 <= d; ++c2) {
      std::fill(powers.begin(), powers.end(), 0);
      if (c >= 1) ++powers[static_cast<std::size_t>(c - 1)];
      if (c2 >= 1) ++powers[static_cast<std::size_t>(c2 - 1)];
      rep.omega(c, c2) = assemble_product(m, d, powers);
      rep.omega(c2, c) = rep.omega(c, c2);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(rep.omega, Eigen::EigenvaluesOnly);
  rep.eig_min = eig.eigenvalues().minCoeff();
  rep.eig_max = eig.eigenvalues().maxCoeff();
  return rep;
}

Eigen::MatrixXd xi_pop(const Eigen::VectorXd& x, double h1, const Dgp& dgp,
                       const KernelSpec& spec) {
  const SupportBox& box = dgp.support();
  const int d = box.dim();
  if (!box.contains(x)) throw std::domain_error("xi_pop: x outside the support box");
  Eigen::MatrixXd xi(d + 1, d + 1);
  if (d == 1) {
    const AxisRange r = clipped_range(x[0], h1, box.lower[0], box.upper[0]);
    Eigen::VectorXd xp(1);
    const auto mom = quad::integrate_vec<3>(
        [&](double u) {
          xp[0] = x[0] + h1 * u;
          const double g = spec.w_axes[0].value(u) * dgp.fX(xp);
          return std::array<double, 3>{g, u * g, u * u * g};
        },
        r.lo, r.hi, 1e-10);
    xi << mom[0], mom[1], mom[1], mom[2];
    return xi;
  }
  if (d != 2) throw std::invalid_argument("xi_pop: only d <= 2 is supported");
  const AxisRange r1 = clipped_range(x[0], h1, box.lower[0], box.upper[0]);
  const AxisRange r2 = clipped_range(x[1], h1, box.lower[1], box.upper[1]);
  // Distinct entries of r r': (00, 01, 02, 11, 12, 22).
  const auto mom = quad::integrate_vec<6>(
      [&](double u1) {
        const double w1 = spec.w_axes[0].value(u1);
        return quad::integrate_vec<6>(
            [&](double u2) {
              Eigen::VectorXd xp(2);
              xp << x[0] + h1 * u1, x[1] + h1 * u2;
              const double g = w1 * spec.w_axes[1].value(u2) * dgp.fX(xp);
              return std::array<double, 6>{g,        u1 * g,      u2 * g,
                                           u1 * u1 * g, u1 * u2 * g, u2 * u2 * g};
            },
            r2.lo, r2.hi, 1e-9);
      },
      r1.lo, r1.hi, 1e-8);
  xi << mom[0], mom[1], mom[2], mom[1], mom[3], mom[4], mom[2], mom[4], mom[5];
  return xi;
}

double smoothed_cdf(double y, const Eigen::VectorXd& x, double h2, const Dgp& dgp,
                    const KernelSpec& spec, double abs_tol) {
  return quad::integrate(
      [&](double v) { return spec.k.value(v) * dgp.F(y - h2 * v, x); }, -1.0, 1.0, abs_tol);
}

Eigen::VectorXd upsilon_pop(double y, const Eigen::VectorXd& x, const Bandwidths& bw,
                            const Dgp& dgp, const KernelSpec& spec) {
  if (!bw.valid()) throw std::invalid_argument("upsilon_pop: invalid bandwidths");
  const SupportBox& box = dgp.support();
  const int d = box.dim();
  if (!box.contains(x)) throw std::domain_error("upsilon_pop: x outside the support box");
  Eigen::VectorXd upsilon(d + 1);

  if (d == 1) {
    const AxisRange r = clipped_range(x[0], bw.h1, box.lower[0], box.upper[0]);
    Eigen::VectorXd xp(1);
    const auto ups = quad::integrate_vec<2>(
        [&](double u) {
          xp[0] = x[0] + bw.h1 * u;
          const double g =
              spec.w_axes[0].value(u) * dgp.fX(xp) * smoothed_cdf(y, xp, bw.h2, dgp, spec);
          return std::array<double, 2>{g, u * g};
        },
        r.lo, r.hi, 1e-9);
    upsilon << ups[0], ups[1];
  } else if (d == 2) {
    const AxisRange r1 = clipped_range(x[0], bw.h1, box.lower[0], box.upper[0]);
    const AxisRange r2 = clipped_range(x[1], bw.h1, box.lower[1], box.upper[1]);
    const auto ups = quad::integrate_vec<3>(
        [&](double u1) {
          const double w1 = spec.w_axes[0].value(u1);
          return quad::integrate_vec<3>(
              [&](double u2) {
                Eigen::VectorXd xp(2);
                xp << x[0] + bw.h1 * u1, x[1] + bw.h1 * u2;
                const double g = w1 * spec.w_axes[1].value(u2) * dgp.fX(xp) *
                                 smoothed_cdf(y, xp, bw.h2, dgp, spec);
                return std::array<double, 3>{g, u1 * g, u2 * g};
              },
              r2.lo, r2.hi, 1e-9);
        },
        r1.lo, r1.hi, 1e-8);
    upsilon << ups[0], ups[1], ups[2];
  } else {
    throw std::invalid_argument("upsilon_pop: only d <= 2 is supported");
  }
  return upsilon;
}

PseudoTrue pseudo_true(double y, const Eigen::VectorXd& x, const Bandwidths& bw, const Dgp& dgp,
                       const KernelSpec& spec) {
  if (!bw.valid()) throw std::invalid_argument("pseudo_true: invalid bandwidths");
  const int d = dgp.support().dim();

  PseudoTrue out;
  out.xi = xi_pop(x, bw.h1, dgp, spec);
  out.upsilon = upsilon_pop(y, x, bw, dgp, spec);
  out.h1_beta = out.xi.ldlt().solve(out.upsilon);
  out.beta_bar = out.h1_beta;
  out.beta_bar.tail(d) /= bw.h1;
  return out;
}

BiasPrediction bias_prediction_interior_form(double y, const Eigen::VectorXd& x,
                                             const Bandwidths& bw, const Dgp& dgp,
                                             const KernelSpec& spec) {
  const TruthValues t = dgp.truth(y, x);
  BiasPrediction p;
  p.interior = true;
  for (int l = 0; l < dgp.dim(); ++l) {
    p.leading_x += spec.kappa2_w[static_cast<std::size_t>(l)] * t.hess_x(l, l);
  }
  p.leading_x *= 0.5 * bw.h1 * bw.h1;
  p.leading_y = 0.5 * bw.h2 * bw.h2 * spec.kappa2_k * t.d2F_dy2;
  p.total = p.leading_x + p.leading_y;
  return p;
}

BiasPrediction bias_prediction(double y, const Eigen::VectorXd& x, const Bandwidths& bw,
                               const Dgp& dgp, const KernelSpec& spec,
                               const SupportBox& support) {
  if (!support.contains(x)) throw std::domain_error("bias_prediction: x outside the support box");
  const int d = support.dim();
  if (support.interior(x, bw.h1)) {
    return bias_prediction_interior_form(y, x, bw, dgp, spec);
  }

  // General boundary form: Omega^{-1} against support-restricted moments.
  const TruthValues t = dgp.truth(y, x);
  const double tol = quad_tol_for_dim(d);
  std::vector<std::array<double, 4>> m;
  for (int l = 0; l < d; ++l) {
    m.push_back(axis_moments(spec.w_axes[static_cast<std::size_t>(l)],
                             clipped_range(x[l], bw.h1, support.lower[l], support.upper[l]), tol));
  }
  const OmegaReport om = omega(x, bw.h1, support, spec);

  // Mxx[c] = sum_{l,l'} F_{x_l x_l'} int r_c(u) u_l u_l' w(u) du.
  Eigen::VectorXd mxx = Eigen::VectorXd::Zero(d + 1);
  std::vector<int> powers(static_cast<std::size_t>(d), 0);
  for (int c = 0; c <= d; ++c) {
    for (int l = 0; l < d; ++l) {
      for (int lp = 0; lp < d; ++lp) {
        std::fill(powers.begin(), powers.end(), 0);
        if (c >= 1) ++powers[static_cast<std::size_t>(c - 1)];
        ++powers[static_cast<std::size_t>(l)];
        ++powers[static_cast<std::size_t>(lp)];
        mxx[c] += t.hess_x(l, lp) * assemble_product(m, d, powers);
      }
    }
  }

  const Eigen::VectorXd corr = om.omega.ldlt().solve(mxx);
  BiasPrediction p;
  p.interior = false;
  p.leading_x = 0.5 * bw.h1 * bw.h1 * corr[0];
  // int r(u) w(u) du is the first column of Omega, so the smoothing term
  // passes through Omega^{-1} unchanged.
  p.leading_y = 0.5 * bw.h2 * bw.h2 * spec.kappa2_k * t.d2F_dy2;
  p.total = p.leading_x + p.leading_y;
  return p;
}

double clt_variance(const Dgp& dgp, std::pair<double, double> y_box, double abs_tol) {
  if (dgp.dim() != 1) throw std::invalid_argument("clt_variance: only d = 1 is supported");
  const auto [ylo, yhi] = y_box;
  if (!(ylo < yhi)) throw std::invalid_argument("clt_variance: invalid y interval");
  const SupportBox& box = dgp.support();
  const auto [slo_r, shi_r] = dgp.y_range();
  const double slo = std::min(slo_r, ylo);
  const double shi = std::max(shi_r, yhi);

  Eigen::VectorXd t(1);
  auto outer = [&](double tv) {
    t[0] = tv;
    // int_{ylo}^{yhi} F(y|t) dy; the indicator part integrates in closed form.
    const double int_F =
        quad::integrate([&](double y) { return dgp.F(y, t); }, ylo, yhi, 0.02 * abs_tol);
    return quad::integrate(
        [&](double s) {
          const double inner = (yhi - std::clamp(s, ylo, yhi)) - int_F;
          return inner * inner * dgp.joint(s, t);
        },
        slo, shi, 0.1 * abs_tol / (box.upper[0] - box.lower[0]));
  };
  return quad::integrate(outer, box.lower[0], box.upper[0], abs_tol);
}

double theta(const Dgp& dgp, std::pair<double, double> y_box, double abs_tol) {
  if (dgp.dim() != 1) throw std::invalid_argument("theta: only d = 1 is supported");
  const auto [ylo, yhi] = y_box;
  if (!(ylo < yhi)) throw std::invalid_argument("theta: invalid y interval");
  const SupportBox& box = dgp.support();
  Eigen::VectorXd x(1);
  return quad::integrate2d(
      [&](double xv, double y) {
        x[0] = xv;
        return dgp.F(y, x);
      },
      box.lower[0], box.upper[0], ylo, yhi, abs_tol);
}

EigSweep eig_range_sweep(const Dgp& dgp, const KernelSpec& spec,
                         const std::vector<double>& h_values, int grid_points) {
  if (dgp.dim() != 1) throw std::invalid_argument("eig_range_sweep: only d = 1 is supported");
  const SupportBox& box = dgp.support();
  EigSweep sweep{std::numeric_limits<double>::infinity(), 0.0};
  Eigen::VectorXd x(1);
  for (double h : h_values) {
    for (int i = 0; i < grid_points; ++i) {
      x[0] = box.lower[0] +
             (box.upper[0] - box.lower[0]) * static_cast<double>(i) / (grid_points - 1);
      const OmegaReport om = omega(x, h, box, spec);
      sweep.eig_min = std::min(sweep.eig_min, om.eig_min);
      sweep.eig_max = std::max(sweep.eig_max, om.eig_max);
      const Eigen::MatrixXd xi = xi_pop(x, h, dgp, spec);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(xi, Eigen::EigenvaluesOnly);
      sweep.eig_min = std::min(sweep.eig_min, eig.eigenvalues().minCoeff());
      sweep.eig_max = std::max(sweep.eig_max, eig.eigenvalues().maxCoeff());
    }
  }
  return sweep;
}

FtildeTable::FtildeTable(const Dgp& dgp, const KernelSpec& spec, double h2,
                         std::vector<double> y_grid, int n_x)
    : y_grid_(std::move(y_grid)), n_x_(n_x) {
  if (dgp.dim() != 1) throw std::invalid_argument("FtildeTable: only d = 1 is supported");
  if (n_x_ < 8) throw std::invalid_argument("FtildeTable: grid too small");
  const SupportBox& box = dgp.support();
  x_lo_ = box.lower[0];
  dx_ = (box.upper[0] - box.lower[0]) / (n_x_ - 1);
  values_.resize(y_grid_.size() * static_cast<std::size_t>(n_x_));
  Eigen::VectorXd x(1);
  for (std::size_t g = 0; g < y_grid_.size(); ++g) {
    double* row = &values_[g * static_cast<std::size_t>(n_x_)];
    for (int i = 0; i < n_x_; ++i) {
      x[0] = x_lo_ + dx_ * i;
      row[i] = smoothed_cdf(y_grid_[g], x, h2, dgp, spec);
    }
  }
}

FtildeTable::InterpWeights FtildeTable::prepare(double x) const {
  // Catmull-Rom stencil on the uniform grid, shifted inward at the edges.
  double pos = (x - x_lo_) / dx_;
  pos = std::clamp(pos, 0.0, static_cast<double>(n_x_ - 1));
  int cell = static_cast<int>(pos);
  cell = std::clamp(cell, 1, n_x_ - 3);
  const double f = pos - cell;
  InterpWeights iw;
  iw.base = cell - 1;
  const double f2 = f * f, f3 = f2 * f;
  iw.w[0] = 0.5 * (-f3 + 2.0 * f2 - f);
  iw.w[1] = 0.5 * (3.0 * f3 - 5.0 * f2 + 2.0);
  iw.w[2] = 0.5 * (-3.0 * f3 + 4.0 * f2 + f);
  iw.w[3] = 0.5 * (f3 - f2);
  return iw;
}

}  // namespace condist::oracle
