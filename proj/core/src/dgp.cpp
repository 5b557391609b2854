#include "condist/dgp.hpp"

#include <cmath>
#include <numbers>

namespace condist {

DgpId dgp_id_from_string(std::string_view name) {
  if (name == "A") return DgpId::A;
  if (name == "B") return DgpId::B;
  if (name == "C") return DgpId::C;
  throw std::invalid_argument("unknown dgp id: '" + std::string(name) + "'");
}

std::string to_string(DgpId id) {
  switch (id) {
    case DgpId::A: return "A";
    case DgpId::B: return "B";
    case DgpId::C: return "C";
  }
  return "?";
}

double normal_pdf(double z) {
  static const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  return inv_sqrt_2pi * std::exp(-0.5 * z * z);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z * std::numbers::sqrt2 / 2.0); }

double smoothstep(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double smoothstep_d1(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double u = t * (1.0 - t);
  return 30.0 * u * u;
}

double smoothstep_d2(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t);
}

double smoothstep_inv(double p) {
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  // Bisection; the derivative vanishes at the ends, so Newton is unreliable.
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 64; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (smoothstep(mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

TruthValues Dgp::truth(double y, const Eigen::VectorXd& x) const {
  if (!support_.contains(x)) throw std::domain_error("truth: x outside the support box");
  return truth_impl(y, x);
}

Sample Dgp::draw(std::int64_t n, std::uint64_t seed) const {
  if (n < 1) throw std::invalid_argument("draw: need n >= 1");
  Xoshiro256pp rng(seed);
  const int d = dim();
  Sample s;
  s.support = support_;
  s.y.resize(n);
  s.x.resize(n, d);
  Eigen::VectorXd xi(d);
  for (std::int64_t i = 0; i < n; ++i) {
    for (int l = 0; l < d; ++l) {
      // Inverse-CDF draw of Uniform[a_l, b_l].
      xi[l] = support_.lower[l] + (support_.upper[l] - support_.lower[l]) * rng.uniform01();
    }
    s.x.row(i) = xi;
    s.y[i] = draw_y(xi, rng);
  }
  return s;
}

namespace {

// Y | X=x ~ Normal(m(x), 1) with m twice differentiable; covers DGP-A/B.
class NormalLocationDgp final : public Dgp {
 public:
  NormalLocationDgp(DgpId id, SupportBox support, std::pair<double, double> y_range)
      : Dgp(std::move(support), y_range), id_(id) {}

  DgpId id() const override { return id_; }

  double F(double y, const Eigen::VectorXd& x) const override {
    return normal_cdf(y - mean(x));
  }

  double fX(const Eigen::VectorXd& x) const override {
    return support_.contains(x) ? fx_const() : 0.0;
  }

  double joint(double y, const Eigen::VectorXd& x) const override {
    if (!support_.contains(x)) return 0.0;
    return normal_pdf(y - mean(x)) * fx_const();
  }

 protected:
  TruthValues truth_impl(double y, const Eigen::VectorXd& x) const override {
    TruthValues t;
    const int d = dim();
    const double z = y - mean(x);
    const double phi = normal_pdf(z);
    t.F = normal_cdf(z);
    t.dF_dy = phi;
    t.d2F_dy2 = -z * phi;
    const Eigen::VectorXd g = mean_grad(x);
    t.grad_x = -phi * g;
    // d2F/dx dx' = -z phi * g g' - phi * hess(m); catalog means have
    // constant or diagonal Hessians.
    t.hess_x = -z * phi * (g * g.transpose()) - phi * mean_hess(x);
    return t;
  }

  double draw_y(const Eigen::VectorXd& x, Xoshiro256pp& rng) const override {
    return mean(x) + rng.normal();
  }

 private:
  double fx_const() const {
    double vol = 1.0;
    for (int l = 0; l < dim(); ++l) vol *= support_.upper[l] - support_.lower[l];
    return 1.0 / vol;
  }

  double mean(const Eigen::VectorXd& x) const {
    return id_ == DgpId::A ? x[0] * x[0] : x.sum();
  }

  Eigen::VectorXd mean_grad(const Eigen::VectorXd& x) const {
    if (id_ == DgpId::A) {
      Eigen::VectorXd g(1);
      g[0] = 2.0 * x[0];
      return g;
    }
    return Eigen::VectorXd::Ones(dim());
  }

  Eigen::MatrixXd mean_hess(const Eigen::VectorXd&) const {
    if (id_ == DgpId::A) {
      Eigen::MatrixXd h(1, 1);
      h(0, 0) = 2.0;
      return h;
    }
    return Eigen::MatrixXd::Zero(dim(), dim());
  }

  DgpId id_;
};

// DGP-C: Y | X=x supported on [0, 1+x] with a C^2 ramp CDF
// F(y|x) = s(y / (1+x)); compactly supported boundary stress case.
class SmoothedUniformDgp final : public Dgp {
 public:
  SmoothedUniformDgp() : Dgp(SupportBox::unit(1), {0.0, 2.0}) {}

  DgpId id() const override { return DgpId::C; }

  double F(double y, const Eigen::VectorXd& x) const override {
    return smoothstep(y / (1.0 + x[0]));
  }

  double fX(const Eigen::VectorXd& x) const override { return support_.contains(x) ? 1.0 : 0.0; }

  double joint(double y, const Eigen::VectorXd& x) const override {
    if (!support_.contains(x)) return 0.0;
    const double u = 1.0 + x[0];
    return smoothstep_d1(y / u) / u;
  }

 protected:
  TruthValues truth_impl(double y, const Eigen::VectorXd& x) const override {
    TruthValues out;
    const double u = 1.0 + x[0];
    const double t = y / u;
    const double s1 = smoothstep_d1(t);
    const double s2 = smoothstep_d2(t);
    out.F = smoothstep(t);
    out.dF_dy = s1 / u;
    out.d2F_dy2 = s2 / (u * u);
    out.grad_x = Eigen::VectorXd::Constant(1, -s1 * t / u);
    out.hess_x = Eigen::MatrixXd::Constant(1, 1, t / (u * u) * (2.0 * s1 + t * s2));
    return out;
  }

  double draw_y(const Eigen::VectorXd& x, Xoshiro256pp& rng) const override {
    return (1.0 + x[0]) * smoothstep_inv(rng.uniform01());
  }
};

}  // namespace

std::shared_ptr<const Dgp> make_dgp(DgpId id) {
  switch (id) {
    case DgpId::A:
      // Means run over [0, 1]; +-6 sd keeps truncated tail mass < 1e-8.
      return std::make_shared<NormalLocationDgp>(DgpId::A, SupportBox::unit(1),
                                                 std::pair{-6.0, 7.0});
    case DgpId::B:
      return std::make_shared<NormalLocationDgp>(DgpId::B, SupportBox::unit(2),
                                                 std::pair{-6.0, 8.0});
    case DgpId::C:
      return std::make_shared<SmoothedUniformDgp>();
  }
  throw std::invalid_argument("make_dgp: unknown id");
}

}  // namespace condist
