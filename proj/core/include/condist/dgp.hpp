#pragma once

#include <Eigen/Core>

#include <memory>
#include <string>
#include <string_view>
#include <utility>

#include "condist/rng.hpp"
#include "condist/sample.hpp"
#include "condist/support.hpp"

namespace condist {

enum class DgpId { A, B, C };

DgpId dgp_id_from_string(std::string_view name);
std::string to_string(DgpId id);

// Conditional CDF value together with its analytic derivatives at (y, x).
struct TruthValues {
  double F = 0.0;                // F(y | x)
  Eigen::VectorXd grad_x;        // d/dx F(y | x)
  Eigen::MatrixXd hess_x;        // d^2/dx dx' F(y | x)
  double dF_dy = 0.0;            // conditional density f(y | x)
  double d2F_dy2 = 0.0;
};

// A synthetic data-generating process with closed-form conditional CDF,
// marginal density, and second derivatives. X is uniform on the support box
// in every catalog entry, so f_X is constant.
class Dgp {
 public:
  virtual ~Dgp() = default;

  virtual DgpId id() const = 0;
  const SupportBox& support() const { return support_; }
  int dim() const { return support_.dim(); }

  // Default y-interval for integrated quantities; covers the response mass
  // up to a documented truncation error (< 1e-8 for the normal-tail DGPs).
  std::pair<double, double> y_range() const { return y_range_; }

  virtual double F(double y, const Eigen::VectorXd& x) const = 0;
  virtual double fX(const Eigen::VectorXd& x) const = 0;
  virtual double joint(double y, const Eigen::VectorXd& x) const = 0;

  // F and all derivatives used by the bias formulas; x must lie in the box.
  TruthValues truth(double y, const Eigen::VectorXd& x) const;

  // n i.i.d. draws, bit-reproducible for a fixed (id, n, seed).
  Sample draw(std::int64_t n, std::uint64_t seed) const;

 protected:
  Dgp(SupportBox support, std::pair<double, double> y_range)
      : support_(std::move(support)), y_range_(y_range) {}

  virtual TruthValues truth_impl(double y, const Eigen::VectorXd& x) const = 0;
  virtual double draw_y(const Eigen::VectorXd& x, Xoshiro256pp& rng) const = 0;

  SupportBox support_;
  std::pair<double, double> y_range_;
};

std::shared_ptr<const Dgp> make_dgp(DgpId id);

// Standard normal pdf/cdf helpers shared by the catalog and the oracle.
double normal_pdf(double z);
double normal_cdf(double z);

// C^2 monotone ramp used by DGP-C: s(t) = t^3 (10 - 15 t + 6 t^2) on [0,1],
// clamped outside; first and second derivatives vanish at both ends.
double smoothstep(double t);
double smoothstep_d1(double t);
double smoothstep_d2(double t);
double smoothstep_inv(double p);

}  // namespace condist
