#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace condist {

// Univariate kernel families supported for both the covariate kernel w and
// the smoothing kernel k. All are symmetric densities on [-1, 1].
enum class KernelFamily { epanechnikov, biweight, triangular, uniform };

KernelFamily kernel_family_from_string(std::string_view name);
std::string to_string(KernelFamily family);

struct UnivariateKernel {
  KernelFamily family = KernelFamily::epanechnikov;

  // Density value; zero outside [-1, 1].
  double value(double u) const;

  // Antiderivative K(v) = \int_{-inf}^{v} value(u) du, clamped to [0, 1].
  double cdf(double v) const;

  // \int u^2 value(u) du, closed form per family.
  double second_moment() const;

  // sup_u value(u)
  double max_value() const;
};

// Product covariate kernel w(u) = w_1(u_1)...w_d(u_d) together with the
// response-smoothing kernel k and cached second moments.
struct KernelSpec {
  std::vector<UnivariateKernel> w_axes;
  UnivariateKernel k;
  std::vector<double> kappa2_w;  // per-axis \int u^2 w_l(u) du
  double kappa2_k = 0.0;         // \int v^2 k(v) dv

  KernelSpec() = default;
  KernelSpec(std::vector<UnivariateKernel> w, UnivariateKernel smooth);

  // Homogeneous product kernel in d dimensions.
  static KernelSpec product(int d, KernelFamily w_family, KernelFamily k_family);

  int dim() const { return static_cast<int>(w_axes.size()); }

  // w(u); exactly zero as soon as one coordinate leaves [-1, 1].
  double eval_w(const Eigen::VectorXd& u) const;

  double eval_K(double v) const { return k.cdf(v); }
};

}  // namespace condist
