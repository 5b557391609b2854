#include "condist/kernels.hpp"

#include <cmath>

namespace condist {

KernelFamily kernel_family_from_string(std::string_view name) {
  if (name == "epanechnikov") return KernelFamily::epanechnikov;
  if (name == "biweight") return KernelFamily::biweight;
  if (name == "triangular") return KernelFamily::triangular;
  if (name == "uniform") return KernelFamily::uniform;
  throw std::invalid_argument("unknown kernel family: '" + std::string(name) + "'");
}

std::string to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::epanechnikov: return "epanechnikov";
    case KernelFamily::biweight: return "biweight";
    case KernelFamily::triangular: return "triangular";
    case KernelFamily::uniform: return "uniform";
  }
  return "?";
}

double UnivariateKernel::value(double u) const {
  if (u < -1.0 || u > 1.0) return 0.0;
  switch (family) {
    case KernelFamily::epanechnikov: return 0.75 * (1.0 - u * u);
    case KernelFamily::biweight: {
      const double t = 1.0 - u * u;
      return 0.9375 * t * t;
    }
    case KernelFamily::triangular: return 1.0 - std::abs(u);
    case KernelFamily::uniform: return 0.5;
  }
  return 0.0;
}

double UnivariateKernel::cdf(double v) const {
  if (v <= -1.0) return 0.0;
  if (v >= 1.0) return 1.0;
  switch (family) {
    case KernelFamily::epanechnikov:
      return 0.25 * (2.0 + v * (3.0 - v * v));
    case KernelFamily::biweight:
      return 0.5 + 0.9375 * v * (1.0 + v * v * (-2.0 / 3.0 + v * v * 0.2));
    case KernelFamily::triangular:
      if (v <= 0.0) {
        const double t = 1.0 + v;
        return 0.5 * t * t;
      } else {
        const double t = 1.0 - v;
        return 1.0 - 0.5 * t * t;
      }
    case KernelFamily::uniform:
      return 0.5 * (v + 1.0);
  }
  return 0.0;
}

double UnivariateKernel::second_moment() const {
  switch (family) {
    case KernelFamily::epanechnikov: return 0.2;
    case KernelFamily::biweight: return 1.0 / 7.0;
    case KernelFamily::triangular: return 1.0 / 6.0;
    case KernelFamily::uniform: return 1.0 / 3.0;
  }
  return 0.0;
}

double UnivariateKernel::max_value() const {
  switch (family) {
    case KernelFamily::epanechnikov: return 0.75;
    case KernelFamily::biweight: return 0.9375;
    case KernelFamily::triangular: return 1.0;
    case KernelFamily::uniform: return 0.5;
  }
  return 0.0;
}

KernelSpec::KernelSpec(std::vector<UnivariateKernel> w, UnivariateKernel smooth)
    : w_axes(std::move(w)), k(smooth) {
  if (w_axes.empty()) throw std::invalid_argument("KernelSpec needs at least one covariate axis");
  kappa2_w.reserve(w_axes.size());
  for (const auto& ax : w_axes) kappa2_w.push_back(ax.second_moment());
  kappa2_k = k.second_moment();
}

KernelSpec KernelSpec::product(int d, KernelFamily w_family, KernelFamily k_family) {
  if (d < 1) throw std::invalid_argument("kernel dimension must be >= 1");
  std::vector<UnivariateKernel> axes(static_cast<std::size_t>(d), UnivariateKernel{w_family});
  return KernelSpec(std::move(axes), UnivariateKernel{k_family});
}

double KernelSpec::eval_w(const Eigen::VectorXd& u) const {
  if (u.size() != dim()) throw std::invalid_argument("eval_w: dimension mismatch");
  double prod = 1.0;
  for (int l = 0; l < dim(); ++l) {
    const double v = w_axes[static_cast<std::size_t>(l)].value(u[l]);
    if (v == 0.0) return 0.0;
    prod *= v;
  }
  return prod;
}

}  // namespace condist
