#pragma once

#include <Eigen/Core>

#include <stdexcept>

namespace condist {

// Axis-aligned covariate support box [a_1,b_1] x ... x [a_d,b_d].
// Boxes satisfy the inner-cone regularity condition with the derived
// constants below, and the bandwidth-interior set is simply the shrunken
// box, which keeps every boundary computation exact.
struct SupportBox {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  SupportBox() = default;
  SupportBox(Eigen::VectorXd a, Eigen::VectorXd b) : lower(std::move(a)), upper(std::move(b)) {
    if (lower.size() != upper.size() || lower.size() == 0) {
      throw std::invalid_argument("SupportBox: dimension mismatch");
    }
    for (int l = 0; l < lower.size(); ++l) {
      if (!(lower[l] < upper[l])) throw std::invalid_argument("SupportBox: need a_l < b_l");
    }
  }

  static SupportBox unit(int d) {
    return SupportBox(Eigen::VectorXd::Zero(d), Eigen::VectorXd::Ones(d));
  }

  int dim() const { return static_cast<int>(lower.size()); }

  bool contains(const Eigen::VectorXd& x) const {
    if (x.size() != lower.size()) return false;
    for (int l = 0; l < x.size(); ++l) {
      if (x[l] < lower[l] || x[l] > upper[l]) return false;
    }
    return true;
  }

  // x with x_l +- h inside the box for every axis.
  bool interior(const Eigen::VectorXd& x, double h) const {
    for (int l = 0; l < x.size(); ++l) {
      if (x[l] - h < lower[l] || x[l] + h > upper[l]) return false;
    }
    return true;
  }

  // Inner-cone constants for a box.
  double lambda0() const { return 0.5 * (upper - lower).minCoeff(); }
  double lambda1() const { return 1.0 / std::sqrt(static_cast<double>(dim())); }
};

}  // namespace condist
