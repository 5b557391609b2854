#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>

#include "condist/support.hpp"

namespace condist {

// n observations of (Y in R, X in R^d) plus the covariate support box.
// Immutable after construction; fits only ever read it.
struct Sample {
  Eigen::VectorXd y;   // n
  Eigen::MatrixXd x;   // n x d
  SupportBox support;

  std::int64_t size() const { return y.size(); }
  int dim() const { return static_cast<int>(x.cols()); }

  // All entries finite and every covariate row inside the box.
  void validate() const {
    if (y.size() != x.rows()) throw std::invalid_argument("Sample: y/x row mismatch");
    if (x.cols() != support.dim()) throw std::invalid_argument("Sample: x/support dim mismatch");
    if (!y.allFinite() || !x.allFinite()) throw std::invalid_argument("Sample: non-finite entries");
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      for (Eigen::Index l = 0; l < x.cols(); ++l) {
        if (x(i, l) < support.lower[l] || x(i, l) > support.upper[l]) {
          throw std::invalid_argument("Sample: covariate outside the support box");
        }
      }
    }
  }
};

}  // namespace condist
