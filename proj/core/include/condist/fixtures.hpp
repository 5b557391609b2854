#pragma once

#include <nlohmann/json.hpp>

namespace condist {

// Oracle constants frozen into fixtures/oracle_fixtures.json: pseudo-true
// values on a small point set, integrated conditional CDFs, asymptotic CLT
// variances, and the eigenvalue envelope backing the invertibility band.
// `condist fixtures` regenerates the file; tests compare against the
// checked-in copy within the quadrature tolerances recorded alongside.
nlohmann::ordered_json compute_oracle_fixtures();

}  // namespace condist
