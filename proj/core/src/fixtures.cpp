#include "condist/fixtures.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "condist/dgp.hpp"
#include "condist/kernels.hpp"
#include "condist/oracle.hpp"

namespace condist {

namespace {

nlohmann::ordered_json pseudo_true_entry(DgpId id, double y, std::vector<double> x, double h1,
                                         double h2) {
  const auto dgp = make_dgp(id);
  const KernelSpec spec = KernelSpec::product(dgp->dim(), KernelFamily::epanechnikov,
                                              KernelFamily::epanechnikov);
  Eigen::VectorXd xv(dgp->dim());
  for (int l = 0; l < dgp->dim(); ++l) xv[l] = x[static_cast<std::size_t>(l)];
  const oracle::PseudoTrue pt = oracle::pseudo_true(y, xv, Bandwidths{h1, h2}, *dgp, spec);
  nlohmann::ordered_json e;
  e["dgp"] = to_string(id);
  e["y"] = y;
  e["x"] = x;
  e["h1"] = h1;
  e["h2"] = h2;
  e["beta0_bar"] = pt.beta_bar[0];
  e["tolerance"] = 1e-8;
  return e;
}

}  // namespace

nlohmann::ordered_json compute_oracle_fixtures() {
  nlohmann::ordered_json out;

  nlohmann::ordered_json pts = nlohmann::ordered_json::array();
  pts.push_back(pseudo_true_entry(DgpId::A, 0.25, {0.5}, 0.1, 0.1));
  pts.push_back(pseudo_true_entry(DgpId::A, 0.6, {0.05}, 0.2, 0.2));
  pts.push_back(pseudo_true_entry(DgpId::B, 1.0, {0.5, 0.5}, 0.2, 0.2));
  pts.push_back(pseudo_true_entry(DgpId::C, 0.5, {0.5}, 0.1, 0.1));
  out["pseudo_true"] = pts;

  {
    const auto dgp = make_dgp(DgpId::A);
    nlohmann::ordered_json e;
    e["dgp"] = "A";
    e["y_box"] = {-4.0, 5.0};
    e["value"] = oracle::theta(*dgp, {-4.0, 5.0});
    e["tolerance"] = 1e-9;
    nlohmann::ordered_json thetas = nlohmann::ordered_json::array();
    thetas.push_back(e);
    const auto dgpc = make_dgp(DgpId::C);
    nlohmann::ordered_json ec;
    ec["dgp"] = "C";
    ec["y_box"] = {0.0, 2.0};
    ec["value"] = oracle::theta(*dgpc, {0.0, 2.0});
    ec["tolerance"] = 1e-9;
    thetas.push_back(ec);
    out["theta"] = thetas;
  }

  {
    nlohmann::ordered_json vs = nlohmann::ordered_json::array();
    const auto dgp = make_dgp(DgpId::A);
    nlohmann::ordered_json e;
    e["dgp"] = "A";
    e["y_box"] = {-4.0, 5.0};
    e["value"] = oracle::clt_variance(*dgp, {-4.0, 5.0});
    e["tolerance"] = 1e-6;
    vs.push_back(e);
    const auto dgpc = make_dgp(DgpId::C);
    nlohmann::ordered_json ec;
    ec["dgp"] = "C";
    ec["y_box"] = {0.0, 2.0};
    ec["value"] = oracle::clt_variance(*dgpc, {0.0, 2.0});
    ec["tolerance"] = 1e-6;
    vs.push_back(ec);
    out["clt_variance"] = vs;
  }

  {
    // Eigenvalue envelope of the population design matrices over the unit
    // support, both stress DGPs, 101-point grid, three bandwidths. C is the
    // frozen invertibility band with 5% headroom.
    const std::vector<double> h_values{0.05, 0.1, 0.3};
    const KernelSpec spec = KernelSpec::product(1, KernelFamily::epanechnikov,
                                                KernelFamily::epanechnikov);
    double eig_min = std::numeric_limits<double>::infinity();
    double eig_max = 0.0;
    for (DgpId id : {DgpId::A, DgpId::C}) {
      const auto dgp = make_dgp(id);
      const oracle::EigSweep sweep = oracle::eig_range_sweep(*dgp, spec, h_values, 101);
      eig_min = std::min(eig_min, sweep.eig_min);
      eig_max = std::max(eig_max, sweep.eig_max);
    }
    nlohmann::ordered_json e;
    e["kernel"] = "epanechnikov";
    e["h_values"] = h_values;
    e["grid_points"] = 101;
    e["dgps"] = {"A", "C"};
    e["eig_min"] = eig_min;
    e["eig_max"] = eig_max;
    e["C"] = 1.05 * std::max(eig_max, 1.0 / eig_min);
    e["tolerance"] = 1e-9;
    out["eig_band"] = e;
  }

  return out;
}

}  // namespace condist
