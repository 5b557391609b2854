#include "condist/io.hpp"

namespace condist {

std::string sample_to_csv(const Sample& sample) {
  std::string out = "y";
  for (int l = 1; l <= sample.dim(); ++l) out += ",x" + std::to_string(l);
  out += "\n";
  for (Eigen::Index i = 0; i < sample.size(); ++i) {
    out += format_double(sample.y[i]);
    for (int l = 0; l < sample.dim(); ++l) out += "," + format_double(sample.x(i, l));
    out += "\n";
  }
  return out;
}

std::string surface_to_csv(const Surface& surface) {
  const int d = surface.x_grid.empty() ? 0 : static_cast<int>(surface.x_grid.front().size());
  std::string out = "y";
  for (int l = 1; l <= d; ++l) out += ",x" + std::to_string(l);
  out += ",Fhat";
  for (int l = 1; l <= d; ++l) out += ",grad" + std::to_string(l);
  out += ",min_eig,n_local\n";
  for (std::size_t c = 0; c < surface.x_grid.size(); ++c) {
    const ColumnDiagnostics& diag = surface.columns[c];
    for (std::size_t g = 0; g < surface.y_grid.size(); ++g) {
      out += format_double(surface.y_grid[g]);
      for (int l = 0; l < d; ++l) out += "," + format_double(surface.x_grid[c][l]);
      out += "," + format_double(surface.values(static_cast<Eigen::Index>(g),
                                                static_cast<Eigen::Index>(c)));
      for (int l = 0; l < d; ++l) {
        out += "," + format_double(surface.grads[static_cast<std::size_t>(l)](
                         static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(c)));
      }
      out += "," + format_double(diag.min_eig) + "," + std::to_string(diag.n_local) + "\n";
    }
  }
  return out;
}

}  // namespace condist
