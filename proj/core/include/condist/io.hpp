#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include "condist/llr.hpp"
#include "condist/sample.hpp"

namespace condist {

// Round-trip-exact, locale-independent float formatting for CSV output.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

// Columns: y,x1,...,xd
std::string sample_to_csv(const Sample& sample);

// Columns: y,x1..xd,Fhat,grad1..gradd,min_eig,n_local
std::string surface_to_csv(const Surface& surface);

}  // namespace condist
