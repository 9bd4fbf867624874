#pragma once

#include <filesystem>

#include "vortex/spectral_field.hpp"

namespace vortex {

// "VVF1" snapshot files, little-endian:
//   magic "VVF1" | u32 n | f64 time | n*n f64 nodal values, row-major.

struct Snapshot {
  Nodal values;
  double time = 0.0;
};

void write_snapshot(const std::filesystem::path& path, const Nodal& values, double time);
Snapshot read_snapshot(const std::filesystem::path& path, double dealias_fraction = 2.0 / 3.0);

void write_field(const std::filesystem::path& path, const Field& field);
Field read_field(const std::filesystem::path& path, double dealias_fraction = 2.0 / 3.0);

}  // namespace vortex
