#include "vortex/snapshot_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace vortex {
namespace {

constexpr std::array<char, 4> kMagic = {'V', 'V', 'F', '1'};

template <typename T>
void put_le(std::ostream& os, T value) {
  std::array<unsigned char, sizeof(T)> bytes{};
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  os.write(reinterpret_cast<const char*>(bytes.data()), sizeof(T));
}

template <typename T>
T get_le(std::istream& is, const std::filesystem::path& path) {
  std::array<unsigned char, sizeof(T)> bytes{};
  if (!is.read(reinterpret_cast<char*>(bytes.data()), sizeof(T)))
    throw Error(ErrorCode::BadFile, "truncated snapshot " + path.string());
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const Nodal& values, double time) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(ErrorCode::BadFile, "cannot open " + path.string() + " for writing");
  os.write(kMagic.data(), kMagic.size());
  const int n = values.grid().n();
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(n));
  put_le<double>(os, time);
  const auto& v = values.values();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) put_le<double>(os, v(i, j));
  if (!os) throw Error(ErrorCode::BadFile, "write failed for " + path.string());
}

Snapshot read_snapshot(const std::filesystem::path& path, double dealias_fraction) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::BadFile, "cannot open " + path.string());
  std::array<char, 4> magic{};
  if (!is.read(magic.data(), magic.size()) || magic != kMagic)
    throw Error(ErrorCode::BadFile, "bad magic in " + path.string());
  const auto n = get_le<std::uint32_t>(is, path);
  if (n % 2 != 0 || n < 8) throw Error(ErrorCode::BadFile, "invalid grid size " + std::to_string(n) + " in " + path.string());
  const double time = get_le<double>(is, path);
  const TorusGrid grid(static_cast<int>(n), dealias_fraction);
  Nodal values(grid);
  for (int i = 0; i < grid.n(); ++i)
    for (int j = 0; j < grid.n(); ++j) values.values()(i, j) = get_le<double>(is, path);
  return {std::move(values), time};
}

void write_field(const std::filesystem::path& path, const Field& field) {
  write_snapshot(path, to_physical(field), field.time());
}

Field read_field(const std::filesystem::path& path, double dealias_fraction) {
  const Snapshot s = read_snapshot(path, dealias_fraction);
  return to_spectral(s.values, MeanPolicy::Project, s.time);
}

}  // namespace vortex
