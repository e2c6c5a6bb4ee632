#include "nlszp/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <algorithm>
#include <cstring>
#include <fstream>

namespace nlszp {

namespace {

template <typename T>
void put(std::ostream& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) throw Error("truncated snapshot");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

void write_snapshot(std::ostream& out, const Field& f) {
  const Grid& g = f.grid();
  out.write("ZFLD", 4);
  put<std::uint16_t>(out, kSnapshotVersion);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(g.dim()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.n()));
  put<double>(out, g.box_length());
  for (const auto& v : f.values()) {
    put<double>(out, v.real());
    put<double>(out, v.imag());
  }
  if (!out) throw Error("failed to write snapshot");
}

Field read_snapshot(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "ZFLD", 4) != 0) throw Error("bad snapshot magic");
  const auto version = get<std::uint16_t>(in);
  if (version != kSnapshotVersion) throw Error("unsupported snapshot version " + std::to_string(version));
  const auto dim = get<std::uint8_t>(in);
  const auto n = get<std::uint32_t>(in);
  const auto box = get<double>(in);
  Grid grid(dim, static_cast<int>(n), box);
  Field f(grid);
  for (auto& v : f.values()) {
    const double re = get<double>(in);
    const double im = get<double>(in);
    v = {re, im};
  }
  if (!f.all_finite()) throw Error("non-finite field");
  return f;
}

void save_snapshot(const std::string& path, const Field& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  write_snapshot(out, f);
}

Field load_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return read_snapshot(in);
}

}  // namespace nlszp
