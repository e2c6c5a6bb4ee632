#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "nlszp/grid.hpp"

namespace nlszp {

// Binary field snapshot (".zfld"), all integers and floats little-endian:
//   "ZFLD" | version u16 = 1 | dim u8 | n u32 | L f64 | n^dim x (re f64, im f64)
inline constexpr std::uint16_t kSnapshotVersion = 1;

void write_snapshot(std::ostream& out, const Field& f);
Field read_snapshot(std::istream& in);

void save_snapshot(const std::string& path, const Field& f);
Field load_snapshot(const std::string& path);

}  // namespace nlszp
