#pragma once
//
// FDSK sketch files. Layout, all little-endian:
//
//   "FDSK"                      4 bytes
//   version                     u16 (currently 1)
//   k, ell, m, d, rows_seen     u64 each
//   eps, delta, input_frob_sq   IEEE-754 binary64 each
//   buffer                      m*d binary64, row-major
//
// The sketch is flushed before it is written, so a file always holds a
// compressed buffer.
//

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "fdsketch/frequent_directions.hpp"

namespace fdsketch {

inline constexpr std::uint16_t kSketchFormatVersion = 1;

void write_sketch(std::ostream& out, const FdSketch& sketch);
// Throws FormatError on bad magic, version, truncation or trailing bytes.
FdSketch read_sketch(std::istream& in);

// File variants; I/O failures throw IoError.
void save_sketch(const std::filesystem::path& path, const FdSketch& sketch);
FdSketch load_sketch(const std::filesystem::path& path);

}  // namespace fdsketch
