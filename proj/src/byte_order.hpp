#pragma once
// Little-endian encoding independent of host byte order.

#include <array>
#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>

namespace fdsketch::detail {

template <typename UInt>
void put_le(std::ostream& out, UInt v) {
    std::array<char, sizeof(UInt)> buf{};
    for (std::size_t i = 0; i < sizeof(UInt); ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    out.write(buf.data(), buf.size());
}

inline void put_f64(std::ostream& out, double v) { put_le(out, std::bit_cast<std::uint64_t>(v)); }

// Returns false on a short read.
template <typename UInt>
bool get_le(std::istream& in, UInt& v) {
    std::array<unsigned char, sizeof(UInt)> buf{};
    in.read(reinterpret_cast<char*>(buf.data()), buf.size());
    if (in.gcount() != static_cast<std::streamsize>(buf.size())) return false;
    v = 0;
    for (std::size_t i = 0; i < sizeof(UInt); ++i) v |= static_cast<UInt>(buf[i]) << (8 * i);
    return true;
}

inline bool get_f64(std::istream& in, double& v) {
    std::uint64_t bits = 0;
    if (!get_le(in, bits)) return false;
    v = std::bit_cast<double>(bits);
    return true;
}

}  // namespace fdsketch::detail
