#include "fdsketch/sketch_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "byte_order.hpp"
#include "fdsketch/errors.hpp"

namespace fdsketch {

using detail::get_f64;
using detail::get_le;
using detail::put_f64;
using detail::put_le;

void write_sketch(std::ostream& out, const FdSketch& sketch) {
    const FdSketch s = sketch.flushed();
    const FdParams& p = s.params();
    out.write("FDSK", 4);
    put_le<std::uint16_t>(out, kSketchFormatVersion);
    put_le<std::uint64_t>(out, p.k);
    put_le<std::uint64_t>(out, p.ell);
    put_le<std::uint64_t>(out, p.capacity);
    put_le<std::uint64_t>(out, p.d);
    put_le<std::uint64_t>(out, s.rows_seen());
    put_f64(out, p.eps);
    put_f64(out, s.delta());
    put_f64(out, s.input_frob_sq());
    for (double v : s.buffer().data()) put_f64(out, v);
    if (!out) throw IoError("failed writing sketch");
}

FdSketch read_sketch(std::istream& in) {
    char magic[4] = {};
    in.read(magic, 4);
    if (in.gcount() != 4 || std::string(magic, 4) != "FDSK") throw FormatError("not an FDSK sketch (bad magic)");

    std::uint16_t version = 0;
    if (!get_le(in, version)) throw FormatError("truncated sketch header");
    if (version != kSketchFormatVersion) {
        throw FormatError("unsupported sketch format version " + std::to_string(version));
    }

    std::uint64_t k = 0, ell = 0, m = 0, d = 0, rows_seen = 0;
    double eps = 0.0, delta = 0.0, input = 0.0;
    if (!get_le(in, k) || !get_le(in, ell) || !get_le(in, m) || !get_le(in, d) || !get_le(in, rows_seen) ||
        !get_f64(in, eps) || !get_f64(in, delta) || !get_f64(in, input)) {
        throw FormatError("truncated sketch header");
    }
    // Guard the allocation below against garbage headers.
    if (d == 0 || m == 0 || m > (std::uint64_t{1} << 32) / d) throw FormatError("implausible sketch dimensions");

    FdParams params;
    try {
        params = FdParams::from_layout(k, eps, ell, m, d);
    } catch (const InvalidArgument& e) {
        throw FormatError(std::string("bad sketch parameters: ") + e.what());
    }

    DenseMatrix buffer(m, d);
    for (double& v : buffer.data()) {
        if (!get_f64(in, v)) throw FormatError("truncated sketch buffer");
    }
    if (in.peek() != std::char_traits<char>::eof()) throw FormatError("trailing bytes after sketch buffer");

    try {
        return FdSketch::restore(params, std::move(buffer), delta, input, rows_seen);
    } catch (const InvalidArgument& e) {
        throw FormatError(std::string("inconsistent sketch state: ") + e.what());
    }
}

void save_sketch(const std::filesystem::path& path, const FdSketch& sketch) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    write_sketch(out, sketch);
    out.close();
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

FdSketch load_sketch(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    return read_sketch(in);
}

}  // namespace fdsketch
