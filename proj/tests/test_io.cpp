#include <gtest/gtest.h>

#include <bit>
#include <filesystem>
#include <sstream>

#include "fdsketch/errors.hpp"
#include "fdsketch/frequent_directions.hpp"
#include "fdsketch/row_stream.hpp"
#include "fdsketch/sketch_io.hpp"
#include "test_support.hpp"

using fdsketch::DenseMatrix;
using fdsketch::FdParams;
using fdsketch::FdSketch;
using fdsketch::RowFormat;

namespace {

bool bitwise_equal(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (std::size_t i = 0; i < a.data().size(); ++i)
        if (std::bit_cast<std::uint64_t>(a.data()[i]) != std::bit_cast<std::uint64_t>(b.data()[i])) return false;
    return true;
}

std::string serialize(const FdSketch& s) {
    std::ostringstream out(std::ios::binary);
    fdsketch::write_sketch(out, s);
    return out.str();
}

FdSketch deserialize(const std::string& bytes) {
    std::istringstream in(bytes, std::ios::binary);
    return fdsketch::read_sketch(in);
}

DenseMatrix parse_csv(const std::string& text) {
    std::istringstream in(text);
    return fdsketch::read_rows(in, RowFormat::csv);
}

std::size_t format_error_line(const std::string& text) {
    try {
        parse_csv(text);
    } catch (const fdsketch::FormatError& e) {
        return e.line();
    }
    return 0;
}

}  // namespace

TEST(CsvRows, ParsesDecimalsAndScientific) {
    const DenseMatrix m = parse_csv("1, 2.5,-3\n\n+4e2,0.1 ,  -1E-3\r\n");
    ASSERT_EQ(m.rows(), 2u);
    ASSERT_EQ(m.cols(), 3u);
    EXPECT_EQ(m(1, 0), 400.0);
    EXPECT_EQ(m(1, 1), 0.1);
    EXPECT_EQ(m(1, 2), -0.001);
}

TEST(CsvRows, ErrorsCarryLineNumbers) {
    EXPECT_EQ(format_error_line("1,2\n3,x\n"), 2u);
    EXPECT_EQ(format_error_line("1,2\n\n3,4,5\n"), 3u);
    EXPECT_EQ(format_error_line("nan,1\n"), 1u);
    EXPECT_EQ(format_error_line("1,inf\n"), 1u);
    EXPECT_EQ(format_error_line("1,,2\n"), 1u);
    EXPECT_EQ(format_error_line("1,2\n3,1e999\n"), 2u);
}

TEST(CsvRows, EmptyStreamUsesHint) {
    std::istringstream in("");
    const DenseMatrix m = fdsketch::read_rows(in, RowFormat::csv, 4);
    EXPECT_EQ(m.rows(), 0u);
    EXPECT_EQ(m.cols(), 4u);
}

TEST(RowStreams, RoundTripIsBitExact) {
    DenseMatrix m = fdtest::random_matrix(17, 5, 3);
    m(0, 0) = 0.1;
    m(0, 1) = -0.0;
    m(0, 2) = 1e-300;
    m(0, 3) = 123456789.123456789;
    for (RowFormat fmt : {RowFormat::csv, RowFormat::binary}) {
        std::stringstream buf(std::ios::in | std::ios::out | std::ios::binary);
        if (fmt == RowFormat::csv) {
            fdsketch::write_csv(buf, m);
        } else {
            fdsketch::write_binary(buf, m);
        }
        EXPECT_EQ(fdsketch::sniff_format(buf), fmt);
        EXPECT_TRUE(bitwise_equal(fdsketch::read_rows(buf, fmt), m));
    }
}

TEST(RowStreams, BinaryErrors) {
    std::istringstream bad_magic(std::string("FDXX\x01\0\0\0\0\0\0\0", 12), std::ios::binary);
    EXPECT_THROW(fdsketch::read_rows(bad_magic, RowFormat::binary), fdsketch::FormatError);

    std::stringstream buf(std::ios::in | std::ios::out | std::ios::binary);
    fdsketch::write_binary(buf, fdtest::random_matrix(3, 4, 1));
    std::string bytes = buf.str();
    bytes.resize(bytes.size() - 3);
    std::istringstream truncated(bytes, std::ios::binary);
    EXPECT_THROW(fdsketch::read_rows(truncated, RowFormat::binary), fdsketch::FormatError);
}

TEST(RowStreams, MissingFileIsIoError) {
    EXPECT_THROW(fdsketch::load_rows("/nonexistent/dir/rows.csv"), fdsketch::IoError);
}

TEST(SketchFile, RoundTripIsBitExact) {
    const DenseMatrix a = fdtest::random_matrix(57, 9, 12);
    for (double c : {1.0, 2.0, 1.5}) {
        FdSketch s(FdParams::from_error(2, 0.3, c, 9));
        s.append_rows(a);
        const std::string bytes = serialize(s);
        const FdSketch back = deserialize(bytes);
        EXPECT_TRUE(back.same_state(s.flushed()));
        EXPECT_EQ(serialize(back), bytes);
        EXPECT_TRUE(bitwise_equal(back.query(), s.query()));
    }
}

TEST(SketchFile, EmptySketchRoundTrips) {
    FdSketch s(FdParams::from_error(1, 1.0, 1.0, 3));
    const FdSketch back = deserialize(serialize(s));
    EXPECT_TRUE(back.same_state(s));
    EXPECT_EQ(back.delta(), 0.0);
}

TEST(SketchFile, RejectsCorruptInput) {
    FdSketch s(FdParams::from_error(1, 1.0, 1.0, 3));
    s.append(std::vector<double>{1, 2, 3});
    const std::string good = serialize(s);

    EXPECT_THROW(deserialize("FDSQ" + good.substr(4)), fdsketch::FormatError);
    EXPECT_THROW(deserialize(good.substr(0, good.size() - 1)), fdsketch::FormatError);
    EXPECT_THROW(deserialize(good + "x"), fdsketch::FormatError);
    std::string version = good;
    version[4] = 9;
    EXPECT_THROW(deserialize(version), fdsketch::FormatError);
    EXPECT_THROW(deserialize(good.substr(0, 10)), fdsketch::FormatError);
}

TEST(SketchFile, CsvAndBinaryInputsGiveIdenticalSketches) {
    const DenseMatrix a = fdtest::random_matrix(80, 6, 5);
    const auto dir = std::filesystem::temp_directory_path() / "fdsketch_io_test";
    std::filesystem::create_directories(dir);
    fdsketch::save_rows(dir / "a.csv", a, RowFormat::csv);
    fdsketch::save_rows(dir / "a.bin", a, RowFormat::binary);
    const auto p = FdParams::from_error(2, 0.5, 1.0, 6);
    FdSketch from_csv(p), from_bin(p);
    from_csv.append_rows(fdsketch::load_rows(dir / "a.csv"));
    from_bin.append_rows(fdsketch::load_rows(dir / "a.bin"));
    EXPECT_TRUE(from_csv.same_state(from_bin));
    fdsketch::save_sketch(dir / "s.fdsk", from_csv);
    EXPECT_TRUE(fdsketch::load_sketch(dir / "s.fdsk").same_state(from_bin.flushed()));
    std::filesystem::remove_all(dir);
}
