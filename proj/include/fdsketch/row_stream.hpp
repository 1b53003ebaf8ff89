#pragma once
//
// Row stream files.
//
//   csv     one row per line, d comma-separated decimals (scientific notation
//           accepted). Blank lines are skipped.
//   binary  "FDRW", d as u64 little-endian, then binary64 little-endian
//           entries, row-major, until end of file.
//

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include "fdsketch/dense_matrix.hpp"

namespace fdsketch {

enum class RowFormat { csv, binary };

class RowReader {
public:
    virtual ~RowReader() = default;
    // Fills `row` and returns true, or returns false at end of stream.
    // Throws FormatError (with the offending line or row number).
    virtual bool next(std::vector<double>& row) = 0;
    // Row length; nullopt for a CSV stream before its first row.
    virtual std::optional<std::size_t> dim() const = 0;
};

std::unique_ptr<RowReader> make_csv_reader(std::istream& in);
std::unique_ptr<RowReader> make_binary_reader(std::istream& in);

// Peeks at the stream: "FDRW" means binary, anything else csv.
RowFormat sniff_format(std::istream& in);

// Reads every row. `dim_hint` is used when the stream is an empty CSV.
DenseMatrix read_rows(std::istream& in, RowFormat format, std::optional<std::size_t> dim_hint = std::nullopt);
DenseMatrix load_rows(const std::filesystem::path& path, std::optional<RowFormat> format = std::nullopt,
                      std::optional<std::size_t> dim_hint = std::nullopt);

// Shortest round-trip decimal text, so csv -> parse is bit-exact.
void write_csv(std::ostream& out, const DenseMatrix& rows);
void write_binary(std::ostream& out, const DenseMatrix& rows);
void save_rows(const std::filesystem::path& path, const DenseMatrix& rows, RowFormat format);

}  // namespace fdsketch
