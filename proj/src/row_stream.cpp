#include "fdsketch/row_stream.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "byte_order.hpp"
#include "fdsketch/errors.hpp"

namespace fdsketch {
namespace {

std::string_view trim(std::string_view s) {
    const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

class CsvReader final : public RowReader {
public:
    explicit CsvReader(std::istream& in) : in_(in) {}

    bool next(std::vector<double>& row) override {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            const std::string_view text = trim(line);
            if (text.empty()) continue;
            parse(text, row);
            return true;
        }
        if (in_.bad()) throw IoError("read error in CSV stream");
        return false;
    }

    std::optional<std::size_t> dim() const override { return dim_; }

private:
    void parse(std::string_view text, std::vector<double>& row) {
        row.clear();
        std::size_t pos = 0;
        while (true) {
            const std::size_t comma = text.find(',', pos);
            const std::string_view field =
                trim(text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
            double v = 0.0;
            const char* first = field.data();
            const char* last = field.data() + field.size();
            // from_chars rejects a leading '+'; accept it like strtod does.
            if (first != last && *first == '+') ++first;
            const auto [ptr, ec] = std::from_chars(first, last, v);
            if (field.empty() || ec != std::errc() || ptr != last) {
                throw FormatError("field " + std::to_string(row.size() + 1) + " is not a number: '" +
                                      std::string(field) + "'",
                                  line_no_);
            }
            if (!std::isfinite(v)) {
                throw FormatError("field " + std::to_string(row.size() + 1) + " is not finite", line_no_);
            }
            row.push_back(v);
            if (comma == std::string_view::npos) break;
            pos = comma + 1;
        }
        if (!dim_) dim_ = row.size();
        if (row.size() != *dim_) {
            throw FormatError("expected " + std::to_string(*dim_) + " fields, found " + std::to_string(row.size()),
                              line_no_);
        }
    }

    std::istream& in_;
    std::size_t line_no_ = 0;
    std::optional<std::size_t> dim_;
};

class BinaryReader final : public RowReader {
public:
    explicit BinaryReader(std::istream& in) : in_(in) {
        char magic[4] = {};
        in_.read(magic, 4);
        if (in_.gcount() != 4 || std::string_view(magic, 4) != "FDRW") {
            throw FormatError("not an FDRW row stream (bad magic)");
        }
        std::uint64_t d = 0;
        if (!detail::get_le(in_, d)) throw FormatError("truncated FDRW header");
        if (d == 0) throw FormatError("FDRW header declares zero columns");
        dim_ = static_cast<std::size_t>(d);
    }

    bool next(std::vector<double>& row) override {
        if (in_.peek() == std::char_traits<char>::eof()) return false;
        ++row_no_;
        row.resize(dim_);
        for (double& v : row) {
            if (!detail::get_f64(in_, v)) throw FormatError("truncated row", row_no_);
            if (!std::isfinite(v)) throw FormatError("non-finite entry", row_no_);
        }
        return true;
    }

    std::optional<std::size_t> dim() const override { return dim_; }

private:
    std::istream& in_;
    std::size_t dim_ = 0;
    std::size_t row_no_ = 0;
};

}  // namespace

std::unique_ptr<RowReader> make_csv_reader(std::istream& in) { return std::make_unique<CsvReader>(in); }

std::unique_ptr<RowReader> make_binary_reader(std::istream& in) { return std::make_unique<BinaryReader>(in); }

RowFormat sniff_format(std::istream& in) {
    char magic[4] = {};
    in.read(magic, 4);
    const auto got = in.gcount();
    in.clear();
    in.seekg(-got, std::ios::cur);
    return got == 4 && std::string_view(magic, 4) == "FDRW" ? RowFormat::binary : RowFormat::csv;
}

DenseMatrix read_rows(std::istream& in, RowFormat format, std::optional<std::size_t> dim_hint) {
    auto reader = format == RowFormat::csv ? make_csv_reader(in) : make_binary_reader(in);
    std::vector<double> row;
    DenseMatrix out;
    bool any = false;
    while (reader->next(row)) {
        if (!any) out = DenseMatrix(0, row.size());
        any = true;
        out.append_row(row);
    }
    if (!any) {
        const std::size_t d = reader->dim().value_or(dim_hint.value_or(0));
        out = DenseMatrix(0, d);
    }
    return out;
}

DenseMatrix load_rows(const std::filesystem::path& path, std::optional<RowFormat> format,
                      std::optional<std::size_t> dim_hint) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    return read_rows(in, format.value_or(sniff_format(in)), dim_hint);
}

void write_csv(std::ostream& out, const DenseMatrix& rows) {
    char buf[64];
    for (std::size_t i = 0; i < rows.rows(); ++i) {
        const auto r = rows.row(i);
        for (std::size_t j = 0; j < r.size(); ++j) {
            if (j) out.put(',');
            const auto res = std::to_chars(buf, buf + sizeof buf, r[j]);
            out.write(buf, res.ptr - buf);
        }
        out.put('\n');
    }
}

void write_binary(std::ostream& out, const DenseMatrix& rows) {
    out.write("FDRW", 4);
    detail::put_le<std::uint64_t>(out, rows.cols());
    for (double v : rows.data()) detail::put_f64(out, v);
}

void save_rows(const std::filesystem::path& path, const DenseMatrix& rows, RowFormat format) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    if (format == RowFormat::csv) {
        write_csv(out, rows);
    } else {
        write_binary(out, rows);
    }
    out.close();
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace fdsketch
