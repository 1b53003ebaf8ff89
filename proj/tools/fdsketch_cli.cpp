// fdsketch: streaming matrix sketches from the command line.
//
// Exit status: 0 success, 1 a verification bound failed, 2 bad input or
// arguments, 3 I/O failure. Every report goes to stdout as JSON.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fdsketch/counterexamples.hpp"
#include "fdsketch/error_report.hpp"
#include "fdsketch/errors.hpp"
#include "fdsketch/frequent_directions.hpp"
#include "fdsketch/heavy_hitters.hpp"
#include "fdsketch/kernels.hpp"
#include "fdsketch/row_stream.hpp"
#include "fdsketch/sketch_io.hpp"
#include "fdsketch/verify.hpp"
#include "json.hpp"

namespace {

using fdsketch::DenseMatrix;
using fdsketch::FdParams;
using fdsketch::FdSketch;
using fdsketch::RowFormat;
using nlohmann::json;

constexpr int kOk = 0;
constexpr int kBoundFailed = 1;
constexpr int kInputError = 2;
constexpr int kIoError = 3;

struct Options {
    std::string input;
    std::string sketch;
    std::string out;
    std::string json_path;
    std::string format;
    std::vector<std::string> merge_inputs;
    std::size_t k = 1;
    double eps = 0.5;
    double c = 1.0;
    std::optional<std::size_t> ell;
    std::size_t d = 0;
    std::size_t n = 100;
    std::optional<std::uint64_t> seed;
    bool pretty = false;
};

std::optional<RowFormat> parse_format(const std::string& name) {
    if (name.empty()) return std::nullopt;
    if (name == "csv") return RowFormat::csv;
    return RowFormat::binary;
}

void emit(const Options& opt, const json& report) {
    std::cout << report.dump(opt.pretty ? 2 : -1) << '\n';
    if (opt.json_path.empty()) return;
    std::ofstream f(opt.json_path, std::ios::trunc);
    f << report.dump(2) << '\n';
    if (!f) throw fdsketch::IoError("cannot write report to '" + opt.json_path + "'");
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw fdsketch::IoError("cannot open '" + path + "'");
    return in;
}

// Rows go into the sketch as they are parsed; the matrix is never held whole.
int cmd_sketch(const Options& opt) {
    std::ifstream in = open_input(opt.input);
    const RowFormat fmt = parse_format(opt.format).value_or(fdsketch::sniff_format(in));
    auto reader = fmt == RowFormat::csv ? fdsketch::make_csv_reader(in) : fdsketch::make_binary_reader(in);

    std::vector<double> row;
    const bool any = reader->next(row);
    std::size_t d = any ? row.size() : reader->dim().value_or(opt.d);
    if (d == 0) {
        std::cerr << "fdsketch: empty input without a known width; assuming d = 1 (set --d)\n";
        d = 1;
    }
    FdSketch sketch(FdParams::from_error(opt.k, opt.eps, opt.c, d));
    if (sketch.params().ell_exceeds_dimension()) {
        std::cerr << "fdsketch: warning: ell = " << sketch.params().ell << " exceeds d = " << d
                  << "; the sketch is exact until the rank saturates\n";
    }
    if (any) {
        do {
            sketch.append(row);
        } while (reader->next(row));
    }
    sketch.flush();
    fdsketch::save_sketch(opt.out, sketch);

    emit(opt, {{"ell", sketch.params().ell},
               {"capacity", sketch.params().capacity},
               {"d", d},
               {"rows", sketch.rows_seen()},
               {"delta", sketch.delta()},
               {"input_frob_sq", sketch.input_frob_sq()},
               {"kernels", std::string(fdsketch::kernels::backend_name(fdsketch::kernels::active_backend()))}});
    return kOk;
}

int cmd_merge(const Options& opt) {
    const FdSketch a = fdsketch::load_sketch(opt.merge_inputs.at(0));
    const FdSketch b = fdsketch::load_sketch(opt.merge_inputs.at(1));
    const FdSketch merged = fdsketch::fd_merge(a, b);
    fdsketch::save_sketch(opt.out, merged);
    emit(opt, {{"ell", merged.params().ell},
               {"d", merged.params().d},
               {"rows", merged.rows_seen()},
               {"delta", merged.delta()},
               {"input_frob_sq", merged.input_frob_sq()}});
    return kOk;
}

int cmd_verify(const Options& opt) {
    const DenseMatrix a = fdsketch::load_rows(opt.input, parse_format(opt.format));
    const FdSketch sketch = fdsketch::load_sketch(opt.sketch);
    if (a.rows() > 0 && a.cols() != sketch.params().d) {
        throw fdsketch::InvalidArgument("input has " + std::to_string(a.cols()) + " columns, sketch has d = " +
                                        std::to_string(sketch.params().d));
    }
    const DenseMatrix oracle_input = a.rows() > 0 ? a : DenseMatrix(0, sketch.params().d);
    const fdsketch::ErrorReport report = fdsketch::fd_error_report(oracle_input, sketch);
    emit(opt, fdsketch::to_json(report));
    return report.all_pass() ? kOk : kBoundFailed;
}

std::vector<fdsketch::ItemId> read_items(const std::string& path) {
    std::ifstream in = open_input(path);
    std::vector<fdsketch::ItemId> items;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        const std::string_view text(line.data() + first, last - first + 1);
        fdsketch::ItemId id = 0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), id);
        if (ec != std::errc() || ptr != text.data() + text.size()) {
            throw fdsketch::FormatError("not an unsigned item id: '" + std::string(text) + "'", line_no);
        }
        items.push_back(id);
    }
    if (in.bad()) throw fdsketch::IoError("read error on '" + path + "'");
    return items;
}

int cmd_hh(const Options& opt) {
    const std::vector<fdsketch::ItemId> items = read_items(opt.input);
    const std::size_t ell = opt.ell.value_or(fdsketch::capacity_for_relative_error(opt.k, opt.eps));
    fdsketch::MgSummary summary(ell);
    fdsketch::FrequencyTable exact;
    for (auto id : items) {
        summary.update(id);
        ++exact[id];
    }
    json top = json::array();
    for (const auto& slot : summary.ranked()) {
        top.push_back({{"item", slot.label}, {"estimate", slot.count}, {"count", exact[slot.label]}});
    }
    json report = {{"ell", ell}, {"k", opt.k}, {"eps", opt.eps}, {"n", items.size()}, {"top", top}};
    if (opt.k < ell) {
        const fdsketch::MgCertificate cert = fdsketch::mg_error_certificate(summary, exact, opt.k);
        report["certificate"] = {{"decrements", cert.decrements},
                                 {"tail_mass", cert.tail_mass},
                                 {"top_k_mass", cert.top_k_mass},
                                 {"top_k_estimate", cert.top_k_estimate},
                                 {"max_item_gap", cert.max_item_gap},
                                 {"item_gaps_ok", cert.item_gaps_ok},
                                 {"decrements_vs_n_ok", cert.decrements_vs_n_ok},
                                 {"decrements_vs_tail_ok", cert.decrements_vs_tail_ok},
                                 {"top_k_gap_ok", cert.top_k_gap_ok},
                                 {"all_ok", cert.all_ok()}};
    }
    emit(opt, report);
    return kOk;
}

int cmd_adversary(const Options& opt) {
    const DenseMatrix stream = fdsketch::gen_adversary(opt.k, opt.d, opt.n);
    if (!opt.out.empty()) {
        fdsketch::save_rows(opt.out, stream, parse_format(opt.format).value_or(RowFormat::csv));
    }
    const fdsketch::AdversaryComparison cmp = fdsketch::compare_on_stream(stream, opt.k, opt.eps);
    emit(opt, {{"k", cmp.k},
               {"d", opt.d},
               {"n", cmp.n},
               {"fd_eps", opt.eps},
               {"tail_mass", cmp.tail_mass},
               {"optimal_err", cmp.optimal_err},
               {"ipca_err", cmp.ipca_err},
               {"fd_err", cmp.fd_err},
               {"ipca_ratio", cmp.ipca_ratio},
               {"fd_ratio", cmp.fd_ratio}});
    return kOk;
}

json grid_json(const fdsketch::AlphaGridSummary& g) {
    json j = {{"ell", g.ell},
              {"c", g.c},
              {"delta", g.delta},
              {"alpha_range", {g.lo, g.hi}},
              {"step", g.step},
              {"total_points", g.total_points},
              {"p1_points", g.p1_points},
              {"p2_points", g.p2_points},
              {"joint_points", g.joint_points},
              {"alpha_zero_joint", g.alpha_zero_joint}};
    j["joint_example"] = g.joint_example ? json(*g.joint_example) : json(nullptr);
    return j;
}

int cmd_no_sparse_fd(const Options& opt) {
    const std::size_t ell = opt.ell.value_or(4);
    const std::size_t d = opt.d == 0 ? ell + 1 : opt.d;
    fdsketch::SparseFdInstance inst = fdsketch::SparseFdInstance::hard(ell, d);
    const fdsketch::ResidualMin measured = fdsketch::orthogonal_residual_min(inst.q, inst.weights);

    json report = {{"ell", ell}, {"d", d}, {"c", opt.c}, {"threshold_c", 2.0 / static_cast<double>(ell)}};
    report["declared"] = grid_json(fdsketch::alpha_grid_feasibility(inst, opt.c));
    inst.delta = measured.value;
    report["measured"] = grid_json(fdsketch::alpha_grid_feasibility(inst, opt.c));
    report["residual_min"] = {{"value", measured.value}, {"row", measured.index}};
    emit(opt, report);
    return kOk;
}

int cmd_suite(const Options& opt) {
    std::vector<fdsketch::TrialConfig> grid = fdsketch::default_grid(fdsketch::all_distributions(), {opt.c});
    if (opt.seed) {
        std::vector<fdsketch::TrialConfig> reseeded;
        for (auto cfg : grid) {
            if (cfg.seed != 1) continue;
            cfg.seed = *opt.seed;
            reseeded.push_back(cfg);
        }
        grid = std::move(reseeded);
    }
    const fdsketch::SuiteSummary summary = fdsketch::run_suite(grid);
    emit(opt, fdsketch::to_json(summary));
    return summary.all_pass ? kOk : kBoundFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Frequent Directions matrix sketching"};
    app.require_subcommand(1);
    Options opt;

    const auto add_report_flags = [&](CLI::App* cmd) {
        cmd->add_option("--json", opt.json_path, "Also write the JSON report to this file");
        cmd->add_flag("--pretty", opt.pretty, "Indent JSON output");
    };
    const auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", opt.format, "Row stream format (default: detect)")
            ->check(CLI::IsMember({"csv", "binary"}));
    };

    auto* sketch = app.add_subcommand("sketch", "Sketch a row stream into an FDSK file");
    sketch->add_option("--input", opt.input, "Row stream (CSV or FDRW binary)")->required();
    sketch->add_option("--out", opt.out, "Output sketch file")->required();
    sketch->add_option("--k", opt.k, "Target rank")->required()->check(CLI::PositiveNumber);
    sketch->add_option("--eps", opt.eps, "Relative error")->required()->check(CLI::PositiveNumber);
    sketch->add_option("--c", opt.c, "Buffer factor (buffer holds ceil(c*ell) rows)")->check(CLI::Range(1.0, 1e6));
    sketch->add_option("--d", opt.d, "Column count for an empty CSV input");
    add_format(sketch);
    add_report_flags(sketch);

    auto* merge = app.add_subcommand("merge", "Merge two sketches with matching parameters");
    merge->add_option("inputs", opt.merge_inputs, "Two FDSK files")->required()->expected(2);
    merge->add_option("--out", opt.out, "Output sketch file")->required();
    add_report_flags(merge);

    auto* verify = app.add_subcommand("verify", "Check a sketch against its input with an exact SVD");
    verify->add_option("--input", opt.input, "Row stream the sketch was built from")->required();
    verify->add_option("--sketch", opt.sketch, "FDSK file")->required();
    add_format(verify);
    add_report_flags(verify);

    auto* hh = app.add_subcommand("hh", "Misra-Gries heavy hitters over newline-delimited item ids");
    hh->add_option("--input", opt.input, "Item ids, one per line")->required();
    hh->add_option("--k", opt.k, "Number of heavy items")->check(CLI::PositiveNumber);
    hh->add_option("--eps", opt.eps, "Relative error")->check(CLI::PositiveNumber);
    hh->add_option("--ell", opt.ell, "Counter slots (default: ceil(k + k/eps))")->check(CLI::PositiveNumber);
    add_report_flags(hh);

    auto* adversary = app.add_subcommand("adversary", "Stream that defeats incremental PCA");
    adversary->add_option("--k", opt.k, "Target rank")->check(CLI::PositiveNumber);
    adversary->add_option("--d", opt.d, "Columns")->required();
    adversary->add_option("--n", opt.n, "Rows");
    adversary->add_option("--eps", opt.eps, "Relative error for the FD side")->check(CLI::PositiveNumber);
    adversary->add_option("--out", opt.out, "Write the stream here");
    add_format(adversary);
    add_report_flags(adversary);

    auto* no_sparse = app.add_subcommand("no-sparse-fd", "Row-retaining shrink feasibility on the hard instance");
    no_sparse->add_option("--ell", opt.ell, "Sketch rows (>= 2)");
    no_sparse->add_option("--d", opt.d, "Columns (default ell + 1)");
    no_sparse->add_option("--c", opt.c, "Required Frobenius reduction factor");
    add_report_flags(no_sparse);

    auto* suite = app.add_subcommand("suite", "Run the verification grid over every generator");
    suite->add_option("--c", opt.c, "Buffer factor")->check(CLI::Range(1.0, 1e6));
    suite->add_option("--seed", opt.seed, "Run a single seed instead of 1, 2, 3");
    add_report_flags(suite);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInputError;
    }

    try {
        if (*sketch) return cmd_sketch(opt);
        if (*merge) return cmd_merge(opt);
        if (*verify) return cmd_verify(opt);
        if (*hh) return cmd_hh(opt);
        if (*adversary) return cmd_adversary(opt);
        if (*no_sparse) return cmd_no_sparse_fd(opt);
        if (*suite) return cmd_suite(opt);
    } catch (const fdsketch::IoError& e) {
        std::cerr << "fdsketch: " << e.what() << '\n';
        return kIoError;
    } catch (const fdsketch::Error& e) {
        std::cerr << "fdsketch: " << e.what() << '\n';
        return kInputError;
    }
    return kInputError;
}
