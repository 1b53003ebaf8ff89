#include "fdsketch/verify.hpp"

#include <chrono>
#include <cmath>
#include <random>

#include "fdsketch/counterexamples.hpp"
#include "fdsketch/errors.hpp"
#include "fdsketch/frequent_directions.hpp"
#include "fdsketch/kernels.hpp"
#include "fdsketch/linalg.hpp"

namespace fdsketch {
namespace {

using Clock = std::chrono::steady_clock;

double millis_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// `count` orthonormal rows of length `len` from Gaussian draws.
DenseMatrix random_orthonormal_rows(std::size_t count, std::size_t len, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    DenseMatrix rows(count, len);
    for (double& v : rows.data()) v = normal(rng);
    for (std::size_t i = 0; i < count; ++i) {
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t j = 0; j < i; ++j) {
                kernels::axpy(-kernels::dot(rows.row(j), rows.row(i)), rows.row(j), rows.row(i));
            }
        }
        kernels::scale(1.0 / std::sqrt(kernels::sum_sq(rows.row(i))), rows.row(i));
    }
    return rows;
}

DenseMatrix gaussian_rows(const TrialConfig& cfg, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    DenseMatrix a(cfg.n, cfg.d);
    for (double& v : a.data()) v = normal(rng);
    return a;
}

// Rank-r signal with singular values 10*r, 10*(r-1), ..., 10, plus N(0, 0.1^2) noise.
DenseMatrix low_rank_plus_noise(const TrialConfig& cfg, std::mt19937_64& rng) {
    const std::size_t r = std::min({cfg.k, cfg.n, cfg.d});
    const DenseMatrix left = random_orthonormal_rows(r, cfg.n, rng);
    const DenseMatrix right = random_orthonormal_rows(r, cfg.d, rng);
    std::normal_distribution<double> noise(0.0, 0.1);
    DenseMatrix a(cfg.n, cfg.d);
    for (std::size_t i = 0; i < cfg.n; ++i) {
        auto row = a.row(i);
        for (double& v : row) v = noise(rng);
        for (std::size_t j = 0; j < r; ++j) {
            const double sigma = 10.0 * static_cast<double>(r - j);
            kernels::axpy(sigma * left(j, i), right.row(j), row);
        }
    }
    return a;
}

// Rows drawn from d fixed directions with Zipf(1) popularity, lightly perturbed.
DenseMatrix zipf_rows(const TrialConfig& cfg, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    DenseMatrix dictionary(cfg.d, cfg.d);
    for (double& v : dictionary.data()) v = normal(rng);
    std::vector<double> weights(cfg.d);
    for (std::size_t r = 0; r < cfg.d; ++r) weights[r] = 1.0 / static_cast<double>(r + 1);
    std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
    DenseMatrix a(cfg.n, cfg.d);
    for (std::size_t i = 0; i < cfg.n; ++i) {
        const auto src = dictionary.row(pick(rng));
        auto row = a.row(i);
        for (std::size_t j = 0; j < cfg.d; ++j) row[j] = src[j] + 0.01 * normal(rng);
    }
    return a;
}

}  // namespace

std::string_view distribution_name(Distribution d) {
    switch (d) {
        case Distribution::gaussian:
            return "gaussian";
        case Distribution::low_rank_plus_noise:
            return "low-rank-plus-noise";
        case Distribution::adversarial:
            return "adversarial";
        case Distribution::zipf_rows:
            return "zipf-rows";
    }
    return "unknown";
}

std::optional<Distribution> parse_distribution(std::string_view name) {
    for (Distribution d : all_distributions())
        if (distribution_name(d) == name) return d;
    return std::nullopt;
}

std::vector<Distribution> all_distributions() {
    return {Distribution::gaussian, Distribution::low_rank_plus_noise, Distribution::adversarial,
            Distribution::zipf_rows};
}

void TrialConfig::validate() const {
    if (n < 1 || d < 1 || k < 1) throw InvalidArgument("trial: n, d and k must be at least 1");
    if (!(eps > 0.0)) throw InvalidArgument("trial: eps must be positive");
    if (!(c >= 1.0)) throw InvalidArgument("trial: c must be >= 1");
    if (shards < 1) throw InvalidArgument("trial: shards must be at least 1");
    if (checkpoint_every < 1) throw InvalidArgument("trial: checkpoint interval must be at least 1");
}

DenseMatrix generate_matrix(const TrialConfig& cfg) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);
    switch (cfg.distribution) {
        case Distribution::gaussian:
            return gaussian_rows(cfg, rng);
        case Distribution::low_rank_plus_noise:
            return low_rank_plus_noise(cfg, rng);
        case Distribution::adversarial:
            return gen_adversary(cfg.k, cfg.d, std::max(cfg.n, cfg.k));
        case Distribution::zipf_rows:
            return zipf_rows(cfg, rng);
    }
    throw InvalidArgument("unknown distribution");
}

TrialOutcome run_trial(const TrialConfig& cfg) {
    TrialOutcome out;
    out.config = cfg;

    auto t0 = Clock::now();
    const DenseMatrix a = generate_matrix(cfg);
    out.timings.generate_ms = millis_since(t0);

    const FdParams params = FdParams::from_error(cfg.k, cfg.eps, cfg.c, cfg.d);

    t0 = Clock::now();
    FdSketch sketch(params);
    out.prefix_identity_ok = true;
    if (cfg.shards == 1) {
        double prefix_frob = 0.0;
        for (std::size_t i = 0; i < a.rows(); ++i) {
            sketch.append(a.row(i));
            for (double v : a.row(i)) prefix_frob += v * v;
            out.delta_history.push_back(sketch.delta());
            const bool checkpoint = (i + 1) % cfg.checkpoint_every == 0 || i + 1 == a.rows();
            if (checkpoint) {
                const FdSketch snap = sketch.flushed();
                if (!frob_loss_consistent(prefix_frob, frob_sq(snap.query()), snap.delta(), params.ell,
                                          params.capacity)) {
                    out.prefix_identity_ok = false;
                }
            }
        }
    } else {
        sketch = fd_tree_sketch(a, params, cfg.shards);
        out.delta_history.push_back(sketch.delta());
    }
    out.timings.sketch_ms = millis_since(t0);

    out.delta_monotone = std::is_sorted(out.delta_history.begin(), out.delta_history.end());

    t0 = Clock::now();
    try {
        out.report = fd_error_report(a, sketch);
    } catch (const ConvergenceError& e) {
        out.inconclusive = true;
        out.note = e.what();
    }
    out.timings.oracle_ms = millis_since(t0);

    const ErrorReport& r = out.report;
    out.bounds = {
        {"eq1_upper", r.eq1_upper},         {"eq1_lower", r.eq1_lower},
        {"lemma4_identity", r.lemma4_identity}, {"lemma5", r.lemma5},
        {"lemma6", r.lemma6},               {"lemma7_low", r.sandwich_low_ok},
        {"lemma7_high", r.sandwich_high_ok}, {"lemma8_low", r.lemma8_low},
        {"lemma8_high", r.lemma8_high},
    };
    out.pass = !out.inconclusive && r.all_pass() && out.prefix_identity_ok && out.delta_monotone;
    return out;
}

SuiteSummary run_suite(const std::vector<TrialConfig>& grid) {
    SuiteSummary s;
    for (const auto& cfg : grid) {
        s.trials.push_back(run_trial(cfg));
        s.all_pass = s.all_pass && s.trials.back().pass;
    }
    return s;
}

std::vector<TrialConfig> default_grid(const std::vector<Distribution>& distributions, const std::vector<double>& cs,
                                      std::size_t shards) {
    std::vector<TrialConfig> grid;
    for (double c : cs)
        for (Distribution dist : distributions)
            for (std::size_t k : {1, 3, 5})
                for (double eps : {0.1, 0.25, 0.5})
                    for (std::uint64_t seed : {1, 2, 3}) {
                        TrialConfig cfg;
                        cfg.n = 200;
                        cfg.d = 20;
                        cfg.k = k;
                        cfg.eps = eps;
                        cfg.c = c;
                        cfg.seed = seed;
                        cfg.distribution = dist;
                        cfg.shards = shards;
                        grid.push_back(cfg);
                    }
    return grid;
}

nlohmann::json to_json(const TrialConfig& cfg) {
    return {{"n", cfg.n},         {"d", cfg.d},       {"k", cfg.k},
            {"eps", cfg.eps},     {"c", cfg.c},       {"seed", cfg.seed},
            {"distribution", std::string(distribution_name(cfg.distribution))},
            {"shards", cfg.shards}};
}

nlohmann::json to_json(const ErrorReport& r) {
    return {
        {"k", r.k},
        {"eps", r.eps},
        {"ell", r.ell},
        {"capacity", r.capacity},
        {"a_frob_sq", r.a_frob_sq},
        {"q_frob_sq", r.q_frob_sq},
        {"qk_frob_sq", r.qk_frob_sq},
        {"ak_frob_sq", r.ak_frob_sq},
        {"tail_frob_sq", r.tail_frob_sq},
        {"delta", r.delta},
        {"max_dir_gap", r.max_dir_gap},
        {"min_dir_gap", r.min_dir_gap},
        {"frob_identity_residual", r.frob_identity_residual},
        {"proj_err", r.proj_err},
        {"proj_err_ratio", r.proj_err_ratio},
        {"qk_norm_bounds", {r.qk_norm_bounds.first, r.qk_norm_bounds.second}},
        {"lemma8_applicable", r.lemma8_applicable},
        {"bounds",
         {{"eq1_upper", r.eq1_upper},
          {"eq1_lower", r.eq1_lower},
          {"lemma4_identity", r.lemma4_identity},
          {"lemma5", r.lemma5},
          {"lemma6", r.lemma6},
          {"lemma7_low", r.sandwich_low_ok},
          {"lemma7_high", r.sandwich_high_ok},
          {"lemma8_low", r.lemma8_low},
          {"lemma8_high", r.lemma8_high}}},
        {"all_pass", r.all_pass()},
    };
}

nlohmann::json to_json(const TrialOutcome& o) {
    nlohmann::json j;
    j["config"] = to_json(o.config);
    j["bounds"] = o.bounds;
    j["pass"] = o.pass;
    j["millis"] = o.timings.generate_ms + o.timings.sketch_ms + o.timings.oracle_ms;
    j["phases_ms"] = {{"generate", o.timings.generate_ms},
                      {"sketch", o.timings.sketch_ms},
                      {"oracle", o.timings.oracle_ms}};
    j["prefix_identity_ok"] = o.prefix_identity_ok;
    j["delta_monotone"] = o.delta_monotone;
    j["proj_err_ratio"] = o.report.proj_err_ratio;
    j["delta"] = o.report.delta;
    if (o.inconclusive) j["inconclusive"] = o.note;
    return j;
}

nlohmann::json to_json(const SuiteSummary& s) {
    nlohmann::json trials = nlohmann::json::array();
    for (const auto& t : s.trials) trials.push_back(to_json(t));
    return {{"trials", std::move(trials)}, {"all_pass", s.all_pass}};
}

}  // namespace fdsketch
