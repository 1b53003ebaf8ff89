#pragma once
//
// Seeded trials that stream a generated matrix through the sketch and certify
// every bound against an exact SVD of the full matrix.
//

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fdsketch/dense_matrix.hpp"
#include "fdsketch/error_report.hpp"
#include "json.hpp"

namespace fdsketch {

enum class Distribution { gaussian, low_rank_plus_noise, adversarial, zipf_rows };

std::string_view distribution_name(Distribution d);
std::optional<Distribution> parse_distribution(std::string_view name);

struct TrialConfig {
    std::size_t n = 200;
    std::size_t d = 20;
    std::size_t k = 3;
    double eps = 0.25;
    double c = 1.0;
    std::uint64_t seed = 7;
    Distribution distribution = Distribution::gaussian;
    // Contiguous shards sketched independently and tree-merged; 1 = single stream.
    std::size_t shards = 1;
    // Prefix checks of the loss identity run every this many rows.
    std::size_t checkpoint_every = 10;

    // Throws InvalidArgument unless n, d, k >= 1, eps > 0, c >= 1, shards >= 1.
    void validate() const;
};

// Deterministic for a given config: same seed, same matrix.
DenseMatrix generate_matrix(const TrialConfig& cfg);

struct TrialTimings {
    double generate_ms = 0.0;
    double sketch_ms = 0.0;
    double oracle_ms = 0.0;
};

struct TrialOutcome {
    TrialConfig config;
    ErrorReport report;
    // Bound name -> verdict. Keys: eq1_upper, eq1_lower, lemma4_identity,
    // lemma5, lemma6, lemma7_low, lemma7_high, lemma8_low, lemma8_high.
    std::map<std::string, bool> bounds;
    bool prefix_identity_ok = false;  // loss identity at every checkpoint
    bool delta_monotone = false;      // Delta never decreased across checkpoints
    std::vector<double> delta_history;
    bool inconclusive = false;        // oracle failed; never counts as a pass
    std::string note;
    bool pass = false;
    TrialTimings timings;
};

TrialOutcome run_trial(const TrialConfig& cfg);

struct SuiteSummary {
    std::vector<TrialOutcome> trials;
    bool all_pass = true;
};

SuiteSummary run_suite(const std::vector<TrialConfig>& grid);

/// k in {1,3,5} x eps in {0.1,0.25,0.5} x `distributions` x seeds {1,2,3},
/// n = 200, d = 20, for each batching factor in `cs`.
std::vector<TrialConfig> default_grid(const std::vector<Distribution>& distributions,
                                      const std::vector<double>& cs = {1.0}, std::size_t shards = 1);
std::vector<Distribution> all_distributions();

nlohmann::json to_json(const TrialConfig& cfg);
nlohmann::json to_json(const ErrorReport& report);
nlohmann::json to_json(const TrialOutcome& outcome);
// {trials: [{config, bounds, pass, millis}], all_pass}
nlohmann::json to_json(const SuiteSummary& summary);

}  // namespace fdsketch
