#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace fdsketch {

using ItemId = std::uint64_t;
using FrequencyTable = std::unordered_map<ItemId, std::uint64_t>;

/// Misra-Gries frequent-items summary with `capacity` labeled counters.
///
/// A counter that reaches zero frees its slot immediately; a new label always
/// takes the lowest-indexed free slot.
class MgSummary {
public:
    struct Slot {
        ItemId label;
        std::uint64_t count;
    };

    explicit MgSummary(std::size_t capacity);

    void update(ItemId item);
    void update(std::span<const ItemId> items);

    // Estimated frequency; never exceeds the true one and undershoots by at most decrements().
    std::uint64_t estimate(ItemId item) const;

    std::size_t capacity() const noexcept { return slots_.size(); }
    std::size_t occupied() const noexcept { return index_.size(); }
    std::uint64_t processed() const noexcept { return processed_; }
    std::uint64_t decrements() const noexcept { return decrements_; }

    const std::vector<std::optional<Slot>>& slots() const noexcept { return slots_; }
    // Occupied slots sorted by decreasing count, ties by label.
    std::vector<Slot> ranked() const;

private:
    std::vector<std::optional<Slot>> slots_;
    std::unordered_map<ItemId, std::size_t> index_;
    std::uint64_t processed_ = 0;
    std::uint64_t decrements_ = 0;
};

struct MgCertificate {
    std::size_t capacity = 0;
    std::size_t k = 0;
    std::uint64_t n = 0;
    std::uint64_t decrements = 0;  // r
    std::uint64_t tail_mass = 0;   // R_k = n - F_k
    std::uint64_t top_k_mass = 0;  // F_k
    std::uint64_t top_k_estimate = 0;  // estimated mass of the true top-k items
    std::uint64_t max_item_gap = 0;
    bool item_gaps_ok = false;       // 0 <= f_j - est_j <= r for every item
    bool decrements_vs_n_ok = false;  // r <= n / capacity
    bool decrements_vs_tail_ok = false;  // r <= R_k / (capacity - k)
    bool top_k_gap_ok = false;       // F_k - est(F_k) <= k R_k / (capacity - k)

    bool all_ok() const noexcept {
        return item_gaps_ok && decrements_vs_n_ok && decrements_vs_tail_ok && top_k_gap_ok;
    }
};

// Checks the summary against the exact histogram of the processed stream.
// Throws InvalidArgument when k >= capacity.
MgCertificate mg_error_certificate(const MgSummary& summary, const FrequencyTable& true_freqs, std::size_t k);

// ceil(k + k/eps), snapping k/eps to an integer when it is one up to rounding.
std::size_t capacity_for_relative_error(std::size_t k, double eps);
// ceil(k + 1/eps), the per-item variant.
std::size_t capacity_for_item_error(std::size_t k, double eps);

}  // namespace fdsketch
