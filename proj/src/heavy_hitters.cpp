#include "fdsketch/heavy_hitters.hpp"

#include <algorithm>
#include <string>

#include "fdsketch/errors.hpp"
#include "fdsketch/numeric.hpp"

namespace fdsketch {

MgSummary::MgSummary(std::size_t capacity) : slots_(capacity) {
    if (capacity == 0) throw InvalidArgument("MgSummary: capacity must be at least 1");
}

void MgSummary::update(ItemId item) {
    ++processed_;
    if (auto it = index_.find(item); it != index_.end()) {
        ++slots_[it->second]->count;
        return;
    }
    if (index_.size() < slots_.size()) {
        const auto free = std::find_if(slots_.begin(), slots_.end(), [](const auto& s) { return !s.has_value(); });
        *free = Slot{item, 1};
        index_.emplace(item, static_cast<std::size_t>(free - slots_.begin()));
        return;
    }
    // All counters full: the new item and one count from every counter cancel.
    ++decrements_;
    for (auto& slot : slots_) {
        if (--slot->count == 0) {
            index_.erase(slot->label);
            slot.reset();
        }
    }
}

void MgSummary::update(std::span<const ItemId> items) {
    for (ItemId item : items) update(item);
}

std::uint64_t MgSummary::estimate(ItemId item) const {
    const auto it = index_.find(item);
    return it == index_.end() ? 0 : slots_[it->second]->count;
}

std::vector<MgSummary::Slot> MgSummary::ranked() const {
    std::vector<Slot> out;
    for (const auto& s : slots_)
        if (s) out.push_back(*s);
    std::sort(out.begin(), out.end(), [](const Slot& a, const Slot& b) {
        return a.count != b.count ? a.count > b.count : a.label < b.label;
    });
    return out;
}

MgCertificate mg_error_certificate(const MgSummary& summary, const FrequencyTable& true_freqs, std::size_t k) {
    const std::size_t ell = summary.capacity();
    if (k >= ell) {
        throw InvalidArgument("mg_error_certificate: k=" + std::to_string(k) + " must be below capacity " +
                              std::to_string(ell));
    }

    std::vector<std::pair<ItemId, std::uint64_t>> freqs(true_freqs.begin(), true_freqs.end());
    std::sort(freqs.begin(), freqs.end(), [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : a.first < b.first;
    });

    MgCertificate c;
    c.capacity = ell;
    c.k = k;
    c.decrements = summary.decrements();
    for (const auto& [item, f] : freqs) c.n += f;

    c.item_gaps_ok = true;
    for (std::size_t j = 0; j < freqs.size(); ++j) {
        const auto [item, f] = freqs[j];
        const std::uint64_t est = summary.estimate(item);
        if (est > f) {
            c.item_gaps_ok = false;
            continue;
        }
        const std::uint64_t gap = f - est;
        c.max_item_gap = std::max(c.max_item_gap, gap);
        if (gap > c.decrements) c.item_gaps_ok = false;
        if (j < k) {
            c.top_k_mass += f;
            c.top_k_estimate += est;
        }
    }
    // Items the summary holds but the histogram lacks would be overcounts.
    for (const auto& slot : summary.slots()) {
        if (slot && !true_freqs.contains(slot->label)) c.item_gaps_ok = false;
    }
    c.tail_mass = c.n - c.top_k_mass;

    const std::uint64_t spare = ell - k;
    c.decrements_vs_n_ok = c.decrements * ell <= c.n;
    c.decrements_vs_tail_ok = c.decrements * spare <= c.tail_mass;
    c.top_k_gap_ok = (c.top_k_mass - c.top_k_estimate) * spare <= k * c.tail_mass;
    return c;
}

std::size_t capacity_for_relative_error(std::size_t k, double eps) {
    if (k == 0 || !(eps > 0.0)) throw InvalidArgument("need k >= 1 and eps > 0");
    return snapped_ceil(static_cast<double>(k) + static_cast<double>(k) / eps);
}

std::size_t capacity_for_item_error(std::size_t k, double eps) {
    if (k == 0 || !(eps > 0.0)) throw InvalidArgument("need k >= 1 and eps > 0");
    return snapped_ceil(static_cast<double>(k) + 1.0 / eps);
}

}  // namespace fdsketch
