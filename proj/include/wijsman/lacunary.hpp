// Lacunary schedules: increasing indices k_r with k_0 = 0, gaps
// h_r = k_r - k_{r-1} and blocks I_r = (k_{r-1}, k_r].
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wijsman {

class LacunarySchedule {
  public:
    explicit LacunarySchedule(std::vector<std::uint64_t> indices) : k_(std::move(indices)) {
        if (k_.size() < 2 || k_.front() != 0)
            throw std::invalid_argument("LacunarySchedule: need k_0 = 0 and at least one block");
        for (std::size_t i = 1; i < k_.size(); ++i)
            if (k_[i] <= k_[i - 1])
                throw std::invalid_argument("LacunarySchedule: indices must be strictly increasing");
    }

    /// k_r = 2^r for r = 1..R (the canonical geometric schedule).
    static LacunarySchedule powers_of_two(unsigned R) {
        if (R < 1 || R > 62) throw std::invalid_argument("powers_of_two: R in [1,62]");
        std::vector<std::uint64_t> k{0};
        for (unsigned r = 1; r <= R; ++r) k.push_back(std::uint64_t{1} << r);
        return LacunarySchedule(std::move(k));
    }

    /// k_r = r(r+1)/2, gaps h_r = r.
    static LacunarySchedule triangular(unsigned R) {
        std::vector<std::uint64_t> k{0};
        for (std::uint64_t r = 1; r <= R; ++r) k.push_back(r * (r + 1) / 2);
        return LacunarySchedule(std::move(k));
    }

    std::size_t block_count() const { return k_.size() - 1; }
    std::uint64_t index(std::size_t r) const { return k_.at(r); }
    std::uint64_t horizon() const { return k_.back(); }

    /// h_r, r in 1..block_count().
    std::uint64_t gap(std::size_t r) const { return k_.at(r) - k_.at(r - 1); }
    /// I_r = (k_{r-1}, k_r] as the inclusive integer range [lo, hi].
    std::pair<std::uint64_t, std::uint64_t> block(std::size_t r) const {
        return {k_.at(r - 1) + 1, k_.at(r)};
    }

    /// Number of complete blocks whose right endpoint is <= n.
    std::size_t complete_blocks(std::uint64_t n) const {
        std::size_t r = 0;
        while (r + 1 < k_.size() && k_[r + 1] <= n) ++r;
        return r;
    }

    /// Finite proxy for h_r -> infinity: the final gap dominates a tail
    /// majority of gaps and exceeds `bound`.
    bool gaps_diverge(std::uint64_t bound) const {
        const std::size_t R = block_count();
        const std::uint64_t hR = gap(R);
        if (hR < bound) return false;
        std::size_t dominated = 0;
        const std::size_t tail_begin = R / 2 + 1;
        for (std::size_t r = tail_begin; r <= R; ++r)
            if (gap(r) <= hR) ++dominated;
        return 2 * dominated >= (R - tail_begin + 1);
    }

    const std::vector<std::uint64_t>& indices() const { return k_; }

  private:
    std::vector<std::uint64_t> k_;
};

}  // namespace wijsman
