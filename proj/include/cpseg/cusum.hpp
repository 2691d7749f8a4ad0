#pragma once

#include "cpseg/scorer.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace cpseg {

enum class ContrastKind { standard, weighted, generalized };
enum class WidthKind { index_width, cumulative_weight };

const char *to_string(ContrastKind kind) noexcept;

/// Best split of one candidate interval [s, e] (inclusive endpoints).
struct IntervalStat {
    std::size_t s = 0;
    std::size_t e = 0;
    double max_value = 0.0;
    std::size_t argmax_b = 0;
    double width_stat = 0.0;
};

/// Cumulative masses and weighted sums over a score vector.
///
/// The weighted sums are taken over scores centered at their global weighted
/// mean, which keeps segment-mean differences accurate for series with a large
/// common offset.
class PrefixSums {
public:
    PrefixSums() = default;
    /// Empty weights mean unit weights.
    PrefixSums(std::span<const double> y, std::span<const double> w);

    std::size_t size() const noexcept { return mass_.empty() ? 0 : mass_.size() - 1; }
    double mass(std::size_t first, std::size_t last) const noexcept {
        return mass_[last + 1] - mass_[first];
    }
    /// Weighted mean of y over [first, last].
    double mean(std::size_t first, std::size_t last) const noexcept {
        return (wsum_[last + 1] - wsum_[first]) / mass(first, last) + center_;
    }

private:
    std::vector<double> mass_;
    std::vector<double> wsum_;
    double center_ = 0.0;
};

/// A contrast statistic A_{s,e}(b) bound to one series, evaluated in O(1)
/// per split point (plus scorer queries for the generalized kind).
class Contrast {
public:
    static Contrast standard(std::span<const double> y);
    static Contrast weighted(std::span<const double> y, std::span<const double> w);
    /// The scorer must outlive the Contrast.
    static Contrast generalized(std::span<const double> w, SegmentScorer &scorer);

    ContrastKind kind() const noexcept { return kind_; }
    std::size_t size() const noexcept { return sums_.size(); }

    /// Statistic at split b of [s, e]; requires s <= b < e < size().
    double at(std::size_t s, std::size_t e, std::size_t b) const;
    /// Count (standard) or cumulative weight (weighted, generalized) of [first, last].
    double mass(std::size_t first, std::size_t last) const noexcept {
        return sums_.mass(first, last);
    }
    bool concurrent_safe() const noexcept;

private:
    Contrast(ContrastKind kind, PrefixSums sums, SegmentScorer *scorer)
        : kind_(kind), sums_(std::move(sums)), scorer_(scorer) {}

    ContrastKind kind_;
    PrefixSums sums_;
    SegmentScorer *scorer_ = nullptr;
};

/// Throws InvalidTriplet unless s <= b < e < n.
void check_triplet(std::size_t n, std::size_t s, std::size_t e, std::size_t b);

/// Standard CUSUM: sqrt(n_L n_R / n) |mean_L - mean_R|.
double cusum_at(std::span<const double> y, std::size_t s, std::size_t e, std::size_t b);

/// Weighted CUSUM with cumulative weights and weighted means.
double weighted_cusum_at(std::span<const double> y, std::span<const double> w, std::size_t s,
                         std::size_t e, std::size_t b);

/// Generalized CUSUM: weighted masses with segment-level scores from the scorer.
double generalized_cusum_at(std::span<const double> w, SegmentScorer &scorer, std::size_t s,
                            std::size_t e, std::size_t b);

/// Maximizes the contrast over b in [s, e-1]; ties go to the smallest b.
/// width_stat is e - s (index_width) or the mass of [s, e] (cumulative_weight).
IntervalStat max_contrast(const Contrast &contrast, std::size_t s, std::size_t e,
                          WidthKind width = WidthKind::index_width);

} // namespace cpseg
