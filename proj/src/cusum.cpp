#include "cpseg/cusum.hpp"

#include "cpseg/errors.hpp"

#include <cmath>
#include <string>

namespace cpseg {

const char *to_string(ContrastKind kind) noexcept {
    switch (kind) {
    case ContrastKind::standard: return "standard";
    case ContrastKind::weighted: return "weighted";
    case ContrastKind::generalized: return "generalized";
    }
    return "unknown";
}

PrefixSums::PrefixSums(std::span<const double> y, std::span<const double> w) {
    const auto n = y.size();
    const bool unit = w.empty();
    if (!unit && w.size() != n) throw LengthMismatch("scores and weights differ in length");

    double total_mass = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double wi = unit ? 1.0 : w[i];
        if (!(wi > 0.0) || !std::isfinite(wi)) {
            throw NonPositiveWeight("weight " + std::to_string(i) + " is not a finite positive number");
        }
        total_mass += wi;
        total += wi * y[i];
    }
    center_ = n > 0 ? total / total_mass : 0.0;

    mass_.assign(n + 1, 0.0);
    wsum_.assign(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double wi = unit ? 1.0 : w[i];
        mass_[i + 1] = mass_[i] + wi;
        wsum_[i + 1] = wsum_[i] + wi * (y[i] - center_);
    }
}

Contrast Contrast::standard(std::span<const double> y) {
    return Contrast(ContrastKind::standard, PrefixSums(y, {}), nullptr);
}

Contrast Contrast::weighted(std::span<const double> y, std::span<const double> w) {
    if (w.size() != y.size()) throw LengthMismatch("scores and weights differ in length");
    return Contrast(ContrastKind::weighted, PrefixSums(y, w), nullptr);
}

Contrast Contrast::generalized(std::span<const double> w, SegmentScorer &scorer) {
    // Only the masses are used; the scores come from the scorer.
    std::vector<double> zeros(w.size(), 0.0);
    return Contrast(ContrastKind::generalized, PrefixSums(zeros, w), &scorer);
}

bool Contrast::concurrent_safe() const noexcept {
    return scorer_ == nullptr || scorer_->concurrent_safe();
}

double Contrast::at(std::size_t s, std::size_t e, std::size_t b) const {
    check_triplet(size(), s, e, b);
    const double left = sums_.mass(s, b);
    const double right = sums_.mass(b + 1, e);
    const double scale = std::sqrt(left * right / (left + right));
    double diff;
    if (kind_ == ContrastKind::generalized) {
        diff = scorer_->score(s, b) - scorer_->score(b + 1, e);
    } else {
        diff = sums_.mean(s, b) - sums_.mean(b + 1, e);
    }
    return scale * std::abs(diff);
}

void check_triplet(std::size_t n, std::size_t s, std::size_t e, std::size_t b) {
    if (!(s <= b && b < e && e < n)) {
        throw InvalidTriplet("invalid triplet (s=" + std::to_string(s) + ", e=" + std::to_string(e) +
                             ", b=" + std::to_string(b) + ") for N=" + std::to_string(n));
    }
}

double cusum_at(std::span<const double> y, std::size_t s, std::size_t e, std::size_t b) {
    check_triplet(y.size(), s, e, b);
    return Contrast::standard(y.subspan(s, e - s + 1)).at(0, e - s, b - s);
}

double weighted_cusum_at(std::span<const double> y, std::span<const double> w, std::size_t s,
                         std::size_t e, std::size_t b) {
    check_triplet(y.size(), s, e, b);
    if (w.size() != y.size()) throw LengthMismatch("scores and weights differ in length");
    return Contrast::weighted(y.subspan(s, e - s + 1), w.subspan(s, e - s + 1)).at(0, e - s, b - s);
}

double generalized_cusum_at(std::span<const double> w, SegmentScorer &scorer, std::size_t s,
                            std::size_t e, std::size_t b) {
    return Contrast::generalized(w, scorer).at(s, e, b);
}

IntervalStat max_contrast(const Contrast &contrast, std::size_t s, std::size_t e, WidthKind width) {
    if (e <= s || e >= contrast.size()) {
        throw DegenerateRange("interval [" + std::to_string(s) + ", " + std::to_string(e) +
                              "] has no split point");
    }
    IntervalStat out;
    out.s = s;
    out.e = e;
    out.argmax_b = s;
    out.max_value = contrast.at(s, e, s);
    for (std::size_t b = s + 1; b < e; ++b) {
        const double v = contrast.at(s, e, b);
        if (v > out.max_value) {
            out.max_value = v;
            out.argmax_b = b;
        }
    }
    out.width_stat = width == WidthKind::index_width ? static_cast<double>(e - s)
                                                     : contrast.mass(s, e);
    return out;
}

} // namespace cpseg
