#pragma once

// Independent reference computations used only by the tests. Nothing here
// shares code with the library's prefix-sum or recursion paths.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

/// Direct evaluation of the weighted CUSUM by summing over both sides.
inline double weighted_cusum(const std::vector<double> &y, const std::vector<double> &w,
                             std::size_t s, std::size_t e, std::size_t b) {
    double sl = 0.0, yl = 0.0, sr = 0.0, yr = 0.0;
    for (std::size_t i = s; i <= b; ++i) {
        sl += w[i];
        yl += w[i] * y[i];
    }
    for (std::size_t i = b + 1; i <= e; ++i) {
        sr += w[i];
        yr += w[i] * y[i];
    }
    return std::sqrt(sl * sr / (sl + sr)) * std::abs(yl / sl - yr / sr);
}

inline double cusum(const std::vector<double> &y, std::size_t s, std::size_t e, std::size_t b) {
    return weighted_cusum(y, std::vector<double>(y.size(), 1.0), s, e, b);
}

/// Brute-force argmax (smallest b on ties) of the weighted CUSUM on [s, e].
inline std::pair<std::size_t, double> brute_argmax(const std::vector<double> &y,
                                                   const std::vector<double> &w, std::size_t s,
                                                   std::size_t e) {
    std::size_t best = s;
    double best_v = -1.0;
    for (std::size_t b = s; b < e; ++b) {
        const double v = weighted_cusum(y, w, s, e, b);
        if (v > best_v) {
            best_v = v;
            best = b;
        }
    }
    return {best, best_v};
}

/// Best 2-partition of scalars by exhaustive search over all subsets
/// (not just contiguous splits). Returns the within-cluster sum of squares.
inline double best_two_partition_sse(const std::vector<double> &v) {
    const auto n = v.size();
    double best = std::numeric_limits<double>::infinity();
    for (unsigned long mask = 1; mask + 1 < (1UL << n); ++mask) {
        double s[2] = {0, 0}, c[2] = {0, 0};
        for (std::size_t i = 0; i < n; ++i) {
            const int g = (mask >> i) & 1UL;
            s[g] += v[i];
            c[g] += 1;
        }
        double sse = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const int g = (mask >> i) & 1UL;
            const double m = s[g] / c[g];
            sse += (v[i] - m) * (v[i] - m);
        }
        best = std::min(best, sse);
    }
    return best;
}

inline double partition_sse(const std::vector<double> &v, const std::vector<int> &labels, int k) {
    std::vector<double> s(k, 0.0), c(k, 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) {
        s[labels[i]] += v[i];
        c[labels[i]] += 1;
    }
    double sse = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double m = s[labels[i]] / c[labels[i]];
        sse += (v[i] - m) * (v[i] - m);
    }
    return sse;
}

/// Windowed boundary-count difference written straight from the definition,
/// with boundaries given 1-based (boundary t between units t and t+1).
inline double window_diff_1based(std::size_t T, const std::set<std::size_t> &truth,
                                 const std::set<std::size_t> &pred, std::size_t k) {
    double total = 0.0;
    for (std::size_t i = 1; i <= T - k; ++i) {
        long a = 0, b = 0;
        for (std::size_t t = i; t <= i + k - 1; ++t) {
            a += truth.count(t);
            b += pred.count(t);
        }
        total += std::abs(a - b);
    }
    return total / static_cast<double>(T - k);
}

/// Minimum-mass over-threshold recursion written naively: every interval
/// draw is replaced by exhaustive enumeration of all sub-intervals, so the
/// narrowest over-threshold interval is found deterministically.
inline void exhaustive_not(const std::vector<double> &y, const std::vector<double> &w,
                           std::size_t s, std::size_t e, double r, std::vector<std::size_t> &out) {
    if (e <= s) return;
    double best_width = std::numeric_limits<double>::infinity();
    std::size_t best_b = 0;
    bool found = false;
    for (std::size_t a = s; a <= e; ++a) {
        for (std::size_t z = a + 1; z <= e; ++z) {
            const auto [b, v] = brute_argmax(y, w, a, z);
            if (v > r && static_cast<double>(z - a) < best_width) {
                best_width = static_cast<double>(z - a);
                best_b = b;
                found = true;
            }
        }
    }
    if (!found) return;
    out.push_back(best_b);
    exhaustive_not(y, w, s, best_b, r, out);
    exhaustive_not(y, w, best_b + 1, e, r, out);
}

} // namespace oracle
