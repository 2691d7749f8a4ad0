#include "cpseg/metrics.hpp"

#include "cpseg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <vector>

namespace cpseg {

std::size_t default_window(const Segmentation &truth) {
    const double segs = static_cast<double>(truth.num_change_points() + 1);
    const auto k = std::lround(static_cast<double>(truth.length()) / (2.0 * segs));
    return static_cast<std::size_t>(std::max(1L, k));
}

double window_diff(const Segmentation &truth, const Segmentation &pred, std::size_t k) {
    const auto t = truth.length();
    if (pred.length() != t) {
        throw LengthMismatch("truth has N=" + std::to_string(t) + " but prediction has N=" +
                             std::to_string(pred.length()));
    }
    if (k < 1 || k >= t) {
        throw InvalidWindow("window k=" + std::to_string(k) + " must lie in [1, " +
                            std::to_string(t - 1) + "]");
    }
    // indicator[t] = 1 when boundary t (1-based) is present.
    auto indicator = [t](const Segmentation &seg) {
        std::vector<long> ind(t + 1, 0);
        for (auto c : seg.change_points()) ind[c + 1] = 1;
        return ind;
    };
    const auto a = indicator(truth);
    const auto b = indicator(pred);

    long total = 0;
    for (std::size_t i = 1; i <= t - k; ++i) {
        long ca = 0;
        long cb = 0;
        for (std::size_t j = i; j <= i + k - 1; ++j) {
            ca += a[j];
            cb += b[j];
        }
        total += std::labs(ca - cb);
    }
    return static_cast<double>(total) / static_cast<double>(t - k);
}

long count_error(const Segmentation &truth, const Segmentation &pred) noexcept {
    return static_cast<long>(truth.num_change_points()) - static_cast<long>(pred.num_change_points());
}

EvalReport evaluate(const Segmentation &truth, const Segmentation &pred, std::size_t window_k) {
    EvalReport report;
    report.n = truth.length();
    report.window_k = window_k == 0 ? default_window(truth) : window_k;
    report.wd = window_diff(truth, pred, report.window_k);
    report.ce = count_error(truth, pred);
    return report;
}

namespace {

// Cumulative weight of units (min(a,b), max(a,b)] using prefix sums.
double gap_mass(const std::vector<double> &prefix, std::size_t a, std::size_t b) {
    const auto lo = std::min(a, b);
    const auto hi = std::max(a, b);
    return prefix[hi + 1] - prefix[lo + 1];
}

} // namespace

LocalizationError weighted_localization_error(const Segmentation &truth, const Segmentation &pred,
                                              std::span<const double> weights) {
    const auto n = truth.length();
    if (pred.length() != n || weights.size() != n) {
        throw LengthMismatch("truth, prediction and weights must share the same length");
    }
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + weights[i];

    const auto &tc = truth.change_points();
    const auto &pc = pred.change_points();
    LocalizationError out;
    if (tc.size() == pc.size()) {
        for (std::size_t j = 0; j < tc.size(); ++j) {
            out.value = std::max(out.value, gap_mass(prefix, tc[j], pc[j]));
        }
        return out;
    }

    out.matched = false;
    if (tc.empty() || pc.empty()) {
        out.value = std::numeric_limits<double>::infinity();
        return out;
    }
    auto directed = [&](const std::vector<std::size_t> &from, const std::vector<std::size_t> &to) {
        double worst = 0.0;
        for (auto a : from) {
            double best = std::numeric_limits<double>::infinity();
            for (auto b : to) best = std::min(best, gap_mass(prefix, a, b));
            worst = std::max(worst, best);
        }
        return worst;
    };
    out.value = std::max(directed(tc, pc), directed(pc, tc));
    return out;
}

} // namespace cpseg
