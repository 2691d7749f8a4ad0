#pragma once

#include "cpseg/score_model.hpp"

#include <cstddef>
#include <span>

namespace cpseg {

/// Evaluation of a predicted segmentation against the truth.
///
/// wd uses absolute differences of boundary counts per window (not the 0/1
/// disagreement indicator), so it can exceed 1. ce = K_true - K_pred, so a
/// negative value means too many change points were predicted.
struct EvalReport {
    double wd = 0.0;
    long ce = 0;
    std::size_t window_k = 1;
    std::size_t n = 0;
};

/// Half the mean true segment length, at least 1.
std::size_t default_window(const Segmentation &truth);

/// Mean over the T - k windows of |true count - predicted count|, where
/// window i (1-based) counts the boundaries t with i <= t <= i + k - 1 and a
/// 0-based change point c is the boundary t = c + 1.
double window_diff(const Segmentation &truth, const Segmentation &pred, std::size_t k);

long count_error(const Segmentation &truth, const Segmentation &pred) noexcept;

EvalReport evaluate(const Segmentation &truth, const Segmentation &pred,
                    std::size_t window_k = 0);

struct LocalizationError {
    double value = 0.0;
    /// False when the counts differ; value is then the weighted Hausdorff
    /// distance between the two sets (infinite if exactly one is empty).
    bool matched = true;
};

/// Largest cumulative weight strictly between each true change point and its
/// estimate: for c_true < c_pred the units c_true+1..c_pred, and symmetrically.
/// With unit weights this is max_j |c_pred_j - c_true_j|.
LocalizationError weighted_localization_error(const Segmentation &truth, const Segmentation &pred,
                                              std::span<const double> weights);

} // namespace cpseg
