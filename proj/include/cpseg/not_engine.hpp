#pragma once

#include "cpseg/cusum.hpp"
#include "cpseg/score_model.hpp"
#include "cpseg/scorer.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

namespace cpseg {

enum class Execution { serial, parallel };

struct NotConfig {
    double threshold_r = 1.0;
    std::size_t num_intervals_M = 200;
    ContrastKind contrast = ContrastKind::standard;
    WeightScheme weight_scheme = WeightScheme::uniform();
    WidthKind width_kind = WidthKind::index_width;
    std::uint64_t rng_seed = 0;
    /// Ranges with fewer units than this are not searched. 2 means every
    /// range that still has a split point is searched.
    std::size_t min_interval_len = 2;
    Execution execution = Execution::parallel;
    bool keep_audit = true;

    static double default_threshold(std::size_t n);
    static constexpr std::size_t default_num_intervals = 200;
    void validate() const;
};

/// One drawn interval as seen by the recursion.
struct IntervalAudit {
    std::size_t range_s;
    std::size_t range_e;
    IntervalStat stat;
    bool over_threshold;
    bool selected;
};

struct SegmenterRun {
    Segmentation segmentation;
    std::vector<IntervalAudit> audit;
};

using Interval = std::pair<std::size_t, std::size_t>;

/// Draws M intervals (s_m, e_m) with s <= s_m < e_m <= e, independently and
/// uniformly over all such pairs, with replacement.
std::vector<Interval> draw_intervals(std::size_t s, std::size_t e, std::size_t M,
                                     std::mt19937_64 &rng);

/// Generator for the recursive call on [s, e]. It depends only on the run seed
/// and the range, so results do not depend on evaluation order.
std::mt19937_64 range_rng(std::uint64_t seed, std::size_t s, std::size_t e);

/// Narrowest-over-threshold recursion with a pluggable contrast and width.
///
/// On each range, M fresh intervals are drawn; those whose maximal contrast
/// strictly exceeds r survive; the survivor with the smallest width statistic
/// (earliest drawn on ties) contributes its argmax as a change point and the
/// two sides are searched again. The serial and parallel executions produce
/// bit-identical runs.
SegmenterRun not_segment(const Contrast &contrast, const NotConfig &config);

struct PresetOptions {
    std::optional<double> threshold_r; // default sqrt(log N)
    std::size_t num_intervals_M = NotConfig::default_num_intervals;
    std::uint64_t seed = 0;
    Execution execution = Execution::parallel;
    bool keep_audit = true;
    /// Rescale weights to unit mean before building the weighted or
    /// generalized statistic. Argmax and width order are unaffected; the
    /// threshold then reads on the scale of the scores, so constant weights
    /// reproduce vcp exactly.
    bool unit_mean_weights = true;
};

/// Vanilla: standard CUSUM, width e - s.
SegmenterRun vcp(const ScoreSeries &series, const PresetOptions &options = {});

/// Weighted: weighted CUSUM, width = cumulative weight unless overridden.
/// Weights follow options.unit_mean_weights.
SegmenterRun wcp(const ScoreSeries &series, const WeightScheme &scheme,
                 const PresetOptions &options = {},
                 WidthKind width = WidthKind::cumulative_weight);

/// Generalized: segment-level scores from the scorer, width = cumulative
/// weight. Scorer responses are cached for the duration of the call.
SegmenterRun gcp(const ScoreSeries &series, SegmentScorer &scorer,
                 const WeightScheme &scheme = WeightScheme::token_power(1.0),
                 const PresetOptions &options = {});

} // namespace cpseg
