#include "cpseg/not_engine.hpp"

#include "cpseg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

namespace cpseg {

double NotConfig::default_threshold(std::size_t n) {
    return std::sqrt(std::log(static_cast<double>(n)));
}

void NotConfig::validate() const {
    if (!(threshold_r > 0.0) || !std::isfinite(threshold_r)) {
        throw InvalidArgument("threshold r must be a finite positive number");
    }
    if (num_intervals_M < 1) throw InvalidArgument("number of intervals M must be at least 1");
    if (min_interval_len < 2) throw InvalidArgument("min_interval_len must be at least 2");
}

std::vector<Interval> draw_intervals(std::size_t s, std::size_t e, std::size_t M,
                                     std::mt19937_64 &rng) {
    if (e <= s) {
        throw DegenerateRange("cannot draw intervals from [" + std::to_string(s) + ", " +
                              std::to_string(e) + "]");
    }
    // Two distinct endpoints drawn uniformly and sorted give a uniform
    // unordered pair.
    std::uniform_int_distribution<std::size_t> point(s, e);
    std::vector<Interval> out;
    out.reserve(M);
    for (std::size_t m = 0; m < M; ++m) {
        std::size_t a = point(rng);
        std::size_t b = point(rng);
        while (a == b) b = point(rng);
        out.emplace_back(std::min(a, b), std::max(a, b));
    }
    return out;
}

std::mt19937_64 range_rng(std::uint64_t seed, std::size_t s, std::size_t e) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(e),
                      static_cast<std::uint32_t>(static_cast<std::uint64_t>(s) >> 32),
                      static_cast<std::uint32_t>(static_cast<std::uint64_t>(e) >> 32)};
    return std::mt19937_64(seq);
}

namespace {

std::vector<IntervalStat> scan_intervals(const Contrast &contrast,
                                         const std::vector<Interval> &intervals, WidthKind width,
                                         bool parallel) {
    std::vector<IntervalStat> stats(intervals.size());
    const auto count = static_cast<long>(intervals.size());
    if (!parallel) {
        for (long m = 0; m < count; ++m) {
            stats[m] = max_contrast(contrast, intervals[m].first, intervals[m].second, width);
        }
        return stats;
    }

    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 8)
    for (long m = 0; m < count; ++m) {
        try {
            stats[m] = max_contrast(contrast, intervals[m].first, intervals[m].second, width);
        } catch (...) {
#pragma omp critical(cpseg_scan_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return stats;
}

} // namespace

SegmenterRun not_segment(const Contrast &contrast, const NotConfig &config) {
    config.validate();
    const auto n = contrast.size();
    if (n < 2) throw InvalidArgument("series must have at least 2 units");

    const bool parallel = config.execution == Execution::parallel && contrast.concurrent_safe();

    std::vector<std::size_t> found;
    std::vector<IntervalAudit> audit;
    std::vector<Interval> pending{{0, n - 1}};

    // Depth-first, left range before right, mirroring the recursive form.
    while (!pending.empty()) {
        const auto [s, e] = pending.back();
        pending.pop_back();
        if (e - s + 1 < config.min_interval_len) continue;

        auto rng = range_rng(config.rng_seed, s, e);
        const auto intervals = draw_intervals(s, e, config.num_intervals_M, rng);
        const auto stats = scan_intervals(contrast, intervals, config.width_kind, parallel);

        std::optional<std::size_t> best;
        for (std::size_t m = 0; m < stats.size(); ++m) {
            if (stats[m].max_value > config.threshold_r &&
                (!best || stats[m].width_stat < stats[*best].width_stat)) {
                best = m;
            }
        }
        if (config.keep_audit) {
            for (std::size_t m = 0; m < stats.size(); ++m) {
                audit.push_back({s, e, stats[m], stats[m].max_value > config.threshold_r,
                                 best && *best == m});
            }
        }
        if (!best) continue;

        const auto split = stats[*best].argmax_b;
        found.push_back(split);
        pending.emplace_back(split + 1, e);
        pending.emplace_back(s, split);
    }

    std::sort(found.begin(), found.end());
    return {Segmentation(std::move(found), n), std::move(audit)};
}

namespace {

NotConfig preset_config(std::size_t n, const PresetOptions &options) {
    NotConfig config;
    config.threshold_r = options.threshold_r.value_or(NotConfig::default_threshold(n));
    config.num_intervals_M = options.num_intervals_M;
    config.rng_seed = options.seed;
    config.execution = options.execution;
    config.keep_audit = options.keep_audit;
    return config;
}

std::vector<double> preset_weights(const ScoreSeries &series, const WeightScheme &scheme,
                                   const PresetOptions &options) {
    auto weights = resolve_weights(series, scheme);
    if (options.unit_mean_weights) {
        double total = 0.0;
        for (double w : weights) total += w;
        const double mean = total / static_cast<double>(weights.size());
        for (double &w : weights) w /= mean;
    }
    return weights;
}

} // namespace

SegmenterRun vcp(const ScoreSeries &series, const PresetOptions &options) {
    auto config = preset_config(series.size(), options);
    config.contrast = ContrastKind::standard;
    config.width_kind = WidthKind::index_width;
    return not_segment(Contrast::standard(series.scores()), config);
}

SegmenterRun wcp(const ScoreSeries &series, const WeightScheme &scheme,
                 const PresetOptions &options, WidthKind width) {
    auto config = preset_config(series.size(), options);
    config.contrast = ContrastKind::weighted;
    config.weight_scheme = scheme;
    config.width_kind = width;
    const auto weights = preset_weights(series, scheme, options);
    return not_segment(Contrast::weighted(series.scores(), weights), config);
}

SegmenterRun gcp(const ScoreSeries &series, SegmentScorer &scorer, const WeightScheme &scheme,
                 const PresetOptions &options) {
    auto config = preset_config(series.size(), options);
    config.contrast = ContrastKind::generalized;
    config.weight_scheme = scheme;
    config.width_kind = WidthKind::cumulative_weight;
    const auto weights = preset_weights(series, scheme, options);
    CachingScorer cache(scorer);
    return not_segment(Contrast::generalized(weights, cache), config);
}

} // namespace cpseg
