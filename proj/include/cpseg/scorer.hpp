#pragma once

#include <cstddef>
#include <map>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

namespace cpseg {

/// Answers phi on the concatenation of units [first, last] (inclusive).
class SegmentScorer {
public:
    virtual ~SegmentScorer() = default;
    virtual double score(std::size_t first, std::size_t last) = 0;
    /// True when score() may be called from several threads at once.
    virtual bool concurrent_safe() const noexcept { return false; }
};

/// Segment score as the weighted mean of per-unit scores over the range,
/// summed directly (no prefix sums). With token-count weights this is the
/// segment-level statistic of a detector whose per-token terms do not depend
/// on text outside their own sentence.
class AdditiveScorer final : public SegmentScorer {
public:
    AdditiveScorer(std::span<const double> scores, std::span<const double> weights);

    double score(std::size_t first, std::size_t last) override;
    bool concurrent_safe() const noexcept override { return true; }

private:
    std::vector<double> scores_;
    std::vector<double> weights_;
};

/// Memoizes another scorer by (first, last). Calls into the wrapped scorer
/// are serialized unless it declares itself concurrent-safe.
class CachingScorer final : public SegmentScorer {
public:
    explicit CachingScorer(SegmentScorer &inner) : inner_(inner) {}

    double score(std::size_t first, std::size_t last) override;
    bool concurrent_safe() const noexcept override { return true; }

    std::size_t cache_size() const;
    std::size_t inner_calls() const noexcept { return inner_calls_; }
    void clear();

private:
    SegmentScorer &inner_;
    mutable std::mutex mutex_;
    std::map<std::pair<std::size_t, std::size_t>, double> cache_;
    std::size_t inner_calls_ = 0;
};

} // namespace cpseg
