#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cpseg {

/// One scored unit (usually a sentence) of a document.
struct SentenceRecord {
    std::size_t index = 0;
    double score = 0.0;
    long token_count = 1;
    std::optional<double> var_estimate;
    std::optional<std::string> text;

    bool operator==(const SentenceRecord &) const = default;
};

/// Ordered, validated sequence of sentence scores. Immutable once built.
///
/// Construction enforces N >= 2, contiguous 0-based indices, finite scores,
/// token_count >= 1 and strictly positive variance estimates.
class ScoreSeries {
public:
    explicit ScoreSeries(std::vector<SentenceRecord> records);

    /// Convenience for synthetic or test data: indices assigned, token_count = 1.
    static ScoreSeries from_scores(std::span<const double> scores);
    static ScoreSeries from_scores(std::span<const double> scores,
                                   std::span<const long> token_counts);

    std::size_t size() const noexcept { return records_.size(); }
    const std::vector<SentenceRecord> &records() const noexcept { return records_; }
    const SentenceRecord &operator[](std::size_t i) const { return records_[i]; }
    std::span<const double> scores() const noexcept { return scores_; }
    bool has_all_variances() const noexcept;

    bool operator==(const ScoreSeries &other) const { return records_ == other.records_; }

private:
    std::vector<SentenceRecord> records_;
    std::vector<double> scores_;
};

enum class WeightKind { uniform, inverse_variance, token_power };

struct WeightScheme {
    WeightKind kind = WeightKind::uniform;
    double kappa = 1.0; // only used by token_power

    static WeightScheme uniform() { return {WeightKind::uniform, 1.0}; }
    static WeightScheme inverse_variance() { return {WeightKind::inverse_variance, 1.0}; }
    static WeightScheme token_power(double kappa) { return {WeightKind::token_power, kappa}; }
};

const char *to_string(WeightKind kind) noexcept;

/// Per-record weights for the weighted statistics.
///
/// uniform gives all ones, inverse_variance gives 1 / var_estimate and
/// token_power gives token_count^kappa. Throws MissingVariance when inverse
/// variance is requested and any record lacks an estimate, NonPositiveWeight
/// when any resulting weight is not a finite positive number.
std::vector<double> resolve_weights(const ScoreSeries &series, const WeightScheme &scheme);

/// Estimated change points. Each entry t means "boundary after unit t"
/// (0-based), so valid values are 0..N-2 and they must strictly increase.
class Segmentation {
public:
    Segmentation(std::vector<std::size_t> change_points, std::size_t n);

    const std::vector<std::size_t> &change_points() const noexcept { return change_points_; }
    std::size_t length() const noexcept { return n_; }
    std::size_t num_change_points() const noexcept { return change_points_.size(); }
    std::size_t num_segments() const noexcept { return change_points_.size() + 1; }

    struct Segment {
        std::size_t first;
        std::size_t last; // inclusive
    };
    std::vector<Segment> segments() const;

    bool operator==(const Segmentation &) const = default;

private:
    std::vector<std::size_t> change_points_;
    std::size_t n_;
};

struct LabeledDocument {
    Segmentation segmentation;
    std::vector<double> segment_scores;
    std::vector<int> labels;        // class 0 has the largest mean ("LLM")
    std::vector<double> class_means; // descending
    bool single_class = false;
};

} // namespace cpseg
