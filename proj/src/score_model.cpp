#include "cpseg/score_model.hpp"

#include "cpseg/errors.hpp"

#include <cmath>
#include <string>

namespace cpseg {

ScoreSeries::ScoreSeries(std::vector<SentenceRecord> records) : records_(std::move(records)) {
    if (records_.size() < 2) {
        throw InvalidArgument("score series needs at least 2 records, got " +
                              std::to_string(records_.size()));
    }
    scores_.reserve(records_.size());
    for (std::size_t i = 0; i < records_.size(); ++i) {
        const auto &r = records_[i];
        if (r.index != i) {
            throw InvalidArgument("record " + std::to_string(i) + " has index " +
                                  std::to_string(r.index) + "; indices must be contiguous from 0");
        }
        if (!std::isfinite(r.score)) {
            throw InvalidArgument("record " + std::to_string(i) + " has a non-finite score");
        }
        if (r.token_count < 1) {
            throw InvalidArgument("record " + std::to_string(i) + " has token_count < 1");
        }
        if (r.var_estimate && !(*r.var_estimate > 0.0 && std::isfinite(*r.var_estimate))) {
            throw InvalidArgument("record " + std::to_string(i) +
                                  " has a non-positive variance estimate");
        }
        scores_.push_back(r.score);
    }
}

ScoreSeries ScoreSeries::from_scores(std::span<const double> scores) {
    std::vector<SentenceRecord> records(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        records[i].index = i;
        records[i].score = scores[i];
    }
    return ScoreSeries(std::move(records));
}

ScoreSeries ScoreSeries::from_scores(std::span<const double> scores,
                                     std::span<const long> token_counts) {
    if (scores.size() != token_counts.size()) {
        throw LengthMismatch("scores and token counts differ in length");
    }
    std::vector<SentenceRecord> records(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        records[i].index = i;
        records[i].score = scores[i];
        records[i].token_count = token_counts[i];
    }
    return ScoreSeries(std::move(records));
}

bool ScoreSeries::has_all_variances() const noexcept {
    for (const auto &r : records_) {
        if (!r.var_estimate) return false;
    }
    return true;
}

const char *to_string(WeightKind kind) noexcept {
    switch (kind) {
    case WeightKind::uniform: return "uniform";
    case WeightKind::inverse_variance: return "invvar";
    case WeightKind::token_power: return "tokpow";
    }
    return "unknown";
}

std::vector<double> resolve_weights(const ScoreSeries &series, const WeightScheme &scheme) {
    const auto n = series.size();
    std::vector<double> w(n, 1.0);
    switch (scheme.kind) {
    case WeightKind::uniform:
        break;
    case WeightKind::inverse_variance:
        for (std::size_t i = 0; i < n; ++i) {
            const auto &v = series[i].var_estimate;
            if (!v) {
                throw MissingVariance("inverse-variance weights requested but record " +
                                      std::to_string(i) + " has no variance estimate");
            }
            w[i] = 1.0 / *v;
        }
        break;
    case WeightKind::token_power:
        if (!(scheme.kappa > 0.0) || !std::isfinite(scheme.kappa)) {
            throw InvalidArgument("token_power exponent must be positive");
        }
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = std::pow(static_cast<double>(series[i].token_count), scheme.kappa);
        }
        break;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!(w[i] > 0.0) || !std::isfinite(w[i])) {
            throw NonPositiveWeight("weight " + std::to_string(i) + " is not a finite positive number");
        }
    }
    return w;
}

Segmentation::Segmentation(std::vector<std::size_t> change_points, std::size_t n)
    : change_points_(std::move(change_points)), n_(n) {
    if (n_ < 1) throw InvalidArgument("segmentation length must be positive");
    for (std::size_t j = 0; j < change_points_.size(); ++j) {
        if (change_points_[j] + 1 >= n_) {
            throw InvalidArgument("change point " + std::to_string(change_points_[j]) +
                                  " out of range for N=" + std::to_string(n_));
        }
        if (j > 0 && change_points_[j] <= change_points_[j - 1]) {
            throw InvalidArgument("change points must be strictly increasing");
        }
    }
}

std::vector<Segmentation::Segment> Segmentation::segments() const {
    std::vector<Segment> out;
    out.reserve(num_segments());
    std::size_t first = 0;
    for (auto cp : change_points_) {
        out.push_back({first, cp});
        first = cp + 1;
    }
    out.push_back({first, n_ - 1});
    return out;
}

} // namespace cpseg
