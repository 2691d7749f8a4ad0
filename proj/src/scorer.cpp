#include "cpseg/scorer.hpp"

#include "cpseg/errors.hpp"

#include <string>

namespace cpseg {

AdditiveScorer::AdditiveScorer(std::span<const double> scores, std::span<const double> weights)
    : scores_(scores.begin(), scores.end()), weights_(weights.begin(), weights.end()) {
    if (scores_.size() != weights_.size()) {
        throw LengthMismatch("additive scorer: scores and weights differ in length");
    }
}

double AdditiveScorer::score(std::size_t first, std::size_t last) {
    if (first > last || last >= scores_.size()) {
        throw ScorerFailure("additive scorer: range [" + std::to_string(first) + ", " +
                            std::to_string(last) + "] out of bounds");
    }
    double mass = 0.0;
    double total = 0.0;
    for (std::size_t i = first; i <= last; ++i) {
        mass += weights_[i];
        total += weights_[i] * scores_[i];
    }
    return total / mass;
}

double CachingScorer::score(std::size_t first, std::size_t last) {
    const auto key = std::make_pair(first, last);
    std::unique_lock lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;

    double value;
    if (inner_.concurrent_safe()) {
        lock.unlock();
        value = inner_.score(first, last);
        lock.lock();
    } else {
        value = inner_.score(first, last);
    }
    ++inner_calls_;
    cache_.emplace(key, value);
    return value;
}

std::size_t CachingScorer::cache_size() const {
    std::lock_guard lock(mutex_);
    return cache_.size();
}

void CachingScorer::clear() {
    std::lock_guard lock(mutex_);
    cache_.clear();
}

} // namespace cpseg
