#pragma once

#include "cpseg/score_model.hpp"
#include "cpseg/scorer.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace cpseg {

struct ClusterResult {
    std::vector<int> assignments;  // class id per value
    std::vector<double> centers;   // descending; class 0 has the largest center
    std::vector<std::size_t> sizes;
    int iterations = 0;
    bool converged = false;

    std::size_t num_nonempty() const;
};

inline constexpr int kMaxLloydIterations = 100;

/// Lloyd's algorithm on scalars with deterministic quantile-spread seeds
/// (min and max when k = 2). Ties in assignment go to the class with the
/// larger center. Centers of empty classes keep their seed value and are
/// reported with size 0. For k = 2 the result is then compared with the best
/// split of the sorted values, so the returned partition is globally optimal.
ClusterResult cluster_1d(std::span<const double> values, int k);

/// One score per segment: the scorer's value on the segment when given,
/// otherwise the weighted mean of the unit scores inside it.
std::vector<double> segment_scores(const ScoreSeries &series, const Segmentation &segmentation,
                                   std::span<const double> weights,
                                   SegmentScorer *scorer = nullptr);

/// Segment scores clustered into k classes; class 0 is the most LLM-like.
/// A document with a single segment gets one label and single_class = true.
LabeledDocument label_document(const ScoreSeries &series, const Segmentation &segmentation,
                               std::span<const double> weights, int k = 2,
                               SegmentScorer *scorer = nullptr);

/// Display name for a class id: k = 2 gives LLM/human, k = 3 LLM/mixed/human.
std::string class_name(int label, int k);

} // namespace cpseg
