#include "cpseg/labeling.hpp"

#include "cpseg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>

namespace cpseg {

std::size_t ClusterResult::num_nonempty() const {
    return static_cast<std::size_t>(
        std::count_if(sizes.begin(), sizes.end(), [](std::size_t s) { return s > 0; }));
}

namespace {

// Index of the nearest center; centers are descending so ties favor the larger one.
int nearest(const std::vector<double> &centers, double v) {
    int best = 0;
    double best_d = std::abs(v - centers[0]);
    for (int c = 1; c < static_cast<int>(centers.size()); ++c) {
        const double d = std::abs(v - centers[c]);
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return best;
}

double within_sse(std::span<const double> values, const std::vector<int> &assignments,
                  const std::vector<double> &centers) {
    double sse = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double d = values[i] - centers[assignments[i]];
        sse += d * d;
    }
    return sse;
}

// Lloyd's iterations stop at a local optimum. With two classes the global
// optimum is a split of the sorted values, so every split is scored with
// running sums and the best one replaces the Lloyd partition if it is
// strictly better. `sorted` is descending.
void refine_with_best_split(std::span<const double> values, const std::vector<double> &sorted,
                            ClusterResult &out) {
    const auto n = sorted.size();
    // Centering keeps the running-sum SSE accurate under large offsets.
    double mean = 0.0;
    for (double v : sorted) mean += v;
    mean /= static_cast<double>(n);
    double total = 0.0, total_sq = 0.0;
    for (double v : sorted) {
        total += v - mean;
        total_sq += (v - mean) * (v - mean);
    }
    double best_sse = within_sse(values, out.assignments, out.centers);
    std::optional<std::size_t> best_cut;
    double high_sum = 0.0;
    for (std::size_t cut = 1; cut < n; ++cut) {
        high_sum += sorted[cut - 1] - mean;
        if (sorted[cut - 1] == sorted[cut]) continue;
        const double nh = static_cast<double>(cut), nl = static_cast<double>(n - cut);
        const double low_sum = total - high_sum;
        const double sse = total_sq - high_sum * high_sum / nh - low_sum * low_sum / nl;
        if (sse < best_sse * (1.0 - 1e-12) - 1e-300) {
            best_sse = sse;
            best_cut = cut;
        }
    }
    if (!best_cut) return;

    const double threshold = sorted[*best_cut - 1];
    double sums[2] = {0.0, 0.0};
    std::size_t counts[2] = {0, 0};
    for (std::size_t i = 0; i < values.size(); ++i) {
        const int c = values[i] >= threshold ? 0 : 1;
        out.assignments[i] = c;
        sums[c] += values[i];
        ++counts[c];
    }
    for (int c = 0; c < 2; ++c) out.centers[c] = sums[c] / static_cast<double>(counts[c]);
}

} // namespace

ClusterResult cluster_1d(std::span<const double> values, int k) {
    if (values.empty()) throw InvalidArgument("cluster_1d needs at least one value");
    if (k < 1) throw InvalidArgument("cluster_1d needs k >= 1");

    const auto n = values.size();
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());

    ClusterResult out;
    out.centers.resize(k);
    for (int c = 0; c < k; ++c) {
        const double pos = k == 1 ? 0.0 : static_cast<double>(c) * static_cast<double>(n - 1) / (k - 1);
        out.centers[c] = sorted[static_cast<std::size_t>(std::lround(pos))];
    }

    out.assignments.assign(n, -1);
    for (int iter = 0; iter < kMaxLloydIterations; ++iter) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            const int c = nearest(out.centers, values[i]);
            if (c != out.assignments[i]) {
                out.assignments[i] = c;
                changed = true;
            }
        }
        out.iterations = iter + 1;
        if (!changed) {
            out.converged = true;
            break;
        }
        std::vector<double> sum(k, 0.0);
        std::vector<std::size_t> count(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            sum[out.assignments[i]] += values[i];
            ++count[out.assignments[i]];
        }
        for (int c = 0; c < k; ++c) {
            if (count[c] > 0) out.centers[c] = sum[c] / static_cast<double>(count[c]);
        }
    }

    if (k == 2) refine_with_best_split(values, sorted, out);

    // Relabel so class ids follow descending centers.
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return out.centers[a] > out.centers[b]; });
    std::vector<int> rank(k);
    std::vector<double> centers(k);
    for (int r = 0; r < k; ++r) {
        rank[order[r]] = r;
        centers[r] = out.centers[order[r]];
    }
    out.centers = std::move(centers);
    out.sizes.assign(k, 0);
    for (auto &a : out.assignments) {
        a = rank[a];
        ++out.sizes[a];
    }
    return out;
}

std::vector<double> segment_scores(const ScoreSeries &series, const Segmentation &segmentation,
                                   std::span<const double> weights, SegmentScorer *scorer) {
    if (segmentation.length() != series.size()) {
        throw LengthMismatch("segmentation length " + std::to_string(segmentation.length()) +
                             " does not match series length " + std::to_string(series.size()));
    }
    if (!scorer && weights.size() != series.size()) {
        throw LengthMismatch("weights length does not match series length");
    }
    std::vector<double> out;
    for (const auto &seg : segmentation.segments()) {
        if (scorer) {
            out.push_back(scorer->score(seg.first, seg.last));
            continue;
        }
        double mass = 0.0;
        double total = 0.0;
        for (std::size_t i = seg.first; i <= seg.last; ++i) {
            mass += weights[i];
            total += weights[i] * series[i].score;
        }
        out.push_back(total / mass);
    }
    return out;
}

LabeledDocument label_document(const ScoreSeries &series, const Segmentation &segmentation,
                               std::span<const double> weights, int k, SegmentScorer *scorer) {
    auto scores = segment_scores(series, segmentation, weights, scorer);
    const auto clusters = cluster_1d(scores, k);
    LabeledDocument doc{segmentation, std::move(scores), clusters.assignments, clusters.centers,
                        clusters.num_nonempty() <= 1};
    return doc;
}

std::string class_name(int label, int k) {
    if (k == 2) return label == 0 ? "LLM" : "human";
    if (k == 3) {
        static const char *names[] = {"LLM", "mixed", "human"};
        return names[label];
    }
    return "class_" + std::to_string(label);
}

} // namespace cpseg
