#include "cpseg/synthgen.hpp"

#include "cpseg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace cpseg {

void SyntheticSpec::validate() const {
    if (n < 2) throw InvalidArgument("synthetic spec needs N >= 2");
    if (sigma.size() != n) throw LengthMismatch("sigma profile length must equal N");
    if (!token_counts.empty() && token_counts.size() != n) {
        throw LengthMismatch("token_counts length must equal N");
    }
    for (double s : sigma) {
        if (!(s > 0.0) || !std::isfinite(s)) throw InvalidArgument("sigma_i must be positive");
    }
    Segmentation check(change_points, n); // throws on bad change points
    (void)check;
}

double SyntheticSpec::mean_at(std::size_t i) const {
    // Segment index of unit i: number of change points strictly before it.
    const auto seg = static_cast<std::size_t>(
        std::lower_bound(change_points.begin(), change_points.end(), i) - change_points.begin());
    return seg % 2 == 0 ? mu_m : mu_h;
}

double SyntheticSpec::kappa() const { return std::abs(mu_m - mu_h); }

std::vector<double> constant_sigma(std::size_t n, double sigma) {
    return std::vector<double>(n, sigma);
}

std::vector<double> repeating_sigma(std::size_t n, const std::vector<double> &pattern) {
    if (pattern.empty()) throw InvalidArgument("sigma pattern must not be empty");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = pattern[i % pattern.size()];
    return out;
}

ScoreSeries generate(const SyntheticSpec &spec) {
    spec.validate();
    std::seed_seq seq{static_cast<std::uint32_t>(spec.seed),
                      static_cast<std::uint32_t>(spec.seed >> 32), 0x5eedu};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> noise(0.0, 1.0);

    std::vector<SentenceRecord> records(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) {
        auto &r = records[i];
        r.index = i;
        r.score = spec.mean_at(i) + spec.sigma[i] * noise(rng);
        r.var_estimate = spec.sigma[i] * spec.sigma[i];
        r.token_count = spec.token_counts.empty() ? 1 : spec.token_counts[i];
    }
    return ScoreSeries(std::move(records));
}

SnrDiagnostics snr_diagnostics(const SyntheticSpec &spec, double delta) {
    spec.validate();
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must lie in (0, 1)");

    SnrDiagnostics d;
    d.delta1 = spec.n;
    d.delta2 = std::numeric_limits<double>::infinity();
    double sigma_max = 0.0;
    for (const auto &seg : spec.truth().segments()) {
        d.delta1 = std::min(d.delta1, seg.last - seg.first + 1);
        double mass = 0.0;
        for (std::size_t i = seg.first; i <= seg.last; ++i) {
            mass += 1.0 / (spec.sigma[i] * spec.sigma[i]);
            sigma_max = std::max(sigma_max, spec.sigma[i]);
        }
        d.delta2 = std::min(d.delta2, mass);
    }
    const double kappa2 = spec.kappa() * spec.kappa();
    const double log_term = std::log(static_cast<double>(spec.n) / delta);
    d.snr1_lhs = kappa2 * static_cast<double>(d.delta1);
    d.snr1_rhs = sigma_max * sigma_max * log_term;
    d.snr2_lhs = kappa2 * d.delta2;
    d.snr2_rhs = log_term;
    return d;
}

MinimaxFloor minimax_floor(const std::vector<double> &sigma, std::size_t change_point,
                           double kappa, double delta) {
    const auto n = sigma.size();
    if (change_point + 1 >= n) throw InvalidArgument("change point out of range");
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must lie in (0, 1)");
    const double budget = std::log(1.0 / delta);
    const double k2 = kappa * kappa;

    MinimaxFloor out;
    double sum = 0.0;
    for (std::size_t i = change_point + 1; i < n; ++i) {
        sum += k2 / (sigma[i] * sigma[i]);
        if (sum > budget) break;
        out.h1 = i - change_point;
    }
    sum = 0.0;
    // 1-based tau - h2 .. tau is 0-based change_point - h2 .. change_point.
    for (std::size_t h = 0; h <= change_point; ++h) {
        sum += k2 / (sigma[change_point - h] * sigma[change_point - h]);
        if (sum > budget) break;
        out.h2 = h;
    }
    return out;
}

} // namespace cpseg
