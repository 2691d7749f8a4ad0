#pragma once

#include "cpseg/score_model.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace cpseg {

/// Piecewise-Gaussian score model: segments alternate between the LLM mean
/// (first segment) and the human mean, with independent N(0, sigma_i^2) noise.
struct SyntheticSpec {
    std::size_t n = 0;
    std::vector<std::size_t> change_points; // 0-based "boundary after unit c"
    double mu_h = 0.0;
    double mu_m = 1.0;
    std::vector<double> sigma;              // per unit, > 0
    std::vector<long> token_counts;         // optional, per unit
    std::uint64_t seed = 0;

    void validate() const;
    Segmentation truth() const { return Segmentation(change_points, n); }
    double mean_at(std::size_t i) const;
    double kappa() const;
};

std::vector<double> constant_sigma(std::size_t n, double sigma);
/// sigma_i = pattern[i % pattern.size()].
std::vector<double> repeating_sigma(std::size_t n, const std::vector<double> &pattern);

/// Draws one series; var_estimate is set to sigma_i^2. Deterministic per seed.
ScoreSeries generate(const SyntheticSpec &spec);

/// Both sides of the two signal-to-noise conditions with the absolute
/// constant taken as 1:
///   kappa^2 * delta1  vs  sigma_max^2 * log(N / delta)
///   kappa^2 * delta2  vs  log(N / delta)
/// where delta1 is the shortest segment length and delta2 the smallest
/// segment inverse-variance mass.
struct SnrDiagnostics {
    std::size_t delta1 = 0;
    double delta2 = 0.0;
    double snr1_lhs = 0.0;
    double snr1_rhs = 0.0;
    double snr2_lhs = 0.0;
    double snr2_rhs = 0.0;
};

SnrDiagnostics snr_diagnostics(const SyntheticSpec &spec, double delta);

/// Minimax localization floor for a single change point c (0-based boundary
/// after unit c): the largest h1, h2 such that
///   sum_{i=tau+1}^{tau+h1} kappa^2/sigma_i^2 <= log(1 / delta)
///   sum_{i=tau-h2}^{tau}   kappa^2/sigma_i^2 <= log(1 / delta)
/// with tau = c + 1 in 1-based units, i.e. the defining partial sums with the
/// unspecified absolute constant taken as 1. floor() is max(h1, h2).
struct MinimaxFloor {
    std::size_t h1 = 0;
    std::size_t h2 = 0;
    std::size_t floor() const { return h1 > h2 ? h1 : h2; }
};

MinimaxFloor minimax_floor(const std::vector<double> &sigma, std::size_t change_point,
                           double kappa, double delta);

} // namespace cpseg
