#pragma once

#include "cpseg/not_engine.hpp"
#include "cpseg/synthgen.hpp"

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace cpseg {

/// Monte-Carlo harness for the localization-error behaviour of VCP and WCP
/// on synthetic piecewise-Gaussian scores. Seeds run in parallel; every
/// aggregate is computed in seed order, so reports are reproducible.
struct SuiteConfig {
    std::size_t seeds = 200;
    std::uint64_t base_seed = 0;
    std::size_t num_intervals_M = NotConfig::default_num_intervals;
    Execution execution = Execution::parallel;

    // Homoscedastic single change.
    std::size_t homo_n = 200;
    double homo_kappa = 1.0;
    double homo_sigma = 0.3;
    std::vector<std::size_t> homo_n_grid{100, 200, 400, 800};

    // Heteroscedastic dominance.
    std::size_t hetero_n = 200;
    double hetero_kappa = 1.0;
    std::vector<double> hetero_sigma_pattern{0.1, 1.0};

    // Weighted error versus jump size. This suite and the minimax suite use
    // calibrated_threshold(sigma, threshold_delta) instead of sqrt(log N).
    std::size_t rate_n = 10000;
    std::vector<double> rate_kappas{0.5, 1.0, 2.0};
    std::vector<double> rate_sigma_pattern{1.5, 3.0};
    std::size_t rate_seeds = 300;
    double threshold_delta = 0.1;

    // Weighted versus generalized statistics.
    std::size_t equivalence_series = 100;
    std::size_t equivalence_max_n = 100;

    // Single-change Gaussian instance for the lower bound.
    std::size_t minimax_n = 2000;
    double minimax_kappa = 1.0;
    std::vector<double> minimax_sigma_pattern{1.5, 3.0};
    double minimax_delta = 0.1;
};

struct MethodSummary {
    std::string method;
    std::size_t runs = 0;
    double khat_accuracy = 0.0;       // fraction with the true number of change points
    double mean_abs_error_matched = 0.0; // index error over runs with matched counts
    double mean_abs_error = 0.0;      // over all runs, Hausdorff fallback, capped at N
    double median_abs_error = 0.0;
    double mean_weighted_error = 0.0; // inverse-variance weighted, all runs, capped
    double median_weighted_error = 0.0;
};

struct ScalingPoint {
    double x = 0.0; // N or kappa
    double median_error = 0.0;
    double mean_error = 0.0;
    double khat_accuracy = 0.0;
};

struct HomoscedasticReport {
    std::size_t n = 0;
    double kappa = 0.0;
    double sigma = 0.0;
    double threshold = 0.0;
    double error_bound = 0.0; // 3 sigma^2 log N / kappa^2
    MethodSummary vcp;
    MethodSummary wcp;
    double vcp_wcp_agreement = 0.0; // fraction of seeds with identical change points
    SnrDiagnostics snr;
    std::vector<ScalingPoint> n_grid;
    double slope_vs_log_n = 0.0;
};

struct HeteroscedasticReport {
    std::size_t n = 0;
    double kappa = 0.0;
    MethodSummary vcp;
    MethodSummary wcp;
    std::size_t wcp_better = 0;
    std::size_t vcp_better = 0;
    std::size_t ties = 0;
    double sign_test_p = 1.0; // one-sided, H1: WCP error smaller
    SnrDiagnostics snr;
    std::size_t rate_n = 0;
    double rate_threshold = 0.0;
    std::vector<ScalingPoint> rate;
    double rate_log_log_slope = 0.0;
    bool rate_monotone = false;
};

struct EquivalenceReport {
    std::size_t series = 0;
    std::size_t triplets = 0;
    double max_abs_diff = 0.0;
    double max_rel_diff = 0.0;
    std::size_t identical_segmentations = 0;
};

struct MinimaxReport {
    std::size_t n = 0;
    std::size_t change_point = 0;
    double kappa = 0.0;
    double delta = 0.0;
    double threshold = 0.0;
    std::size_t h1 = 0;
    std::size_t h2 = 0;
    std::size_t floor = 0;
    double empirical_q = 0.0; // Q(delta) of WCP's index error
    double ratio = 0.0;       // empirical_q / floor
    double khat_accuracy = 0.0;
};

HomoscedasticReport run_homoscedastic(const SuiteConfig &config);
HeteroscedasticReport run_heteroscedastic(const SuiteConfig &config);
EquivalenceReport run_equivalence(const SuiteConfig &config);
MinimaxReport run_minimax(const SuiteConfig &config);

/// Runs one named suite: "thm1" (homoscedastic), "thm2" (heteroscedastic
/// dominance and rate), "equivalence" or "minimax".
nlohmann::json run_theorem_suite(const std::string &suite, const SuiteConfig &config);

nlohmann::json to_json(const SuiteConfig &config);
nlohmann::json to_json(const HomoscedasticReport &report);
nlohmann::json to_json(const HeteroscedasticReport &report);
nlohmann::json to_json(const EquivalenceReport &report);
nlohmann::json to_json(const MinimaxReport &report);

/// Threshold at which pure noise stays below r with probability about
/// 1 - delta: sqrt(2 log(N^3 / delta)) bounds the standardized statistic
/// over all N^3 triplets, and dividing by sqrt(mean(1 / sigma_i^2)) moves it
/// to the scale of unit-mean inverse-variance weights.
double calibrated_threshold(const std::vector<double> &sigma, double delta);

/// Smallest eta with empirical P(error <= eta) >= 1 - delta.
double empirical_q(std::vector<double> errors, double delta);

/// One-sided sign test: P(X >= wins) for X ~ Binomial(wins + losses, 1/2).
double sign_test_p(std::size_t wins, std::size_t losses);

/// Least-squares slope of log(y) on log(x).
double log_log_slope(const std::vector<double> &x, const std::vector<double> &y);

} // namespace cpseg
