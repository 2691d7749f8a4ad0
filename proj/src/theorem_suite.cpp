#include "cpseg/theorem_suite.hpp"

#include "cpseg/cusum.hpp"
#include "cpseg/errors.hpp"
#include "cpseg/metrics.hpp"
#include "cpseg/scorer.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <optional>
#include <random>

namespace cpseg {

namespace {

struct RunOutcome {
    bool matched = false;
    double abs_error = 0.0;
    double weighted_error = 0.0;
    std::vector<std::size_t> change_points;
};

template <class Fn>
void for_each_seed(std::size_t count, Execution execution, Fn &&fn) {
    const auto total = static_cast<long>(count);
    if (execution == Execution::serial) {
        for (long i = 0; i < total; ++i) fn(static_cast<std::size_t>(i));
        return;
    }
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < total; ++i) {
        try {
            fn(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(cpseg_seed_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
}

std::vector<double> inverse_variance(const std::vector<double> &sigma) {
    std::vector<double> w(sigma.size());
    for (std::size_t i = 0; i < sigma.size(); ++i) w[i] = 1.0 / (sigma[i] * sigma[i]);
    return w;
}

RunOutcome score_run(const Segmentation &truth, const Segmentation &pred,
                     const std::vector<double> &inv_var) {
    const std::vector<double> unit(truth.length(), 1.0);
    const auto idx = weighted_localization_error(truth, pred, unit);
    const auto wtd = weighted_localization_error(truth, pred, inv_var);
    const double total_mass = std::accumulate(inv_var.begin(), inv_var.end(), 0.0);
    RunOutcome out;
    out.matched = idx.matched;
    out.abs_error = std::min(idx.value, static_cast<double>(truth.length()));
    out.weighted_error = std::min(wtd.value, total_mass);
    out.change_points = pred.change_points();
    return out;
}

double median(std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const auto m = v.size() / 2;
    return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double mean(const std::vector<double> &v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

MethodSummary summarize(std::string method, const std::vector<RunOutcome> &runs) {
    MethodSummary s;
    s.method = std::move(method);
    s.runs = runs.size();
    std::vector<double> abs_all;
    std::vector<double> abs_matched;
    std::vector<double> weighted;
    std::size_t matched = 0;
    for (const auto &r : runs) {
        abs_all.push_back(r.abs_error);
        weighted.push_back(r.weighted_error);
        if (r.matched) {
            ++matched;
            abs_matched.push_back(r.abs_error);
        }
    }
    s.khat_accuracy = runs.empty() ? 0.0 : static_cast<double>(matched) / static_cast<double>(runs.size());
    s.mean_abs_error_matched = mean(abs_matched);
    s.mean_abs_error = mean(abs_all);
    s.median_abs_error = median(abs_all);
    s.mean_weighted_error = mean(weighted);
    s.median_weighted_error = median(weighted);
    return s;
}

SyntheticSpec single_change_spec(std::size_t n, double kappa, std::vector<double> sigma,
                                 std::uint64_t seed) {
    SyntheticSpec spec;
    spec.n = n;
    spec.change_points = {n / 2 - 1};
    spec.mu_h = 0.0;
    spec.mu_m = kappa;
    spec.sigma = std::move(sigma);
    spec.seed = seed;
    return spec;
}

PresetOptions serial_options(std::uint64_t seed, std::size_t M) {
    PresetOptions o;
    o.seed = seed;
    o.num_intervals_M = M;
    o.execution = Execution::serial;
    o.keep_audit = false;
    return o;
}

struct PairedRuns {
    std::vector<RunOutcome> vcp;
    std::vector<RunOutcome> wcp;
};

PairedRuns run_pairs(const SuiteConfig &config, std::size_t seeds, std::size_t n, double kappa,
                     const std::vector<double> &sigma, bool with_vcp,
                     std::optional<double> threshold = std::nullopt) {
    PairedRuns out;
    out.vcp.resize(with_vcp ? seeds : 0);
    out.wcp.resize(seeds);
    const auto inv_var = inverse_variance(sigma);
    for_each_seed(seeds, config.execution, [&](std::size_t i) {
        const auto seed = config.base_seed + i;
        const auto spec = single_change_spec(n, kappa, sigma, seed);
        const auto series = generate(spec);
        const auto truth = spec.truth();
        auto options = serial_options(seed, config.num_intervals_M);
        options.threshold_r = threshold;
        if (with_vcp) out.vcp[i] = score_run(truth, vcp(series, options).segmentation, inv_var);
        out.wcp[i] = score_run(
            truth, wcp(series, WeightScheme::inverse_variance(), options).segmentation, inv_var);
    });
    return out;
}

} // namespace

double calibrated_threshold(const std::vector<double> &sigma, double delta) {
    if (sigma.empty()) throw InvalidArgument("empty sigma profile");
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must lie in (0, 1)");
    double precision = 0.0;
    for (double s : sigma) precision += 1.0 / (s * s);
    precision /= static_cast<double>(sigma.size());
    const double n = static_cast<double>(sigma.size());
    return std::sqrt(2.0 * (3.0 * std::log(n) - std::log(delta)) / precision);
}

double empirical_q(std::vector<double> errors, double delta) {
    if (errors.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(errors.begin(), errors.end());
    const double need = (1.0 - delta) * static_cast<double>(errors.size());
    auto idx = static_cast<std::size_t>(std::ceil(need - 1e-9));
    idx = std::clamp<std::size_t>(idx, 1, errors.size());
    return errors[idx - 1];
}

double sign_test_p(std::size_t wins, std::size_t losses) {
    const auto n = wins + losses;
    if (n == 0) return 1.0;
    double p = 0.0;
    const double log_half_n = static_cast<double>(n) * std::log(0.5);
    for (std::size_t k = wins; k <= n; ++k) {
        const double log_choose = std::lgamma(static_cast<double>(n) + 1.0) -
                                  std::lgamma(static_cast<double>(k) + 1.0) -
                                  std::lgamma(static_cast<double>(n - k) + 1.0);
        p += std::exp(log_choose + log_half_n);
    }
    return std::min(1.0, p);
}

double log_log_slope(const std::vector<double> &x, const std::vector<double> &y) {
    if (x.size() != y.size() || x.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    std::vector<double> lx;
    std::vector<double> ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) return std::numeric_limits<double>::quiet_NaN();
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
    }
    const double mx = mean(lx);
    const double my = mean(ly);
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    return sxy / sxx;
}

HomoscedasticReport run_homoscedastic(const SuiteConfig &config) {
    HomoscedasticReport r;
    r.n = config.homo_n;
    r.kappa = config.homo_kappa;
    r.sigma = config.homo_sigma;
    r.threshold = NotConfig::default_threshold(r.n);
    r.error_bound = 3.0 * r.sigma * r.sigma * std::log(static_cast<double>(r.n)) / (r.kappa * r.kappa);

    const auto sigma = constant_sigma(r.n, r.sigma);
    const auto runs = run_pairs(config, config.seeds, r.n, r.kappa, sigma, true);
    r.vcp = summarize("vcp", runs.vcp);
    r.wcp = summarize("wcp", runs.wcp);
    std::size_t agree = 0;
    for (std::size_t i = 0; i < config.seeds; ++i) {
        if (runs.vcp[i].change_points == runs.wcp[i].change_points) ++agree;
    }
    r.vcp_wcp_agreement = config.seeds == 0 ? 0.0 : static_cast<double>(agree) / static_cast<double>(config.seeds);
    r.snr = snr_diagnostics(single_change_spec(r.n, r.kappa, sigma, 0), 1.0 / static_cast<double>(r.n));

    std::vector<double> log_n;
    std::vector<double> errs;
    for (auto n : config.homo_n_grid) {
        const auto grid_runs = run_pairs(config, config.seeds, n, r.kappa, constant_sigma(n, r.sigma), true);
        const auto s = summarize("vcp", grid_runs.vcp);
        r.n_grid.push_back({static_cast<double>(n), s.median_abs_error, s.mean_abs_error, s.khat_accuracy});
        log_n.push_back(std::log(static_cast<double>(n)));
        errs.push_back(s.mean_abs_error);
    }
    if (log_n.size() >= 2) {
        const double mx = mean(log_n);
        const double my = mean(errs);
        double sxy = 0.0;
        double sxx = 0.0;
        for (std::size_t i = 0; i < log_n.size(); ++i) {
            sxy += (log_n[i] - mx) * (errs[i] - my);
            sxx += (log_n[i] - mx) * (log_n[i] - mx);
        }
        r.slope_vs_log_n = sxy / sxx;
    }
    return r;
}

HeteroscedasticReport run_heteroscedastic(const SuiteConfig &config) {
    HeteroscedasticReport r;
    r.n = config.hetero_n;
    r.kappa = config.hetero_kappa;
    const auto sigma = repeating_sigma(r.n, config.hetero_sigma_pattern);
    const auto runs = run_pairs(config, config.seeds, r.n, r.kappa, sigma, true);
    r.vcp = summarize("vcp", runs.vcp);
    r.wcp = summarize("wcp", runs.wcp);
    for (std::size_t i = 0; i < config.seeds; ++i) {
        const double a = runs.wcp[i].abs_error;
        const double b = runs.vcp[i].abs_error;
        if (a < b) ++r.wcp_better;
        else if (b < a) ++r.vcp_better;
        else ++r.ties;
    }
    r.sign_test_p = sign_test_p(r.wcp_better, r.vcp_better);
    r.snr = snr_diagnostics(single_change_spec(r.n, r.kappa, sigma, 0), 1.0 / static_cast<double>(r.n));

    r.rate_n = config.rate_n;
    const auto rate_sigma = repeating_sigma(config.rate_n, config.rate_sigma_pattern);
    r.rate_threshold = calibrated_threshold(rate_sigma, config.threshold_delta);
    std::vector<double> xs;
    std::vector<double> ys;
    for (double kappa : config.rate_kappas) {
        const auto point = run_pairs(config, config.rate_seeds, config.rate_n, kappa, rate_sigma, false,
                                     r.rate_threshold);
        const auto s = summarize("wcp", point.wcp);
        r.rate.push_back({kappa, s.median_weighted_error, s.mean_weighted_error, s.khat_accuracy});
        xs.push_back(kappa);
        ys.push_back(s.median_weighted_error);
    }
    r.rate_monotone = true;
    for (std::size_t i = 1; i < ys.size(); ++i) {
        if (!(ys[i] < ys[i - 1])) r.rate_monotone = false;
    }
    r.rate_log_log_slope = log_log_slope(xs, ys);
    return r;
}

EquivalenceReport run_equivalence(const SuiteConfig &config) {
    EquivalenceReport r;
    r.series = config.equivalence_series;
    std::vector<double> abs_diff(r.series, 0.0);
    std::vector<double> rel_diff(r.series, 0.0);
    std::vector<std::size_t> triplets(r.series, 0);
    std::vector<char> identical(r.series, 0);

    for_each_seed(r.series, config.execution, [&](std::size_t i) {
        std::seed_seq seq{static_cast<std::uint32_t>(config.base_seed),
                          static_cast<std::uint32_t>(config.base_seed >> 32),
                          static_cast<std::uint32_t>(i), 0xe9u};
        std::mt19937_64 rng(seq);
        std::uniform_int_distribution<std::size_t> length(2, std::max<std::size_t>(2, config.equivalence_max_n));
        std::uniform_int_distribution<long> tokens(1, 40);
        std::uniform_real_distribution<double> level(-2.0, 2.0);
        std::uniform_real_distribution<double> spread(0.1, 1.0);
        std::normal_distribution<double> noise(0.0, 1.0);

        const auto n = length(rng);
        const std::size_t num_breaks = std::min<std::size_t>(n - 1, std::uniform_int_distribution<std::size_t>(0, 3)(rng));
        std::vector<std::size_t> cps;
        while (cps.size() < num_breaks) {
            const auto c = std::uniform_int_distribution<std::size_t>(0, n - 2)(rng);
            if (std::find(cps.begin(), cps.end(), c) == cps.end()) cps.push_back(c);
        }
        std::sort(cps.begin(), cps.end());
        std::vector<double> y(n);
        std::vector<long> counts(n);
        double mu = level(rng);
        for (std::size_t t = 0, j = 0; t < n; ++t) {
            y[t] = mu + spread(rng) * noise(rng);
            counts[t] = tokens(rng);
            if (j < cps.size() && cps[j] == t) {
                mu = level(rng);
                ++j;
            }
        }
        const auto series = ScoreSeries::from_scores(y, counts);
        const auto scheme = WeightScheme::token_power(1.0);
        const auto w = resolve_weights(series, scheme);

        AdditiveScorer additive(y, w);
        CachingScorer cached(additive);
        const auto weighted = Contrast::weighted(y, w);
        const auto generalized = Contrast::generalized(w, cached);
        double worst_abs = 0.0;
        double worst_rel = 0.0;
        std::size_t count = 0;
        for (std::size_t s = 0; s < n; ++s) {
            for (std::size_t e = s + 1; e < n; ++e) {
                for (std::size_t b = s; b < e; ++b) {
                    const double a = weighted.at(s, e, b);
                    const double g = generalized.at(s, e, b);
                    const double d = std::abs(a - g);
                    worst_abs = std::max(worst_abs, d);
                    worst_rel = std::max(worst_rel, d / std::max(1.0, std::abs(a)));
                    ++count;
                }
            }
        }
        abs_diff[i] = worst_abs;
        rel_diff[i] = worst_rel;
        triplets[i] = count;

        const auto options = serial_options(config.base_seed + i, config.num_intervals_M);
        AdditiveScorer fresh(y, w);
        const auto via_wcp = wcp(series, scheme, options);
        const auto via_gcp = gcp(series, fresh, scheme, options);
        identical[i] = via_wcp.segmentation == via_gcp.segmentation ? 1 : 0;
    });

    for (std::size_t i = 0; i < r.series; ++i) {
        r.max_abs_diff = std::max(r.max_abs_diff, abs_diff[i]);
        r.max_rel_diff = std::max(r.max_rel_diff, rel_diff[i]);
        r.triplets += triplets[i];
        r.identical_segmentations += static_cast<std::size_t>(identical[i]);
    }
    return r;
}

MinimaxReport run_minimax(const SuiteConfig &config) {
    MinimaxReport r;
    r.n = config.minimax_n;
    r.change_point = r.n / 2 - 1;
    r.kappa = config.minimax_kappa;
    r.delta = config.minimax_delta;
    const auto sigma = repeating_sigma(r.n, config.minimax_sigma_pattern);
    const auto floor = minimax_floor(sigma, r.change_point, r.kappa, r.delta);
    r.h1 = floor.h1;
    r.h2 = floor.h2;
    r.floor = floor.floor();
    r.threshold = calibrated_threshold(sigma, config.threshold_delta);

    const auto runs = run_pairs(config, config.seeds, r.n, r.kappa, sigma, false, r.threshold);
    std::vector<double> errors;
    std::size_t matched = 0;
    for (const auto &run : runs.wcp) {
        errors.push_back(run.abs_error);
        if (run.matched) ++matched;
    }
    r.khat_accuracy = runs.wcp.empty() ? 0.0 : static_cast<double>(matched) / static_cast<double>(runs.wcp.size());
    r.empirical_q = empirical_q(errors, r.delta);
    r.ratio = r.floor == 0 ? std::numeric_limits<double>::infinity()
                           : r.empirical_q / static_cast<double>(r.floor);
    return r;
}

namespace {

nlohmann::json summary_json(const MethodSummary &s) {
    return {{"method", s.method},
            {"runs", s.runs},
            {"khat_accuracy", s.khat_accuracy},
            {"mean_abs_error_matched", s.mean_abs_error_matched},
            {"mean_abs_error", s.mean_abs_error},
            {"median_abs_error", s.median_abs_error},
            {"mean_weighted_error", s.mean_weighted_error},
            {"median_weighted_error", s.median_weighted_error}};
}

nlohmann::json snr_json(const SnrDiagnostics &d) {
    return {{"delta1", d.delta1},       {"delta2", d.delta2},     {"snr1_lhs", d.snr1_lhs},
            {"snr1_rhs", d.snr1_rhs},   {"snr2_lhs", d.snr2_lhs}, {"snr2_rhs", d.snr2_rhs}};
}

nlohmann::json points_json(const std::vector<ScalingPoint> &points, const char *x_name) {
    auto arr = nlohmann::json::array();
    for (const auto &p : points) {
        arr.push_back({{x_name, p.x},
                       {"median_error", p.median_error},
                       {"mean_error", p.mean_error},
                       {"khat_accuracy", p.khat_accuracy}});
    }
    return arr;
}

// JSON has no infinity or NaN; they are written as null.
nlohmann::json finite_or_null(double v) {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

} // namespace

nlohmann::json to_json(const SuiteConfig &c) {
    return {{"seeds", c.seeds},
            {"base_seed", c.base_seed},
            {"M", c.num_intervals_M},
            {"homo_n", c.homo_n},
            {"homo_kappa", c.homo_kappa},
            {"homo_sigma", c.homo_sigma},
            {"homo_n_grid", c.homo_n_grid},
            {"hetero_n", c.hetero_n},
            {"hetero_kappa", c.hetero_kappa},
            {"hetero_sigma_pattern", c.hetero_sigma_pattern},
            {"rate_n", c.rate_n},
            {"rate_kappas", c.rate_kappas},
            {"rate_sigma_pattern", c.rate_sigma_pattern},
            {"rate_seeds", c.rate_seeds},
            {"threshold_delta", c.threshold_delta},
            {"equivalence_series", c.equivalence_series},
            {"equivalence_max_n", c.equivalence_max_n},
            {"minimax_n", c.minimax_n},
            {"minimax_kappa", c.minimax_kappa},
            {"minimax_sigma_pattern", c.minimax_sigma_pattern},
            {"minimax_delta", c.minimax_delta}};
}

nlohmann::json to_json(const HomoscedasticReport &r) {
    return {{"n", r.n},
            {"kappa", r.kappa},
            {"sigma", r.sigma},
            {"threshold", r.threshold},
            {"error_bound", r.error_bound},
            {"vcp", summary_json(r.vcp)},
            {"wcp", summary_json(r.wcp)},
            {"vcp_wcp_agreement", r.vcp_wcp_agreement},
            {"snr", snr_json(r.snr)},
            {"n_grid", points_json(r.n_grid, "n")},
            {"slope_vs_log_n", finite_or_null(r.slope_vs_log_n)}};
}

nlohmann::json to_json(const HeteroscedasticReport &r) {
    return {{"n", r.n},
            {"kappa", r.kappa},
            {"vcp", summary_json(r.vcp)},
            {"wcp", summary_json(r.wcp)},
            {"wcp_better", r.wcp_better},
            {"vcp_better", r.vcp_better},
            {"ties", r.ties},
            {"sign_test_p", r.sign_test_p},
            {"snr", snr_json(r.snr)},
            {"rate_n", r.rate_n},
            {"rate_threshold", r.rate_threshold},
            {"rate", points_json(r.rate, "kappa")},
            {"rate_log_log_slope", finite_or_null(r.rate_log_log_slope)},
            {"rate_monotone", r.rate_monotone}};
}

nlohmann::json to_json(const EquivalenceReport &r) {
    return {{"series", r.series},
            {"triplets", r.triplets},
            {"max_abs_diff", r.max_abs_diff},
            {"max_rel_diff", r.max_rel_diff},
            {"identical_segmentations", r.identical_segmentations}};
}

nlohmann::json to_json(const MinimaxReport &r) {
    return {{"n", r.n},
            {"change_point", r.change_point},
            {"kappa", r.kappa},
            {"delta", r.delta},
            {"threshold", r.threshold},
            {"h1", r.h1},
            {"h2", r.h2},
            {"floor", r.floor},
            {"empirical_q", finite_or_null(r.empirical_q)},
            {"ratio", finite_or_null(r.ratio)},
            {"khat_accuracy", r.khat_accuracy}};
}

nlohmann::json run_theorem_suite(const std::string &suite, const SuiteConfig &config) {
    nlohmann::json result;
    if (suite == "thm1") {
        result = to_json(run_homoscedastic(config));
    } else if (suite == "thm2") {
        result = to_json(run_heteroscedastic(config));
    } else if (suite == "equivalence") {
        result = to_json(run_equivalence(config));
    } else if (suite == "minimax") {
        result = to_json(run_minimax(config));
    } else {
        throw InvalidArgument("unknown suite '" + suite + "'");
    }
    return {{"suite", suite}, {"config", to_json(config)}, {"result", std::move(result)}};
}

} // namespace cpseg
