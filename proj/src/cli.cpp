#include "cpseg/cli.hpp"

#include "cpseg/errors.hpp"
#include "cpseg/io.hpp"
#include "cpseg/labeling.hpp"
#include "cpseg/metrics.hpp"
#include "cpseg/not_engine.hpp"
#include "cpseg/theorem_suite.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <memory>
#include <optional>
#include <ostream>

namespace cpseg {

namespace {

struct SeedChoice {
    std::uint64_t value = 0;
    std::string source = "default";
};

SeedChoice resolve_seed(const CLI::Option *flag, std::uint64_t flag_value) {
    if (flag->count() > 0) return {flag_value, "flag"};
    if (const char *env = std::getenv("CPSEG_SEED"); env && *env) {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(env, &used);
            if (used != std::string(env).size()) throw std::invalid_argument("trailing");
            return {v, "env"};
        } catch (const std::exception &) {
            throw InvalidArgument(std::string("CPSEG_SEED is not an unsigned integer: ") + env);
        }
    }
    return {};
}

void emit(const std::string &text, const std::string &out_path, std::ostream &out) {
    if (out_path.empty()) {
        out << text;
    } else {
        write_text_file(out_path, text);
    }
}

struct SegmentArgs {
    std::string scores;
    std::string scorer_cmd;
    std::string method = "wcp";
    std::string weights;
    double kappa = 1.0;
    std::optional<double> r;
    std::size_t M = NotConfig::default_num_intervals;
    std::uint64_t seed = 0;
    int k_classes = 2;
    std::string out;
    bool serial = false;
    CLI::Option *seed_opt = nullptr;
};

WeightScheme pick_scheme(const SegmentArgs &a) {
    std::string name = a.weights;
    if (a.method == "vcp") {
        if (!name.empty() && name != "uniform") {
            throw InvalidArgument("vcp uses the standard statistic; --weights must be uniform");
        }
        return WeightScheme::uniform();
    }
    if (name.empty()) name = a.method == "wcp" ? "invvar" : "tokpow";
    if (name == "uniform") return WeightScheme::uniform();
    if (name == "invvar") return WeightScheme::inverse_variance();
    return WeightScheme::token_power(a.kappa);
}

int do_segment(const SegmentArgs &a, std::ostream &out) {
    if (a.r && !(*a.r > 0.0)) throw InvalidArgument("--r must be positive");
    if (a.M < 1) throw InvalidArgument("--M must be at least 1");
    if (a.k_classes < 1) throw InvalidArgument("--k-classes must be at least 1");
    if (!(a.kappa > 0.0)) throw InvalidArgument("--kappa must be positive");
    if (!a.scorer_cmd.empty() && a.method != "gcp") {
        throw InvalidArgument("--scorer-cmd is only used with --method gcp");
    }

    const auto seed = resolve_seed(a.seed_opt, a.seed);
    const auto series = load_scores(a.scores);
    const auto scheme = pick_scheme(a);
    const auto weights = resolve_weights(series, scheme);

    PresetOptions options;
    options.threshold_r = a.r;
    options.num_intervals_M = a.M;
    options.seed = seed.value;
    options.execution = a.serial ? Execution::serial : Execution::parallel;
    options.keep_audit = false;
    const double r = a.r.value_or(NotConfig::default_threshold(series.size()));

    std::unique_ptr<SegmentScorer> scorer;
    std::optional<SegmenterRun> run;
    if (a.method == "vcp") {
        run = vcp(series, options);
    } else if (a.method == "wcp") {
        run = wcp(series, scheme, options);
    } else {
        if (a.scorer_cmd.empty()) {
            scorer = std::make_unique<AdditiveScorer>(series.scores(), weights);
        } else {
            scorer = std::make_unique<SubprocessScorer>(a.scorer_cmd);
        }
        run = gcp(series, *scorer, scheme, options);
    }

    SegmentScorer *label_scorer = a.method == "gcp" ? scorer.get() : nullptr;
    const auto doc = label_document(series, run->segmentation, weights, a.k_classes, label_scorer);

    nlohmann::json labels = nlohmann::json::array();
    for (int l : doc.labels) labels.push_back(class_name(l, a.k_classes));

    nlohmann::json config{{"method", a.method},
                          {"weights", to_string(scheme.kind)},
                          {"kappa", scheme.kappa},
                          {"r", r},
                          {"M", a.M},
                          {"seed", seed.value},
                          {"seed_source", seed.source},
                          {"k_classes", a.k_classes},
                          {"scores", a.scores},
                          {"scorer_cmd", a.scorer_cmd.empty() ? nlohmann::json(nullptr)
                                                              : nlohmann::json(a.scorer_cmd)}};
    nlohmann::json result{{"N", series.size()},
                          {"change_points", doc.segmentation.change_points()},
                          {"labels", labels},
                          {"label_ids", doc.labels},
                          {"segment_scores", doc.segment_scores},
                          {"class_means", doc.class_means},
                          {"single_class", doc.single_class},
                          {"config_echo", config}};
    emit(result.dump(2) + "\n", a.out, out);
    return exit_code::ok;
}

struct EvalArgs {
    std::string truth;
    std::string pred;
    std::size_t window_k = 0;
    std::string out;
};

int do_eval(const EvalArgs &a, std::ostream &out) {
    const auto truth = segmentation_from_json(read_json_file(a.truth));
    const auto pred = segmentation_from_json(read_json_file(a.pred));
    const auto report = evaluate(truth, pred, a.window_k);
    nlohmann::json result{{"wd", report.wd},
                          {"ce", report.ce},
                          {"window_k", report.window_k},
                          {"N", report.n},
                          {"config_echo",
                           {{"truth", a.truth},
                            {"pred", a.pred},
                            {"window_k_override", a.window_k == 0 ? nlohmann::json(nullptr)
                                                                  : nlohmann::json(a.window_k)}}}};
    emit(result.dump(2) + "\n", a.out, out);
    return exit_code::ok;
}

struct SimulateArgs {
    std::string suite;
    std::size_t seeds = 200;
    std::size_t rate_seeds = 300;
    std::uint64_t seed = 0;
    std::size_t M = NotConfig::default_num_intervals;
    std::string out;
    bool serial = false;
    CLI::Option *seed_opt = nullptr;
};

std::string to_csv(const nlohmann::json &report) {
    std::string text = "key,value\n";
    const auto flat = report.flatten();
    for (const auto &[key, value] : flat.items()) {
        text += key + "," + (value.is_string() ? value.get<std::string>() : value.dump()) + "\n";
    }
    return text;
}

int do_simulate(const SimulateArgs &a, std::ostream &out) {
    if (a.seeds < 1 || a.rate_seeds < 1) throw InvalidArgument("seed counts must be positive");
    if (a.M < 1) throw InvalidArgument("--M must be at least 1");
    SuiteConfig config;
    config.seeds = a.seeds;
    config.rate_seeds = a.rate_seeds;
    config.base_seed = resolve_seed(a.seed_opt, a.seed).value;
    config.num_intervals_M = a.M;
    config.execution = a.serial ? Execution::serial : Execution::parallel;

    const auto report = run_theorem_suite(a.suite, config);
    const bool csv = a.out.size() >= 4 && a.out.compare(a.out.size() - 4, 4, ".csv") == 0;
    emit(csv ? to_csv(report) : report.dump(2) + "\n", a.out, out);
    return exit_code::ok;
}

} // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Change-point segmentation of sentence-level detection scores", "cpseg"};
    app.require_subcommand(1);

    SegmentArgs seg;
    auto *segment = app.add_subcommand("segment", "Estimate change points and label segments");
    segment->add_option("--scores", seg.scores, "Score file (JSON Lines)")->required()->check(CLI::ExistingFile);
    segment->add_option("--scorer-cmd", seg.scorer_cmd, "Segment scorer command (gcp)");
    segment->add_option("--method", seg.method, "Segmenter")
        ->check(CLI::IsMember({"vcp", "wcp", "gcp"}))
        ->capture_default_str();
    segment->add_option("--weights", seg.weights, "Weights (default: invvar for wcp, tokpow for gcp)")
        ->check(CLI::IsMember({"uniform", "invvar", "tokpow"}));
    segment->add_option("--kappa", seg.kappa, "Exponent for tokpow weights")->capture_default_str();
    segment->add_option("--r", seg.r, "Threshold (default sqrt(log N))");
    segment->add_option("--M", seg.M, "Random intervals per range")->capture_default_str();
    seg.seed_opt = segment->add_option("--seed", seg.seed, "RNG seed (overrides CPSEG_SEED)");
    segment->add_option("--k-classes", seg.k_classes, "Number of label classes")->capture_default_str();
    segment->add_option("--out", seg.out, "Output path (default stdout)");
    segment->add_flag("--serial", seg.serial, "Disable OpenMP interval scans");

    EvalArgs ev;
    auto *eval = app.add_subcommand("eval", "Compare a prediction against the truth");
    eval->add_option("--truth", ev.truth, "Truth JSON {N, change_points}")->required()->check(CLI::ExistingFile);
    eval->add_option("--pred", ev.pred, "Prediction JSON (segment output)")->required()->check(CLI::ExistingFile);
    eval->add_option("--window-k", ev.window_k, "WindowDiff window (default N / (2 (K+1)))")
        ->check(CLI::PositiveNumber);
    eval->add_option("--out", ev.out, "Output path (default stdout)");

    SimulateArgs sim;
    auto *simulate = app.add_subcommand("simulate", "Run a synthetic Monte-Carlo suite");
    simulate->add_option("--suite", sim.suite, "Suite")
        ->required()
        ->check(CLI::IsMember({"thm1", "thm2", "equivalence", "minimax"}));
    simulate->add_option("--seeds", sim.seeds, "Monte-Carlo repetitions")->capture_default_str();
    simulate->add_option("--rate-seeds", sim.rate_seeds, "Repetitions per jump size (thm2)")->capture_default_str();
    sim.seed_opt = simulate->add_option("--seed", sim.seed, "Base seed (overrides CPSEG_SEED)");
    simulate->add_option("--M", sim.M, "Random intervals per range")->capture_default_str();
    simulate->add_option("--out", sim.out, "Output path; .csv selects CSV (default JSON to stdout)");
    simulate->add_flag("--serial", sim.serial, "Run seeds sequentially");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::Success &e) {
        app.exit(e, out, err);
        return exit_code::ok;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return exit_code::input_error;
    }

    try {
        if (segment->parsed()) return do_segment(seg, out);
        if (eval->parsed()) return do_eval(ev, out);
        return do_simulate(sim, out);
    } catch (const ScorerFailure &e) {
        err << "scorer failure: " << e.what() << "\n";
        return exit_code::scorer_failure;
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return exit_code::input_error;
    }
}

} // namespace cpseg
