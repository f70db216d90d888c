#include "distprob/dataset.hpp"
#include "distprob/detectors.hpp"
#include "distprob/errors.hpp"
#include "distprob/evaluation.hpp"
#include "distprob/io.hpp"
#include "distprob/neighbors.hpp"
#include "distprob/normalization.hpp"
#include "distprob/parallel.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace distprob;

// flag combinations that cannot be expressed as CLI11 constraints
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

struct Options {
    std::string input;
    std::string reference;
    std::string output;
    std::string delimiter = ",";
    bool no_header = false;
    std::string label_column;
    bool minmax = false;

    std::string detector = "knnw";
    std::size_t k = 5;
    std::string scheme = "mean";
    double s = 1.0;
    double a = 1.0;
    double b = 1.0;
    std::string mode = "closed";
    std::uint64_t seed = 42;
    std::size_t sample_size = 0;
    std::size_t rounds = 10;
    double delta = 0.0;
    double alpha = 0.5;

    std::string distribution = "empirical";
    std::string strategy = "full";
    std::size_t m = 0;

    std::string k_grid = "1:100";
    std::string schemes = "mean";
    std::string distributions = "empirical";
    std::size_t folds = 2;

    std::string m_grid;
};

char resolve_delimiter(const std::string& flag) {
    if (flag == "\\t" || flag == "tab") {
        return '\t';
    }
    if (flag.size() != 1) {
        throw UsageError("--delimiter must be a single character (or 'tab')");
    }
    return flag[0];
}

io::TabularFileSpec file_spec(const Options& opt, const std::string& path) {
    io::TabularFileSpec spec;
    spec.path = path;
    spec.delimiter = resolve_delimiter(opt.delimiter);
    spec.header = !opt.no_header;
    if (!opt.label_column.empty()) {
        spec.label_column = opt.label_column;
    }
    return spec;
}

core::Dataset load_dataset(const Options& opt, const std::string& path) {
    core::Dataset data = io::read_dataset(file_spec(opt, path));
    return opt.minmax ? core::minmax_scale(data) : data;
}

// "5", "1:100" and comma-separated combinations of both
std::vector<std::size_t> parse_grid(const std::string& text) {
    std::vector<std::size_t> grid;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = std::min(text.find(',', start), text.size());
        const std::string token = text.substr(start, comma - start);
        if (token.empty()) {
            throw UsageError("empty grid token in '" + text + "'");
        }
        const std::size_t colon = token.find(':');
        try {
            if (colon == std::string::npos) {
                grid.push_back(std::stoul(token));
            } else {
                const std::size_t lo = std::stoul(token.substr(0, colon));
                const std::size_t hi = std::stoul(token.substr(colon + 1));
                if (lo > hi) {
                    throw UsageError("descending range '" + token + "'");
                }
                for (std::size_t v = lo; v <= hi; ++v) {
                    grid.push_back(v);
                }
            }
        } catch (const std::invalid_argument&) {
            throw UsageError("bad grid token '" + token + "'");
        } catch (const std::out_of_range&) {
            throw UsageError("grid token '" + token + "' out of range");
        }
        start = comma + 1;
    }
    return grid;
}

detectors::WeightScheme make_scheme(const Options& opt, const std::string& name) {
    detectors::WeightScheme scheme;
    scheme.kind = detectors::weight_kind_from_name(name);
    scheme.s = opt.s;
    scheme.a = opt.a;
    scheme.b = opt.b;
    return scheme;
}

std::vector<std::string> split_names(const std::string& text) {
    std::vector<std::string> names;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = std::min(text.find(',', start), text.size());
        names.push_back(text.substr(start, comma - start));
        start = comma + 1;
    }
    return names;
}

std::vector<std::string> point_ids(std::size_t n) {
    std::vector<std::string> ids(n);
    for (std::size_t i = 0; i < n; ++i) {
        ids[i] = std::to_string(i);
    }
    return ids;
}

void require_sample_size(const Options& opt) {
    if (opt.sample_size == 0) {
        throw UsageError("detector '" + opt.detector + "' requires --sample-size");
    }
}

/// Raw scores for the configured detector. When `need_norm_matrix` is set
/// (or scoring itself requires it), `norm_matrix` receives the closed-world
/// reference matrix that normalization sets are built from.
detectors::ScoreVector compute_scores(const Options& opt, const core::Dataset& data,
                                      std::optional<core::DistanceMatrix>& norm_matrix,
                                      bool need_norm_matrix) {
    const bool open = opt.mode == "open";
    std::optional<core::Dataset> reference;
    if (open) {
        if (opt.reference.empty()) {
            throw UsageError("--mode open requires --reference");
        }
        reference = load_dataset(opt, opt.reference);
    }

    // the reference set is what scores are compared against, so the
    // normalization set is always extracted from reference-vs-reference
    // distances
    const core::Dataset& ref = open ? *reference : data;
    const bool local_density = opt.detector == "slof" || opt.detector == "lof";
    if (!open || need_norm_matrix || local_density) {
        norm_matrix = core::pairwise_distances(ref);
    }
    const core::DistanceMatrix scoring_matrix =
        open ? core::cross_distances(data, ref) : *norm_matrix;

    if (opt.detector == "db") {
        if (open) {
            throw UsageError("detector 'db' is defined closed-world only");
        }
        if (!(opt.delta > 0.0)) {
            throw UsageError("detector 'db' requires --delta > 0");
        }
        const auto flags = detectors::score_db_outlier(scoring_matrix, opt.delta, opt.alpha);
        detectors::ScoreVector scores;
        scores.detector_id = "db";
        scores.scores.assign(flags.begin(), flags.end());
        return scores;
    }
    if (opt.detector == "kthisnn") {
        require_sample_size(opt);
        return detectors::score_kth_isnn(scoring_matrix, opt.k, opt.sample_size, opt.seed);
    }
    if (opt.detector == "snn") {
        require_sample_size(opt);
        return detectors::score_snn(scoring_matrix, opt.sample_size, opt.seed);
    }
    if (opt.detector == "rsnn") {
        require_sample_size(opt);
        return detectors::score_rsnn(scoring_matrix, opt.rounds, opt.sample_size, opt.seed);
    }

    const auto nbrs = core::knn_from_matrix(scoring_matrix, opt.k);
    if (opt.detector == "kthnn") {
        return detectors::score_kthnn(nbrs, opt.k);
    }
    if (opt.detector == "knn") {
        return detectors::score_knn(nbrs, opt.k);
    }
    if (opt.detector == "knnw") {
        return detectors::score_knnw(nbrs, make_scheme(opt, opt.scheme), opt.k);
    }
    // slof / lof need the reference points' own neighbor structure
    if (open) {
        const auto ref_nbrs = core::knn_from_matrix(*norm_matrix, opt.k);
        return opt.detector == "slof" ? detectors::score_slof(nbrs, ref_nbrs, opt.k)
                                      : detectors::score_lof(nbrs, ref_nbrs, opt.k);
    }
    return opt.detector == "slof" ? detectors::score_slof(nbrs, opt.k)
                                  : detectors::score_lof(nbrs, opt.k);
}

int cmd_score(const Options& opt) {
    const core::Dataset data = load_dataset(opt, opt.input);
    std::optional<core::DistanceMatrix> norm_matrix;
    const auto raw = compute_scores(opt, data, norm_matrix, false);
    io::write_scores(opt.output, point_ids(data.size()), raw);
    return 0;
}

int cmd_normalize(const Options& opt) {
    const core::Dataset data = load_dataset(opt, opt.input);
    std::optional<core::DistanceMatrix> norm_matrix;
    const auto raw = compute_scores(opt, data, norm_matrix, true);

    const auto kind = normalization::distribution_kind_from_name(opt.distribution);
    const auto set = normalization::build_normalization_set(
        *norm_matrix, normalization::set_strategy_from_name(opt.strategy), opt.m);
    const auto fitted = normalization::DistanceDistribution::fit(kind, set);
    const auto probabilities = normalization::transform_scores(raw, fitted);

    switch (kind) {
    case normalization::DistributionKind::none:
        std::cerr << "distribution none: scores passed through unchanged\n";
        break;
    case normalization::DistributionKind::normal:
        std::cerr << "fitted normal: mu=" << io::format_double(fitted.mu())
                  << " sigma=" << io::format_double(fitted.sigma()) << '\n';
        break;
    case normalization::DistributionKind::exponential:
        std::cerr << "fitted exponential: lambda=" << io::format_double(fitted.lambda())
                  << '\n';
        break;
    case normalization::DistributionKind::empirical:
        std::cerr << "fitted empirical: n=" << fitted.sample().size()
                  << " min=" << io::format_double(fitted.sample().front())
                  << " max=" << io::format_double(fitted.sample().back()) << '\n';
        break;
    }
    io::write_scores(opt.output, point_ids(data.size()), raw, &probabilities);
    return 0;
}

int cmd_evaluate(const Options& opt) {
    const core::Dataset data = load_dataset(opt, opt.input);
    if (!data.has_labels()) {
        throw InputError("evaluate: input must provide a label column");
    }

    evaluation::BenchmarkConfig config;
    config.k_grid = parse_grid(opt.k_grid);
    for (const auto& name : split_names(opt.schemes)) {
        config.schemes.push_back(make_scheme(opt, name));
    }
    for (const auto& name : split_names(opt.distributions)) {
        config.distributions.push_back(normalization::distribution_kind_from_name(name));
    }
    config.strategy = normalization::set_strategy_from_name(opt.strategy);
    config.m = opt.m;
    config.folds = opt.folds;
    config.seed = opt.seed;

    const auto report = evaluation::benchmark_run(data, config);
    io::write_report(opt.output, report);
    for (const auto& warning : report.warnings) {
        std::cerr << "warning: " << warning << '\n';
    }
    for (const auto& best : report.best_k) {
        std::cout << "best-k scheme=" << best.scheme
                  << " distribution=" << best.distribution << ": k=" << best.k
                  << " mean_auc=" << io::format_double(best.mean_auc) << '\n';
    }
    return 0;
}

int cmd_contrast_scan(const Options& opt) {
    const core::Dataset data = load_dataset(opt, opt.input);
    if (!data.has_labels()) {
        throw InputError("contrast-scan: input must provide a label column");
    }
    const auto& labels = data.labels();

    std::optional<core::DistanceMatrix> norm_matrix;
    const auto raw = compute_scores(opt, data, norm_matrix, true);
    const auto kind = normalization::distribution_kind_from_name(opt.distribution);

    const std::size_t n = data.size();
    std::vector<std::size_t> grid;
    if (opt.m_grid.empty()) {
        for (std::size_t m = 1; m <= std::min<std::size_t>(200, n - 1); ++m) {
            grid.push_back(m);
        }
    } else {
        grid = parse_grid(opt.m_grid);
        std::sort(grid.begin(), grid.end());
        grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    }

    std::vector<double> inlier_raw;
    std::vector<double> outlier_raw;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        (labels[i] == 1 ? outlier_raw : inlier_raw).push_back(raw.scores[i]);
    }
    if (inlier_raw.empty() || outlier_raw.empty()) {
        throw InputError("contrast-scan: both classes must be present in the labels");
    }

    struct Row {
        std::size_t m;
        double ks;
        double w1;
        double f1_threshold;
    };
    std::vector<Row> rows(grid.size());
    const auto scan_nbrs = core::knn_from_matrix(*norm_matrix, grid.back());
    parallel_for(grid.size(), [&](std::size_t g) {
        const std::size_t m = grid[g];
        const auto set = normalization::m_neighborhood_set(scan_nbrs, m);
        const auto fitted = normalization::DistanceDistribution::fit(kind, set);
        const auto transformed = normalization::transform_scores(raw, fitted);
        std::vector<double> inlier;
        std::vector<double> outlier;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            (labels[i] == 1 ? outlier : inlier).push_back(transformed.scores[i]);
        }
        rows[g] = {m,
                   normalization::statistical_distance(inlier, outlier,
                                                       normalization::Measure::ks),
                   normalization::statistical_distance(
                       inlier, outlier, normalization::Measure::wasserstein1),
                   evaluation::f1_optimal_threshold(transformed.scores, labels).threshold};
    });

    std::ostringstream out;
    out << "m,ks,wasserstein1,f1_optimal_threshold\n";
    for (const auto& row : rows) {
        out << row.m << ',' << io::format_double(row.ks) << ','
            << io::format_double(row.w1) << ',' << io::format_double(row.f1_threshold)
            << '\n';
    }
    io::atomic_write(opt.output, out.str());

    const Row* best_ks = &rows.front();
    const Row* best_w1 = &rows.front();
    for (const auto& row : rows) {
        if (row.ks > best_ks->ks) {
            best_ks = &row;
        }
        if (row.w1 > best_w1->w1) {
            best_w1 = &row;
        }
    }
    std::cout << "max ks contrast " << io::format_double(best_ks->ks) << " at m="
              << best_ks->m << '\n';
    std::cout << "max wasserstein1 contrast " << io::format_double(best_w1->w1)
              << " at m=" << best_w1->m << '\n';
    return 0;
}

void add_input_options(CLI::App* cmd, Options& opt) {
    cmd->add_option("-i,--input", opt.input, "input CSV file")->required();
    cmd->add_option("--delimiter", opt.delimiter, "cell delimiter (default ',')");
    cmd->add_flag("--no-header", opt.no_header, "input has no header row");
    cmd->add_option("--label-column", opt.label_column,
                    "label column name or 0-based index");
    cmd->add_flag("--minmax", opt.minmax, "min-max scale each feature column to [0,1]");
    cmd->add_option("-o,--output", opt.output, "output file")->required();
    cmd->add_option("--seed", opt.seed, "random seed (default 42)");
}

void add_detector_options(CLI::App* cmd, Options& opt) {
    cmd->add_option("--detector", opt.detector, "scoring method")
        ->check(CLI::IsMember(
            {"knnw", "kthnn", "knn", "snn", "rsnn", "kthisnn", "lof", "slof", "db"}));
    cmd->add_option("-k,--k", opt.k, "number of neighbors (default 5)");
    cmd->add_option("--scheme", opt.scheme, "kNNW weighting scheme")
        ->check(CLI::IsMember({"max", "mean", "distance", "exponential", "linear", "rank"}));
    cmd->add_option("--s", opt.s, "distance scheme exponent (default 1)");
    cmd->add_option("--a", opt.a, "exponential scheme factor (default 1)");
    cmd->add_option("--b", opt.b, "exponential scheme exponent (default 1)");
    cmd->add_option("--mode", opt.mode, "closed: score the reference set; open: score queries")
        ->check(CLI::IsMember({"closed", "open"}));
    cmd->add_option("--reference", opt.reference, "reference CSV file (open mode)");
    cmd->add_option("--sample-size", opt.sample_size,
                    "sample size for snn/rsnn/kthisnn");
    cmd->add_option("--rounds", opt.rounds, "rsnn rounds (default 10)");
    cmd->add_option("--delta", opt.delta, "db distance threshold");
    cmd->add_option("--alpha", opt.alpha, "db far fraction (default 0.5)");
}

void add_distribution_options(CLI::App* cmd, Options& opt) {
    cmd->add_option("--distribution", opt.distribution,
                    "distance distribution (default empirical)")
        ->check(CLI::IsMember({"none", "normal", "exponential", "empirical"}));
    cmd->add_option("--strategy", opt.strategy, "normalization set (default full)")
        ->check(CLI::IsMember({"full", "triangular", "m_neighborhood"}));
    cmd->add_option("-m,--m", opt.m, "neighborhood size for m_neighborhood");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"distance-based outlier scores with probabilistic normalization"};
    app.require_subcommand(1);
    Options opt;

    CLI::App* score = app.add_subcommand("score", "write raw outlier scores");
    add_input_options(score, opt);
    add_detector_options(score, opt);

    CLI::App* normalize =
        app.add_subcommand("normalize", "write raw scores and outlier probabilities");
    add_input_options(normalize, opt);
    add_detector_options(normalize, opt);
    add_distribution_options(normalize, opt);

    CLI::App* evaluate =
        app.add_subcommand("evaluate", "cross-validated kNNW benchmark report");
    add_input_options(evaluate, opt);
    evaluate->add_option("--k-grid", opt.k_grid, "k values, e.g. 1:100 (default)");
    evaluate->add_option("--schemes", opt.schemes,
                         "comma-separated weighting schemes (default mean)");
    evaluate
        ->add_option("--distributions", opt.distributions,
                     "comma-separated distribution kinds (default empirical)");
    evaluate->add_option("--folds", opt.folds, "stratified folds (default 2)");
    evaluate->add_option("--s", opt.s, "distance scheme exponent (default 1)");
    evaluate->add_option("--a", opt.a, "exponential scheme factor (default 1)");
    evaluate->add_option("--b", opt.b, "exponential scheme exponent (default 1)");
    evaluate->add_option("--strategy", opt.strategy, "normalization set (default full)")
        ->check(CLI::IsMember({"full", "triangular", "m_neighborhood"}));
    evaluate->add_option("-m,--m", opt.m, "neighborhood size for m_neighborhood");

    CLI::App* contrast = app.add_subcommand(
        "contrast-scan", "statistical distance between classes per m-neighborhood");
    add_input_options(contrast, opt);
    add_detector_options(contrast, opt);
    contrast->add_option("--distribution", opt.distribution,
                         "distance distribution (default empirical)")
        ->check(CLI::IsMember({"none", "normal", "exponential", "empirical"}));
    contrast->add_option("--m-grid", opt.m_grid,
                         "m values, e.g. 1:200 (default 1:min(200,n-1))");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << '\n'
                  << "run with --help for usage" << '\n';
        return 2;
    }

    try {
        if (score->parsed()) {
            return cmd_score(opt);
        }
        if (normalize->parsed()) {
            return cmd_normalize(opt);
        }
        if (evaluate->parsed()) {
            return cmd_evaluate(opt);
        }
        return cmd_contrast_scan(opt);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const FitError& e) {
        std::cerr << "fit error: " << e.what() << '\n';
        return 4;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << '\n';
        return 1;
    }
}
