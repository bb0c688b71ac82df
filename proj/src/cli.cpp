#include "kroncoef/cli.hpp"

#include "kroncoef/bloading.hpp"
#include "kroncoef/cache.hpp"
#include "kroncoef/characters.hpp"
#include "kroncoef/classify.hpp"
#include "kroncoef/errors.hpp"
#include "kroncoef/kronecker.hpp"
#include "kroncoef/partition.hpp"
#include "kroncoef/pipeline.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace kroncoef {

namespace {

std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

// Computes or loads the heavyweight objects, writing cache files only when
// a cache directory is configured. Corrupt or version-mismatched cache
// files abort the command rather than being recomputed in place.
struct Toolbox {
    const RunConfig& config;
    std::ostream& err;

    std::filesystem::path cache_file(const std::string& stem) const {
        return *config.cache_dir / (stem + "_n" + std::to_string(config.n) + ".bin");
    }

    template <class Load, class Compute, class Store>
    auto cached(const std::string& stem, Load&& load, Compute&& compute, Store&& store) {
        if (config.cache_dir) {
            const std::filesystem::path path = cache_file(stem);
            if (std::filesystem::exists(path)) return load(path);
            auto value = compute();
            std::filesystem::create_directories(*config.cache_dir);
            store(value, path);
            return value;
        }
        return compute();
    }

    CharacterTable chartable(bool verify = true) {
        return cached(
            "chartable", [](const std::filesystem::path& p) { return load_character_table(p); },
            [&] { return character_table(config.n, verify, config.threads); },
            [](const CharacterTable& t, const std::filesystem::path& p) {
                save_character_table(t, p);
            });
    }

    KroneckerTensor tensor() {
        return cached(
            "tensor", [](const std::filesystem::path& p) { return load_tensor(p); },
            [&] { return kronecker_tensor(config.n, config.threads); },
            [](const KroneckerTensor& t, const std::filesystem::path& p) { save_tensor(t, p); });
    }

    BLoadingTable btable() {
        return cached(
            "btable", [](const std::filesystem::path& p) { return load_b_table(p); },
            [&] { return b_loadings(config.n, config.threads); },
            [](const BLoadingTable& t, const std::filesystem::path& p) { save_b_table(t, p); });
    }
};

void print_confusion(std::ostream& out, const ClassifierReport& r) {
    out << "confusion (rows truth zero/nonzero, cols predicted zero/nonzero)\n";
    out << "  " << r.confusion[0][0] << ' ' << r.confusion[0][1] << '\n';
    out << "  " << r.confusion[1][0] << ' ' << r.confusion[1][1] << '\n';
}

int cmd_partitions(const RunConfig& config, std::ostream& out) {
    for (const Partition& p : enumerate_partitions(config.n)) out << to_string(p) << '\n';
    return 0;
}

int cmd_chartable(const RunConfig& config, bool skip_verify, std::ostream& out,
                  std::ostream& err) {
    Toolbox box{config, err};
    const CharacterTable t = box.chartable(false);
    out << "n " << t.n << "\np " << t.p() << '\n';
    if (!skip_verify) {
        const OrthogonalityReport report = verify_orthogonality(t);
        out << "orthogonality " << (report.passed ? "pass" : "fail") << '\n';
        if (!report.passed) {
            err << report.message << '\n';
            return 2;
        }
    }
    if (config.out_path) save_character_table(t, *config.out_path);
    return 0;
}

int cmd_tensor(const RunConfig& config, std::ostream& out, std::ostream& err) {
    Toolbox box{config, err};
    const KroneckerTensor t = box.tensor();
    out << "n " << t.n << "\np " << t.p << '\n';
    out << "canonical_triples " << t.canonical_count() << '\n';
    out << "total_triples " << t.total_triples << '\n';
    out << "nonzero_ratio " << fixed(nonzero_ratio(t), 6) << '\n';
    if (config.out_path) save_tensor(t, *config.out_path);
    return 0;
}

int cmd_bload(const RunConfig& config, std::ostream& out, std::ostream& err) {
    Toolbox box{config, err};
    const BLoadingTable t = box.btable();
    const std::vector<Partition> parts = enumerate_partitions(config.n);
    out << "n " << t.n << '\n';
    out << "eigenvalue " << fixed(t.eigenvalue, 6) << '\n';
    out << "mean_b3 " << fixed(t.mean_b3, 4) << '\n';
    out << "std_b3 " << fixed(t.std_b3, 4) << '\n';
    for (int i = 0; i < t.p(); ++i)
        out << i << "  " << fixed(t.b[i], 2) << "  " << to_string(parts[static_cast<std::size_t>(i)])
            << '\n';
    return 0;
}

int cmd_bstar(const RunConfig& config, std::ostream& out, std::ostream& err) {
    Toolbox box{config, err};
    const KroneckerTensor tensor = box.tensor();
    const BLoadingTable table = box.btable();
    const BStarResult r = b_star(tensor, table);
    if (!r.has_zero) {
        out << "no_zero_coefficient\n";
        return 0;
    }
    out << "b_star " << fixed(r.value, 6) << '\n';
    out << "argmin " << r.i << ' ' << r.j << ' ' << r.k << '\n';
    return 0;
}

int cmd_bstar_scan(const RunConfig& config, std::uint64_t budget, std::ostream& out,
                   std::ostream& err) {
    Toolbox box{config, err};
    const BLoadingTable table = box.btable();
    const CharacterTable chars = box.chartable();
    const BStarScanResult r = b_star_scan(table, chars, budget, config.threads);
    out << (r.found ? "b_star " : "lower_bound ") << fixed(r.value, 6) << '\n';
    out << "evaluations " << r.evaluations << '\n';
    if (r.found) out << "argmin " << r.i << ' ' << r.j << ' ' << r.k << '\n';
    return 0;
}

int cmd_count_below(const RunConfig& config, double threshold, std::ostream& out,
                    std::ostream& err) {
    Toolbox box{config, err};
    const BLoadingTable table = box.btable();
    const CountBelowResult r = count_below(table, threshold, config.threads);
    out << "count " << r.count << '\n';
    out << "total " << r.total << '\n';
    out << "ratio " << fixed(static_cast<double>(r.count) / static_cast<double>(r.total), 6)
        << '\n';
    return 0;
}

int cmd_export(const RunConfig& config, std::ostream& out, std::ostream& err) {
    if (!config.out_path) throw std::invalid_argument("export: --out is required");
    Toolbox box{config, err};
    const KroneckerTensor tensor = box.tensor();
    const BLoadingTable table = box.btable();
    std::optional<CharacterTable> chars;
    if (config.verify) chars = box.chartable();
    const std::uint64_t rows =
        export_dataset(tensor, table, parse_feature_mode(config.feature_mode),
                       parse_export_format(config.format), *config.out_path,
                       chars ? &*chars : nullptr, config.seed);
    out << "rows " << rows << '\n';
    return 0;
}

int cmd_hist(const RunConfig& config, int bins, std::ostream& out, std::ostream& err) {
    Toolbox box{config, err};
    const KroneckerTensor tensor = box.tensor();
    const BLoadingTable table = box.btable();
    const LabeledDataset data = make_dataset(tensor, table);

    std::vector<double> values;
    std::vector<std::uint64_t> weights;
    std::vector<std::uint8_t> labels;
    values.reserve(data.rows.size());
    weights.reserve(data.rows.size());
    labels.reserve(data.rows.size());
    for (const DataRow& row : data.rows) {
        values.push_back(row.b);
        weights.push_back(row.weight);
        labels.push_back(row.nonzero);
    }
    const Histogram h = histogram(values, weights, labels, bins);
    if (config.out_path) {
        std::ofstream file(*config.out_path, std::ios::trunc);
        if (!file)
            throw std::runtime_error("cannot open " + config.out_path->string() + " for writing");
        write_histogram_csv(file, h);
    } else {
        write_histogram_csv(out, h);
    }
    return 0;
}

int cmd_eval(const RunConfig& config, const std::string& predictor, double split,
             std::ostream& out, std::ostream& err) {
    Toolbox box{config, err};
    const KroneckerTensor tensor = box.tensor();
    const BLoadingTable table = box.btable();
    const LabeledDataset data = make_dataset(tensor, table);

    ClassifierReport report;
    if (predictor == "f1") {
        report = evaluate(make_f1_predictor(table.mean_b3), data, config.threads);
        report.boundary = table.mean_b3;
    } else if (predictor == "f2") {
        report = evaluate(make_f2_predictor(), data, config.threads);
        report.boundary = 7.27970193 / 0.08550718;
    } else if (predictor == "f3") {
        report = evaluate(make_f3_predictor(), data, config.threads);
        report.boundary = locate_boundary(f3_symbolic, 10.0, 300.0);
    } else if (predictor == "snn") {
        report = evaluate(make_snn_predictor(), data, config.threads);
        report.boundary = locate_boundary(fixed_snn, 0.0, 300.0);
    } else if (predictor == "threshold") {
        const ThresholdResult stump = best_threshold(data);
        report = evaluate(make_threshold_predictor(stump.threshold), data, config.threads);
        report.boundary = stump.threshold;
    } else if (predictor == "logistic") {
        const LogisticFit fit = fit_logistic(data, split, config.seed);
        report = fit.report;
        out << "predictor logistic\nn " << config.n << '\n';
        out << "slope " << fixed(fit.slope, 8) << '\n';
        out << "intercept " << fixed(fit.intercept, 8) << '\n';
        out << "accuracy " << fixed(report.accuracy, 4) << '\n';
        out << "boundary " << fixed(report.boundary, 4) << '\n';
        print_confusion(out, report);
        return 0;
    } else if (predictor == "bayes") {
        out << "predictor bayes\nn " << config.n << '\n';
        out << "accuracy " << fixed(bayes_upper_bound(data), 4) << '\n';
        return 0;
    } else {
        throw std::invalid_argument("unknown predictor: " + predictor);
    }

    out << "predictor " << predictor << "\nn " << config.n << '\n';
    out << "accuracy " << fixed(report.accuracy, 4) << '\n';
    out << "boundary " << fixed(report.boundary, 4) << '\n';
    print_confusion(out, report);
    return 0;
}

int cmd_cv(const RunConfig& config, int folds, std::ostream& out, std::ostream& err) {
    Toolbox box{config, err};
    const KroneckerTensor tensor = box.tensor();
    const BLoadingTable table = box.btable();
    const LabeledDataset data = make_dataset(tensor, table);
    const CvResult r = cross_validate(data, folds, config.seed);
    out << "folds " << folds << '\n';
    out << "mean " << fixed(r.mean, 4) << '\n';
    out << "std " << fixed(r.stddev, 4) << '\n';
    return 0;
}

int cmd_report(const RunConfig& config, std::ostream& out, std::ostream& err) {
    Toolbox box{config, err};
    const KroneckerTensor tensor = box.tensor();
    const BLoadingTable table = box.btable();
    const LabeledDataset data = make_dataset(tensor, table);

    out << "kroncoef report\n";
    out << "n " << config.n << '\n';
    out << "seed " << config.seed << '\n';
    out << "p " << tensor.p << '\n';
    out << "total_triples " << tensor.total_triples << '\n';
    out << "nonzero_ratio " << fixed(nonzero_ratio(tensor), 6) << '\n';
    out << "perron_eigenvalue " << fixed(table.eigenvalue, 6) << '\n';
    out << "mean_b3 " << fixed(table.mean_b3, 4) << '\n';
    out << "std_b3 " << fixed(table.std_b3, 4) << '\n';

    const BStarResult star = b_star(tensor, table);
    if (star.has_zero) {
        out << "b_star " << fixed(star.value, 6) << '\n';
        const CountBelowResult below = count_below(table, star.value, config.threads);
        out << "count_below_b_star " << below.count << '\n';
        out << "count_below_ratio "
            << fixed(static_cast<double>(below.count) / static_cast<double>(below.total), 6)
            << '\n';
    } else {
        out << "b_star none\n";
    }

    const auto line = [&](const char* name, const ClassifierReport& r, double boundary) {
        out << name << " accuracy " << fixed(r.accuracy, 4) << " boundary " << fixed(boundary, 4)
            << '\n';
    };
    line("f1_kan", evaluate(make_f1_predictor(table.mean_b3), data, config.threads),
         table.mean_b3);
    line("f2_logistic", evaluate(make_f2_predictor(), data, config.threads),
         7.27970193 / 0.08550718);
    line("f3_symbolic", evaluate(make_f3_predictor(), data, config.threads),
         locate_boundary(f3_symbolic, 10.0, 300.0));
    line("fixed_snn", evaluate(make_snn_predictor(), data, config.threads),
         locate_boundary(fixed_snn, 0.0, 300.0));

    const ThresholdResult stump = best_threshold(data);
    out << "best_threshold accuracy " << fixed(stump.accuracy, 4) << " threshold "
        << fixed(stump.threshold, 4) << '\n';

    const LogisticFit fit = fit_logistic(data, 0.66, config.seed);
    out << "logistic_fit accuracy " << fixed(fit.report.accuracy, 4) << " boundary "
        << fixed(fit.report.boundary, 4) << " slope " << fixed(fit.slope, 8) << " intercept "
        << fixed(fit.intercept, 8) << '\n';

    const CvResult cv = cross_validate(data, 10, config.seed);
    out << "cv10 mean " << fixed(cv.mean, 4) << " std " << fixed(cv.stddev, 4) << '\n';
    out << "bayes_upper_bound " << fixed(bayes_upper_bound(data), 4) << '\n';

    // Empirical check of b-loading symmetry under partition conjugation.
    double gap = 0.0;
    const std::vector<Partition> parts = enumerate_partitions(config.n);
    for (int i = 0; i < table.p(); ++i) {
        const int conj = index_of(parts[static_cast<std::size_t>(i)].conjugate(), config.n);
        gap = std::max(gap, std::abs(table.b[i] - table.b[conj]));
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", gap);
    out << "conjugation_gap " << buf << '\n';
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact Kronecker coefficients of S_n and b-loading classifiers"};
    app.require_subcommand(1);

    RunConfig config;
    std::uint64_t budget = 10'000'000;
    double threshold = 0.0;
    double split = 0.66;
    int bins = 60;
    int folds = 10;
    bool skip_verify = false;
    std::string predictor;
    std::string cache_dir_flag;

    const auto add_common = [&](CLI::App* sub, bool needs_n = true) {
        if (needs_n) sub->add_option("-n,--n", config.n, "partition size n")->required();
        sub->add_option("--threads", config.threads, "worker threads (0 = hardware)");
        sub->add_option("--seed", config.seed, "seed for all randomized steps");
        sub->add_option("--cache-dir", cache_dir_flag,
                        "cache directory (overrides KRONCOEF_CACHE)");
        return sub;
    };

    auto* partitions_cmd = add_common(app.add_subcommand("partitions", "list partitions of n"));
    auto* chartable_cmd = add_common(app.add_subcommand("chartable", "character table of S_n"));
    chartable_cmd->add_option("--out", config.out_path, "write binary cache to this path");
    chartable_cmd->add_flag("--no-verify", skip_verify, "skip the orthogonality self-check");
    auto* tensor_cmd = add_common(app.add_subcommand("tensor", "full Kronecker tensor"));
    tensor_cmd->add_option("--out", config.out_path, "write binary cache to this path");
    auto* bload_cmd = add_common(app.add_subcommand("bload", "b-loadings of P(n)"));
    auto* bstar_cmd = add_common(app.add_subcommand("bstar", "exact b_star from the full tensor"));
    auto* scan_cmd =
        add_common(app.add_subcommand("bstar-scan", "b_star by ascending-b lazy scan"));
    scan_cmd->add_option("--budget", budget, "max coefficient evaluations");
    auto* count_cmd =
        add_common(app.add_subcommand("count-below", "ordered triples with b(t) < threshold"));
    count_cmd->add_option("--threshold", threshold, "strict upper bound on b(t)")->required();
    auto* export_cmd = add_common(app.add_subcommand("export", "dataset export"));
    export_cmd->add_option("--mode", config.feature_mode, "full3n | ends18 | bsum1");
    export_cmd->add_option("--format", config.format, "csv | jsonl");
    export_cmd->add_option("--out", config.out_path, "output file")->required();
    export_cmd->add_flag("--verify", config.verify, "recompute a 1% sample from scratch");
    auto* hist_cmd = add_common(app.add_subcommand("hist", "histogram of b(t) by class"));
    hist_cmd->add_option("--bins", bins, "bin count");
    hist_cmd->add_option("--out", config.out_path, "output file (default stdout)");
    auto* eval_cmd = add_common(app.add_subcommand("eval", "evaluate a decision function"));
    eval_cmd
        ->add_option("--predictor", predictor, "f1 | f2 | f3 | snn | threshold | logistic | bayes")
        ->required();
    eval_cmd->add_option("--split", split, "train fraction for --predictor logistic");
    auto* cv_cmd = add_common(app.add_subcommand("cv", "k-fold stump cross-validation"));
    cv_cmd->add_option("--folds", folds, "fold count");
    auto* report_cmd =
        add_common(app.add_subcommand("report", "all headline numbers for one n"));

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n' << app.help();
        return 1;
    }
    for (const CLI::App* sub : app.get_subcommands()) config.subcommand = sub->get_name();

    if (!cache_dir_flag.empty()) {
        config.cache_dir = cache_dir_flag;
    } else if (const char* env = std::getenv("KRONCOEF_CACHE"); env && *env) {
        config.cache_dir = std::filesystem::path(env);
    }

    try {
        if (partitions_cmd->parsed()) return cmd_partitions(config, out);
        if (chartable_cmd->parsed()) return cmd_chartable(config, skip_verify, out, err);
        if (tensor_cmd->parsed()) return cmd_tensor(config, out, err);
        if (bload_cmd->parsed()) return cmd_bload(config, out, err);
        if (bstar_cmd->parsed()) return cmd_bstar(config, out, err);
        if (scan_cmd->parsed()) return cmd_bstar_scan(config, budget, out, err);
        if (count_cmd->parsed()) return cmd_count_below(config, threshold, out, err);
        if (export_cmd->parsed()) return cmd_export(config, out, err);
        if (hist_cmd->parsed()) return cmd_hist(config, bins, out, err);
        if (eval_cmd->parsed()) return cmd_eval(config, predictor, split, out, err);
        if (cv_cmd->parsed()) return cmd_cv(config, folds, out, err);
        if (report_cmd->parsed()) return cmd_report(config, out, err);
        err << "no subcommand given\n" << app.help();
        return 1;
    } catch (const InternalConsistencyError& e) {
        err << "internal consistency failure: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace kroncoef
