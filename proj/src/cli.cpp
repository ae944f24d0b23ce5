#include "qforge/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include "qforge/config.hpp"
#include "qforge/estimators.hpp"
#include "qforge/format.hpp"
#include "qforge/simulation.hpp"

namespace qforge::cli {

namespace {

struct SimulateOptions {
    std::string config_path;
    std::string out_path;
    unsigned threads = 1;
    std::optional<std::uint64_t> seed;
};

std::optional<std::uint64_t> seed_from_env() {
    const char* raw = std::getenv("QFORGE_SEED");
    if (raw == nullptr || *raw == '\0') {
        return std::nullopt;
    }
    const std::string_view text(raw);
    std::uint64_t value = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw ConfigError("QFORGE_SEED is not an unsigned 64-bit integer: '" + std::string(text) + "'");
    }
    return value;
}

int cmd_simulate(const SimulateOptions& opt, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    try {
        cfg = load_run_config(opt.config_path);
        if (opt.seed) {
            cfg.seed = *opt.seed;
        } else if (auto env = seed_from_env()) {
            cfg.seed = *env;
        }
    } catch (const ConfigError& e) {
        err << "error: " << opt.config_path << ": " << e.what() << '\n';
        return kExitConfig;
    }

    const auto cells = build_cells(cfg);
    std::vector<CellResult> results;
    try {
        results = run_grid(cells, opt.threads);
    } catch (const CellError& e) {
        const auto& c = cells[e.index()];
        err << "error: cell " << e.index() << " (" << c.dist.name() << ", " << c.estimator.name()
            << ", n=" << c.n << ", q=" << format_double(c.q.value()) << "): " << e.what() << '\n';
        return kExitCell;
    }

    const std::string path = !opt.out_path.empty() ? opt.out_path : cfg.output_path;
    if (path.empty() || path == "-") {
        write_results_csv(out, results);
        return kExitOk;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
        err << "error: cannot open '" << path << "' for writing\n";
        return kExitConfig;
    }
    write_results_csv(file, results);
    file.close();
    if (!file) {
        err << "error: failed writing '" << path << "'\n";
        return kExitConfig;
    }
    err << "wrote " << results.size() << " rows to " << path << '\n';
    return kExitOk;
}

int cmd_analytic_bias(int n, const std::string& grid_text, std::ostream& out, std::ostream& err) {
    std::vector<double> grid;
    try {
        grid = parse_q_grid(grid_text);
        if (n < 2) {
            throw ParameterError("--n must be >= 2");
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    out << "q,bias_q7,frac_f\n";
    for (double q : grid) {
        const QuantileLevel level(q);
        out << format_double(q) << ',' << format_double(q7_exp_bias(level, n)) << ','
            << format_double(expon_frac(level, n)) << '\n';
    }
    return kExitOk;
}

int cmd_zero_bias(int n, std::ostream& out, std::ostream& err) {
    if (n < 2) {
        err << "error: --n must be >= 2\n";
        return kExitConfig;
    }
    const auto bracket = find_zero_bias_bracket(n);
    if (!bracket) {
        err << "error: type-7 bias does not change sign on 0.01..0.99 for n=" << n << '\n';
        return kExitNumerical;
    }
    try {
        out << format_double(zero_bias_quantile_search(n, bracket->first, bracket->second)) << '\n';
    } catch (const NumericalError& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitOk;
}

int cmd_weights(int n, int anchor, int tail, double q_raw, std::ostream& out, std::ostream& err) {
    WeightVector w;
    std::string equivalent = "none";
    try {
        const QuantileLevel q(q_raw);
        w = optimal_weights(n, anchor, tail, q);
        if (anchor == 0 && tail == n) {
            equivalent = "MLE";
        } else if (n >= 2 && tail == 1 && anchor == interpolation_anchor(q, n)) {
            equivalent = "Q10";
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    out << "n " << n << '\n' << "i " << anchor << '\n' << "m " << tail << '\n';
    out << "q " << format_double(q_raw) << '\n';
    if (anchor >= 1) {
        out << "f " << format_double(w.anchor_weight) << '\n';
    }
    for (std::size_t k = 0; k < w.tail_weights.size(); ++k) {
        out << "f_" << (k + 1) << ' ' << format_double(w.tail_weights[k]) << '\n';
    }
    out << "beta " << format_double(w.beta) << '\n';
    out << "anchor_bias " << format_double(w.anchor_bias) << '\n';
    out << "variance " << format_double(w.analytic_variance) << '\n';
    out << "expectation " << format_double(w.expected_value()) << '\n';
    out << "equivalent " << equivalent << '\n';
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sample quantile estimators and Monte Carlo bias/variance benchmarks",
                 "quantile-forge"};
    app.require_subcommand(1);

    SimulateOptions sim;
    std::uint64_t seed_flag = 0;
    auto* simulate = app.add_subcommand("simulate", "Run a Monte Carlo grid from a JSON config");
    simulate->add_option("--config", sim.config_path, "Run configuration (JSON)")->required();
    simulate->add_option("--out", sim.out_path, "CSV output path, '-' for stdout (overrides config output_path)");
    simulate->add_option("--threads", sim.threads, "Worker threads, 0 = all cores")
        ->default_val(1);
    auto* seed_opt =
        simulate->add_option("--seed", seed_flag, "Seed (overrides QFORGE_SEED and config)");

    int bias_n = 0;
    std::string bias_grid;
    auto* analytic = app.add_subcommand("analytic-bias",
                                        "Exponential bias of type 7 and the Q10 factor per q");
    analytic->add_option("--n", bias_n, "Sample size")->required();
    analytic->add_option("--q-grid", bias_grid, "start:stop:step")->required();

    int zero_n = 0;
    auto* zero = app.add_subcommand("zero-bias", "Quantile where type 7 is exponentially unbiased");
    zero->add_option("--n", zero_n, "Sample size")->required();

    int w_n = 0;
    int w_i = 0;
    int w_m = 0;
    double w_q = 0.0;
    auto* weights = app.add_subcommand("weights", "Optimal Q11 weights and analytic variance");
    weights->add_option("--n", w_n, "Sample size")->required();
    weights->add_option("--i", w_i, "Anchor order statistic (0 = support minimum)")->required();
    weights->add_option("--m", w_m, "Number of order statistics above the anchor")->required();
    weights->add_option("--q", w_q, "Quantile level in (0, 1)")->required();

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitConfig;
    }

    if (simulate->parsed()) {
        if (seed_opt->count() > 0) {
            sim.seed = seed_flag;
        }
        return cmd_simulate(sim, out, err);
    }
    if (analytic->parsed()) {
        return cmd_analytic_bias(bias_n, bias_grid, out, err);
    }
    if (zero->parsed()) {
        return cmd_zero_bias(zero_n, out, err);
    }
    return cmd_weights(w_n, w_i, w_m, w_q, out, err);
}

}  // namespace qforge::cli
