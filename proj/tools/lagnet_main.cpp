// Command-line front end: one subcommand per pipeline operation plus `run`
// for the whole chain driven by an INI config (flags override file values).

#include "lagnet/errors.hpp"
#include "lagnet/io.hpp"
#include "lagnet/network.hpp"
#include "lagnet/pipeline.hpp"
#include "lagnet/spectral.hpp"
#include "lagnet/synthetic.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

namespace {

using namespace lagnet;

AlignMode parse_align_mode(const std::string& name) {
    if (name == "intersection") {
        return AlignMode::intersection;
    }
    if (name == "union-fill-forward") {
        return AlignMode::union_fill_forward;
    }
    if (name == "union-zero-return") {
        return AlignMode::union_zero_return;
    }
    throw ValidationError("unknown alignment mode '" + name + "'");
}

/// "name=YYYY-MM-DD:YYYY-MM-DD" -> DateSplit.
DateSplit parse_split(const std::string& text) {
    const auto eq = text.find('=');
    const auto colon = text.find(':', eq == std::string::npos ? 0 : eq);
    if (eq == std::string::npos || colon == std::string::npos) {
        throw ValidationError("split '" + text + "' must look like name=FROM:TO");
    }
    DateSplit split;
    split.name = text.substr(0, eq);
    split.from = parse_date(text.substr(eq + 1, colon - eq - 1));
    split.to = parse_date(text.substr(colon + 1));
    return split;
}

struct SynthArgs {
    SyntheticSpec spec;
    std::string out;
};

struct IngestArgs {
    std::string input;
    std::string out;
    std::string mode = "union-fill-forward";
    int max_fill = 5;
    bool weekly = false;
};

struct CorrelateArgs {
    std::string input;
    std::string out;
    std::string csv;
    std::string method = "pearson";
    int max_lag = 0;
};

struct SpectrumArgs {
    std::string corr;
    std::string null_path;
    std::string out;
    std::string hist;
    int bins = 50;
};

struct NullArgs {
    std::string input;
    std::string out;
    std::string method = "pearson";
    int max_lag = 0;
    int sims = 100;
    std::uint64_t seed = 1;
};

struct RemoveModeArgs {
    std::string input;
    std::string out;
    std::string method = "pearson";
    int rounds = 1;
};

struct DistanceArgs {
    std::string corr;
    std::string out;
    std::string csv;
};

struct GraphArgs {
    std::string dist;
    std::string out;
    std::string edges;
    double threshold = 0.0;
};

struct CentralityArgs {
    std::string graph;
    std::string out;
};

struct EmbedArgs {
    std::string dist;
    std::string out;
    int dim = 2;
    std::uint64_t seed = 1;
};

struct RunArgs {
    PipelineConfig config;
    std::string config_file;
    std::string mode = "union-fill-forward";
    std::string method = "pearson";
    std::vector<std::string> splits;
};

// Applies `key = value` pairs from an INI file to the subcommand's options.
// A `[section]` header prefixes the keys that follow (`[data]` + `synthetic`
// addresses `--data.synthetic`). Options already given on the command line
// keep their values; unknown keys are rejected so a typo cannot silently
// fall back to a default.
void apply_config_file(CLI::App& cmd, const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("config file not readable: " + path);
    }
    std::set<std::string> seen;
    std::string section;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = CLI::detail::trim_copy(line);
        if (text.empty() || text.front() == '#' || text.front() == ';') {
            continue;
        }
        const std::string where = path + ":" + std::to_string(line_no);
        if (text.front() == '[') {
            if (text.back() != ']' || text.size() < 3) {
                throw ValidationError(where + ": malformed section header");
            }
            section = CLI::detail::trim_copy(text.substr(1, text.size() - 2));
            if (section.empty()) {
                throw ValidationError(where + ": empty section name");
            }
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw ValidationError(where + ": expected 'key = value'");
        }
        const std::string key = CLI::detail::trim_copy(text.substr(0, eq));
        std::string value = CLI::detail::trim_copy(text.substr(eq + 1));
        if (key.empty()) {
            throw ValidationError(where + ": empty key");
        }
        if (value.size() >= 2 && ((value.front() == '"' && value.back() == '"') ||
                                  (value.front() == '\'' && value.back() == '\''))) {
            value = value.substr(1, value.size() - 2);
        }
        const std::string full = section.empty() ? key : section + "." + key;
        if (full == "config") {
            throw ValidationError(where + ": 'config' cannot be set from a config file");
        }
        if (!seen.insert(full).second) {
            throw ValidationError(where + ": duplicate config key '" + full + "'");
        }
        CLI::Option* opt = cmd.get_option_no_throw("--" + full);
        if (opt == nullptr) {
            throw ValidationError(where + ": unknown config key '" + full + "'");
        }
        if (opt->count() > 0) {
            continue;  // the command line wins
        }
        try {
            if (opt->get_items_expected_max() > 1) {
                const auto tokens = CLI::detail::split_up(value);
                if (tokens.empty()) {
                    throw ValidationError(where + ": empty value for '" + full + "'");
                }
                for (const std::string& token : tokens) {
                    opt->add_result(token);
                }
            } else {
                opt->add_result(value);
            }
            opt->run_callback();
        } catch (const CLI::Error& e) {
            throw ValidationError(where + ": config key '" + full + "': " + e.what());
        }
    }
}

void run_synth(const SynthArgs& args) {
    io::write_price_csv(args.out, generate_synthetic(args.spec));
}

void run_ingest(const IngestArgs& args) {
    CalendarPolicy policy{parse_align_mode(args.mode), args.max_fill};
    const PricePanel aligned = align_calendars(io::read_price_csv(args.input), policy);
    ReturnPanel returns = log_returns(aligned);
    if (args.weekly) {
        returns = weekly_average(returns);
    }
    io::write_return_csv(args.out, returns);
}

void run_correlate(const CorrelateArgs& args) {
    ReturnPanel panel = io::read_return_csv(args.input);
    if (args.max_lag > 0) {
        panel = lag_augment(panel, args.max_lag);
    }
    const CorrelationMatrix corr = correlation_matrix(panel, parse_method(args.method));
    io::write_json(args.out, io::correlation_to_json(corr));
    if (!args.csv.empty()) {
        io::write_matrix_csv(args.csv, corr.labels, corr.values);
    }
}

void run_spectrum(const SpectrumArgs& args) {
    const CorrelationMatrix corr = io::correlation_from_json(io::read_json(args.corr));
    SpectralSummary summary = eigendecompose(corr);
    if (!args.null_path.empty()) {
        summary = classify_eigenvalues(std::move(summary),
                                       io::null_from_json(io::read_json(args.null_path)));
    }
    io::write_json(args.out, io::spectral_to_json(summary));
    if (!args.hist.empty()) {
        const std::vector<double> values(summary.eigenvalues.data(),
                                         summary.eigenvalues.data() + summary.eigenvalues.size());
        const double q = static_cast<double>(corr.sample_size) / static_cast<double>(corr.dim());
        io::write_histogram_csv(args.hist, values, args.bins, q);
    }
}

void run_null(const NullArgs& args) {
    const ReturnPanel panel = lag_augment(io::read_return_csv(args.input), args.max_lag);
    const NullEnsemble ensemble =
        shuffle_null(panel, args.sims, args.seed, parse_method(args.method));
    io::write_json(args.out, io::null_to_json(ensemble));
}

void run_remove_mode(const RemoveModeArgs& args) {
    ReturnPanel panel = io::read_return_csv(args.input);
    const CorrelationMethod method = parse_method(args.method);
    for (int round = 0; round < args.rounds; ++round) {
        const SpectralSummary summary = eigendecompose(correlation_matrix(panel, method));
        const Eigen::VectorXd mode = market_mode_series(panel, summary.eigenvectors.col(0));
        ModeRemovalResult removal = remove_mode(panel, mode);
        std::vector<std::string> dropped;
        panel = drop_constant_columns(removal.residual_panel, &dropped);
        for (const auto& label : dropped) {
            std::cerr << "lagnet: warning: dropped constant residual column '" << label << "'\n";
        }
    }
    io::write_return_csv(args.out, panel);
}

void run_distance(const DistanceArgs& args) {
    const DistanceMatrix dist =
        distance_matrix(io::correlation_from_json(io::read_json(args.corr)));
    io::write_json(args.out, io::distance_to_json(dist));
    if (!args.csv.empty()) {
        io::write_matrix_csv(args.csv, dist.labels, dist.values);
    }
}

void run_graph(const GraphArgs& args) {
    const AssetGraph graph =
        asset_graph(io::distance_from_json(io::read_json(args.dist)), args.threshold);
    io::write_json(args.out, io::graph_to_json(graph));
    if (!args.edges.empty()) {
        io::write_graph_edges_csv(args.edges, graph);
    }
}

void run_centrality(const CentralityArgs& args) {
    const AssetGraph graph = io::graph_from_json(io::read_json(args.graph));
    io::write_json(args.out, io::centrality_to_json(centralities(graph)));
}

void run_embed(const EmbedArgs& args) {
    const DistanceMatrix dist = io::distance_from_json(io::read_json(args.dist));
    io::write_embedding_csv(args.out, mds_embed(dist, args.dim, args.seed));
}

void run_run(RunArgs& args) {
    args.config.policy.mode = parse_align_mode(args.mode);
    args.config.method = parse_method(args.method);
    for (const auto& text : args.splits) {
        args.config.splits.push_back(parse_split(text));
    }
    if (args.config.out_dir.empty()) {
        if (const char* env = std::getenv("LAGNET_OUT_DIR")) {
            args.config.out_dir = env;
        }
    }
    const PipelineResult result = run_pipeline(args.config);
    std::cout << result.manifest_path.string() << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Correlation-network analysis of lag-augmented return panels"};
    app.require_subcommand(1);

    SynthArgs synth_args;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic two-block price panel");
    synth->add_option("--out", synth_args.out, "Output wide price CSV")->required();
    synth->add_option("--n-west", synth_args.spec.n_west, "Western series count");
    synth->add_option("--n-east", synth_args.spec.n_east, "Eastern series count");
    synth->add_option("--common", synth_args.spec.common_loading, "Western same-day loading");
    synth->add_option("--leadlag", synth_args.spec.leadlag_loading, "Eastern previous-day loading");
    synth->add_option("--east-sameday", synth_args.spec.east_sameday_loading,
                      "Eastern same-day loading");
    synth->add_option("--noise", synth_args.spec.noise_scale, "Idiosyncratic noise scale");
    synth->add_option("--days", synth_args.spec.days, "Number of return days");
    synth->add_option("--seed", synth_args.spec.seed, "Generator seed");
    synth->callback([&] { run_synth(synth_args); });

    IngestArgs ingest_args;
    auto* ingest = app.add_subcommand("ingest", "Prices CSV -> aligned log-return panel");
    ingest->add_option("--input", ingest_args.input, "Price CSV (long or wide)")->required();
    ingest->add_option("--out", ingest_args.out, "Output return CSV")->required();
    ingest->add_option("--mode", ingest_args.mode,
                       "intersection|union-fill-forward|union-zero-return");
    ingest->add_option("--max-fill", ingest_args.max_fill, "Longest forward-fill run");
    ingest->add_flag("--weekly", ingest_args.weekly, "Average returns per ISO week");
    ingest->callback([&] { run_ingest(ingest_args); });

    CorrelateArgs correlate_args;
    auto* correlate = app.add_subcommand("correlate", "Correlation matrix of a return panel");
    correlate->add_option("--input", correlate_args.input, "Return CSV")->required();
    correlate->add_option("--out", correlate_args.out, "Output JSON")->required();
    correlate->add_option("--csv", correlate_args.csv, "Also write the matrix grid CSV");
    correlate->add_option("--method", correlate_args.method, "pearson|spearman");
    correlate->add_option("--max-lag", correlate_args.max_lag, "Lag-augment before correlating");
    correlate->callback([&] { run_correlate(correlate_args); });

    SpectrumArgs spectrum_args;
    auto* spectrum = app.add_subcommand("spectrum", "Eigendecomposition of a correlation matrix");
    spectrum->add_option("--corr", spectrum_args.corr, "Correlation JSON")->required();
    spectrum->add_option("--null", spectrum_args.null_path, "Null ensemble JSON for classification");
    spectrum->add_option("--out", spectrum_args.out, "Output JSON")->required();
    spectrum->add_option("--hist", spectrum_args.hist, "Also write an eigenvalue histogram CSV");
    spectrum->add_option("--bins", spectrum_args.bins, "Histogram bins");
    spectrum->callback([&] { run_spectrum(spectrum_args); });

    NullArgs null_args;
    auto* null_cmd = app.add_subcommand("null", "Column-shuffle null eigenvalue ensemble");
    null_cmd->add_option("--input", null_args.input, "Return CSV")->required();
    null_cmd->add_option("--out", null_args.out, "Output JSON")->required();
    null_cmd->add_option("--max-lag", null_args.max_lag,
                         "Lag-augment before shuffling, matching the correlate step");
    null_cmd->add_option("--sims", null_args.sims, "Number of simulations");
    null_cmd->add_option("--seed", null_args.seed, "Ensemble seed");
    null_cmd->add_option("--method", null_args.method, "pearson|spearman");
    null_cmd->callback([&] { run_null(null_args); });

    RemoveModeArgs remove_args;
    auto* remove = app.add_subcommand("remove-mode", "Iterated market-mode regression removal");
    remove->add_option("--input", remove_args.input, "Return CSV")->required();
    remove->add_option("--out", remove_args.out, "Output residual return CSV")->required();
    remove->add_option("--rounds", remove_args.rounds, "Removal rounds");
    remove->add_option("--method", remove_args.method, "pearson|spearman");
    remove->callback([&] { run_remove_mode(remove_args); });

    DistanceArgs distance_args;
    auto* distance = app.add_subcommand("distance", "Correlation -> metric distance matrix");
    distance->add_option("--corr", distance_args.corr, "Correlation JSON")->required();
    distance->add_option("--out", distance_args.out, "Output JSON")->required();
    distance->add_option("--csv", distance_args.csv, "Also write the matrix grid CSV");
    distance->callback([&] { run_distance(distance_args); });

    GraphArgs graph_args;
    auto* graph = app.add_subcommand("graph", "Threshold asset graph from distances");
    graph->add_option("--dist", graph_args.dist, "Distance JSON")->required();
    graph->add_option("--threshold", graph_args.threshold, "Strict distance threshold")->required();
    graph->add_option("--out", graph_args.out, "Output JSON")->required();
    graph->add_option("--edges", graph_args.edges, "Also write an edge-list CSV");
    graph->callback([&] { run_graph(graph_args); });

    CentralityArgs centrality_args;
    auto* centrality = app.add_subcommand("centrality", "Degree/eigenvector/betweenness report");
    centrality->add_option("--graph", centrality_args.graph, "Graph JSON")->required();
    centrality->add_option("--out", centrality_args.out, "Output JSON")->required();
    centrality->callback([&] { run_centrality(centrality_args); });

    EmbedArgs embed_args;
    auto* embed = app.add_subcommand("embed", "Stress-minimizing low-dimensional embedding");
    embed->add_option("--dist", embed_args.dist, "Distance JSON")->required();
    embed->add_option("--dim", embed_args.dim, "Embedding dimension");
    embed->add_option("--seed", embed_args.seed, "Jitter seed for degenerate starts");
    embed->add_option("--out", embed_args.out, "Output coordinates CSV")->required();
    embed->callback([&] { run_embed(embed_args); });

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "Full pipeline from a config file");
    run->add_option("--config", run_args.config_file,
                    "INI config file; command-line flags override file values");
    run->add_option("--data.input", run_args.config.input_path, "Price CSV path");
    run->add_option("--data.synthetic", run_args.config.use_synthetic,
                    "Generate the input panel instead of reading one");
    run->add_option("--data.mode", run_args.mode,
                    "intersection|union-fill-forward|union-zero-return");
    run->add_option("--data.max_fill", run_args.config.policy.max_consecutive_fill,
                    "Longest forward-fill run");
    run->add_option("--data.weekly", run_args.config.weekly, "Average returns per ISO week");
    run->add_option("--data.splits", run_args.splits,
                    "Date splits as name=FROM:TO (analyzed besides 'full')");
    run->add_option("--synth.n_west", run_args.config.synthetic.n_west, "Western series count");
    run->add_option("--synth.n_east", run_args.config.synthetic.n_east, "Eastern series count");
    run->add_option("--synth.common", run_args.config.synthetic.common_loading,
                    "Western same-day loading");
    run->add_option("--synth.leadlag", run_args.config.synthetic.leadlag_loading,
                    "Eastern previous-day loading");
    run->add_option("--synth.east_sameday", run_args.config.synthetic.east_sameday_loading,
                    "Eastern same-day loading");
    run->add_option("--synth.noise", run_args.config.synthetic.noise_scale,
                    "Idiosyncratic noise scale");
    run->add_option("--synth.days", run_args.config.synthetic.days, "Number of return days");
    run->add_option("--synth.seed", run_args.config.synthetic.seed, "Generator seed");
    run->add_option("--correlate.method", run_args.method, "pearson|spearman");
    run->add_option("--correlate.max_lag", run_args.config.max_lag, "Lag-augmentation depth");
    run->add_option("--profiles.enabled", run_args.config.stages.lag_profiles);
    run->add_option("--profiles.benchmark", run_args.config.benchmark,
                    "Reference label (default: first series)");
    run->add_option("--profiles.lag_min", run_args.config.lag_min);
    run->add_option("--profiles.lag_max", run_args.config.lag_max);
    run->add_option("--spectrum.enabled", run_args.config.stages.spectrum);
    run->add_option("--spectrum.bins", run_args.config.histogram_bins);
    run->add_option("--null.enabled", run_args.config.stages.null_ensemble);
    run->add_option("--null.sims", run_args.config.null_sims);
    run->add_option("--modes.enabled", run_args.config.stages.mode_removal);
    run->add_option("--modes.rounds", run_args.config.mode_rounds);
    run->add_option("--network.enabled", run_args.config.stages.network);
    run->add_option("--network.thresholds", run_args.config.thresholds,
                    "Ascending positive graph thresholds");
    run->add_option("--network.threshold_sims", run_args.config.threshold_sims);
    run->add_option("--embed.enabled", run_args.config.stages.embedding);
    run->add_option("--embed.dim", run_args.config.embed_dim);
    run->add_option("--seed", run_args.config.master_seed, "Master seed for stage streams");
    run->add_option("--out.dir", run_args.config.out_dir,
                    "Output directory (default: $LAGNET_OUT_DIR)");
    run->callback([&] {
        if (!run_args.config_file.empty()) {
            apply_config_file(*run, run_args.config_file);
        }
        run_run(run_args);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "lagnet: validation: " << e.what() << '\n';
        return 1;
    } catch (const lagnet::ValidationError& e) {
        std::cerr << "lagnet: validation: " << e.what() << '\n';
        return 1;
    } catch (const lagnet::NumericalError& e) {
        std::cerr << "lagnet: numerical: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "lagnet: validation: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
