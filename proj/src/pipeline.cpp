#include "lagnet/pipeline.hpp"

#include "lagnet/errors.hpp"
#include "lagnet/io.hpp"
#include "lagnet/network.hpp"
#include "lagnet/rng.hpp"
#include "lagnet/spectral.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <iostream>
#include <map>

namespace lagnet {

ReturnPanel slice_panel(const ReturnPanel& panel, const Date& from, const Date& to) {
    std::vector<Eigen::Index> rows;
    for (Eigen::Index t = 0; t < panel.rows(); ++t) {
        const Date& d = panel.dates()[static_cast<std::size_t>(t)];
        if (!(d < from) && !(to < d)) {
            rows.push_back(t);
        }
    }
    if (rows.empty()) {
        throw ValidationError("date range " + format_date(from) + ".." + format_date(to) +
                              " selects no rows");
    }
    std::vector<Date> dates;
    dates.reserve(rows.size());
    Eigen::MatrixXd values(static_cast<Eigen::Index>(rows.size()), panel.cols());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        dates.push_back(panel.dates()[static_cast<std::size_t>(rows[r])]);
        values.row(static_cast<Eigen::Index>(r)) = panel.returns().row(rows[r]);
    }
    return ReturnPanel(std::move(dates), panel.labels(), std::move(values), panel.frequency());
}

namespace {

namespace fs = std::filesystem;

std::string format_threshold(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", value);
    return buf;
}

bool safe_split_name(const std::string& name) {
    if (name.empty()) {
        return false;
    }
    return std::all_of(name.begin(), name.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_' || c == '-';
    });
}

void validate_config(const PipelineConfig& config) {
    if (config.out_dir.empty()) {
        throw ValidationError("output directory not set");
    }
    if (config.input_path.empty() == !config.use_synthetic) {
        throw ValidationError("exactly one of an input path or the synthetic source is required");
    }
    if (config.max_lag < 0) {
        throw ValidationError("max lag must be nonnegative");
    }
    if (config.weekly && config.max_lag > 0) {
        throw ValidationError("weekly averaging requires max lag 0");
    }
    if (config.lag_min > config.lag_max) {
        throw ValidationError("lag range is empty");
    }
    if (config.stages.null_ensemble && config.null_sims < 1) {
        throw ValidationError("null ensemble needs at least 1 simulation");
    }
    if (config.stages.mode_removal && config.mode_rounds < 1) {
        throw ValidationError("mode removal needs at least 1 round");
    }
    if (config.stages.network) {
        if (config.threshold_sims < 1) {
            throw ValidationError("noise threshold needs at least 1 simulation");
        }
        if (config.thresholds.empty()) {
            throw ValidationError("no graph thresholds configured");
        }
        for (std::size_t k = 0; k < config.thresholds.size(); ++k) {
            if (config.thresholds[k] <= 0.0) {
                throw ValidationError("graph thresholds must be positive");
            }
            if (k > 0 && config.thresholds[k] <= config.thresholds[k - 1]) {
                throw ValidationError("graph thresholds must be strictly ascending");
            }
        }
    }
    if (config.stages.embedding && config.embed_dim < 1) {
        throw ValidationError("embedding dimension must be >= 1");
    }
    if (config.histogram_bins < 1) {
        throw ValidationError("histogram needs at least 1 bin");
    }
    std::vector<std::string> names{"full"};
    for (const auto& split : config.splits) {
        if (!safe_split_name(split.name)) {
            throw ValidationError("split name '" + split.name +
                                  "' must be nonempty alphanumeric/_/-");
        }
        if (std::find(names.begin(), names.end(), split.name) != names.end()) {
            throw ValidationError("duplicate split name '" + split.name + "'");
        }
        if (split.to < split.from) {
            throw ValidationError("split '" + split.name + "' has an empty date range");
        }
        names.push_back(split.name);
    }
}

nlohmann::json config_to_json(const PipelineConfig& config) {
    return nlohmann::json{
        {"input_path", config.input_path},
        {"use_synthetic", config.use_synthetic},
        {"synthetic",
         {{"n_west", config.synthetic.n_west},
          {"n_east", config.synthetic.n_east},
          {"common_loading", config.synthetic.common_loading},
          {"leadlag_loading", config.synthetic.leadlag_loading},
          {"east_sameday_loading", config.synthetic.east_sameday_loading},
          {"noise_scale", config.synthetic.noise_scale},
          {"days", config.synthetic.days},
          {"seed", config.synthetic.seed}}},
        {"align_mode", config.policy.mode == AlignMode::intersection ? "intersection"
                       : config.policy.mode == AlignMode::union_fill_forward
                           ? "union-fill-forward"
                           : "union-zero-return"},
        {"max_consecutive_fill", config.policy.max_consecutive_fill},
        {"weekly", config.weekly},
        {"splits",
         [&] {
             nlohmann::json splits = nlohmann::json::array();
             for (const auto& split : config.splits) {
                 splits.push_back({{"name", split.name},
                                   {"from", format_date(split.from)},
                                   {"to", format_date(split.to)}});
             }
             return splits;
         }()},
        {"method", method_name(config.method)},
        {"max_lag", config.max_lag},
        {"benchmark", config.benchmark},
        {"lag_min", config.lag_min},
        {"lag_max", config.lag_max},
        {"null_sims", config.null_sims},
        {"mode_rounds", config.mode_rounds},
        {"thresholds", config.thresholds},
        {"threshold_sims", config.threshold_sims},
        {"embed_dim", config.embed_dim},
        {"histogram_bins", config.histogram_bins},
        {"master_seed", config.master_seed},
        {"out_dir", config.out_dir},
        {"stages",
         {{"lag_profiles", config.stages.lag_profiles},
          {"spectrum", config.stages.spectrum},
          {"null_ensemble", config.stages.null_ensemble},
          {"mode_removal", config.stages.mode_removal},
          {"network", config.stages.network},
          {"embedding", config.stages.embedding}}}};
}

std::vector<double> eigenvalue_list(const SpectralSummary& summary) {
    return {summary.eigenvalues.data(), summary.eigenvalues.data() + summary.eigenvalues.size()};
}

/// Tracks written files so an aborted run leaves no partial outputs.
class ArtifactWriter {
public:
    ArtifactWriter(fs::path root, std::vector<ArtifactEntry>& entries)
        : root_(std::move(root)), entries_(entries) {}

    fs::path file(const std::string& relative, const std::string& stage,
                  const std::string& split) {
        const fs::path path = root_ / relative;
        fs::create_directories(path.parent_path());
        entries_.push_back(ArtifactEntry{relative, stage, split});
        written_.push_back(path);
        return path;
    }

    void remove_all() {
        for (const auto& path : written_) {
            std::error_code ec;
            fs::remove(path, ec);
        }
        // Prune directories this run may have created, deepest first.
        std::vector<fs::path> dirs;
        for (const auto& path : written_) {
            for (fs::path dir = path.parent_path(); dir != root_ && dir.has_parent_path();
                 dir = dir.parent_path()) {
                dirs.push_back(dir);
            }
        }
        std::sort(dirs.begin(), dirs.end(),
                  [](const fs::path& a, const fs::path& b) { return a.string() > b.string(); });
        dirs.erase(std::unique(dirs.begin(), dirs.end()), dirs.end());
        for (const auto& dir : dirs) {
            std::error_code ec;
            if (fs::is_directory(dir, ec) && fs::is_empty(dir, ec)) {
                fs::remove(dir, ec);
            }
        }
    }

private:
    fs::path root_;
    std::vector<ArtifactEntry>& entries_;
    std::vector<fs::path> written_;
};

} // namespace

PipelineResult run_pipeline(const PipelineConfig& config) {
    validate_config(config);
    const fs::path root(config.out_dir);
    fs::create_directories(root);

    PipelineResult result;
    ArtifactWriter writer(root, result.artifacts);
    std::map<std::string, std::uint64_t> stage_seeds;

    std::string current_stage = "ingest";
    try {
        // ---- ingest ----
        PricePanel prices = config.use_synthetic ? generate_synthetic(config.synthetic)
                                                 : io::read_price_csv(config.input_path);
        if (config.use_synthetic) {
            io::write_price_csv(writer.file("prices.csv", "ingest", ""), prices);
        }
        const PricePanel aligned = align_calendars(prices, config.policy);
        ReturnPanel returns = log_returns(aligned);
        if (config.weekly) {
            returns = weekly_average(returns);
        }
        io::write_return_csv(writer.file("returns.csv", "ingest", ""), returns);

        std::vector<DateSplit> splits{DateSplit{"full", returns.dates().front(),
                                                returns.dates().back()}};
        splits.insert(splits.end(), config.splits.begin(), config.splits.end());

        for (const auto& split : splits) {
            const std::string& dir = split.name;
            current_stage = "correlate[" + split.name + "]";
            const ReturnPanel panel = slice_panel(returns, split.from, split.to);
            const CorrelationMatrix corr = correlation_matrix(panel, config.method);
            io::write_matrix_csv(writer.file(dir + "/correlation.csv", "correlate", split.name),
                                 corr.labels, corr.values);
            io::write_json(writer.file(dir + "/correlation.json", "correlate", split.name),
                           io::correlation_to_json(corr));

            const ReturnPanel lag_panel = lag_augment(panel, config.max_lag);
            const CorrelationMatrix lag_corr = correlation_matrix(lag_panel, config.method);
            io::write_matrix_csv(writer.file(dir + "/correlation_lag.csv", "correlate", split.name),
                                 lag_corr.labels, lag_corr.values);
            io::write_json(writer.file(dir + "/correlation_lag.json", "correlate", split.name),
                           io::correlation_to_json(lag_corr));

            if (config.stages.lag_profiles) {
                current_stage = "profiles[" + split.name + "]";
                const SeriesLabel reference = config.benchmark.empty()
                                                  ? panel.labels().front()
                                                  : SeriesLabel::parse(config.benchmark);
                const auto profiles =
                    cross_correlation(panel, reference, panel.labels(), config.lag_min,
                                      config.lag_max, config.method);
                io::write_lag_profiles_csv(
                    writer.file(dir + "/lag_profiles.csv", "profiles", split.name), profiles);
            }

            SpectralSummary spectrum;
            SpectralSummary lag_spectrum;
            const bool need_spectra = config.stages.spectrum || config.stages.mode_removal;
            if (need_spectra) {
                spectrum = eigendecompose(corr);
                lag_spectrum = eigendecompose(lag_corr);
            }

            if (config.stages.null_ensemble) {
                current_stage = "null[" + split.name + "]";
                const std::uint64_t seed_plain =
                    stage_seed(config.master_seed, "null/" + split.name + "/plain");
                // identity augmentation must reproduce the plain outputs byte
                // for byte, so lag-0 runs reuse the plain stream
                const std::uint64_t seed_lag =
                    config.max_lag == 0
                        ? seed_plain
                        : stage_seed(config.master_seed, "null/" + split.name + "/lag");
                stage_seeds["null/" + split.name + "/plain"] = seed_plain;
                stage_seeds["null/" + split.name + "/lag"] = seed_lag;
                const NullEnsemble null_plain =
                    shuffle_null(panel, config.null_sims, seed_plain, config.method);
                const NullEnsemble null_lag =
                    shuffle_null(lag_panel, config.null_sims, seed_lag, config.method);
                io::write_json(writer.file(dir + "/null.json", "null", split.name),
                               io::null_to_json(null_plain));
                io::write_json(writer.file(dir + "/null_lag.json", "null", split.name),
                               io::null_to_json(null_lag));
                const double q_plain = static_cast<double>(panel.rows()) /
                                       static_cast<double>(panel.cols());
                if (q_plain > 1.0) {
                    io::write_mp_curve_csv(writer.file(dir + "/mp_curve.csv", "null", split.name),
                                           q_plain, 200);
                }
                const double q_lag = static_cast<double>(lag_panel.rows()) /
                                     static_cast<double>(lag_panel.cols());
                if (q_lag > 1.0) {
                    io::write_mp_curve_csv(
                        writer.file(dir + "/mp_curve_lag.csv", "null", split.name), q_lag, 200);
                }
                if (need_spectra) {
                    spectrum = classify_eigenvalues(std::move(spectrum), null_plain);
                    lag_spectrum = classify_eigenvalues(std::move(lag_spectrum), null_lag);
                }
            }

            if (config.stages.spectrum) {
                current_stage = "spectrum[" + split.name + "]";
                io::write_json(writer.file(dir + "/spectrum.json", "spectrum", split.name),
                               io::spectral_to_json(spectrum));
                io::write_json(writer.file(dir + "/spectrum_lag.json", "spectrum", split.name),
                               io::spectral_to_json(lag_spectrum));
                io::write_histogram_csv(
                    writer.file(dir + "/spectrum_hist.csv", "spectrum", split.name),
                    eigenvalue_list(spectrum), config.histogram_bins,
                    static_cast<double>(panel.rows()) / static_cast<double>(panel.cols()));
                io::write_histogram_csv(
                    writer.file(dir + "/spectrum_lag_hist.csv", "spectrum", split.name),
                    eigenvalue_list(lag_spectrum), config.histogram_bins,
                    static_cast<double>(lag_panel.rows()) /
                        static_cast<double>(lag_panel.cols()));
            }

            if (config.stages.mode_removal) {
                current_stage = "modes[" + split.name + "]";
                ReturnPanel residual = panel;
                SpectralSummary round_spectrum = spectrum;
                for (int round = 1; round <= config.mode_rounds; ++round) {
                    const Eigen::VectorXd mode =
                        market_mode_series(residual, round_spectrum.eigenvectors.col(0));
                    ModeRemovalResult removal = remove_mode(residual, mode);
                    std::vector<std::string> dropped;
                    residual = drop_constant_columns(removal.residual_panel, &dropped);
                    for (const auto& label : dropped) {
                        std::cerr << "lagnet: warning: dropped constant residual column '"
                                  << label << "'\n";
                    }
                    const CorrelationMatrix residual_corr =
                        correlation_matrix(residual, config.method);
                    round_spectrum = eigendecompose(residual_corr);
                    const std::string tag = std::to_string(round);
                    io::write_json(writer.file(dir + "/residual_spectrum_" + tag + ".json",
                                               "modes", split.name),
                                   io::spectral_to_json(round_spectrum));
                    io::write_matrix_csv(writer.file(dir + "/residual_correlation_" + tag + ".csv",
                                                     "modes", split.name),
                                         residual_corr.labels, residual_corr.values);
                }
            }

            DistanceMatrix dist;
            if (config.stages.network || config.stages.embedding) {
                dist = distance_matrix(lag_corr);
            }

            if (config.stages.network) {
                current_stage = "network[" + split.name + "]";
                io::write_matrix_csv(writer.file(dir + "/distance_lag.csv", "network", split.name),
                                     dist.labels, dist.values);
                io::write_json(writer.file(dir + "/distance_lag.json", "network", split.name),
                               io::distance_to_json(dist));
                const std::string seed_name = "threshold/" + split.name;
                const std::uint64_t seed = stage_seed(config.master_seed, seed_name);
                stage_seeds[seed_name] = seed;
                const double noise_distance =
                    noise_distance_threshold(lag_panel, config.threshold_sims, seed, config.method);
                io::write_json(writer.file(dir + "/noise_threshold.json", "network", split.name),
                               nlohmann::json{{"threshold", noise_distance},
                                              {"n_sims", config.threshold_sims},
                                              {"seed", seed},
                                              {"method", method_name(config.method)}});
                for (const double threshold : config.thresholds) {
                    const std::string tag = format_threshold(threshold);
                    const AssetGraph graph = asset_graph(dist, threshold);
                    io::write_json(
                        writer.file(dir + "/graph_T" + tag + ".json", "network", split.name),
                        io::graph_to_json(graph));
                    io::write_graph_edges_csv(
                        writer.file(dir + "/graph_T" + tag + "_edges.csv", "network", split.name),
                        graph);
                    if (!graph.nodes.empty()) {
                        io::write_json(writer.file(dir + "/centrality_T" + tag + ".json",
                                                   "network", split.name),
                                       io::centrality_to_json(centralities(graph)));
                    }
                }
            }

            if (config.stages.embedding) {
                current_stage = "embed[" + split.name + "]";
                const std::string seed_name = "embed/" + split.name;
                const std::uint64_t seed = stage_seed(config.master_seed, seed_name);
                stage_seeds[seed_name] = seed;
                const Embedding embedding = mds_embed(dist, config.embed_dim, seed);
                io::write_embedding_csv(
                    writer.file(dir + "/embedding.csv", "embed", split.name), embedding);
            }
        }

        current_stage = "manifest";
        std::sort(result.artifacts.begin(), result.artifacts.end(),
                  [](const ArtifactEntry& a, const ArtifactEntry& b) { return a.path < b.path; });
        nlohmann::json artifacts = nlohmann::json::array();
        for (const auto& entry : result.artifacts) {
            artifacts.push_back(nlohmann::json{
                {"path", entry.path}, {"stage", entry.stage}, {"split", entry.split}});
        }
        nlohmann::json manifest{{"config", config_to_json(config)},
                                {"stage_seeds", stage_seeds},
                                {"artifacts", std::move(artifacts)}};
        result.manifest_path = root / "manifest.json";
        io::write_json(result.manifest_path, manifest);
        return result;
    } catch (const ValidationError& e) {
        writer.remove_all();
        throw ValidationError("stage " + current_stage + ": " + e.what());
    } catch (const NumericalError& e) {
        writer.remove_all();
        throw NumericalError("stage " + current_stage + ": " + e.what());
    } catch (const std::exception& e) {
        writer.remove_all();
        throw ValidationError("stage " + current_stage + ": " + e.what());
    }
}

} // namespace lagnet
