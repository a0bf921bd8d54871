#pragma once

#include "lagnet/correlation.hpp"
#include "lagnet/network.hpp"
#include "lagnet/panel.hpp"
#include "lagnet/spectral.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace lagnet::io {

/// 17 significant digits: round-trips every finite double exactly.
std::string format_double(double value);

/// Reads a price table, auto-detecting the layout from the header: a
/// "date,label,price" header means long format, any other "date,..." header
/// is wide with one column per label. Empty, "NA", or "NaN" wide cells are
/// missing observations. Lines starting with '#' are skipped.
PricePanel read_price_csv(const std::filesystem::path& path);

/// Wide-format prices: date column plus one column per label.
void write_price_csv(const std::filesystem::path& path, const PricePanel& panel);

/// Wide-format returns; weekly panels carry a "# frequency=weekly" comment.
void write_return_csv(const std::filesystem::path& path, const ReturnPanel& panel);
ReturnPanel read_return_csv(const std::filesystem::path& path);

/// Square matrix with labels as header row and first column; doubles as the
/// heatmap grid format.
void write_matrix_csv(const std::filesystem::path& path, const std::vector<SeriesLabel>& labels,
                      const Eigen::MatrixXd& values);

nlohmann::json correlation_to_json(const CorrelationMatrix& corr);
CorrelationMatrix correlation_from_json(const nlohmann::json& j);
nlohmann::json distance_to_json(const DistanceMatrix& dist);
DistanceMatrix distance_from_json(const nlohmann::json& j);

/// eigenvectors[k] holds the components of eigenvector k, aligned with labels.
nlohmann::json spectral_to_json(const SpectralSummary& summary);

nlohmann::json null_to_json(const NullEnsemble& ensemble);

/// Restores everything but the per-simulation samples (not serialized).
NullEnsemble null_from_json(const nlohmann::json& j);
nlohmann::json graph_to_json(const AssetGraph& graph);
AssetGraph graph_from_json(const nlohmann::json& j);
nlohmann::json centrality_to_json(const CentralityReport& report);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

/// Rows of (reference,target,lag,correlation).
void write_lag_profiles_csv(const std::filesystem::path& path,
                            const std::vector<LagProfile>& profiles);

/// Rows of (label,x,y,...).
void write_embedding_csv(const std::filesystem::path& path, const Embedding& embedding);

/// Rows of (label_a,label_b,distance).
void write_graph_edges_csv(const std::filesystem::path& path, const AssetGraph& graph);

/// Equal-width histogram of `values` with the Marchenko-Pastur density
/// sampled at bin midpoints (zero when q <= 1, where the density law does
/// not apply). Columns: bin_lo,bin_hi,count,mp_density.
void write_histogram_csv(const std::filesystem::path& path, const std::vector<double>& values,
                         int bins, double q);

/// Dense sampling of the Marchenko-Pastur density over its support.
void write_mp_curve_csv(const std::filesystem::path& path, double q, int points);

} // namespace lagnet::io
