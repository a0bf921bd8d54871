#pragma once

#include "lagnet/correlation.hpp"
#include "lagnet/panel.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace lagnet {

/// Metric distances d = sqrt(2(1-c)); symmetric, zero diagonal, in [0, 2].
struct DistanceMatrix {
    std::vector<SeriesLabel> labels;
    Eigen::MatrixXd values;

    Eigen::Index dim() const { return values.rows(); }
};

struct GraphEdge {
    Eigen::Index a = 0; // indices into AssetGraph::nodes, a < b
    Eigen::Index b = 0;
    double distance = 0.0;
};

/// Undirected graph keeping exactly the pairs with distance strictly below
/// the threshold; nodes without any such edge are not retained.
struct AssetGraph {
    double threshold = 0.0;
    std::vector<SeriesLabel> nodes;
    std::vector<GraphEdge> edges;

    std::vector<std::vector<Eigen::Index>> adjacency() const;
};

/// Low-dimensional configuration fitted to a distance matrix.
/// stress = sqrt(sum (d - dhat)^2 / sum d^2) over off-diagonal pairs;
/// stress_history records it per majorization iteration (non-increasing).
struct Embedding {
    std::vector<SeriesLabel> labels;
    Eigen::MatrixXd coordinates; // |labels| x m, centered at the origin
    double stress = 0.0;
    std::vector<double> stress_history;
};

struct CentralityReport {
    std::vector<SeriesLabel> nodes;
    std::vector<int> degree;
    Eigen::VectorXd eigenvector; // unit norm on the largest component, 0 elsewhere
    std::vector<double> betweenness;
    std::vector<SeriesLabel> degree_ranking;
    std::vector<SeriesLabel> eigenvector_ranking;
    std::vector<SeriesLabel> betweenness_ranking;
};

/// Entrywise d = sqrt(2(1-c)); rejects entries outside [-1,1] beyond 1e-12.
DistanceMatrix distance_matrix(const CorrelationMatrix& corr);

/// Smallest pairwise distance seen across n_sims column-shuffled copies of
/// the panel: distances below it are reachable by pure noise.
double noise_distance_threshold(const ReturnPanel& panel, int n_sims, std::uint64_t seed,
                                CorrelationMethod method = CorrelationMethod::pearson);

/// Strict-threshold filter; isolated nodes dropped.
AssetGraph asset_graph(const DistanceMatrix& dist, double threshold);

/// Degree, eigenvector centrality (power iteration on the largest connected
/// component), and betweenness (unweighted shortest paths, fractional credit
/// across ties, endpoints excluded, raw counts), plus per-measure rankings
/// with ties broken by label.
CentralityReport centralities(const AssetGraph& graph);

/// Classical-scaling start refined by stress majorization until the relative
/// stress change drops below 1e-9 (at most 500 iterations). The seed only
/// perturbs degenerate starting configurations with coincident points.
Embedding mds_embed(const DistanceMatrix& dist, int m, std::uint64_t seed);

} // namespace lagnet
