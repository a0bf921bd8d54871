#include "lagnet/network.hpp"

#include "lagnet/errors.hpp"
#include "lagnet/rng.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

namespace lagnet {

DistanceMatrix distance_matrix(const CorrelationMatrix& corr) {
    const Eigen::MatrixXd& c = corr.values;
    const Eigen::Index n = c.rows();
    Eigen::MatrixXd d(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const double value = c(i, j);
            if (value < -1.0 - 1e-12 || value > 1.0 + 1e-12) {
                throw ValidationError("correlation entry outside [-1, 1] at (" +
                                      corr.labels[i].str() + ", " + corr.labels[j].str() + ")");
            }
            d(i, j) = i == j ? 0.0 : std::sqrt(std::max(0.0, 2.0 * (1.0 - value)));
        }
    }
    return DistanceMatrix{corr.labels, std::move(d)};
}

double noise_distance_threshold(const ReturnPanel& panel, int n_sims, std::uint64_t seed,
                                CorrelationMethod method) {
    if (n_sims < 1) {
        throw ValidationError("need at least 1 simulation");
    }
    if (panel.cols() < 2) {
        throw ValidationError("need at least 2 series");
    }
    double max_corr = -1.0;
    for (int sim = 0; sim < n_sims; ++sim) {
        auto rng = make_rng(seed, static_cast<std::uint64_t>(sim));
        Eigen::MatrixXd shuffled = panel.returns();
        for (Eigen::Index i = 0; i < shuffled.cols(); ++i) {
            shuffle_in_place(std::span<double>(shuffled.col(i).data(),
                                               static_cast<std::size_t>(shuffled.rows())),
                             rng);
        }
        ReturnPanel sim_panel(panel.dates(), panel.labels(), std::move(shuffled),
                              panel.frequency());
        const CorrelationMatrix corr = correlation_matrix(sim_panel, method);
        for (Eigen::Index i = 0; i < corr.dim(); ++i) {
            for (Eigen::Index j = i + 1; j < corr.dim(); ++j) {
                max_corr = std::max(max_corr, corr.values(i, j));
            }
        }
    }
    // Distance is monotone decreasing in correlation, so the minimum
    // simulated distance corresponds to the maximum simulated correlation.
    return std::sqrt(std::max(0.0, 2.0 * (1.0 - max_corr)));
}

AssetGraph asset_graph(const DistanceMatrix& dist, double threshold) {
    const Eigen::Index n = dist.dim();
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    std::vector<std::tuple<Eigen::Index, Eigen::Index, double>> raw_edges;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            if (dist.values(i, j) < threshold) {
                raw_edges.emplace_back(i, j, dist.values(i, j));
                used[static_cast<std::size_t>(i)] = true;
                used[static_cast<std::size_t>(j)] = true;
            }
        }
    }
    AssetGraph graph;
    graph.threshold = threshold;
    std::vector<Eigen::Index> remap(static_cast<std::size_t>(n), -1);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (used[static_cast<std::size_t>(i)]) {
            remap[static_cast<std::size_t>(i)] = static_cast<Eigen::Index>(graph.nodes.size());
            graph.nodes.push_back(dist.labels[static_cast<std::size_t>(i)]);
        }
    }
    graph.edges.reserve(raw_edges.size());
    for (const auto& [i, j, w] : raw_edges) {
        graph.edges.push_back(
            GraphEdge{remap[static_cast<std::size_t>(i)], remap[static_cast<std::size_t>(j)], w});
    }
    return graph;
}

std::vector<std::vector<Eigen::Index>> AssetGraph::adjacency() const {
    std::vector<std::vector<Eigen::Index>> adj(nodes.size());
    for (const auto& edge : edges) {
        adj[static_cast<std::size_t>(edge.a)].push_back(edge.b);
        adj[static_cast<std::size_t>(edge.b)].push_back(edge.a);
    }
    return adj;
}

namespace {

/// Component id per node, by breadth-first sweep in node order.
std::vector<int> label_components(const std::vector<std::vector<Eigen::Index>>& adj) {
    std::vector<int> component(adj.size(), -1);
    int next = 0;
    for (std::size_t start = 0; start < adj.size(); ++start) {
        if (component[start] >= 0) {
            continue;
        }
        std::deque<Eigen::Index> queue{static_cast<Eigen::Index>(start)};
        component[start] = next;
        while (!queue.empty()) {
            const Eigen::Index v = queue.front();
            queue.pop_front();
            for (Eigen::Index w : adj[static_cast<std::size_t>(v)]) {
                if (component[static_cast<std::size_t>(w)] < 0) {
                    component[static_cast<std::size_t>(w)] = next;
                    queue.push_back(w);
                }
            }
        }
        ++next;
    }
    return component;
}

/// Principal eigenvector of the component's adjacency block, by power
/// iteration on A + I (primitive for a connected graph, so convergence is
/// guaranteed). Returns the component-restricted unit vector.
Eigen::VectorXd component_eigenvector(const std::vector<std::vector<Eigen::Index>>& adj,
                                      const std::vector<Eigen::Index>& members) {
    const std::size_t k = members.size();
    std::vector<Eigen::Index> local(adj.size(), -1);
    for (std::size_t i = 0; i < k; ++i) {
        local[static_cast<std::size_t>(members[i])] = static_cast<Eigen::Index>(i);
    }
    Eigen::VectorXd v = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(k),
                                                  1.0 / std::sqrt(static_cast<double>(k)));
    Eigen::VectorXd av(static_cast<Eigen::Index>(k));
    const auto apply_adjacency = [&](const Eigen::VectorXd& x, Eigen::VectorXd& out) {
        out.setZero();
        for (std::size_t i = 0; i < k; ++i) {
            for (Eigen::Index w : adj[static_cast<std::size_t>(members[i])]) {
                out[static_cast<Eigen::Index>(i)] += x[local[static_cast<std::size_t>(w)]];
            }
        }
    };
    constexpr int max_iterations = 200000;
    for (int iter = 0; iter < max_iterations; ++iter) {
        apply_adjacency(v, av);
        const double rayleigh = v.dot(av);
        if ((av - rayleigh * v).cwiseAbs().maxCoeff() <= 1e-12) {
            return v;
        }
        av += v; // power step uses A + I
        v = av / av.norm();
    }
    throw NumericalError("eigenvector centrality power iteration did not converge");
}

/// Betweenness by breadth-first shortest-path counting with fractional
/// credit, halved for undirected double counting; endpoints excluded.
std::vector<double> brandes_betweenness(const std::vector<std::vector<Eigen::Index>>& adj) {
    const std::size_t n = adj.size();
    std::vector<double> centrality(n, 0.0);
    std::vector<double> sigma(n), delta(n);
    std::vector<int> dist(n);
    std::vector<std::vector<Eigen::Index>> preds(n);
    std::vector<Eigen::Index> stack;
    std::deque<Eigen::Index> queue;
    for (std::size_t s = 0; s < n; ++s) {
        std::fill(sigma.begin(), sigma.end(), 0.0);
        std::fill(dist.begin(), dist.end(), -1);
        for (auto& p : preds) {
            p.clear();
        }
        stack.clear();
        sigma[s] = 1.0;
        dist[s] = 0;
        queue.push_back(static_cast<Eigen::Index>(s));
        while (!queue.empty()) {
            const Eigen::Index v = queue.front();
            queue.pop_front();
            stack.push_back(v);
            for (Eigen::Index w : adj[static_cast<std::size_t>(v)]) {
                if (dist[static_cast<std::size_t>(w)] < 0) {
                    dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
                    queue.push_back(w);
                }
                if (dist[static_cast<std::size_t>(w)] == dist[static_cast<std::size_t>(v)] + 1) {
                    sigma[static_cast<std::size_t>(w)] += sigma[static_cast<std::size_t>(v)];
                    preds[static_cast<std::size_t>(w)].push_back(v);
                }
            }
        }
        std::fill(delta.begin(), delta.end(), 0.0);
        for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
            const std::size_t w = static_cast<std::size_t>(*it);
            for (Eigen::Index v : preds[w]) {
                delta[static_cast<std::size_t>(v)] +=
                    sigma[static_cast<std::size_t>(v)] / sigma[w] * (1.0 + delta[w]);
            }
            if (w != s) {
                centrality[w] += delta[w];
            }
        }
    }
    for (double& c : centrality) {
        c /= 2.0;
    }
    return centrality;
}

template <typename Score>
std::vector<SeriesLabel> ranking(const std::vector<SeriesLabel>& nodes, const Score& score) {
    std::vector<std::size_t> order(nodes.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (score(a) != score(b)) {
            return score(a) > score(b);
        }
        return nodes[a].str() < nodes[b].str();
    });
    std::vector<SeriesLabel> result;
    result.reserve(order.size());
    for (std::size_t i : order) {
        result.push_back(nodes[i]);
    }
    return result;
}

} // namespace

CentralityReport centralities(const AssetGraph& graph) {
    if (graph.nodes.empty()) {
        throw ValidationError("centralities of an empty graph");
    }
    const auto adj = graph.adjacency();
    const std::size_t n = graph.nodes.size();

    CentralityReport report;
    report.nodes = graph.nodes;
    report.degree.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        report.degree[i] = static_cast<int>(adj[i].size());
    }

    const std::vector<int> component = label_components(adj);
    const int n_components = *std::max_element(component.begin(), component.end()) + 1;
    std::vector<std::vector<Eigen::Index>> members(static_cast<std::size_t>(n_components));
    for (std::size_t i = 0; i < n; ++i) {
        members[static_cast<std::size_t>(component[i])].push_back(static_cast<Eigen::Index>(i));
    }
    std::size_t largest = 0;
    for (std::size_t c = 1; c < members.size(); ++c) {
        if (members[c].size() > members[largest].size()) {
            largest = c;
        }
    }
    report.eigenvector = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    const Eigen::VectorXd local = component_eigenvector(adj, members[largest]);
    for (std::size_t i = 0; i < members[largest].size(); ++i) {
        report.eigenvector[members[largest][i]] = local[static_cast<Eigen::Index>(i)];
    }

    report.betweenness = brandes_betweenness(adj);

    report.degree_ranking =
        ranking(report.nodes, [&](std::size_t i) { return report.degree[i]; });
    report.eigenvector_ranking = ranking(
        report.nodes, [&](std::size_t i) { return report.eigenvector[static_cast<Eigen::Index>(i)]; });
    report.betweenness_ranking =
        ranking(report.nodes, [&](std::size_t i) { return report.betweenness[i]; });
    return report;
}

namespace {

Eigen::MatrixXd embedded_distances(const Eigen::MatrixXd& coords) {
    const Eigen::Index n = coords.rows();
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            d(i, j) = d(j, i) = (coords.row(i) - coords.row(j)).norm();
        }
    }
    return d;
}

double normalized_stress(const Eigen::MatrixXd& target, const Eigen::MatrixXd& embedded,
                         double denom) {
    if (denom == 0.0) {
        return 0.0;
    }
    double num = 0.0;
    for (Eigen::Index i = 0; i < target.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < target.cols(); ++j) {
            const double diff = target(i, j) - embedded(i, j);
            num += diff * diff;
        }
    }
    return std::sqrt(num / denom);
}

} // namespace

Embedding mds_embed(const DistanceMatrix& dist, int m, std::uint64_t seed) {
    const Eigen::Index n = dist.dim();
    if (m < 1) {
        throw ValidationError("embedding dimension must be >= 1");
    }
    if (static_cast<Eigen::Index>(m) >= n) {
        throw ValidationError("embedding dimension must be below the node count");
    }
    const Eigen::MatrixXd& d = dist.values;
    if ((d - d.transpose()).cwiseAbs().maxCoeff() > 1e-9 || d.diagonal().cwiseAbs().maxCoeff() > 1e-12 ||
        d.minCoeff() < 0.0) {
        throw ValidationError("not a distance matrix (symmetry, zero diagonal, nonnegativity)");
    }

    // Classical scaling start: eigendecompose the double-centered squared
    // distances; exact when the distances are Euclidean-realizable in m dims.
    const Eigen::MatrixXd d2 = d.cwiseProduct(d);
    const Eigen::MatrixXd j =
        Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
    const Eigen::MatrixXd b = -0.5 * j * d2 * j;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(b);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("classical scaling eigendecomposition did not converge");
    }
    Eigen::MatrixXd coords(n, m);
    for (int k = 0; k < m; ++k) {
        const Eigen::Index src = n - 1 - k; // eigenvalues ascend; take the top m
        const double value = solver.eigenvalues()[src];
        coords.col(k) = value > 0.0 ? (std::sqrt(value) * solver.eigenvectors().col(src)).eval()
                                    : Eigen::VectorXd::Zero(n).eval();
    }

    double denom = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j2 = i + 1; j2 < n; ++j2) {
            denom += d(i, j2) * d(i, j2);
        }
    }

    // Coincident starting points with a positive target distance would stall
    // the majorization; a seeded jitter separates them.
    {
        Eigen::MatrixXd dhat = embedded_distances(coords);
        bool stuck = false;
        for (Eigen::Index i = 0; i < n && !stuck; ++i) {
            for (Eigen::Index j2 = i + 1; j2 < n && !stuck; ++j2) {
                stuck = dhat(i, j2) < 1e-12 && d(i, j2) > 1e-12;
            }
        }
        if (stuck) {
            auto rng = make_rng(seed);
            GaussianDraw gauss;
            const double scale = 1e-6 * std::max(1.0, d.maxCoeff());
            for (Eigen::Index i = 0; i < n; ++i) {
                for (int k = 0; k < m; ++k) {
                    coords(i, k) += scale * gauss(rng);
                }
            }
        }
    }

    Embedding embedding;
    embedding.labels = dist.labels;
    Eigen::MatrixXd dhat = embedded_distances(coords);
    double stress = normalized_stress(d, dhat, denom);
    embedding.stress_history.push_back(stress);

    constexpr int max_iterations = 500;
    for (int iter = 0; iter < max_iterations && stress > 0.0; ++iter) {
        // Guttman transform: X <- (1/n) B(X) X.
        Eigen::MatrixXd bmat = Eigen::MatrixXd::Zero(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j2 = 0; j2 < n; ++j2) {
                if (i == j2 || dhat(i, j2) <= 0.0) {
                    continue;
                }
                bmat(i, j2) = -d(i, j2) / dhat(i, j2);
                bmat(i, i) -= bmat(i, j2);
            }
        }
        coords = (bmat * coords) / static_cast<double>(n);
        dhat = embedded_distances(coords);
        const double next = normalized_stress(d, dhat, denom);
        if (!std::isfinite(next)) {
            throw NumericalError("stress majorization produced non-finite values");
        }
        embedding.stress_history.push_back(next);
        const double drop = stress - next;
        stress = next;
        if (drop < 1e-9 * std::max(stress, 1e-300)) {
            break;
        }
    }

    coords.rowwise() -= coords.colwise().mean();
    embedding.coordinates = std::move(coords);
    embedding.stress = stress;
    return embedding;
}

} // namespace lagnet
