// Independent reference implementations the tests check library results
// against. Deliberately simple and slow.
#pragma once

#include "lagnet/panel.hpp"

#include <Eigen/Dense>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace oracles {

/// Fresh directory under the system temp root, removed on destruction.
struct TempDir {
    std::filesystem::path path;

    TempDir() {
        static std::atomic<int> counter{0};
        path = std::filesystem::temp_directory_path() /
               ("lagnet_test_" + std::to_string(counter.fetch_add(1)) + "_" +
                std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()));
        std::filesystem::create_directories(path);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
};

/// Plain loop-based Pearson correlation of two sequences.
inline double pearson_pair(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

/// Betweenness by exhaustive shortest-path enumeration per pair; endpoints
/// excluded, fractional credit, each unordered pair counted once.
inline std::vector<double> brute_betweenness(const std::vector<std::vector<Eigen::Index>>& adj) {
    const std::size_t n = adj.size();
    std::vector<double> centrality(n, 0.0);
    for (std::size_t s = 0; s < n; ++s) {
        // BFS distances from s.
        std::vector<int> dist(n, -1);
        std::vector<std::size_t> queue{s};
        dist[s] = 0;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const std::size_t v = queue[head];
            for (Eigen::Index w : adj[v]) {
                if (dist[static_cast<std::size_t>(w)] < 0) {
                    dist[static_cast<std::size_t>(w)] = dist[v] + 1;
                    queue.push_back(static_cast<std::size_t>(w));
                }
            }
        }
        for (std::size_t t = s + 1; t < n; ++t) {
            if (dist[t] <= 0) {
                continue;
            }
            // Walk every shortest path t -> s, tallying interior nodes.
            std::vector<long> through(n, 0);
            long total = 0;
            std::vector<std::size_t> path;
            std::function<void(std::size_t)> walk = [&](std::size_t v) {
                if (v == s) {
                    ++total;
                    for (std::size_t u : path) {
                        if (u != t) {
                            ++through[u];
                        }
                    }
                    return;
                }
                for (Eigen::Index w : adj[v]) {
                    if (dist[static_cast<std::size_t>(w)] == dist[v] - 1) {
                        path.push_back(v);
                        walk(static_cast<std::size_t>(w));
                        path.pop_back();
                    }
                }
            };
            walk(t);
            for (std::size_t v = 0; v < n; ++v) {
                if (through[v] > 0) {
                    centrality[v] += static_cast<double>(through[v]) / static_cast<double>(total);
                }
            }
        }
    }
    return centrality;
}

/// Adaptive Simpson quadrature.
inline double simpson(const std::function<double(double)>& f, double a, double b, double fa,
                      double fb, double fm, double eps, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * eps) {
        return left + right + (left + right - whole) / 15.0;
    }
    return simpson(f, a, m, fa, fm, flm, 0.5 * eps, depth - 1) +
           simpson(f, m, b, fm, fb, frm, 0.5 * eps, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double eps = 1e-10) {
    const double m = 0.5 * (a + b);
    return simpson(f, a, b, f(a), f(b), f(m), eps, 40);
}

/// Frobenius residual of the best rigid alignment (rotation, reflection,
/// translation) of `fitted` onto `target`.
inline double procrustes_residual(const Eigen::MatrixXd& target, const Eigen::MatrixXd& fitted) {
    Eigen::MatrixXd a = target.rowwise() - target.colwise().mean();
    Eigen::MatrixXd b = fitted.rowwise() - fitted.colwise().mean();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(b.transpose() * a,
                                          Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::MatrixXd q = svd.matrixU() * svd.matrixV().transpose();
    return (a - b * q).norm();
}

/// Return panel over consecutive weekdays from 2003-01-02.
inline lagnet::ReturnPanel make_panel(const Eigen::MatrixXd& returns,
                                      lagnet::Frequency frequency = lagnet::Frequency::daily) {
    std::vector<lagnet::Date> dates;
    dates.reserve(static_cast<std::size_t>(returns.rows()));
    lagnet::Date day = lagnet::parse_date("2003-01-02");
    for (Eigen::Index t = 0; t < returns.rows(); ++t) {
        dates.push_back(day);
        day = lagnet::next_weekday(day);
    }
    std::vector<lagnet::SeriesLabel> labels;
    labels.reserve(static_cast<std::size_t>(returns.cols()));
    for (Eigen::Index i = 0; i < returns.cols(); ++i) {
        labels.push_back(lagnet::SeriesLabel{"S" + std::to_string(i + 1), 0});
    }
    return lagnet::ReturnPanel(std::move(dates), std::move(labels), returns, frequency);
}

} // namespace oracles
