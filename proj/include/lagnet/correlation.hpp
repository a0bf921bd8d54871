#pragma once

#include "lagnet/panel.hpp"

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

namespace lagnet {

enum class CorrelationMethod { pearson, spearman };

std::string method_name(CorrelationMethod method);
CorrelationMethod parse_method(std::string_view name);

/// Symmetric correlation matrix with unit diagonal, entries in [-1, 1].
struct CorrelationMatrix {
    std::vector<SeriesLabel> labels;
    Eigen::MatrixXd values;
    CorrelationMethod method = CorrelationMethod::pearson;
    Eigen::Index sample_size = 0; // rows of the panel it was computed from

    Eigen::Index dim() const { return values.rows(); }
};

/// Correlation of a benchmark series at t with one target at t + tau,
/// per lag tau over the shrinking overlap window.
struct LagProfile {
    SeriesLabel reference;
    SeriesLabel target;
    std::vector<int> lags;
    std::vector<double> correlations;
};

/// Product-moment correlation of every column pair, two-pass
/// (mean, then covariance). Requires >= 3 rows and nonconstant columns.
CorrelationMatrix pearson_matrix(const ReturnPanel& panel);

/// Pearson correlation of per-column midranks (ties get average ranks).
CorrelationMatrix spearman_matrix(const ReturnPanel& panel);

CorrelationMatrix correlation_matrix(const ReturnPanel& panel, CorrelationMethod method);

/// Midranks of `values` (1-based, ties averaged).
Eigen::VectorXd midranks(const Eigen::VectorXd& values);

/// Panel of N*(max_lag+1) columns: for each lag l in 0..max_lag, a copy of
/// every series shifted back by l rows, tagged "_lag<l>". The first max_lag
/// rows are dropped (no wraparound). max_lag 0 returns the panel unchanged.
ReturnPanel lag_augment(const ReturnPanel& panel, int max_lag);

/// For each target, the chosen correlation of reference[t] with
/// target[t + tau] for every tau in [lag_min, lag_max]. Negative tau means
/// the target precedes the reference.
std::vector<LagProfile> cross_correlation(const ReturnPanel& panel, const SeriesLabel& reference,
                                          std::span<const SeriesLabel> targets, int lag_min,
                                          int lag_max, CorrelationMethod method);

} // namespace lagnet
