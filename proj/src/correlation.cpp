#include "lagnet/correlation.hpp"

#include "lagnet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lagnet {

std::string method_name(CorrelationMethod method) {
    return method == CorrelationMethod::pearson ? "pearson" : "spearman";
}

CorrelationMethod parse_method(std::string_view name) {
    if (name == "pearson") {
        return CorrelationMethod::pearson;
    }
    if (name == "spearman") {
        return CorrelationMethod::spearman;
    }
    throw ValidationError("unknown correlation method '" + std::string(name) + "'");
}

Eigen::VectorXd midranks(const Eigen::VectorXd& values) {
    const Eigen::Index n = values.size();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](Eigen::Index a, Eigen::Index b) { return values[a] < values[b]; });
    Eigen::VectorXd ranks(n);
    Eigen::Index i = 0;
    while (i < n) {
        Eigen::Index j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) {
            ++j;
        }
        const double rank = 0.5 * static_cast<double>(i + j) + 1.0; // average of 1-based positions
        for (Eigen::Index k = i; k <= j; ++k) {
            ranks[order[k]] = rank;
        }
        i = j + 1;
    }
    return ranks;
}

namespace {

void check_nonconstant(const Eigen::MatrixXd& data, const std::vector<SeriesLabel>& labels) {
    for (Eigen::Index i = 0; i < data.cols(); ++i) {
        if (data.col(i).minCoeff() == data.col(i).maxCoeff()) {
            throw ValidationError("zero-variance column '" + labels[i].str() + "'");
        }
    }
}

/// Two-pass product-moment correlation of the columns of `data`.
Eigen::MatrixXd pearson_of(const Eigen::MatrixXd& data) {
    const Eigen::MatrixXd centered = data.rowwise() - data.colwise().mean();
    Eigen::VectorXd inv_norm(data.cols());
    for (Eigen::Index i = 0; i < data.cols(); ++i) {
        inv_norm[i] = 1.0 / centered.col(i).norm();
    }
    Eigen::MatrixXd corr = centered.transpose() * centered;
    corr = inv_norm.asDiagonal() * corr * inv_norm.asDiagonal();
    corr = 0.5 * (corr + corr.transpose()).eval();
    corr = corr.cwiseMax(-1.0).cwiseMin(1.0);
    corr.diagonal().setOnes();
    return corr;
}

Eigen::MatrixXd rank_columns(const Eigen::MatrixXd& data) {
    Eigen::MatrixXd ranks(data.rows(), data.cols());
    for (Eigen::Index i = 0; i < data.cols(); ++i) {
        ranks.col(i) = midranks(data.col(i));
    }
    return ranks;
}

} // namespace

CorrelationMatrix correlation_matrix(const ReturnPanel& panel, CorrelationMethod method) {
    if (panel.rows() < 3) {
        throw ValidationError("correlation requires at least 3 rows");
    }
    check_nonconstant(panel.returns(), panel.labels());
    const Eigen::MatrixXd values = method == CorrelationMethod::pearson
                                       ? pearson_of(panel.returns())
                                       : pearson_of(rank_columns(panel.returns()));
    return CorrelationMatrix{panel.labels(), values, method, panel.rows()};
}

CorrelationMatrix pearson_matrix(const ReturnPanel& panel) {
    return correlation_matrix(panel, CorrelationMethod::pearson);
}

CorrelationMatrix spearman_matrix(const ReturnPanel& panel) {
    return correlation_matrix(panel, CorrelationMethod::spearman);
}

ReturnPanel lag_augment(const ReturnPanel& panel, int max_lag) {
    if (max_lag < 0) {
        throw ValidationError("max lag must be nonnegative");
    }
    if (max_lag == 0) {
        return panel;
    }
    if (panel.frequency() != Frequency::daily) {
        throw ValidationError("lag augmentation requires a daily panel");
    }
    if (static_cast<Eigen::Index>(max_lag) >= panel.rows()) {
        throw ValidationError("max lag " + std::to_string(max_lag) + " >= row count " +
                              std::to_string(panel.rows()));
    }
    for (const auto& label : panel.labels()) {
        if (label.lag != 0) {
            throw ValidationError("panel already lag-augmented ('" + label.str() + "')");
        }
    }

    const Eigen::Index n = panel.cols();
    const Eigen::Index t_out = panel.rows() - max_lag;
    Eigen::MatrixXd out(t_out, n * (max_lag + 1));
    std::vector<SeriesLabel> labels;
    labels.reserve(static_cast<std::size_t>(n) * (max_lag + 1));
    for (int l = 0; l <= max_lag; ++l) {
        out.middleCols(static_cast<Eigen::Index>(l) * n, n) =
            panel.returns().middleRows(max_lag - l, t_out);
        for (Eigen::Index i = 0; i < n; ++i) {
            labels.push_back(SeriesLabel{panel.labels()[i].name, l});
        }
    }
    std::vector<Date> dates(panel.dates().begin() + max_lag, panel.dates().end());
    return ReturnPanel(std::move(dates), std::move(labels), std::move(out), panel.frequency());
}

namespace {

double pair_correlation(Eigen::VectorXd x, Eigen::VectorXd y, CorrelationMethod method,
                        const SeriesLabel& x_label, const SeriesLabel& y_label) {
    if (method == CorrelationMethod::spearman) {
        x = midranks(x);
        y = midranks(y);
    }
    if (x.minCoeff() == x.maxCoeff()) {
        throw ValidationError("zero-variance window for '" + x_label.str() + "'");
    }
    if (y.minCoeff() == y.maxCoeff()) {
        throw ValidationError("zero-variance window for '" + y_label.str() + "'");
    }
    const Eigen::VectorXd xc = x.array() - x.mean();
    const Eigen::VectorXd yc = y.array() - y.mean();
    const double c = xc.dot(yc) / (xc.norm() * yc.norm());
    return std::clamp(c, -1.0, 1.0);
}

} // namespace

std::vector<LagProfile> cross_correlation(const ReturnPanel& panel, const SeriesLabel& reference,
                                          std::span<const SeriesLabel> targets, int lag_min,
                                          int lag_max, CorrelationMethod method) {
    if (lag_min > lag_max) {
        throw ValidationError("lag range is empty");
    }
    const Eigen::Index t_rows = panel.rows();
    const Eigen::Index ref_col = panel.column_of(reference);
    std::vector<LagProfile> profiles;
    profiles.reserve(targets.size());
    for (const auto& target : targets) {
        const Eigen::Index tgt_col = panel.column_of(target);
        LagProfile profile{reference, target, {}, {}};
        for (int tau = lag_min; tau <= lag_max; ++tau) {
            const Eigen::Index start = std::max(0, -tau);
            const Eigen::Index len = t_rows - std::abs(tau);
            if (len < 3) {
                throw ValidationError("overlap window too short at lag " + std::to_string(tau));
            }
            const Eigen::VectorXd ref_win = panel.returns().col(ref_col).segment(start, len);
            const Eigen::VectorXd tgt_win = panel.returns().col(tgt_col).segment(start + tau, len);
            profile.lags.push_back(tau);
            profile.correlations.push_back(
                pair_correlation(ref_win, tgt_win, method, reference, target));
        }
        profiles.push_back(std::move(profile));
    }
    return profiles;
}

} // namespace lagnet
