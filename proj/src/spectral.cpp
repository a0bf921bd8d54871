#include "lagnet/spectral.hpp"

#include "lagnet/errors.hpp"
#include "lagnet/rng.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

namespace lagnet {

std::string noise_class_name(NoiseClass c) {
    switch (c) {
    case NoiseClass::above_noise:
        return "above-noise";
    case NoiseClass::noise:
        return "noise";
    case NoiseClass::below_noise:
        return "below-noise";
    default:
        return "unclassified";
    }
}

namespace {

/// Descending eigenvalues (and optionally eigenvectors) of a symmetric matrix.
void symmetric_spectrum(const Eigen::MatrixXd& matrix, Eigen::VectorXd& eigenvalues,
                        Eigen::MatrixXd* eigenvectors) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.compute(matrix, eigenvectors != nullptr ? Eigen::ComputeEigenvectors
                                                   : Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigendecomposition did not converge");
    }
    eigenvalues = solver.eigenvalues().reverse();
    if (eigenvectors != nullptr) {
        *eigenvectors = solver.eigenvectors().rowwise().reverse();
    }
}

} // namespace

SpectralSummary eigendecompose(const CorrelationMatrix& matrix) {
    const Eigen::MatrixXd& m = matrix.values;
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw ValidationError("correlation matrix must be square and nonempty");
    }
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-9) {
        throw ValidationError("matrix asymmetric beyond 1e-9");
    }
    SpectralSummary summary;
    summary.labels = matrix.labels;
    symmetric_spectrum(m, summary.eigenvalues, &summary.eigenvectors);
    for (Eigen::Index k = 0; k < summary.eigenvectors.cols(); ++k) {
        Eigen::Index largest = 0;
        summary.eigenvectors.col(k).cwiseAbs().maxCoeff(&largest);
        if (summary.eigenvectors(largest, k) < 0.0) {
            summary.eigenvectors.col(k) = -summary.eigenvectors.col(k);
        }
    }
    summary.classification.assign(static_cast<std::size_t>(summary.dim()),
                                  NoiseClass::unclassified);
    return summary;
}

std::pair<double, double> marchenko_pastur_bounds(double q) {
    if (q <= 0.0) {
        throw ValidationError("aspect ratio must be positive");
    }
    const double root = std::sqrt(1.0 / q);
    return {(1.0 - root) * (1.0 - root), (1.0 + root) * (1.0 + root)};
}

double marchenko_pastur_density(double q, double lambda) {
    if (q <= 1.0) {
        throw ValidationError("density requires aspect ratio > 1");
    }
    const auto [lo, hi] = marchenko_pastur_bounds(q);
    if (lambda <= lo || lambda >= hi) {
        return 0.0;
    }
    return q * std::sqrt((hi - lambda) * (lambda - lo)) / (2.0 * std::numbers::pi * lambda);
}

NullEnsemble shuffle_null(const ReturnPanel& panel, int n_sims, std::uint64_t seed,
                          CorrelationMethod method) {
    if (n_sims < 1) {
        throw ValidationError("need at least 1 simulation");
    }
    const Eigen::Index dim = panel.cols();
    NullEnsemble ensemble;
    ensemble.n_sims = n_sims;
    ensemble.seed = seed;
    ensemble.method = method;
    ensemble.samples.resize(n_sims, dim);
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
        Eigen::VectorXd eigenvalues;
        symmetric_spectrum(corr.values, eigenvalues, nullptr);
        ensemble.samples.row(sim) = eigenvalues;
    }
    ensemble.envelope_min = ensemble.samples.colwise().minCoeff();
    ensemble.envelope_max = ensemble.samples.colwise().maxCoeff();
    const auto [lo, hi] =
        marchenko_pastur_bounds(static_cast<double>(panel.rows()) / static_cast<double>(dim));
    ensemble.mp_lower = lo;
    ensemble.mp_upper = hi;
    return ensemble;
}

SpectralSummary classify_eigenvalues(SpectralSummary summary, const NullEnsemble& null) {
    if (summary.dim() != null.envelope_min.size() ||
        null.envelope_min.size() != null.envelope_max.size()) {
        throw ValidationError("spectrum and null ensemble dimensions differ");
    }
    const double lo = null.global_min();
    const double hi = null.global_max();
    for (Eigen::Index k = 0; k < summary.dim(); ++k) {
        const double value = summary.eigenvalues[k];
        summary.classification[static_cast<std::size_t>(k)] =
            value > hi ? NoiseClass::above_noise
                       : (value < lo ? NoiseClass::below_noise : NoiseClass::noise);
    }
    return summary;
}

Eigen::VectorXd market_mode_series(const ReturnPanel& panel, const Eigen::VectorXd& weights) {
    if (weights.size() != panel.cols()) {
        throw ValidationError("weight vector length does not match panel width");
    }
    return panel.returns() * weights;
}

ModeRemovalResult remove_mode(const ReturnPanel& panel, const Eigen::VectorXd& mode) {
    if (mode.size() != panel.rows()) {
        throw ValidationError("mode series length does not match panel rows");
    }
    if (mode.minCoeff() == mode.maxCoeff()) {
        throw ValidationError("mode series has zero variance");
    }
    const Eigen::VectorXd mode_centered = mode.array() - mode.mean();
    const double mode_ss = mode_centered.squaredNorm();
    const Eigen::Index n = panel.cols();
    Eigen::VectorXd slopes(n);
    Eigen::VectorXd intercepts(n);
    Eigen::MatrixXd residuals(panel.rows(), n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::VectorXd col = panel.returns().col(i);
        const double b = mode_centered.dot(col) / mode_ss;
        const double a = col.mean() - b * mode.mean();
        slopes[i] = b;
        intercepts[i] = a;
        residuals.col(i) = (col.array() - a - b * mode.array()).matrix();
    }
    ReturnPanel residual_panel(panel.dates(), panel.labels(), std::move(residuals),
                               panel.frequency());
    return ModeRemovalResult{mode, std::move(slopes), std::move(intercepts),
                             std::move(residual_panel)};
}

} // namespace lagnet
