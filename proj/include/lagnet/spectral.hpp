#pragma once

#include "lagnet/correlation.hpp"
#include "lagnet/panel.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace lagnet {

enum class NoiseClass { unclassified, above_noise, noise, below_noise };

std::string noise_class_name(NoiseClass c);

/// Full spectrum of a correlation matrix. Eigenvalues descending;
/// eigenvector k in column k, sign-normalized so the largest-magnitude
/// component is positive. Classification stays `unclassified` until
/// compared against a null ensemble.
struct SpectralSummary {
    std::vector<SeriesLabel> labels;
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;
    std::vector<NoiseClass> classification;

    Eigen::Index dim() const { return eigenvalues.size(); }
};

/// Eigenvalue samples from column-shuffled copies of a panel, with the
/// per-rank envelope and the Marchenko-Pastur bounds at Q = T/N.
struct NullEnsemble {
    int n_sims = 0;
    std::uint64_t seed = 0;
    CorrelationMethod method = CorrelationMethod::pearson;
    Eigen::MatrixXd samples; // n_sims x dim, each row descending
    Eigen::VectorXd envelope_min;
    Eigen::VectorXd envelope_max;
    double mp_lower = 0.0;
    double mp_upper = 0.0;

    double global_min() const { return envelope_min.minCoeff(); }
    double global_max() const { return envelope_max.maxCoeff(); }
};

/// Per-series least squares R = a + b*I + E against a mode portfolio I.
struct ModeRemovalResult {
    Eigen::VectorXd mode_series;
    Eigen::VectorXd slopes;
    Eigen::VectorXd intercepts;
    ReturnPanel residual_panel;
};

/// Full eigendecomposition; rejects matrices asymmetric beyond 1e-9.
SpectralSummary eigendecompose(const CorrelationMatrix& matrix);

/// Marchenko-Pastur support bounds (1 -/+ sqrt(1/q))^2. Defined for any
/// positive q; the density itself requires q > 1.
std::pair<double, double> marchenko_pastur_bounds(double q);

/// Marchenko-Pastur density q*sqrt((u-x)(x-l))/(2*pi*x) on [l, u], zero
/// outside. Requires q > 1.
double marchenko_pastur_density(double q, double lambda);

/// Spectra of n_sims copies of the panel with every column independently
/// permuted in time. Each simulation draws from its own (seed, sim) stream,
/// so results do not depend on evaluation order.
NullEnsemble shuffle_null(const ReturnPanel& panel, int n_sims, std::uint64_t seed,
                          CorrelationMethod method = CorrelationMethod::pearson);

/// Labels each eigenvalue against the null's global extrema: above the
/// maximum -> above_noise, below the minimum -> below_noise, else noise.
SpectralSummary classify_eigenvalues(SpectralSummary summary, const NullEnsemble& null);

/// Portfolio return I_t = sum_i weights[i] * returns[t][i] (weights as given).
Eigen::VectorXd market_mode_series(const ReturnPanel& panel, const Eigen::VectorXd& weights);

/// OLS of every series on the mode; residuals have zero mean and zero
/// sample correlation with the mode. Composable for iterated removal.
ModeRemovalResult remove_mode(const ReturnPanel& panel, const Eigen::VectorXd& mode);

} // namespace lagnet
