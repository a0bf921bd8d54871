#include "lagnet/synthetic.hpp"

#include "lagnet/errors.hpp"
#include "lagnet/rng.hpp"

#include <cmath>
#include <cstdio>

namespace lagnet {

namespace {

void check_loading(double value, const char* name) {
    if (!(value >= 0.0 && value <= 1.0)) {
        throw ValidationError(std::string(name) + " must lie in [0, 1]");
    }
}

std::vector<std::string> block_labels(const char* prefix, int count) {
    std::vector<std::string> labels;
    labels.reserve(static_cast<std::size_t>(count));
    for (int i = 1; i <= count; ++i) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%s%02d", prefix, i);
        labels.emplace_back(buf);
    }
    return labels;
}

} // namespace

PricePanel generate_synthetic(const SyntheticSpec& spec) {
    check_loading(spec.common_loading, "common loading");
    check_loading(spec.leadlag_loading, "lead-lag loading");
    check_loading(spec.east_sameday_loading, "east same-day loading");
    if (spec.noise_scale < 0.0) {
        throw ValidationError("noise scale must be nonnegative");
    }
    if (spec.days < 100) {
        throw ValidationError("need at least 100 days");
    }
    if (spec.n_west < 0 || spec.n_east < 0 || spec.n_west + spec.n_east < 1) {
        throw ValidationError("need at least one series");
    }

    const int t_days = spec.days;
    const int n = spec.n_west + spec.n_east;

    auto factor_rng = std::mt19937_64{stage_seed(spec.seed, "synthetic.factor")};
    auto west_rng = std::mt19937_64{stage_seed(spec.seed, "synthetic.west")};
    auto east_rng = std::mt19937_64{stage_seed(spec.seed, "synthetic.east")};
    GaussianDraw factor_gauss, west_gauss, east_gauss;

    // factor[t+1] drives day t; factor[0] is the day before the panel starts.
    std::vector<double> factor(static_cast<std::size_t>(t_days) + 1);
    for (double& f : factor) {
        f = factor_gauss(factor_rng);
    }

    Eigen::MatrixXd returns(t_days, n);
    for (int t = 0; t < t_days; ++t) {
        const double f_today = factor[static_cast<std::size_t>(t) + 1];
        const double f_prev = factor[static_cast<std::size_t>(t)];
        for (int i = 0; i < spec.n_west; ++i) {
            returns(t, i) =
                spec.common_loading * f_today + spec.noise_scale * west_gauss(west_rng);
        }
        for (int i = 0; i < spec.n_east; ++i) {
            returns(t, spec.n_west + i) = spec.east_sameday_loading * f_today +
                                          spec.leadlag_loading * f_prev +
                                          spec.noise_scale * east_gauss(east_rng);
        }
    }

    std::vector<std::string> labels = block_labels("WEST", spec.n_west);
    for (auto& label : block_labels("EAST", spec.n_east)) {
        labels.push_back(std::move(label));
    }

    std::vector<Date> dates;
    dates.reserve(static_cast<std::size_t>(t_days) + 1);
    Date day = parse_date("2003-01-02");
    dates.push_back(day);
    for (int t = 0; t < t_days; ++t) {
        day = next_weekday(day);
        dates.push_back(day);
    }

    Eigen::MatrixXd prices(t_days + 1, n);
    prices.row(0).setConstant(100.0);
    for (int t = 0; t < t_days; ++t) {
        prices.row(t + 1) = prices.row(t).array() * returns.row(t).array().exp();
    }
    return PricePanel(std::move(dates), std::move(labels), std::move(prices),
                      BoolMatrix::Constant(t_days + 1, n, false));
}

} // namespace lagnet
