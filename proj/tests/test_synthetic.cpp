#include "lagnet/synthetic.hpp"

#include "lagnet/correlation.hpp"
#include "lagnet/errors.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace lagnet;

TEST_CASE("generated panel shape, labels, dates, and base price") {
    SyntheticSpec spec;
    spec.n_west = 3;
    spec.n_east = 2;
    spec.days = 120;
    const PricePanel panel = generate_synthetic(spec);

    REQUIRE(panel.rows() == 121); // days + 1 so the log-returns cover `days` rows
    REQUIRE(panel.cols() == 5);
    CHECK(panel.labels() ==
          std::vector<std::string>{"WEST01", "WEST02", "WEST03", "EAST01", "EAST02"});
    CHECK_FALSE(panel.any_missing());

    CHECK(panel.dates().front() == parse_date("2003-01-02"));
    for (std::size_t t = 1; t < panel.dates().size(); ++t) {
        CHECK(panel.dates()[t] == next_weekday(panel.dates()[t - 1]));
    }
    for (Eigen::Index i = 0; i < panel.cols(); ++i) {
        CHECK(panel.prices()(0, i) == 100.0);
        CHECK(panel.prices().col(i).minCoeff() > 0.0);
    }
}

TEST_CASE("generation is deterministic per seed") {
    SyntheticSpec spec;
    spec.days = 150;
    spec.seed = 77;
    const PricePanel a = generate_synthetic(spec);
    const PricePanel b = generate_synthetic(spec);
    CHECK(a.prices() == b.prices());
    CHECK(a.dates() == b.dates());

    spec.seed = 78;
    CHECK(generate_synthetic(spec).prices() != a.prices());
}

TEST_CASE("zero loadings produce independent noise") {
    SyntheticSpec spec;
    spec.common_loading = 0.0;
    spec.leadlag_loading = 0.0;
    spec.noise_scale = 0.5;
    spec.days = 1250;
    spec.seed = 5;
    const ReturnPanel returns = log_returns(generate_synthetic(spec));
    const CorrelationMatrix corr = pearson_matrix(returns);

    double max_off = 0.0;
    for (Eigen::Index i = 0; i < corr.dim(); ++i) {
        for (Eigen::Index j = i + 1; j < corr.dim(); ++j) {
            max_off = std::max(max_off, std::abs(corr.values(i, j)));
        }
    }
    CHECK(max_off < 0.12); // ~3.4 sigma of a T=1250 null correlation
}

TEST_CASE("pure lead-lag construction is an exact one-day shift") {
    SyntheticSpec spec;
    spec.n_west = 2;
    spec.n_east = 2;
    spec.common_loading = 1.0;
    spec.leadlag_loading = 1.0;
    spec.noise_scale = 0.0;
    spec.days = 200;
    const ReturnPanel returns = log_returns(generate_synthetic(spec));

    // West holds the factor same-day, East holds yesterday's factor.
    const Eigen::VectorXd west = returns.returns().col(0);
    const Eigen::VectorXd east = returns.returns().col(2);
    for (Eigen::Index t = 1; t < returns.rows(); ++t) {
        CHECK(east(t) == doctest::Approx(west(t - 1)).epsilon(1e-10));
    }

    const std::vector<SeriesLabel> targets{{"EAST01", 0}};
    const auto profiles =
        cross_correlation(returns, {"WEST01", 0}, targets, 0, 1, CorrelationMethod::pearson);
    CHECK(profiles[0].correlations[1] == doctest::Approx(1.0).epsilon(1e-12)); // tau = 1
}

TEST_CASE("same-day Eastern loading couples the blocks contemporaneously") {
    SyntheticSpec spec;
    spec.n_west = 1;
    spec.n_east = 1;
    spec.common_loading = 0.5;
    spec.leadlag_loading = 0.0;
    spec.east_sameday_loading = 0.5;
    spec.noise_scale = 0.0;
    spec.days = 150;
    const ReturnPanel returns = log_returns(generate_synthetic(spec));
    // both series are 0.5 * F_t exactly
    const CorrelationMatrix corr = pearson_matrix(returns);
    CHECK(corr.values(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("default two-block panel shows the intended lead-lag signature") {
    SyntheticSpec spec; // 10+10, loadings 0.6, noise 0.5, 1250 days
    spec.seed = 9;
    const ReturnPanel returns = log_returns(generate_synthetic(spec));

    const std::vector<SeriesLabel> targets{{"EAST01", 0}, {"EAST07", 0}};
    const auto profiles =
        cross_correlation(returns, {"WEST01", 0}, targets, 0, 1, CorrelationMethod::pearson);
    for (const auto& profile : profiles) {
        const double same_day = profile.correlations[0];
        const double next_day = profile.correlations[1];
        CHECK(next_day > 0.4); // theory: 0.36/0.61 ~ 0.59
        CHECK(next_day > same_day + 0.3);
    }

    // Western series co-move the same day
    const CorrelationMatrix corr = pearson_matrix(returns);
    CHECK(corr.values(0, 1) > 0.4);
}

TEST_CASE("invalid specs are rejected") {
    SyntheticSpec spec;
    spec.days = 99;
    CHECK_THROWS_AS(generate_synthetic(spec), ValidationError);

    spec = {};
    spec.common_loading = -0.1;
    CHECK_THROWS_AS(generate_synthetic(spec), ValidationError);
    spec = {};
    spec.leadlag_loading = 1.1;
    CHECK_THROWS_AS(generate_synthetic(spec), ValidationError);
    spec = {};
    spec.east_sameday_loading = 1.5;
    CHECK_THROWS_AS(generate_synthetic(spec), ValidationError);
    spec = {};
    spec.noise_scale = -0.5;
    CHECK_THROWS_AS(generate_synthetic(spec), ValidationError);
    spec = {};
    spec.n_west = -1;
    CHECK_THROWS_AS(generate_synthetic(spec), ValidationError);
    spec = {};
    spec.n_west = 0;
    spec.n_east = 0;
    CHECK_THROWS_AS(generate_synthetic(spec), ValidationError);
}
