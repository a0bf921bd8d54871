#include "lagnet/correlation.hpp"
#include "lagnet/errors.hpp"
#include "lagnet/rng.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace lagnet;

namespace {

Eigen::MatrixXd random_gaussian(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    auto rng = make_rng(seed);
    GaussianDraw gauss;
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            m(i, j) = gauss(rng);
        }
    }
    return m;
}

} // namespace

TEST_CASE("midranks average ties and count from 1") {
    Eigen::VectorXd v(4);
    v << 10, 20, 20, 30;
    const Eigen::VectorXd r = midranks(v);
    CHECK(r(0) == 1.0);
    CHECK(r(1) == 2.5);
    CHECK(r(2) == 2.5);
    CHECK(r(3) == 4.0);

    Eigen::VectorXd constant = Eigen::VectorXd::Constant(3, 5.0);
    CHECK(midranks(constant) == Eigen::Vector3d(2, 2, 2));

    Eigen::VectorXd increasing(5);
    increasing << -2, -1, 0, 4, 9;
    for (Eigen::Index i = 0; i < 5; ++i) {
        CHECK(midranks(increasing)(i) == static_cast<double>(i + 1));
    }
}

TEST_CASE("pearson matrix on the 4-point fixture gives 0.8") {
    Eigen::MatrixXd returns(4, 2);
    returns << 1, 1, 2, 2, 3, 4, 4, 3;
    const auto panel = oracles::make_panel(returns);

    const CorrelationMatrix pearson = pearson_matrix(panel);
    CHECK(pearson.method == CorrelationMethod::pearson);
    CHECK(pearson.sample_size == 4);
    CHECK(pearson.values(0, 1) == doctest::Approx(0.8).epsilon(1e-14));

    std::vector<double> x{1, 2, 3, 4}, y{1, 2, 4, 3};
    CHECK(pearson.values(0, 1) == doctest::Approx(oracles::pearson_pair(x, y)).epsilon(1e-14));

    // Ranks of both columns are the values themselves, so Spearman agrees.
    const CorrelationMatrix spearman = spearman_matrix(panel);
    CHECK(spearman.method == CorrelationMethod::spearman);
    CHECK(spearman.values(0, 1) == doctest::Approx(0.8).epsilon(1e-14));
}

TEST_CASE("perfect correlation and anticorrelation hit the endpoints exactly") {
    Eigen::MatrixXd returns(5, 3);
    returns.col(0) = Eigen::VectorXd::LinSpaced(5, -2.0, 2.0);
    returns.col(1) = returns.col(0);
    returns.col(2) = -returns.col(0);
    const CorrelationMatrix corr = pearson_matrix(oracles::make_panel(returns));
    CHECK(corr.values(0, 1) == 1.0);
    CHECK(corr.values(0, 2) == -1.0);
    CHECK(corr.values(1, 2) == -1.0);
}

TEST_CASE("spearman is invariant under strictly monotone transforms") {
    Eigen::MatrixXd returns(6, 2);
    returns.col(0) << -1.5, -0.25, 0.5, 1.0, 2.0, 3.5;
    returns.col(1) = returns.col(0).array().exp();
    const CorrelationMatrix up = spearman_matrix(oracles::make_panel(returns));
    CHECK(up.values(0, 1) == 1.0);

    returns.col(1) = -returns.col(0).array().cube();
    const CorrelationMatrix down = spearman_matrix(oracles::make_panel(returns));
    CHECK(down.values(0, 1) == -1.0);
}

TEST_CASE("correlation methods are invariant under positive affine maps") {
    Eigen::MatrixXd returns = random_gaussian(60, 5, 7);
    const auto base_p = pearson_matrix(oracles::make_panel(returns));
    const auto base_s = spearman_matrix(oracles::make_panel(returns));

    Eigen::MatrixXd mapped = returns;
    const double scales[5] = {2.0, 0.5, 13.0, 1e-6, 3.25};
    const double shifts[5] = {-4.0, 0.0, 100.0, 0.3, -2.5};
    for (Eigen::Index j = 0; j < 5; ++j) {
        mapped.col(j) = scales[j] * returns.col(j).array() + shifts[j];
    }
    const auto mapped_p = pearson_matrix(oracles::make_panel(mapped));
    const auto mapped_s = spearman_matrix(oracles::make_panel(mapped));
    // The 1e-6 scale against a 0.3 shift costs ~6 digits to cancellation, so
    // the Pearson tolerance is set by conditioning, not by the algorithm.
    CHECK((mapped_p.values - base_p.values).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((mapped_s.values - base_s.values).cwiseAbs().maxCoeff() < 1e-12);

    // Spearman additionally survives any strictly increasing transform.
    Eigen::MatrixXd warped = returns;
    warped.col(0) = returns.col(0).array().cube();
    warped.col(1) = returns.col(1).array().atan();
    const auto warped_s = spearman_matrix(oracles::make_panel(warped));
    CHECK((warped_s.values - base_s.values).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("correlation matrix structure on a random panel") {
    const auto corr = correlation_matrix(oracles::make_panel(random_gaussian(40, 6, 3)),
                                         CorrelationMethod::pearson);
    CHECK(corr.dim() == 6);
    CHECK(corr.values == corr.values.transpose().eval());
    CHECK(corr.values.diagonal() == Eigen::VectorXd::Ones(6));
    CHECK(corr.values.maxCoeff() <= 1.0);
    CHECK(corr.values.minCoeff() >= -1.0);
}

TEST_CASE("correlation matrix rejections") {
    Eigen::MatrixXd two_rows = random_gaussian(2, 2, 1);
    CHECK_THROWS_AS(pearson_matrix(oracles::make_panel(two_rows)), ValidationError);

    Eigen::MatrixXd with_constant = random_gaussian(10, 2, 2);
    with_constant.col(1).setConstant(0.25);
    CHECK_THROWS_WITH_AS(pearson_matrix(oracles::make_panel(with_constant)),
                         doctest::Contains("S2"), ValidationError);
}

TEST_CASE("lag augmentation shifts columns and drops the seed rows") {
    Eigen::MatrixXd returns(3, 1);
    returns << 7.0, -3.0, 11.0; // (r1, r2, r3)
    const ReturnPanel panel = oracles::make_panel(returns);
    const ReturnPanel out = lag_augment(panel, 1);

    REQUIRE(out.rows() == 2);
    REQUIRE(out.cols() == 2);
    CHECK(out.labels()[0] == SeriesLabel{"S1", 0});
    CHECK(out.labels()[1] == SeriesLabel{"S1", 1});
    // rows are (r2, r1) then (r3, r2)
    CHECK(out.returns()(0, 0) == -3.0);
    CHECK(out.returns()(0, 1) == 7.0);
    CHECK(out.returns()(1, 0) == 11.0);
    CHECK(out.returns()(1, 1) == -3.0);
    // the dropped leading row takes its date with it
    CHECK(out.dates() == std::vector<Date>(panel.dates().begin() + 1, panel.dates().end()));
}

TEST_CASE("lag augmentation column counts for a 79-series panel") {
    const ReturnPanel panel = oracles::make_panel(random_gaussian(10, 79, 5));
    CHECK(lag_augment(panel, 1).cols() == 158);
    CHECK(lag_augment(panel, 2).cols() == 237);
    CHECK(lag_augment(panel, 1).rows() == 9);
    CHECK(lag_augment(panel, 2).rows() == 8);
}

TEST_CASE("lag augmentation orders blocks lag-major") {
    const ReturnPanel panel = oracles::make_panel(random_gaussian(12, 3, 8));
    const ReturnPanel out = lag_augment(panel, 2);
    REQUIRE(out.cols() == 9);
    for (int l = 0; l <= 2; ++l) {
        for (int i = 0; i < 3; ++i) {
            const auto& label = out.labels()[static_cast<std::size_t>(3 * l + i)];
            CHECK(label.name == "S" + std::to_string(i + 1));
            CHECK(label.lag == l);
        }
    }
}

TEST_CASE("lag augmentation with max lag 0 is the identity") {
    const ReturnPanel panel = oracles::make_panel(random_gaussian(8, 2, 9));
    const ReturnPanel out = lag_augment(panel, 0);
    CHECK(out.labels() == panel.labels());
    CHECK(out.dates() == panel.dates());
    CHECK(out.returns() == panel.returns());
}

TEST_CASE("lag augmentation rejections") {
    const ReturnPanel panel = oracles::make_panel(random_gaussian(5, 2, 4));
    CHECK_THROWS_AS(lag_augment(panel, 5), ValidationError);  // max_lag >= T
    CHECK_THROWS_AS(lag_augment(panel, -1), ValidationError); // negative
    CHECK_THROWS_AS(lag_augment(lag_augment(panel, 1), 1), ValidationError); // already tagged

    const ReturnPanel weekly = oracles::make_panel(random_gaussian(5, 2, 4), Frequency::weekly);
    CHECK_THROWS_AS(lag_augment(weekly, 1), ValidationError);
}

TEST_CASE("lag-1 block of the augmented correlation equals the shifted-window correlation") {
    const Eigen::MatrixXd returns = random_gaussian(50, 4, 11);
    const ReturnPanel panel = oracles::make_panel(returns);

    const CorrelationMatrix augmented = pearson_matrix(lag_augment(panel, 1));
    // The lag-1 copies hold original rows 0..T-2, so their mutual correlations
    // must match the plain correlation over that window.
    const CorrelationMatrix shifted =
        pearson_matrix(oracles::make_panel(returns.topRows(49)));
    CHECK((augmented.values.block(4, 4, 4, 4) - shifted.values).cwiseAbs().maxCoeff() < 1e-12);

    // Same idea for the lag-0 block against rows 1..T-1.
    const CorrelationMatrix tail =
        pearson_matrix(oracles::make_panel(returns.bottomRows(49)));
    CHECK((augmented.values.block(0, 0, 4, 4) - tail.values).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("cross correlation of a series with itself at lag 0 is 1") {
    const ReturnPanel panel = oracles::make_panel(random_gaussian(30, 2, 13));
    const SeriesLabel ref{"S1", 0};
    const std::vector<SeriesLabel> targets{ref};
    const auto profiles =
        cross_correlation(panel, ref, targets, 0, 0, CorrelationMethod::pearson);
    REQUIRE(profiles.size() == 1);
    REQUIRE(profiles[0].lags == std::vector<int>{0});
    CHECK(profiles[0].correlations[0] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("a perfect one-day lead shows up as correlation 1 at lag 1") {
    const Eigen::VectorXd driver = random_gaussian(41, 1, 17).col(0);
    Eigen::MatrixXd returns(40, 2);
    returns.col(0) = driver.tail(40); // reference[t]
    returns.col(1) = driver.head(40); // target[t] = reference[t-1]
    // target tomorrow equals reference today, so reference[t] vs target[t+tau]
    // peaks at tau = +1; with the roles swapped the peak moves to tau = -1.
    const ReturnPanel panel = oracles::make_panel(returns);
    const std::vector<SeriesLabel> targets{{"S2", 0}};
    const auto lead =
        cross_correlation(panel, {"S1", 0}, targets, -1, 1, CorrelationMethod::pearson);
    REQUIRE(lead[0].lags == std::vector<int>{-1, 0, 1});
    CHECK(lead[0].correlations[2] == doctest::Approx(1.0).epsilon(1e-12)); // tau = +1

    const std::vector<SeriesLabel> ref_as_target{{"S1", 0}};
    const auto lag =
        cross_correlation(panel, {"S2", 0}, ref_as_target, -1, 1, CorrelationMethod::pearson);
    CHECK(lag[0].correlations[0] == doctest::Approx(1.0).epsilon(1e-12)); // tau = -1
}

TEST_CASE("cross correlation is symmetric under swapping roles and negating the lag") {
    const ReturnPanel panel = oracles::make_panel(random_gaussian(35, 2, 19));
    const std::vector<SeriesLabel> t1{{"S2", 0}};
    const std::vector<SeriesLabel> t2{{"S1", 0}};
    for (const auto method : {CorrelationMethod::pearson, CorrelationMethod::spearman}) {
        const auto forward = cross_correlation(panel, {"S1", 0}, t1, -3, 3, method);
        const auto backward = cross_correlation(panel, {"S2", 0}, t2, -3, 3, method);
        for (int k = 0; k < 7; ++k) {
            CHECK(forward[0].correlations[static_cast<std::size_t>(k)] ==
                  doctest::Approx(backward[0].correlations[static_cast<std::size_t>(6 - k)])
                      .epsilon(1e-12));
        }
    }
}

TEST_CASE("independent white noise stays within the 3/sqrt(T) band almost always") {
    const int t_len = 1000;
    const double bound = 3.0 / std::sqrt(static_cast<double>(t_len));
    int violations = 0;
    int draws = 0;
    for (std::uint64_t seed = 100; seed < 130; ++seed) {
        const ReturnPanel panel = oracles::make_panel(random_gaussian(t_len, 2, seed));
        const std::vector<SeriesLabel> targets{{"S2", 0}};
        const auto profiles =
            cross_correlation(panel, {"S1", 0}, targets, -2, 2, CorrelationMethod::pearson);
        for (const double c : profiles[0].correlations) {
            ++draws;
            if (std::abs(c) >= bound) {
                ++violations;
            }
        }
    }
    CHECK(draws == 150);
    CHECK(violations <= 4); // ~0.27% expected rate; generous deterministic margin
}

TEST_CASE("spearman cross correlation ranks within each overlap window") {
    Eigen::MatrixXd returns = random_gaussian(60, 2, 23);
    const ReturnPanel plain = oracles::make_panel(returns);
    Eigen::MatrixXd warped = returns;
    warped.col(1) = returns.col(1).array().cube();
    const ReturnPanel transformed = oracles::make_panel(warped);

    const std::vector<SeriesLabel> targets{{"S2", 0}};
    const auto a = cross_correlation(plain, {"S1", 0}, targets, -2, 2,
                                     CorrelationMethod::spearman);
    const auto b = cross_correlation(transformed, {"S1", 0}, targets, -2, 2,
                                     CorrelationMethod::spearman);
    for (std::size_t k = 0; k < 5; ++k) {
        CHECK(a[0].correlations[k] == doctest::Approx(b[0].correlations[k]).epsilon(1e-12));
    }
}

TEST_CASE("cross correlation rejections") {
    const ReturnPanel panel = oracles::make_panel(random_gaussian(5, 2, 29));
    const std::vector<SeriesLabel> targets{{"S2", 0}};

    // |tau| = 3 leaves a 2-row window, below the 3-row minimum
    CHECK_THROWS_AS(cross_correlation(panel, {"S1", 0}, targets, 3, 3,
                                      CorrelationMethod::pearson),
                    ValidationError);
    CHECK_THROWS_AS(cross_correlation(panel, {"S1", 0}, targets, 2, -2,
                                      CorrelationMethod::pearson),
                    ValidationError);
    CHECK_THROWS_AS(cross_correlation(panel, {"NOPE", 0}, targets, 0, 0,
                                      CorrelationMethod::pearson),
                    ValidationError);

    Eigen::MatrixXd with_constant = random_gaussian(20, 2, 31);
    with_constant.col(1).setConstant(1.0);
    CHECK_THROWS_AS(cross_correlation(oracles::make_panel(with_constant), {"S1", 0}, targets,
                                      0, 0, CorrelationMethod::pearson),
                    ValidationError);
}

TEST_CASE("method names parse and print consistently") {
    CHECK(method_name(CorrelationMethod::pearson) == "pearson");
    CHECK(method_name(CorrelationMethod::spearman) == "spearman");
    CHECK(parse_method("pearson") == CorrelationMethod::pearson);
    CHECK(parse_method("spearman") == CorrelationMethod::spearman);
    CHECK_THROWS_AS(parse_method("kendall"), ValidationError);
}
