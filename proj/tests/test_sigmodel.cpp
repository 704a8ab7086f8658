#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <random>

#include "wienermc/sigmodel.hpp"

using namespace wmc;

namespace {

double mean(const std::vector<double>& x)
{
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double variance(const std::vector<double>& x)
{
    const double m = mean(x);
    double acc = 0.0;
    for (double v : x) {
        acc += (v - m) * (v - m);
    }
    return acc / static_cast<double>(x.size());
}

} // namespace

TEST_CASE("IID input has zero mean and unit variance")
{
    const auto x = generate_input(InputModel::iid(), 1'000'000, 7);
    CHECK(std::abs(mean(x)) <= 0.01);
    CHECK(std::abs(variance(x) - 1.0) <= 0.02);
}

TEST_CASE("AR(1) input has the requested stationary statistics")
{
    const auto x = generate_input(InputModel::ar1(0.5, 2.0), 1'000'000, 3);
    const auto r = estimate_autocorr(x, 3);
    CHECK(r[0] == doctest::Approx(2.0).epsilon(0.02));
    CHECK(std::abs(r[1] - 1.0) <= 0.03);
    CHECK(std::abs(r[2] - 0.5) <= 0.03);
    CHECK(std::abs(r[3] - 0.25) <= 0.03);
}

TEST_CASE("generate_input is deterministic in (model, n, seed)")
{
    const auto model = InputModel::ar1(-0.3);
    CHECK(generate_input(model, 1000, 42) == generate_input(model, 1000, 42));
    CHECK(generate_input(model, 1000, 42) != generate_input(model, 1000, 43));
    CHECK(generate_input(InputModel::iid(), 1000, 42) != generate_input(model, 1000, 42));
}

TEST_CASE("generate_input and models validate their arguments")
{
    CHECK_THROWS_AS(generate_input(InputModel::iid(), 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(InputModel::ar1(1.0), std::invalid_argument);
    CHECK_THROWS_AS(InputModel::ar1(-1.5), std::invalid_argument);
    CHECK_THROWS_AS(InputModel::iid(0.0), std::invalid_argument);
    CHECK_THROWS_AS(Plant(RealVector{}), std::invalid_argument);
    CHECK_THROWS_AS(Plant(RealVector(65, 0.1)), std::invalid_argument);
    CHECK_NOTHROW(Plant(RealVector(64, 0.1)));
}

TEST_CASE("fir_output examples")
{
    CHECK(fir_output(std::vector<double>{1.0}, std::vector<double>{2.0, 4.0})
          == std::vector<double>{2.0, 4.0});
    CHECK(fir_output(std::vector<double>{0.0, 1.0}, std::vector<double>{1.0, 2.0, 3.0})
          == std::vector<double>{0.0, 1.0, 2.0});
    CHECK(fir_output(std::vector<double>{1.0, 1.0}, std::vector<double>{1.0, 1.0, 1.0})
          == std::vector<double>{1.0, 2.0, 2.0});
    CHECK_THROWS_AS(fir_output(std::vector<double>{}, std::vector<double>{1.0}),
                    std::invalid_argument);
}

TEST_CASE("fir_output is linear")
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> h(1 + trial % 6), x(1 + trial % 13), y(x.size());
        for (double& v : h) v = u(rng);
        for (double& v : x) v = u(rng);
        for (double& v : y) v = u(rng);
        const double alpha = u(rng), beta = u(rng);
        std::vector<double> combo(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            combo[i] = alpha * x[i] + beta * y[i];
        }
        const auto lhs = fir_output(h, combo);
        const auto fx = fir_output(h, x);
        const auto fy = fir_output(h, y);
        for (std::size_t i = 0; i < x.size(); ++i) {
            REQUIRE(std::abs(lhs[i] - (alpha * fx[i] + beta * fy[i])) <= 1e-12);
        }
    }
}

TEST_CASE("estimate_autocorr examples")
{
    const auto r = estimate_autocorr(std::vector<double>{1.0, -1.0, 1.0, -1.0}, 1);
    CHECK(r[0] == 1.0);
    CHECK(r[1] == -0.75);
    CHECK(estimate_autocorr(std::vector<double>(5, 0.0), 2) == std::vector<double>(3, 0.0));
    CHECK(estimate_autocorr(std::vector<double>(4, 3.0), 0)[0] == 9.0);
    CHECK_THROWS_AS(estimate_autocorr(std::vector<double>{1.0, 2.0}, 2), std::invalid_argument);
}

TEST_CASE("estimate_autocorr lag zero is never negative")
{
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g(0.0, 10.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> x(1 + trial);
        for (double& v : x) v = g(rng);
        REQUIRE(estimate_autocorr(x, 0)[0] >= 0.0);
    }
}

TEST_CASE("estimate_crosscorr examples")
{
    const std::vector<double> x{0.5, -1.0, 2.0, 0.25};
    CHECK(estimate_crosscorr(x, x, 1)[0] == estimate_autocorr(x, 0)[0]);
    CHECK(estimate_crosscorr(std::vector<double>(4, 0.0), x, 3) == RealVector(3, 0.0));
    CHECK_THROWS_AS(estimate_crosscorr(x, std::vector<double>{1.0}, 1), std::invalid_argument);
    CHECK_THROWS_AS(estimate_crosscorr(x, x, 5), std::invalid_argument);

    const Plant plant(RealVector{0.8, -0.4});
    const SampleSet s = generate_samples(plant, InputModel::iid(), 1'000'000, 7);
    const RealVector b = estimate_crosscorr(s.x, s.d, 2);
    CHECK(std::abs(b[0] - 0.8) <= 0.01);
    CHECK(std::abs(b[1] + 0.4) <= 0.01);
}

TEST_CASE("exact_correlations closed forms")
{
    SUBCASE("IID gives the identity and b = h")
    {
        const auto [r, b] = exact_correlations(Plant({0.8, -0.4}), InputModel::iid());
        CHECK(r.autocorr() == std::vector<double>{1.0, 0.0});
        CHECK(b == RealVector{0.8, -0.4});
    }
    SUBCASE("AR(1) geometric autocorrelation")
    {
        const auto [r, b] = exact_correlations(Plant({1.0, 0.0, 0.0}), InputModel::ar1(0.5));
        CHECK(r.autocorr() == std::vector<double>{1.0, 0.5, 0.25});
    }
    SUBCASE("AR(1) cross-correlation is R h")
    {
        const auto [r, b] = exact_correlations(Plant({1.0, 0.0}), InputModel::ar1(0.5));
        CHECK(b == RealVector{1.0, 0.5});
    }
    SUBCASE("variance scales both")
    {
        const auto [r, b] = exact_correlations(Plant({1.0, 2.0}), InputModel::iid(3.0));
        CHECK(r.autocorr() == std::vector<double>{3.0, 0.0});
        CHECK(b == RealVector{3.0, 6.0});
    }
}

TEST_CASE("empirical correlations match the closed forms over 50 seeds")
{
    const Plant plant({0.8, -0.4, 0.3, 0.1});
    const auto [r_exact, b_exact] = exact_correlations(plant, InputModel::iid());
    int within = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const SampleSet s = generate_samples(plant, InputModel::iid(), 1'000'000, seed);
        const auto r = estimate_autocorr(s.x, plant.size() - 1);
        const auto b = estimate_crosscorr(s.x, s.d, plant.size());
        double r_err = 0.0, b_err = 0.0;
        for (std::size_t k = 0; k < plant.size(); ++k) {
            r_err = std::max(r_err, std::abs(r[k] - r_exact.lag(k)));
            b_err = std::max(b_err, std::abs(b[k] - b_exact[k]));
        }
        within += (r_err <= 0.02 && b_err <= 0.02) ? 1 : 0;
    }
    CHECK(within == 50);
}
