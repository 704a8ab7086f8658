#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "wienermc/baselines.hpp"
#include "wienermc/sigmodel.hpp"

using namespace wmc;

namespace {

RegressorFrame frame_at(const std::vector<double>& x, const std::vector<double>& d, std::size_t t,
                        std::size_t taps)
{
    RegressorFrame f;
    f.x.resize(taps);
    for (std::size_t k = 0; k < taps; ++k) {
        f.x[k] = t >= k ? x[t - k] : 0.0;
    }
    f.d = d[t];
    return f;
}

double distance(const std::vector<double>& a, const std::vector<double>& b)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += (a[i] - b[i]) * (a[i] - b[i]);
    }
    return std::sqrt(acc);
}

} // namespace

TEST_CASE("algorithm names round trip")
{
    for (Algorithm a : {Algorithm::Lms, Algorithm::Nlms, Algorithm::Rls, Algorithm::Kaczmarz,
                        Algorithm::Mcmc}) {
        CHECK(algorithm_from_string(to_string(a)) == a);
    }
    CHECK(to_string(Algorithm::Kaczmarz) == "KACZMARZ");
    CHECK_THROWS_AS(algorithm_from_string("lms"), std::invalid_argument);
    CHECK_THROWS_AS(algorithm_from_string("SGD"), std::invalid_argument);
}

TEST_CASE("init examples")
{
    const FilterState lms = init(Algorithm::Lms, 4, {{"mu", 0.01}});
    CHECK(lms.w == RealVector(4, 0.0));
    CHECK(lms.params.mu == 0.01);
    CHECK(lms.mult_count == 0);
    CHECK(lms.inverse_correlation.rows() == 0);

    const FilterState rls = init(Algorithm::Rls, 2, {{"lambda", 0.99}, {"delta", 0.5}});
    CHECK(rls.inverse_correlation == DenseMatrix(2, 2, {2.0, 0.0, 0.0, 2.0}));
    CHECK(rls.params.lambda == 0.99);

    const FilterState rls_default = init(Algorithm::Rls, 1);
    CHECK(rls_default.inverse_correlation(0, 0) == doctest::Approx(1e8));

    CHECK(init(Algorithm::Kaczmarz, 3).w.size() == 3);
    CHECK(init(Algorithm::Nlms, 3, {{"mu", 0.5}, {"epsilon", 1e-6}}).params.epsilon == 1e-6);
}

TEST_CASE("init rejects bad parameters")
{
    CHECK_THROWS_AS(init(Algorithm::Lms, 0, {{"mu", 0.1}}), std::invalid_argument);
    CHECK_THROWS_AS(init(Algorithm::Lms, 2), std::invalid_argument);
    CHECK_THROWS_AS(init(Algorithm::Lms, 2, {{"mu", 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(init(Algorithm::Lms, 2, {{"mu", 0.1}, {"lambda", 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(init(Algorithm::Nlms, 2, {{"mu", 0.1}, {"epsilon", -1.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(init(Algorithm::Rls, 2, {{"lambda", 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(init(Algorithm::Rls, 2, {{"lambda", 1.01}}), std::invalid_argument);
    CHECK_THROWS_AS(init(Algorithm::Rls, 2, {{"delta", 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(init(Algorithm::Kaczmarz, 2, {{"mu", 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(init(Algorithm::Lms, 2, {{"mu", std::nan("")}}), std::invalid_argument);
    CHECK_THROWS_AS(init(Algorithm::Mcmc, 2), std::invalid_argument);
}

TEST_CASE("single-step examples")
{
    SUBCASE("LMS")
    {
        FilterState s = init(Algorithm::Lms, 2, {{"mu", 0.1}});
        step(s, {{1.0, 0.0}, 1.0});
        CHECK(s.w[0] == doctest::Approx(0.1).epsilon(1e-15));
        CHECK(s.w[1] == 0.0);
    }
    SUBCASE("NLMS")
    {
        FilterState s = init(Algorithm::Nlms, 2, {{"mu", 1.0}});
        step(s, {{1.0, 1.0}, 2.0});
        CHECK(s.w == RealVector{1.0, 1.0});
    }
    SUBCASE("Kaczmarz projects onto the hyperplane")
    {
        FilterState s = init(Algorithm::Kaczmarz, 2);
        step(s, {{3.0, 4.0}, 5.0});
        CHECK(s.w[0] == doctest::Approx(0.6).epsilon(1e-15));
        CHECK(s.w[1] == doctest::Approx(0.8).epsilon(1e-15));
    }
    SUBCASE("RLS scalar")
    {
        FilterState s = init(Algorithm::Rls, 1, {{"lambda", 1.0}, {"delta", 1.0}});
        step(s, {{1.0}, 1.0});
        CHECK(s.w[0] == 0.5);
        CHECK(s.inverse_correlation(0, 0) == 0.5);
    }
    SUBCASE("errors")
    {
        FilterState s = init(Algorithm::Lms, 2, {{"mu", 0.1}});
        CHECK_THROWS_AS(step(s, {{1.0}, 1.0}), std::invalid_argument);
        FilterState n = init(Algorithm::Nlms, 2, {{"mu", 0.5}});
        CHECK_THROWS_AS(step(n, {{0.0, 0.0}, 1.0}), std::domain_error);
        FilterState k = init(Algorithm::Kaczmarz, 2);
        CHECK_THROWS_AS(step(k, {{0.0, 0.0}, 1.0}), std::domain_error);
        FilterState ne = init(Algorithm::Nlms, 2, {{"mu", 0.5}, {"epsilon", 0.1}});
        CHECK_NOTHROW(step(ne, {{0.0, 0.0}, 1.0}));
        CHECK(ne.w == RealVector{0.0, 0.0});
    }
}

TEST_CASE("measured multiplication counts match the closed forms")
{
    std::mt19937_64 rng(12);
    std::normal_distribution<double> g;
    for (std::size_t n : {1u, 2u, 4u, 8u}) {
        for (Algorithm a : {Algorithm::Lms, Algorithm::Nlms, Algorithm::Rls, Algorithm::Kaczmarz}) {
            std::map<std::string, double> params;
            if (a == Algorithm::Lms || a == Algorithm::Nlms) {
                params["mu"] = 0.1;
            }
            FilterState s = init(a, n, params);
            for (int t = 0; t < 5; ++t) {
                RegressorFrame f;
                f.x.resize(n);
                for (double& v : f.x) v = g(rng);
                f.d = g(rng);
                const std::uint64_t before = s.mult_count;
                step(s, f);
                INFO(to_string(a) << " N=" << n);
                CHECK(s.mult_count - before == mult_count_per_step(a, n));
            }
        }
    }
    CHECK(mult_count_per_step(Algorithm::Lms, 2) == 5);
    CHECK(mult_count_per_step(Algorithm::Nlms, 2) == 8);
    CHECK(mult_count_per_step(Algorithm::Kaczmarz, 2) == 8);
    CHECK(mult_count_per_step(Algorithm::Mcmc, 2) == 2);
    CHECK(mult_count_per_step(Algorithm::Rls, 2) == 22);
    for (std::size_t n = 1; n <= 64; ++n) {
        CHECK(mult_count_per_step(Algorithm::Rls, n) <= kRlsMultConstant * n * n);
    }
    CHECK_THROWS_AS(mult_count_per_step(Algorithm::Lms, 0), std::invalid_argument);
}

TEST_CASE("NLMS with mu = 1 zeroes the posterior error")
{
    std::mt19937_64 rng(21);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(trial % 8);
        FilterState s = init(Algorithm::Nlms, n, {{"mu", 1.0}});
        for (double& v : s.w) v = g(rng);
        RegressorFrame f;
        f.x.resize(n);
        for (double& v : f.x) v = g(rng);
        f.d = g(rng);
        step(s, f);
        REQUIRE(std::abs(prior_error(s, f)) <= 1e-12 * (1.0 + std::abs(f.d)));
    }
}

TEST_CASE("RLS recovers a noiseless plant after enough samples")
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        const std::size_t n = 1 + seed % 8;
        RealVector h(n);
        for (double& v : h) v = u(rng);
        const InputModel model = seed % 2 ? InputModel::iid() : InputModel::ar1(0.5);
        const SampleSet s = generate_samples(Plant(h), model, 4 * n, seed);
        FilterState f = init(Algorithm::Rls, n);
        for (std::size_t t = 0; t < s.x.size(); ++t) {
            step(f, frame_at(s.x, s.d, t, n));
        }
        INFO("seed " << seed);
        CHECK(distance(f.w, h) <= 1e-6);
    }
}

TEST_CASE("LMS with a small step stays bounded and converges")
{
    const Plant plant({0.5, -0.25, 0.125});
    const SampleSet s = generate_samples(plant, InputModel::iid(), 10000, 3);
    FilterState f = init(Algorithm::Lms, 3, {{"mu", 0.01}});
    for (std::size_t t = 0; t < s.x.size(); ++t) {
        step(f, frame_at(s.x, s.d, t, 3));
        REQUIRE(norm2(f.w) <= 10.0);
    }
    CHECK(distance(f.w, plant.h()) <= 1e-3);
}
