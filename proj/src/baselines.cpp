#include "wienermc/baselines.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace wmc {

namespace {

class Counter {
public:
    explicit Counter(std::uint64_t& count) : count_(count) {}

    double mul(double a, double b)
    {
        ++count_;
        return a * b;
    }

    double div(double a, double b)
    {
        ++count_;
        return a / b;
    }

    double dot(std::span<const double> a, std::span<const double> b)
    {
        double acc = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            acc += mul(a[i], b[i]);
        }
        return acc;
    }

    /// y += alpha * x
    void axpy(double alpha, std::span<const double> x, std::span<double> y)
    {
        for (std::size_t i = 0; i < x.size(); ++i) {
            y[i] += mul(alpha, x[i]);
        }
    }

private:
    std::uint64_t& count_;
};

double require_param(const std::map<std::string, double>& params, const std::string& name,
                     Algorithm algorithm)
{
    const auto it = params.find(name);
    if (it == params.end()) {
        throw std::invalid_argument(to_string(algorithm) + ": missing parameter '" + name + "'");
    }
    return it->second;
}

void check_names(const std::map<std::string, double>& params, const std::set<std::string>& allowed,
                 Algorithm algorithm)
{
    for (const auto& [name, value] : params) {
        if (!allowed.contains(name)) {
            throw std::invalid_argument(to_string(algorithm) + ": unknown parameter '" + name
                                        + "'");
        }
        if (!std::isfinite(value)) {
            throw std::invalid_argument(to_string(algorithm) + ": parameter '" + name
                                        + "' is not finite");
        }
    }
}

} // namespace

std::string to_string(Algorithm a)
{
    switch (a) {
    case Algorithm::Lms:
        return "LMS";
    case Algorithm::Nlms:
        return "NLMS";
    case Algorithm::Rls:
        return "RLS";
    case Algorithm::Kaczmarz:
        return "KACZMARZ";
    case Algorithm::Mcmc:
        return "MCMC";
    }
    return "UNKNOWN";
}

Algorithm algorithm_from_string(const std::string& name)
{
    for (Algorithm a : {Algorithm::Lms, Algorithm::Nlms, Algorithm::Rls, Algorithm::Kaczmarz,
                        Algorithm::Mcmc}) {
        if (to_string(a) == name) {
            return a;
        }
    }
    throw std::invalid_argument("unknown algorithm '" + name + "'");
}

FilterState init(Algorithm algorithm, std::size_t taps, const std::map<std::string, double>& params)
{
    if (taps < 1) {
        throw std::invalid_argument("filter length must be at least 1");
    }
    FilterState s;
    s.algorithm = algorithm;
    s.w.assign(taps, 0.0);

    switch (algorithm) {
    case Algorithm::Lms:
        check_names(params, {"mu"}, algorithm);
        s.params.mu = require_param(params, "mu", algorithm);
        break;
    case Algorithm::Nlms:
        check_names(params, {"mu", "epsilon"}, algorithm);
        s.params.mu = require_param(params, "mu", algorithm);
        if (params.contains("epsilon")) {
            s.params.epsilon = params.at("epsilon");
        }
        if (s.params.epsilon < 0.0) {
            throw std::invalid_argument("NLMS: epsilon must be non-negative");
        }
        break;
    case Algorithm::Kaczmarz:
        check_names(params, {}, algorithm);
        break;
    case Algorithm::Rls:
        check_names(params, {"lambda", "delta"}, algorithm);
        if (params.contains("lambda")) {
            s.params.lambda = params.at("lambda");
        }
        if (params.contains("delta")) {
            s.params.delta = params.at("delta");
        }
        if (!(s.params.lambda > 0.0 && s.params.lambda <= 1.0)) {
            throw std::invalid_argument("RLS: lambda must lie in (0, 1]");
        }
        if (!(s.params.delta > 0.0)) {
            throw std::invalid_argument("RLS: delta must be positive");
        }
        s.inverse_correlation = DenseMatrix(taps, taps);
        for (std::size_t i = 0; i < taps; ++i) {
            s.inverse_correlation(i, i) = 1.0 / s.params.delta;
        }
        break;
    case Algorithm::Mcmc:
        throw std::invalid_argument("MCMC is not an adaptive filter; use solve()");
    }

    if ((algorithm == Algorithm::Lms || algorithm == Algorithm::Nlms) && !(s.params.mu > 0.0)) {
        throw std::invalid_argument(to_string(algorithm) + ": mu must be positive");
    }
    return s;
}

double prior_error(const FilterState& state, const RegressorFrame& frame)
{
    double y = 0.0;
    for (std::size_t i = 0; i < state.w.size(); ++i) {
        y += state.w[i] * frame.x[i];
    }
    return frame.d - y;
}

void step(FilterState& state, const RegressorFrame& frame)
{
    const std::size_t n = state.w.size();
    if (frame.x.size() != n) {
        throw std::invalid_argument("step: regressor length does not match filter length");
    }
    Counter c(state.mult_count);
    const std::span<const double> x = frame.x;
    const double e = frame.d - c.dot(state.w, x);

    switch (state.algorithm) {
    case Algorithm::Lms: {
        c.axpy(c.mul(state.params.mu, e), x, state.w);
        break;
    }
    case Algorithm::Nlms: {
        const double energy = c.dot(x, x);
        const double denom = state.params.epsilon + energy;
        if (denom == 0.0) {
            throw std::domain_error("NLMS: zero regressor with epsilon = 0");
        }
        const double gain = c.mul(c.div(state.params.mu, denom), e);
        c.axpy(gain, x, state.w);
        break;
    }
    case Algorithm::Kaczmarz: {
        const double energy = c.dot(x, x);
        if (energy == 0.0) {
            throw std::domain_error("Kaczmarz: zero regressor");
        }
        const double gain = c.mul(c.div(1.0, energy), e);
        c.axpy(gain, x, state.w);
        break;
    }
    case Algorithm::Rls: {
        DenseMatrix& p = state.inverse_correlation;
        RealVector px(n);
        for (std::size_t i = 0; i < n; ++i) {
            px[i] = c.dot(p.row(i), x);
        }
        const double denom = state.params.lambda + c.dot(x, px);
        const double inv = c.div(1.0, denom);
        RealVector k(n);
        for (std::size_t i = 0; i < n; ++i) {
            k[i] = c.mul(px[i], inv);
        }
        c.axpy(e, k, state.w);
        // P symmetric, so x'P = (P x)'.
        const double inv_lambda = c.div(1.0, state.params.lambda);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                p(i, j) = c.mul(p(i, j) - c.mul(k[i], px[j]), inv_lambda);
            }
        }
        break;
    }
    case Algorithm::Mcmc:
        throw std::invalid_argument("step: MCMC has no adaptive update");
    }
}

std::uint64_t mult_count_per_step(Algorithm algorithm, std::size_t taps)
{
    if (taps < 1) {
        throw std::invalid_argument("mult_count_per_step: filter length must be at least 1");
    }
    const std::uint64_t n = taps;
    switch (algorithm) {
    case Algorithm::Lms:
        return 2 * n + 1;
    case Algorithm::Nlms:
    case Algorithm::Kaczmarz:
        return 3 * n + 2;
    case Algorithm::Rls:
        return 3 * n * n + 4 * n + 2;
    case Algorithm::Mcmc:
        return n;
    }
    return 0;
}

} // namespace wmc
