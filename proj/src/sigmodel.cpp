#include "wienermc/sigmodel.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace wmc {

InputModel InputModel::iid(double variance)
{
    InputModel m{InputKind::Iid, 0.0, variance};
    m.validate();
    return m;
}

InputModel InputModel::ar1(double a, double variance)
{
    InputModel m{InputKind::Ar1, a, variance};
    m.validate();
    return m;
}

void InputModel::validate() const
{
    if (!std::isfinite(variance) || !(variance > 0.0)) {
        throw std::invalid_argument("input model variance must be positive and finite");
    }
    if (kind == InputKind::Ar1 && !(std::abs(ar_coefficient) < 1.0)) {
        throw std::invalid_argument("AR(1) coefficient must satisfy |a| < 1");
    }
}

Plant::Plant(RealVector h, std::size_t max_length) : h_(std::move(h))
{
    if (h_.empty()) {
        throw std::invalid_argument("plant impulse response is empty");
    }
    if (h_.size() > max_length) {
        throw std::invalid_argument("plant length " + std::to_string(h_.size())
                                    + " exceeds maximum " + std::to_string(max_length));
    }
    require_finite(h_, "plant impulse response");
}

std::vector<double> generate_input(const InputModel& model, std::size_t n, std::uint64_t seed)
{
    if (n < 1) {
        throw std::invalid_argument("generate_input: n must be at least 1");
    }
    model.validate();

    std::mt19937_64 engine(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double sigma = std::sqrt(model.variance);

    std::vector<double> x(n);
    if (model.kind == InputKind::Iid) {
        for (double& v : x) {
            v = sigma * normal(engine);
        }
        return x;
    }

    const double a = model.ar_coefficient;
    const double innovation = sigma * std::sqrt(1.0 - a * a);
    x[0] = sigma * normal(engine); // start in the stationary distribution
    for (std::size_t t = 1; t < n; ++t) {
        x[t] = a * x[t - 1] + innovation * normal(engine);
    }
    return x;
}

std::vector<double> fir_output(std::span<const double> h, std::span<const double> x)
{
    if (h.empty()) {
        throw std::invalid_argument("fir_output: empty impulse response");
    }
    std::vector<double> d(x.size(), 0.0);
    for (std::size_t n = 0; n < x.size(); ++n) {
        double acc = 0.0;
        for (std::size_t k = 0; k < h.size() && k <= n; ++k) {
            acc += h[k] * x[n - k];
        }
        d[n] = acc;
    }
    return d;
}

SampleSet generate_samples(const Plant& plant, const InputModel& model, std::size_t n,
                           std::uint64_t seed)
{
    SampleSet s;
    s.seed = seed;
    s.x = generate_input(model, n, seed);
    s.d = fir_output(plant.h(), s.x);
    return s;
}

std::vector<double> estimate_autocorr(std::span<const double> x, std::size_t maxlag)
{
    const std::size_t n = x.size();
    if (maxlag >= n) {
        throw std::invalid_argument("estimate_autocorr: maxlag must be below the sample count");
    }
    std::vector<double> r(maxlag + 1, 0.0);
    for (std::size_t k = 0; k <= maxlag; ++k) {
        double acc = 0.0;
        for (std::size_t t = 0; t + k < n; ++t) {
            acc += x[t] * x[t + k];
        }
        r[k] = acc / static_cast<double>(n);
    }
    return r;
}

RealVector estimate_crosscorr(std::span<const double> x, std::span<const double> d,
                              std::size_t taps)
{
    const std::size_t n = x.size();
    if (d.size() != n) {
        throw std::invalid_argument("estimate_crosscorr: x and d lengths differ");
    }
    if (taps > n) {
        throw std::invalid_argument("estimate_crosscorr: more taps than samples");
    }
    RealVector b(taps, 0.0);
    for (std::size_t k = 0; k < taps; ++k) {
        double acc = 0.0;
        for (std::size_t t = k; t < n; ++t) {
            acc += x[t - k] * d[t];
        }
        b[k] = acc / static_cast<double>(n);
    }
    return b;
}

std::pair<CorrelationMatrix, RealVector> exact_correlations(const Plant& plant,
                                                            const InputModel& model)
{
    model.validate();
    const std::size_t n = plant.size();
    std::vector<double> r(n, 0.0);
    r[0] = model.variance;
    if (model.kind == InputKind::Ar1) {
        double power = 1.0;
        for (std::size_t k = 1; k < n; ++k) {
            power *= model.ar_coefficient;
            r[k] = model.variance * power;
        }
    }
    CorrelationMatrix corr(std::move(r));

    RealVector b;
    if (model.kind == InputKind::Iid) {
        b = plant.h();
        for (double& v : b) {
            v *= model.variance;
        }
    } else {
        b = multiply(corr.to_dense(), plant.h());
    }
    return {std::move(corr), std::move(b)};
}

} // namespace wmc
