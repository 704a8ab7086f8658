#ifndef WIENERMC_SIGMODEL_HPP
#define WIENERMC_SIGMODEL_HPP

/** @file
 * Stationary input generation, FIR plant simulation and the correlation
 * quantities R and b, either in closed form or estimated from samples.
 */

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "wienermc/corrmath.hpp"

namespace wmc {

/// Longest plant accepted by Plant.
inline constexpr std::size_t kMaxPlantLength = 64;

enum class InputKind { Iid, Ar1 };

/**
 * Zero-mean Gaussian input process. Iid draws independent samples;
 * Ar1 follows x_t = a x_{t-1} + innovation with the innovation scaled so the
 * stationary variance equals @c variance.
 */
struct InputModel {
    InputKind kind = InputKind::Iid;
    double ar_coefficient = 0.0;
    double variance = 1.0;

    static InputModel iid(double variance = 1.0);
    static InputModel ar1(double a, double variance = 1.0);

    /// Throws std::invalid_argument on |a| >= 1 or variance <= 0.
    void validate() const;

    bool operator==(const InputModel&) const = default;
};

/// Impulse response h of the unknown FIR system.
class Plant {
public:
    explicit Plant(RealVector h, std::size_t max_length = kMaxPlantLength);

    std::size_t size() const noexcept { return h_.size(); }
    const RealVector& h() const noexcept { return h_; }

private:
    RealVector h_;
};

struct SampleSet {
    std::vector<double> x;
    std::vector<double> d;
    std::uint64_t seed = 0;
};

/// Bit-identical for identical (model, n, seed).
std::vector<double> generate_input(const InputModel& model, std::size_t n, std::uint64_t seed);

/// d_n = sum_k h_k x_{n-k}, with x_m = 0 for m < 0.
std::vector<double> fir_output(std::span<const double> h, std::span<const double> x);

SampleSet generate_samples(const Plant& plant, const InputModel& model, std::size_t n,
                           std::uint64_t seed);

/// Biased estimate r_k = (1/n) sum_{t} x_t x_{t+k} for k = 0..maxlag.
std::vector<double> estimate_autocorr(std::span<const double> x, std::size_t maxlag);

/// b_k = (1/n) sum_t x_{t-k} d_t for k = 0..taps-1, zero prehistory.
RealVector estimate_crosscorr(std::span<const double> x, std::span<const double> d,
                              std::size_t taps);

/// Closed-form R and b = R h for the given plant and input model.
std::pair<CorrelationMatrix, RealVector> exact_correlations(const Plant& plant,
                                                            const InputModel& model);

} // namespace wmc

#endif // WIENERMC_SIGMODEL_HPP
