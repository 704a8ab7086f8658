#ifndef WIENERMC_BASELINES_HPP
#define WIENERMC_BASELINES_HPP

/** @file
 * Classical adaptive filters (LMS, NLMS, RLS, Kaczmarz) for the same
 * identification problem. Every real product or quotient in an update goes
 * through a counter so the per-step cost can be measured, not just quoted.
 */

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>

#include "wienermc/corrmath.hpp"

namespace wmc {

enum class Algorithm { Lms, Nlms, Rls, Kaczmarz, Mcmc };

std::string to_string(Algorithm a);
/// Accepts the upper-case tags LMS, NLMS, RLS, KACZMARZ, MCMC.
Algorithm algorithm_from_string(const std::string& name);

/// RLS per-step multiplications are at most kRlsMultConstant * N^2.
inline constexpr std::uint64_t kRlsMultConstant = 9;
/// Default RLS regularization; the initial inverse correlation is I / delta.
inline constexpr double kDefaultRlsDelta = 1e-8;

struct FilterParams {
    double mu = 0.0;
    double epsilon = 0.0;
    double lambda = 1.0;
    double delta = kDefaultRlsDelta;
};

struct FilterState {
    Algorithm algorithm = Algorithm::Lms;
    RealVector w;
    FilterParams params;
    /// RLS inverse correlation estimate; empty for the other algorithms
    DenseMatrix inverse_correlation;
    std::uint64_t mult_count = 0;
};

/// Regressor [x_n, x_{n-1}, ..., x_{n-N+1}] and the desired sample d_n.
struct RegressorFrame {
    RealVector x;
    double d = 0.0;
};

/**
 * Zero-weight filter of length @p taps.
 *
 * Recognised parameters: LMS {mu}, NLMS {mu, epsilon}, RLS {lambda, delta},
 * KACZMARZ {}. Unknown names, missing mu, mu <= 0, lambda outside (0, 1],
 * delta <= 0 and epsilon < 0 are rejected with std::invalid_argument.
 */
FilterState init(Algorithm algorithm, std::size_t taps,
                 const std::map<std::string, double>& params = {});

/**
 * One update with e = d - w'x.
 *
 *  - LMS:      w += mu e x
 *  - NLMS:     w += mu / (epsilon + x'x) e x
 *  - Kaczmarz: w += e / (x'x) x
 *  - RLS:      k = P x / (lambda + x'P x), w += k e, P = (P - k x'P) / lambda
 *
 * NLMS with epsilon = 0 and Kaczmarz throw std::domain_error on a zero
 * regressor.
 */
void step(FilterState& state, const RegressorFrame& frame);

/// Error of the prediction w'x against d, no counting.
double prior_error(const FilterState& state, const RegressorFrame& frame);

/**
 * Multiplications per update: LMS 2N+1, NLMS and Kaczmarz 3N+2,
 * RLS 3N^2+4N+2 (<= 9 N^2), and N for the random-walk solver (one product per
 * unknown per step, the reference figure).
 */
std::uint64_t mult_count_per_step(Algorithm algorithm, std::size_t taps);

} // namespace wmc

#endif // WIENERMC_BASELINES_HPP
