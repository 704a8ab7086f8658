#ifndef WIENERMC_MCSOLVE_HPP
#define WIENERMC_MCSOLVE_HPP

/** @file
 * Random-walk (von Neumann-Ulam) solver for R w = b.
 *
 * R is split as R = I - F so that w = b + F b + F^2 b + ... . Each entry of F
 * is factored into a transition probability and a value, f_ij = p_ij v_ij,
 * and an extra absorbing state N collects the leftover probability mass of
 * every row. A walk started at state i scores
 *
 *     b_i + v_{i k1} b_{k1} + v_{i k1} v_{k1 k2} b_{k2} + ...
 *
 * accumulating a weighted source term at every visited transient state until
 * absorption. Its expectation reproduces the series term by term, so the
 * average of many walks estimates w_i.
 */

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "wienermc/corrmath.hpp"

namespace wmc {

/// Default cap on transient steps per walk.
inline constexpr std::size_t kDefaultMaxSteps = 10000;
/// Default spectral-radius margin below one for a CONVERGENT verdict.
inline constexpr double kDefaultMargin = 1e-6;

class DivergentSystemError : public std::runtime_error {
public:
    explicit DivergentSystemError(double spectral_radius);
    double spectral_radius() const noexcept { return spectral_radius_; }

private:
    double spectral_radius_;
};

/// No transient path of the requested length exists from the start state.
class NoPathError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class SchemeKind {
    /// every transient target equally likely, fixed absorption probability
    Uniform,
    /// targets weighted by |f_ij|; a variance-reduction extension
    Magnitude,
};

struct ProbabilityScheme {
    SchemeKind kind = SchemeKind::Uniform;
    /// Uniform: exact absorption probability. Magnitude: absorption floor.
    double absorb = 0.2;

    bool operator==(const ProbabilityScheme&) const = default;
};

/**
 * Immutable splitting of a system into probabilities and values.
 *
 * P is (N+1)x(N+1) with state N absorbing; V and F are NxN.
 */
class SplitSystem {
public:
    std::size_t size() const noexcept { return n_; }
    std::size_t absorbing_state() const noexcept { return n_; }

    const DenseMatrix& F() const noexcept { return f_; }
    const DenseMatrix& V() const noexcept { return v_; }
    const DenseMatrix& P() const noexcept { return p_; }
    const RealVector& b() const noexcept { return b_; }

    double value(std::size_t from, std::size_t to) const { return v_(from, to); }

    /// Table-driven transition: smallest state s with u < cumulative(from, s).
    std::size_t next_state(std::size_t from, double u) const noexcept
    {
        const auto row = cumulative_.row(from);
        for (std::size_t s = 0; s < n_; ++s) {
            if (u < row[s]) {
                return s;
            }
        }
        return n_;
    }

    /// NxN transient block of P.
    DenseMatrix transient_probabilities() const;

private:
    friend SplitSystem build_transition(const DenseMatrix&, std::span<const double>,
                                        ProbabilityScheme);
    SplitSystem() = default;

    std::size_t n_ = 0;
    DenseMatrix f_;
    DenseMatrix v_;
    DenseMatrix p_;
    DenseMatrix cumulative_;
    RealVector b_;
};

/// F = I - R.
DenseMatrix split(const CorrelationMatrix& r);

/**
 * Factors F into probabilities and values under @p scheme and appends the
 * absorbing state.
 *
 * Uniform: p_ij = (1 - absorb) / N, p_iN = absorb. Magnitude:
 * p_ij = (1 - absorb) |f_ij| / sum_k |f_ik|. In both schemes v_ij = f_ij / p_ij
 * where p_ij > 0 and 0 otherwise; a row of F that is entirely zero becomes
 * pure absorption, since its walks contribute nothing past the first term.
 */
SplitSystem build_transition(const DenseMatrix& f, std::span<const double> b,
                             ProbabilityScheme scheme);

/**
 * Maps a uniform draw onto a row of transition probabilities using half-open
 * cumulative intervals: state 0 for u < p_0, state 1 for p_0 <= u < p_0 + p_1,
 * and so on. Validates the row (non-negative, sums to one within 1e-12) and
 * that u lies in [0, 1).
 */
std::size_t transition_rule(std::span<const double> p_row, double u);

struct WalkResult {
    double score = 0.0;
    std::size_t length = 0;
    bool truncated = false;
};

/**
 * Runs one walk from @p start, pulling uniforms from @p next_uniform.
 * Length counts transitions into transient states; a walk that makes
 * @p max_steps of them without absorbing stops there and is marked truncated.
 */
template <class UniformSource>
WalkResult run_walk(const SplitSystem& sys, std::size_t start, UniformSource&& next_uniform,
                    std::size_t max_steps = kDefaultMaxSteps)
{
    if (max_steps < 1) {
        throw std::invalid_argument("run_walk: max_steps must be at least 1");
    }
    if (start >= sys.size()) {
        throw std::out_of_range("run_walk: start state out of range");
    }
    const RealVector& b = sys.b();
    std::size_t state = start;
    double weight = 1.0;
    double score = b[start];
    for (std::size_t step = 0; step < max_steps; ++step) {
        const std::size_t next = sys.next_state(state, next_uniform());
        if (next == sys.absorbing_state()) {
            return {score, step, false};
        }
        weight *= sys.value(state, next);
        score += weight * b[next];
        state = next;
    }
    return {score, max_steps, true};
}

struct WalkEstimate {
    double mean = 0.0;
    /// sample standard deviation / sqrt(walks); zero for a single walk
    double std_error = 0.0;
    std::size_t walks = 0;
    double mean_length = 0.0;
    std::size_t max_length = 0;
    std::size_t truncated_walks = 0;
    /// sum of walk lengths, i.e. transient steps taken
    std::uint64_t total_length = 0;
};

struct WalkOptions {
    std::size_t max_steps = kDefaultMaxSteps;
    /// 0 picks std::thread::hardware_concurrency()
    unsigned threads = 0;
};

/**
 * Averages @p walks independent walks from state @p i. Walk k draws its
 * uniforms from WalkStream(seed, i, k), so the result does not depend on the
 * thread count.
 */
WalkEstimate estimate_component(const SplitSystem& sys, std::size_t i, std::size_t walks,
                                std::uint64_t seed, const WalkOptions& options = {});

enum class Verdict { Convergent, Divergent, Marginal };

std::string to_string(Verdict v);

struct PrecheckReport {
    double gershgorin_center = 0.0;
    double gershgorin_radius = 0.0;
    double spectral_radius_F = 0.0;
    bool spectral_converged = true;
    /// every eigenvalue of F in (-1, 1), equivalently of R in (0, 2)
    bool eigen_interval_ok = false;
    double margin = kDefaultMargin;
    Verdict verdict = Verdict::Divergent;

    bool operator==(const PrecheckReport&) const = default;
};

PrecheckReport precheck_convergence(const CorrelationMatrix& r, double margin = kDefaultMargin);

struct SolveOptions {
    bool force = false;
    std::size_t max_steps = kDefaultMaxSteps;
    unsigned threads = 0;
    double margin = kDefaultMargin;
};

struct SolveResult {
    RealVector w;
    std::vector<WalkEstimate> estimates;
    PrecheckReport precheck;
    /// true when a DIVERGENT system was solved because force was set
    bool forced = false;
};

/// Full random-walk solve of R w = b. Refuses DIVERGENT systems unless forced.
SolveResult solve(const CorrelationMatrix& r, std::span<const double> b, ProbabilityScheme scheme,
                  std::size_t walks, std::uint64_t seed, const SolveOptions& options = {});

/**
 * Minimum walk count M^(j) covering every j-step transient path from
 * @p start: ceil(1 / min over such paths of the product of transition
 * probabilities). Paths may revisit states; only transitions with p > 0 count.
 */
std::uint64_t min_walks(const DenseMatrix& transient_probabilities, std::size_t start,
                        std::size_t steps);
std::uint64_t min_walks(const SplitSystem& sys, std::size_t start, std::size_t steps);
/// Worst case over every start state.
std::uint64_t min_walks(const SplitSystem& sys, std::size_t steps);

/// s_im = (sum_{j<m} F^j b)_i, the first m terms of the series for w_i.
double truncated_sum(const DenseMatrix& f, std::span<const double> b, std::size_t i,
                     std::size_t m);

struct ErrorBound {
    std::size_t depth = 0;
    /// M^(depth); zero at depth 0, empty when no path of that length exists
    std::optional<std::uint64_t> min_walks;
    /// |w_i - s_{i,depth+1}|
    double lower_bound = 0.0;
};

/// Depths 0..max_depth of the error lower bound paired with M^(depth).
std::vector<ErrorBound> error_bounds(const CorrelationMatrix& r, std::span<const double> b,
                                     std::size_t i, std::size_t max_depth,
                                     ProbabilityScheme scheme = {});

} // namespace wmc

#endif // WIENERMC_MCSOLVE_HPP
