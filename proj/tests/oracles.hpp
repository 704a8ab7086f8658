#ifndef WIENERMC_TESTS_ORACLES_HPP
#define WIENERMC_TESTS_ORACLES_HPP

// Reference computations used only by the tests. They go through Eigen or
// plain enumeration, never through the library's own solvers.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "wienermc/corrmath.hpp"
#include "wienermc/mcsolve.hpp"

namespace wmc::oracle {

inline Eigen::MatrixXd to_eigen(const DenseMatrix& m)
{
    Eigen::MatrixXd out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
        }
    }
    return out;
}

/// Ascending eigenvalues of a symmetric matrix.
inline std::vector<double> symmetric_eigenvalues(const DenseMatrix& m)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(m), Eigen::EigenvaluesOnly);
    const Eigen::VectorXd ev = es.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

inline double spectral_radius(const DenseMatrix& m)
{
    double best = 0.0;
    for (double v : symmetric_eigenvalues(m)) {
        best = std::max(best, std::abs(v));
    }
    return best;
}

inline std::vector<double> solve(const DenseMatrix& a, const std::vector<double>& b)
{
    const Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(b.data(), b.size());
    const Eigen::VectorXd x = to_eigen(a).fullPivLu().solve(rhs);
    return {x.data(), x.data() + x.size()};
}

/// Random autocorrelation with r_0 = 1 and a tail scaled so the spectral
/// radius of F = I - R equals @p target_rho.
inline std::vector<double> random_autocorr(std::mt19937_64& rng, std::size_t n, double target_rho)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> r(n, 0.0);
    r[0] = 1.0;
    if (n == 1) {
        return r;
    }
    for (std::size_t k = 1; k < n; ++k) {
        r[k] = u(rng) / static_cast<double>(k);
    }
    // F = I - R is minus the Toeplitz matrix of the tail, so rho(F) scales
    // linearly with the tail.
    DenseMatrix f(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            f(i, j) = i == j ? 0.0 : -r[i > j ? i - j : j - i];
        }
    }
    const double rho = oracle::spectral_radius(f);
    for (std::size_t k = 1; k < n; ++k) {
        r[k] *= target_rho / rho;
    }
    return r;
}

/**
 * Exact expectation of the walk score with a cap of @p max_steps transient
 * moves, by enumerating every draw sequence. Each sequence is replayed through
 * run_walk with a scripted uniform stream that lands mid-interval on the
 * chosen state, and weighted by its probability under P.
 */
inline double enumerated_expectation(const SplitSystem& sys, std::size_t start,
                                     std::size_t max_steps)
{
    const std::size_t n = sys.size();
    const DenseMatrix& p = sys.P();

    auto midpoint = [&](std::size_t from, std::size_t to) {
        double lo = 0.0;
        for (std::size_t s = 0; s < to; ++s) {
            lo += p(from, s);
        }
        return lo + 0.5 * p(from, to);
    };

    double expectation = 0.0;
    std::vector<std::size_t> path; // states visited after start
    std::function<void(std::size_t, double)> recurse = [&](std::size_t state, double prob) {
        std::vector<double> draws;
        std::size_t cur = start;
        for (std::size_t s : path) {
            draws.push_back(midpoint(cur, s));
            cur = s;
        }
        if (path.size() == max_steps) {
            std::size_t k = 0;
            const WalkResult r = run_walk(sys, start, [&] { return draws.at(k++); }, max_steps);
            expectation += prob * r.score;
            return;
        }
        // absorbed on the next draw
        const double p_abs = p(state, n);
        if (p_abs > 0.0) {
            draws.push_back(midpoint(state, n));
            std::size_t k = 0;
            const WalkResult r = run_walk(sys, start, [&] { return draws.at(k++); }, max_steps);
            expectation += prob * p_abs * r.score;
        }
        for (std::size_t next = 0; next < n; ++next) {
            if (p(state, next) > 0.0) {
                path.push_back(next);
                recurse(next, prob * p(state, next));
                path.pop_back();
            }
        }
    };
    recurse(start, 1.0);
    return expectation;
}

} // namespace wmc::oracle

#endif // WIENERMC_TESTS_ORACLES_HPP
