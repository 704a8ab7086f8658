#include "wienermc/mcsolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "wienermc/walk_stream.hpp"

namespace wmc {

DivergentSystemError::DivergentSystemError(double spectral_radius)
    : std::runtime_error("system is divergent: spectral radius of F is "
                         + std::to_string(spectral_radius) + " (needs < 1)"),
      spectral_radius_(spectral_radius)
{
}

DenseMatrix SplitSystem::transient_probabilities() const
{
    DenseMatrix t(n_, n_);
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) {
            t(i, j) = p_(i, j);
        }
    }
    return t;
}

DenseMatrix split(const CorrelationMatrix& r)
{
    const std::size_t n = r.size();
    DenseMatrix f(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            f(i, j) = (i == j ? 1.0 : 0.0) - r(i, j);
        }
    }
    return f;
}

SplitSystem build_transition(const DenseMatrix& f, std::span<const double> b,
                             ProbabilityScheme scheme)
{
    if (!f.square()) {
        throw std::invalid_argument("build_transition: F is not square");
    }
    const std::size_t n = f.rows();
    if (n == 0) {
        throw std::invalid_argument("build_transition: empty system");
    }
    if (b.size() != n) {
        throw std::invalid_argument("build_transition: b length does not match F");
    }
    if (!(scheme.absorb > 0.0 && scheme.absorb < 1.0)) {
        throw std::invalid_argument("build_transition: absorption probability must lie in (0, 1)");
    }
    require_finite(f.entries(), "build_transition F");
    require_finite(b, "build_transition b");

    SplitSystem sys;
    sys.n_ = n;
    sys.f_ = f;
    sys.b_.assign(b.begin(), b.end());
    sys.v_ = DenseMatrix(n, n);
    sys.p_ = DenseMatrix(n + 1, n + 1);
    sys.cumulative_ = DenseMatrix(n, n + 1);

    const double transient_mass = 1.0 - scheme.absorb;
    for (std::size_t i = 0; i < n; ++i) {
        double row_abs = 0.0;
        for (double v : f.row(i)) {
            row_abs += std::abs(v);
        }

        double moving = 0.0;
        if (row_abs > 0.0) {
            for (std::size_t j = 0; j < n; ++j) {
                double p = 0.0;
                if (scheme.kind == SchemeKind::Uniform) {
                    p = transient_mass / static_cast<double>(n);
                } else if (f(i, j) != 0.0) {
                    p = transient_mass * std::abs(f(i, j)) / row_abs;
                }
                sys.p_(i, j) = p;
                sys.v_(i, j) = p > 0.0 ? f(i, j) / p : 0.0;
                moving += p;
            }
        }
        sys.p_(i, n) = 1.0 - moving;

        double cum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            cum += sys.p_(i, j);
            sys.cumulative_(i, j) = cum;
        }
        sys.cumulative_(i, n) = 1.0;
    }
    sys.p_(n, n) = 1.0;
    return sys;
}

std::size_t transition_rule(std::span<const double> p_row, double u)
{
    if (p_row.empty()) {
        throw std::invalid_argument("transition_rule: empty probability row");
    }
    if (!(u >= 0.0 && u < 1.0)) {
        throw std::invalid_argument("transition_rule: u must lie in [0, 1)");
    }
    double total = 0.0;
    for (double p : p_row) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw std::invalid_argument("transition_rule: probability outside [0, 1]");
        }
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw std::invalid_argument("transition_rule: probabilities do not sum to one");
    }
    double cum = 0.0;
    for (std::size_t s = 0; s + 1 < p_row.size(); ++s) {
        cum += p_row[s];
        if (u < cum) {
            return s;
        }
    }
    return p_row.size() - 1;
}

WalkEstimate estimate_component(const SplitSystem& sys, std::size_t i, std::size_t walks,
                                std::uint64_t seed, const WalkOptions& options)
{
    if (walks < 1) {
        throw std::invalid_argument("estimate_component: walks must be at least 1");
    }
    if (i >= sys.size()) {
        throw std::out_of_range("estimate_component: component out of range");
    }
    if (options.max_steps < 1) {
        throw std::invalid_argument("estimate_component: max_steps must be at least 1");
    }

    std::vector<double> scores(walks);
    std::vector<std::size_t> lengths(walks);
    std::vector<char> truncated(walks);

    auto run_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            WalkStream stream(seed, i, k);
            const WalkResult r = run_walk(sys, i, stream, options.max_steps);
            scores[k] = r.score;
            lengths[k] = r.length;
            truncated[k] = r.truncated ? 1 : 0;
        }
    };

    constexpr std::size_t kMinWalksPerThread = 4096;
    unsigned threads = options.threads != 0 ? options.threads
                                            : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(
        std::min<std::size_t>(threads, std::max<std::size_t>(1, walks / kMinWalksPerThread)));
    if (threads <= 1) {
        run_range(0, walks);
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (walks + threads - 1) / threads;
        for (std::size_t begin = 0; begin < walks; begin += chunk) {
            pool.emplace_back(run_range, begin, std::min(walks, begin + chunk));
        }
    }

    // Shift by the first score: identical scores give an exact mean and zero
    // variance, and the deviations are better conditioned than raw scores.
    const double shift = scores.front();
    std::vector<double> dev(walks);
    for (std::size_t k = 0; k < walks; ++k) {
        dev[k] = scores[k] - shift;
    }
    const double n = static_cast<double>(walks);
    const double mean_dev = pairwise_sum(dev) / n;

    WalkEstimate est;
    est.walks = walks;
    est.mean = shift + mean_dev;
    if (walks > 1) {
        for (double& d : dev) {
            d = (d - mean_dev) * (d - mean_dev);
        }
        const double variance = pairwise_sum(dev) / (n - 1.0);
        est.std_error = std::sqrt(variance / n);
    }
    for (std::size_t k = 0; k < walks; ++k) {
        est.total_length += lengths[k];
        est.max_length = std::max(est.max_length, lengths[k]);
        est.truncated_walks += static_cast<std::size_t>(truncated[k]);
    }
    est.mean_length = static_cast<double>(est.total_length) / n;
    return est;
}

std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::Convergent:
        return "CONVERGENT";
    case Verdict::Divergent:
        return "DIVERGENT";
    case Verdict::Marginal:
        return "MARGINAL";
    }
    return "UNKNOWN";
}

PrecheckReport precheck_convergence(const CorrelationMatrix& r, double margin)
{
    if (!(margin >= 0.0 && margin < 1.0)) {
        throw std::invalid_argument("precheck_convergence: margin must lie in [0, 1)");
    }
    PrecheckReport report;
    const Disc disc = gershgorin_disc(r);
    report.gershgorin_center = disc.center;
    report.gershgorin_radius = disc.radius;
    report.margin = margin;

    const SpectralEstimate rho = spectral_radius(split(r));
    report.spectral_radius_F = rho.value;
    report.spectral_converged = rho.converged;
    report.eigen_interval_ok = rho.value < 1.0;

    if (rho.value >= 1.0) {
        report.verdict = Verdict::Divergent;
    } else if (rho.value >= 1.0 - margin) {
        report.verdict = Verdict::Marginal;
    } else {
        report.verdict = Verdict::Convergent;
    }
    return report;
}

SolveResult solve(const CorrelationMatrix& r, std::span<const double> b, ProbabilityScheme scheme,
                  std::size_t walks, std::uint64_t seed, const SolveOptions& options)
{
    if (b.size() != r.size()) {
        throw std::invalid_argument("solve: b length does not match R");
    }
    if (walks < 1) {
        throw std::invalid_argument("solve: walks must be at least 1");
    }
    SolveResult result;
    result.precheck = precheck_convergence(r, options.margin);
    if (result.precheck.verdict == Verdict::Divergent) {
        if (!options.force) {
            throw DivergentSystemError(result.precheck.spectral_radius_F);
        }
        result.forced = true;
    }

    const SplitSystem sys = build_transition(split(r), b, scheme);
    const WalkOptions walk_options{options.max_steps, options.threads};
    result.w.resize(r.size());
    result.estimates.reserve(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        result.estimates.push_back(estimate_component(sys, i, walks, seed, walk_options));
        result.w[i] = result.estimates.back().mean;
    }
    return result;
}

std::uint64_t min_walks(const DenseMatrix& transient_probabilities, std::size_t start,
                        std::size_t steps)
{
    const DenseMatrix& p = transient_probabilities;
    if (!p.square()) {
        throw std::invalid_argument("min_walks: transition block is not square");
    }
    const std::size_t n = p.rows();
    if (start >= n) {
        throw std::out_of_range("min_walks: start state out of range");
    }
    if (steps < 1) {
        throw std::invalid_argument("min_walks: step count must be at least 1");
    }

    constexpr double kUnreached = std::numeric_limits<double>::infinity();
    std::vector<double> cur(n, kUnreached);
    std::vector<double> next(n);
    cur[start] = 1.0;
    for (std::size_t step = 0; step < steps; ++step) {
        std::fill(next.begin(), next.end(), kUnreached);
        for (std::size_t s = 0; s < n; ++s) {
            if (cur[s] == kUnreached) {
                continue;
            }
            for (std::size_t k = 0; k < n; ++k) {
                if (p(s, k) > 0.0) {
                    next[k] = std::min(next[k], cur[s] * p(s, k));
                }
            }
        }
        cur.swap(next);
    }

    const double least = *std::min_element(cur.begin(), cur.end());
    if (least == kUnreached || least <= 0.0) {
        throw NoPathError("min_walks: no " + std::to_string(steps)
                          + "-step transient path from state " + std::to_string(start));
    }
    const double reciprocal = 1.0 / least;
    if (!(reciprocal < 0x1.0p63)) {
        throw std::overflow_error("min_walks: walk count exceeds 2^63");
    }
    // Products of `steps` rounded factors: snap values within rounding of an
    // integer so exact reciprocals such as 1/0.25^j do not round up.
    const double nearest = std::round(reciprocal);
    const double slack = 4.0 * std::numeric_limits<double>::epsilon()
                         * static_cast<double>(steps + 2) * reciprocal;
    if (std::abs(reciprocal - nearest) <= slack) {
        return static_cast<std::uint64_t>(nearest);
    }
    return static_cast<std::uint64_t>(std::ceil(reciprocal));
}

std::uint64_t min_walks(const SplitSystem& sys, std::size_t start, std::size_t steps)
{
    return min_walks(sys.transient_probabilities(), start, steps);
}

std::uint64_t min_walks(const SplitSystem& sys, std::size_t steps)
{
    const DenseMatrix p = sys.transient_probabilities();
    std::uint64_t worst = 0;
    bool any = false;
    for (std::size_t s = 0; s < sys.size(); ++s) {
        try {
            worst = std::max(worst, min_walks(p, s, steps));
            any = true;
        } catch (const NoPathError&) {
        }
    }
    if (!any) {
        throw NoPathError("min_walks: no " + std::to_string(steps)
                          + "-step transient path from any state");
    }
    return worst;
}

double truncated_sum(const DenseMatrix& f, std::span<const double> b, std::size_t i,
                     std::size_t m)
{
    if (m < 1) {
        throw std::invalid_argument("truncated_sum: m must be at least 1");
    }
    if (!f.square() || f.rows() != b.size()) {
        throw std::invalid_argument("truncated_sum: dimension mismatch");
    }
    if (i >= b.size()) {
        throw std::out_of_range("truncated_sum: component out of range");
    }
    RealVector term(b.begin(), b.end());
    double sum = term[i];
    for (std::size_t t = 1; t < m; ++t) {
        term = multiply(f, term);
        sum += term[i];
    }
    return sum;
}

std::vector<ErrorBound> error_bounds(const CorrelationMatrix& r, std::span<const double> b,
                                     std::size_t i, std::size_t max_depth,
                                     ProbabilityScheme scheme)
{
    if (b.size() != r.size()) {
        throw std::invalid_argument("error_bounds: b length does not match R");
    }
    if (i >= r.size()) {
        throw std::out_of_range("error_bounds: component out of range");
    }
    const PrecheckReport pre = precheck_convergence(r);
    if (pre.verdict == Verdict::Divergent) {
        throw DivergentSystemError(pre.spectral_radius_F);
    }

    const RealVector exact = direct_solve(r, b);
    const DenseMatrix f = split(r);
    const SplitSystem sys = build_transition(f, b, scheme);
    const DenseMatrix probs = sys.transient_probabilities();

    std::vector<ErrorBound> out;
    out.reserve(max_depth + 1);
    RealVector term(b.begin(), b.end());
    double partial = term[i];
    for (std::size_t depth = 0; depth <= max_depth; ++depth) {
        if (depth > 0) {
            term = multiply(f, term);
            partial += term[i];
        }
        ErrorBound eb;
        eb.depth = depth;
        eb.lower_bound = std::abs(exact[i] - partial);
        if (depth == 0) {
            eb.min_walks = 0;
        } else {
            try {
                eb.min_walks = min_walks(probs, i, depth);
            } catch (const NoPathError&) {
                eb.min_walks.reset();
            }
        }
        out.push_back(eb);
    }
    return out;
}

} // namespace wmc
