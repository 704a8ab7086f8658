#include "wienermc/corrmath.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace wmc {

void require_finite(std::span<const double> values, std::string_view what)
{
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw std::invalid_argument(std::string(what) + ": non-finite entry at index "
                                        + std::to_string(i));
        }
    }
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), entries_(rows * cols, fill)
{
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries))
{
    if (entries_.size() != rows_ * cols_) {
        throw std::invalid_argument("DenseMatrix: entry count does not match rows*cols");
    }
}

DenseMatrix DenseMatrix::identity(std::size_t n)
{
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

CorrelationMatrix::CorrelationMatrix(std::vector<double> autocorr) : autocorr_(std::move(autocorr))
{
    if (autocorr_.empty()) {
        throw std::invalid_argument("autocorrelation sequence is empty");
    }
    require_finite(autocorr_, "autocorrelation sequence");
    if (!(autocorr_[0] > 0.0)) {
        throw std::invalid_argument("zero-lag autocorrelation must be positive");
    }
}

DenseMatrix CorrelationMatrix::to_dense() const
{
    const std::size_t n = size();
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            m(i, j) = (*this)(i, j);
        }
    }
    return m;
}

CorrelationMatrix toeplitz_from_autocorr(std::span<const double> r)
{
    return CorrelationMatrix(std::vector<double>(r.begin(), r.end()));
}

RealVector direct_solve(const DenseMatrix& a, std::span<const double> b)
{
    if (!a.square()) {
        throw std::invalid_argument("direct_solve: matrix is not square");
    }
    const std::size_t n = a.rows();
    if (b.size() != n) {
        throw std::invalid_argument("direct_solve: right-hand side length mismatch");
    }
    require_finite(a.entries(), "direct_solve matrix");
    require_finite(b, "direct_solve right-hand side");

    double scale = 0.0;
    for (double v : a.entries()) {
        scale = std::max(scale, std::abs(v));
    }
    const double cutoff = 1e-12 * scale;

    DenseMatrix lu = a;
    RealVector x(b.begin(), b.end());

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(lu(i, k)) > std::abs(lu(piv, k))) {
                piv = i;
            }
        }
        const double pivot = lu(piv, k);
        if (scale == 0.0 || std::abs(pivot) < cutoff) {
            throw SingularMatrixError("direct_solve: matrix is singular to working precision (pivot "
                                      + std::to_string(pivot) + " at column "
                                      + std::to_string(k) + ")");
        }
        if (piv != k) {
            std::swap_ranges(lu.row(k).begin(), lu.row(k).end(), lu.row(piv).begin());
            std::swap(x[k], x[piv]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double factor = lu(i, k) / pivot;
            if (factor == 0.0) {
                continue;
            }
            for (std::size_t j = k; j < n; ++j) {
                lu(i, j) -= factor * lu(k, j);
            }
            x[i] -= factor * x[k];
        }
    }

    for (std::size_t k = n; k-- > 0;) {
        double acc = x[k];
        for (std::size_t j = k + 1; j < n; ++j) {
            acc -= lu(k, j) * x[j];
        }
        x[k] = acc / lu(k, k);
    }
    return x;
}

RealVector direct_solve(const CorrelationMatrix& r, std::span<const double> b)
{
    return direct_solve(r.to_dense(), b);
}

Disc gershgorin_disc(const CorrelationMatrix& r)
{
    double radius = 0.0;
    for (std::size_t k = 1; k < r.size(); ++k) {
        radius += std::abs(r.lag(k));
    }
    return {r.lag(0), radius};
}

double max_row_radius(const CorrelationMatrix& r)
{
    const std::size_t n = r.size();
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) {
                sum += std::abs(r(i, j));
            }
        }
        best = std::max(best, sum);
    }
    return best;
}

namespace {

double dot(std::span<const double> a, std::span<const double> b)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += a[i] * b[i];
    }
    return acc;
}

void normalize(RealVector& v)
{
    const double len = norm2(v);
    for (double& e : v) {
        e /= len;
    }
}

} // namespace

SpectralEstimate spectral_radius(const DenseMatrix& f, double tol, std::size_t max_iter)
{
    if (!f.square()) {
        throw std::invalid_argument("spectral_radius: matrix is not square");
    }
    if (max_iter < 1) {
        throw std::invalid_argument("spectral_radius: max_iter must be positive");
    }
    const std::size_t n = f.rows();
    if (n == 0) {
        return {0.0, true, 0, 0.0};
    }
    require_finite(f.entries(), "spectral_radius matrix");

    if (std::all_of(f.entries().begin(), f.entries().end(), [](double v) { return v == 0.0; })) {
        return {0.0, true, 0, 0.0};
    }

    // Asymmetric start so neither symmetric nor antisymmetric Toeplitz
    // eigenvectors are orthogonal to it.
    RealVector x(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = 1.0 + 0.5 * std::sin(1.0 + 2.3 * static_cast<double>(i));
    }
    normalize(x);

    SpectralEstimate est;
    std::size_t restarts = 0;
    for (std::size_t it = 1; it <= max_iter; ++it) {
        const RealVector y = multiply(f, x);
        const double mu = dot(y, y); // Rayleigh quotient of F^2 for symmetric F
        est.iterations = it;
        if (mu == 0.0) {
            // Start vector landed in the null space; retry along a basis vector.
            x.assign(n, 0.0);
            x[restarts++ % n] = 1.0;
            continue;
        }
        RealVector z = multiply(f, y);
        double residual = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = z[i] - mu * x[i];
            residual += d * d;
        }
        residual = std::sqrt(residual);

        est.value = std::sqrt(mu);
        est.error_bound = residual / est.value;
        if (est.error_bound <= tol) {
            est.converged = true;
            return est;
        }
        const double len = norm2(z);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = z[i] / len;
        }
    }
    return est;
}

double norm2(std::span<const double> v)
{
    double scale = 0.0;
    for (double e : v) {
        scale = std::max(scale, std::abs(e));
    }
    if (scale == 0.0) {
        return 0.0;
    }
    double acc = 0.0;
    for (double e : v) {
        const double s = e / scale;
        acc += s * s;
    }
    return scale * std::sqrt(acc);
}

double norm_inf(std::span<const double> v)
{
    double best = 0.0;
    for (double e : v) {
        best = std::max(best, std::abs(e));
    }
    return best;
}

double norm_inf(const DenseMatrix& m)
{
    double best = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double sum = 0.0;
        for (double e : m.row(i)) {
            sum += std::abs(e);
        }
        best = std::max(best, sum);
    }
    return best;
}

RealVector multiply(const DenseMatrix& m, std::span<const double> v)
{
    if (v.size() != m.cols()) {
        throw std::invalid_argument("multiply: dimension mismatch");
    }
    RealVector out(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        out[i] = dot(m.row(i), v);
    }
    return out;
}

double pairwise_sum(std::span<const double> values)
{
    constexpr std::size_t kBlock = 32;
    if (values.size() <= kBlock) {
        double acc = 0.0;
        for (double v : values) {
            acc += v;
        }
        return acc;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

} // namespace wmc
