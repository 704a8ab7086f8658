#ifndef WIENERMC_CORRMATH_HPP
#define WIENERMC_CORRMATH_HPP

/** @file
 * Correlation-structured linear algebra: symmetric Toeplitz matrices built
 * from an autocorrelation sequence, small dense matrices, a pivoting direct
 * solver used as a reference, norms, Gershgorin discs and a power-iteration
 * spectral radius estimate.
 */

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wmc {

using RealVector = std::vector<double>;

/// Thrown by direct_solve when a pivot falls below the singularity cutoff.
class SingularMatrixError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Throws std::invalid_argument naming @p what if any entry is NaN or infinite.
void require_finite(std::span<const double> values, std::string_view what);

/// Row-major dense matrix of doubles.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

    static DenseMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

    std::span<const double> row(std::size_t i) const {
        return {entries_.data() + i * cols_, cols_};
    }
    std::span<double> row(std::size_t i) { return {entries_.data() + i * cols_, cols_}; }

    const std::vector<double>& entries() const noexcept { return entries_; }

    bool operator==(const DenseMatrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> entries_;
};

/**
 * Symmetric Toeplitz autocorrelation matrix R of a wide-sense-stationary
 * input, stored as its first row r_0..r_{N-1}. Entry (i, j) is r_{|i-j|}.
 *
 * The zero-lag value must be positive; it is the input power and is usually
 * normalized to one, but the type does not require that.
 */
class CorrelationMatrix {
public:
    explicit CorrelationMatrix(std::vector<double> autocorr);

    std::size_t size() const noexcept { return autocorr_.size(); }
    const std::vector<double>& autocorr() const noexcept { return autocorr_; }
    double lag(std::size_t k) const { return autocorr_.at(k); }

    double operator()(std::size_t i, std::size_t j) const {
        return autocorr_[i > j ? i - j : j - i];
    }

    DenseMatrix to_dense() const;

    bool operator==(const CorrelationMatrix&) const = default;

private:
    std::vector<double> autocorr_;
};

CorrelationMatrix toeplitz_from_autocorr(std::span<const double> r);

/**
 * Solves A x = b by Gaussian elimination with partial pivoting.
 *
 * A pivot whose magnitude is below 1e-12 times the largest absolute entry of
 * the input matrix is treated as singular and raises SingularMatrixError.
 */
RealVector direct_solve(const DenseMatrix& a, std::span<const double> b);
RealVector direct_solve(const CorrelationMatrix& r, std::span<const double> b);

struct Disc {
    double center = 0.0;
    double radius = 0.0;
};

/// Full-sum disc C(r_0, sum_{k>=1} |r_k|).
Disc gershgorin_disc(const CorrelationMatrix& r);

/// Largest per-row Gershgorin radius, max_i sum_{j != i} |r_{|i-j|}|.
/// Interior rows of a Toeplitz matrix see each lag twice, so this can exceed
/// the full-sum radius; the union of row discs is C(r_0, max_row_radius).
double max_row_radius(const CorrelationMatrix& r);

struct SpectralEstimate {
    double value = 0.0;
    bool converged = false;
    std::size_t iterations = 0;
    /// a-posteriori bound on |value - rho| from the Rayleigh residual
    double error_bound = 0.0;
};

/**
 * Dominant-magnitude eigenvalue of a symmetric matrix by power iteration on
 * F^2, which separates the +rho/-rho pair that stalls plain power iteration.
 * Stops once the residual bound drops to @p tol. If @p max_iter is reached the
 * estimate is still returned, with converged = false.
 */
SpectralEstimate spectral_radius(const DenseMatrix& f, double tol = 1e-10,
                                 std::size_t max_iter = 20000);

double norm2(std::span<const double> v);
double norm_inf(std::span<const double> v);
/// Maximum absolute row sum.
double norm_inf(const DenseMatrix& m);

RealVector multiply(const DenseMatrix& m, std::span<const double> v);

/// Pairwise (cascade) summation; result depends only on the input order.
double pairwise_sum(std::span<const double> values);

} // namespace wmc

#endif // WIENERMC_CORRMATH_HPP
