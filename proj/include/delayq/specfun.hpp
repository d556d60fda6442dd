#pragma once

// Special functions and small dense matrix kernels used by the distribution
// families: error function, log-gamma, regularized incomplete gamma, and the
// matrix exponential / inverse needed by phase-type distributions.
//
// Accuracy targets (absolute unless noted):
//   erf             1e-13
//   erfcx           1e-12 relative
//   ln_gamma        1e-12 relative
//   reg_lower_gamma 1e-12
//   mat_exp         1e-10 entrywise

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace delayq::specfun {

/// Dense row-major square matrix. Dimension is at least 1 and all entries are
/// finite.
class SquareMatrix {
public:
    explicit SquareMatrix(std::size_t dim);
    SquareMatrix(std::size_t dim, std::vector<double> row_major);
    SquareMatrix(std::initializer_list<std::initializer_list<double>> rows);

    static SquareMatrix identity(std::size_t dim);
    static SquareMatrix diagonal(std::span<const double> diag);

    std::size_t dim() const noexcept { return dim_; }
    std::span<const double> entries() const noexcept { return data_; }

    double operator()(std::size_t row, std::size_t col) const noexcept
    {
        return data_[row * dim_ + col];
    }
    double& operator()(std::size_t row, std::size_t col) noexcept
    {
        return data_[row * dim_ + col];
    }

    /// Infinity norm (maximum absolute row sum).
    double norm_inf() const noexcept;

    SquareMatrix operator*(const SquareMatrix& rhs) const;
    SquareMatrix operator+(const SquareMatrix& rhs) const;
    SquareMatrix operator-(const SquareMatrix& rhs) const;
    SquareMatrix scaled(double factor) const;

    /// Matrix-vector product M·v.
    std::vector<double> apply(std::span<const double> v) const;
    /// Row-vector product v·M.
    std::vector<double> apply_left(std::span<const double> v) const;

    friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

private:
    std::size_t dim_;
    std::vector<double> data_;
};

inline constexpr std::size_t kMaxExpDim = 32;
inline constexpr double kPivotThreshold = 1e-13;

double erf(double x);

/// Scaled complementary error function e^{x²}·erfc(x). Positive for all finite
/// x; overflows to +inf for x below about -26.
double erfcx(double x);

/// log Γ(x) for x > 0. Throws DomainError otherwise.
double ln_gamma(double x);

/// Regularized lower incomplete gamma P(a,x) = γ(a,x)/Γ(a).
double reg_lower_gamma(double a, double x);

/// Regularized upper incomplete gamma Q(a,x) = Γ(a,x)/Γ(a), computed directly
/// (not as 1-P) where the continued fraction is the convergent branch, so it
/// keeps relative accuracy far into the tail.
double reg_upper_gamma(double a, double x);

/// log Q(a,x). Finite even where Q itself underflows.
double log_reg_upper_gamma(double a, double x);

/// Q(a,x)·Γ(a)·e^{x}·x^{-a}, the continued-fraction part of the upper
/// incomplete gamma. Requires x > 0. Stays O(1/x) deep in the tail.
double upper_gamma_scaled(double a, double x);

/// exp(S·t) by scaling and squaring with a degree-6 Padé approximant.
SquareMatrix mat_exp(const SquareMatrix& s, double t);

/// Gauss-Jordan inverse with partial pivoting. Throws SingularMatrixError when
/// a pivot magnitude is at or below kPivotThreshold.
SquareMatrix mat_inverse(const SquareMatrix& s);

} // namespace delayq::specfun
