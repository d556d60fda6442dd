#include "delayq/specfun.hpp"

#include "delayq/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

namespace delayq::specfun {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;
constexpr int kMaxIter = 100000;

void require_finite(std::span<const double> xs)
{
    for (double v : xs) {
        if (!std::isfinite(v)) {
            throw DomainError("SquareMatrix: non-finite entry");
        }
    }
}

// Power series for P(a,x); converges for all x but is only used for x < a+1.
double lower_gamma_series(double a, double x)
{
    double ap = a;
    double term = 1.0 / a;
    double sum = term;
    for (int n = 0; n < kMaxIter; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEps) {
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
        }
    }
    throw ConvergenceError("reg_lower_gamma: series did not converge");
}

// Modified Lentz evaluation of the continued fraction for Q(a,x), returned
// without the e^{-x} x^a / Γ(a) prefactor.
double upper_gamma_cf(double a, double x)
{
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) return h;
    }
    throw ConvergenceError("reg_upper_gamma: continued fraction did not converge");
}

void check_gamma_args(double a, double x, const char* what)
{
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw DomainError(std::string(what) + ": shape a must be positive");
    }
    if (!(x >= 0.0) || std::isnan(x)) {
        throw DomainError(std::string(what) + ": x must be nonnegative");
    }
}

// Solves A·X = B by Gaussian elimination with partial pivoting.
SquareMatrix solve(SquareMatrix a, SquareMatrix b)
{
    const std::size_t n = a.dim();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
        }
        if (a(piv, col) == 0.0) {
            throw SingularMatrixError("mat_exp: singular Padé denominator");
        }
        if (piv != col) {
            for (std::size_t k = 0; k < n; ++k) {
                std::swap(a(piv, k), a(col, k));
                std::swap(b(piv, k), b(col, k));
            }
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a(r, col) / a(col, col);
            if (f == 0.0) continue;
            for (std::size_t k = col; k < n; ++k) a(r, k) -= f * a(col, k);
            for (std::size_t k = 0; k < n; ++k) b(r, k) -= f * b(col, k);
        }
    }
    for (std::size_t r = n; r-- > 0;) {
        for (std::size_t k = 0; k < n; ++k) {
            double acc = b(r, k);
            for (std::size_t j = r + 1; j < n; ++j) acc -= a(r, j) * b(j, k);
            b(r, k) = acc / a(r, r);
        }
    }
    return b;
}

} // namespace

SquareMatrix::SquareMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, 0.0)
{
    if (dim == 0) throw DimensionError("SquareMatrix: dimension must be at least 1");
}

SquareMatrix::SquareMatrix(std::size_t dim, std::vector<double> row_major)
    : dim_(dim), data_(std::move(row_major))
{
    if (dim == 0) throw DimensionError("SquareMatrix: dimension must be at least 1");
    if (data_.size() != dim * dim) {
        throw DimensionError("SquareMatrix: expected " + std::to_string(dim * dim) +
                             " entries, got " + std::to_string(data_.size()));
    }
    require_finite(data_);
}

SquareMatrix::SquareMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : dim_(rows.size())
{
    if (dim_ == 0) throw DimensionError("SquareMatrix: dimension must be at least 1");
    data_.reserve(dim_ * dim_);
    for (const auto& row : rows) {
        if (row.size() != dim_) throw DimensionError("SquareMatrix: ragged initializer");
        data_.insert(data_.end(), row.begin(), row.end());
    }
    require_finite(data_);
}

SquareMatrix SquareMatrix::identity(std::size_t dim)
{
    SquareMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

SquareMatrix SquareMatrix::diagonal(std::span<const double> diag)
{
    SquareMatrix m(diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    require_finite(m.data_);
    return m;
}

double SquareMatrix::norm_inf() const noexcept
{
    double best = 0.0;
    for (std::size_t r = 0; r < dim_; ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c < dim_; ++c) s += std::abs((*this)(r, c));
        best = std::max(best, s);
    }
    return best;
}

SquareMatrix SquareMatrix::operator*(const SquareMatrix& rhs) const
{
    if (rhs.dim_ != dim_) throw DimensionError("SquareMatrix: dimension mismatch");
    SquareMatrix out(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t k = 0; k < dim_; ++k) {
            const double aik = (*this)(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < dim_; ++j) out(i, j) += aik * rhs(k, j);
        }
    }
    return out;
}

SquareMatrix SquareMatrix::operator+(const SquareMatrix& rhs) const
{
    if (rhs.dim_ != dim_) throw DimensionError("SquareMatrix: dimension mismatch");
    SquareMatrix out(*this);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += rhs.data_[i];
    return out;
}

SquareMatrix SquareMatrix::operator-(const SquareMatrix& rhs) const
{
    if (rhs.dim_ != dim_) throw DimensionError("SquareMatrix: dimension mismatch");
    SquareMatrix out(*this);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= rhs.data_[i];
    return out;
}

SquareMatrix SquareMatrix::scaled(double factor) const
{
    SquareMatrix out(*this);
    for (double& v : out.data_) v *= factor;
    return out;
}

std::vector<double> SquareMatrix::apply(std::span<const double> v) const
{
    if (v.size() != dim_) throw DimensionError("SquareMatrix::apply: length mismatch");
    std::vector<double> out(dim_, 0.0);
    for (std::size_t r = 0; r < dim_; ++r) {
        double acc = 0.0;
        for (std::size_t c = 0; c < dim_; ++c) acc += (*this)(r, c) * v[c];
        out[r] = acc;
    }
    return out;
}

std::vector<double> SquareMatrix::apply_left(std::span<const double> v) const
{
    if (v.size() != dim_) throw DimensionError("SquareMatrix::apply_left: length mismatch");
    std::vector<double> out(dim_, 0.0);
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = 0; c < dim_; ++c) out[c] += v[r] * (*this)(r, c);
    }
    return out;
}

double erf(double x)
{
    return std::erf(x);
}

double erfcx(double x)
{
    if (x < 0.0) {
        return 2.0 * std::exp(x * x) - erfcx(-x);
    }
    if (x < 2.0) {
        return std::exp(x * x) * std::erfc(x);
    }
    // erfc(x) = e^{-x²}/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    double f = x;
    double c = x;
    double d = 0.0;
    for (int k = 1; k < kMaxIter; ++k) {
        const double a = 0.5 * k;
        d = x + a * d;
        if (std::abs(d) < kTiny) d = kTiny;
        d = 1.0 / d;
        c = x + a / c;
        if (std::abs(c) < kTiny) c = kTiny;
        const double del = c * d;
        f *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return 1.0 / (std::sqrt(std::numbers::pi) * f);
}

double ln_gamma(double x)
{
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError("ln_gamma: argument must be positive and finite");
    }
    return std::lgamma(x);
}

double reg_lower_gamma(double a, double x)
{
    check_gamma_args(a, x, "reg_lower_gamma");
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    if (x < a + 1.0) return lower_gamma_series(a, x);
    const double q = std::exp(-x + a * std::log(x) - std::lgamma(a)) * upper_gamma_cf(a, x);
    return 1.0 - q;
}

double reg_upper_gamma(double a, double x)
{
    check_gamma_args(a, x, "reg_upper_gamma");
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    if (x < a + 1.0) return 1.0 - lower_gamma_series(a, x);
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * upper_gamma_cf(a, x);
}

double log_reg_upper_gamma(double a, double x)
{
    check_gamma_args(a, x, "log_reg_upper_gamma");
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return -std::numeric_limits<double>::infinity();
    if (x < a + 1.0) return std::log1p(-lower_gamma_series(a, x));
    return -x + a * std::log(x) - std::lgamma(a) + std::log(upper_gamma_cf(a, x));
}

double upper_gamma_scaled(double a, double x)
{
    check_gamma_args(a, x, "upper_gamma_scaled");
    if (!(x > 0.0)) throw DomainError("upper_gamma_scaled: x must be positive");
    if (x >= a + 1.0) return upper_gamma_cf(a, x);
    const double q = 1.0 - lower_gamma_series(a, x);
    return q * std::exp(x - a * std::log(x) + std::lgamma(a));
}

SquareMatrix mat_exp(const SquareMatrix& s, double t)
{
    const std::size_t n = s.dim();
    if (n > kMaxExpDim) {
        throw DimensionError("mat_exp: dimension " + std::to_string(n) + " exceeds " +
                             std::to_string(kMaxExpDim));
    }
    if (!std::isfinite(t)) throw DomainError("mat_exp: t must be finite");
    if (t == 0.0) return SquareMatrix::identity(n);

    SquareMatrix a = s.scaled(t);
    const double norm = a.norm_inf();
    int squarings = 0;
    if (norm > 0.5) {
        squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
        a = a.scaled(std::ldexp(1.0, -squarings));
    }

    // Diagonal Padé(6,6) coefficients c_k = c_{k-1} (q-k+1) / (k (2q-k+1)).
    constexpr int q = 6;
    SquareMatrix num = SquareMatrix::identity(n);
    SquareMatrix den = SquareMatrix::identity(n);
    SquareMatrix power = SquareMatrix::identity(n);
    double coef = 1.0;
    for (int k = 1; k <= q; ++k) {
        coef *= static_cast<double>(q - k + 1) / static_cast<double>(k * (2 * q - k + 1));
        power = power * a;
        const SquareMatrix term = power.scaled(coef);
        num = num + term;
        den = (k % 2 == 0) ? den + term : den - term;
    }

    SquareMatrix result = solve(std::move(den), std::move(num));
    for (int i = 0; i < squarings; ++i) result = result * result;
    return result;
}

SquareMatrix mat_inverse(const SquareMatrix& s)
{
    const std::size_t n = s.dim();
    SquareMatrix a(s);
    SquareMatrix inv = SquareMatrix::identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
        }
        if (std::abs(a(piv, col)) <= kPivotThreshold) {
            throw SingularMatrixError("mat_inverse: pivot below threshold in column " +
                                      std::to_string(col));
        }
        if (piv != col) {
            for (std::size_t k = 0; k < n; ++k) {
                std::swap(a(piv, k), a(col, k));
                std::swap(inv(piv, k), inv(col, k));
            }
        }
        const double p = a(col, col);
        for (std::size_t k = 0; k < n; ++k) {
            a(col, k) /= p;
            inv(col, k) /= p;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a(r, col);
            if (f == 0.0) continue;
            for (std::size_t k = 0; k < n; ++k) {
                a(r, k) -= f * a(col, k);
                inv(r, k) -= f * inv(col, k);
            }
        }
    }
    return inv;
}

} // namespace delayq::specfun
