#include "delayq/distributions.hpp"

#include "delayq/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace delayq {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;
constexpr double kSqrt2OverPi = 0.79788456080286535588;

void require(bool ok, const char* msg)
{
    if (!ok) throw DomainError(msg);
}

bool positive_finite(double v)
{
    return v > 0.0 && std::isfinite(v);
}

// Standard-normal survival function; uses the scaled complement on the right
// tail so it keeps relative accuracy until e^{-z²/2} underflows.
double std_normal_ccdf(double z)
{
    const double t = z * kInvSqrt2;
    if (t < 0.0) return 0.5 * (1.0 - specfun::erf(t));
    return 0.5 * specfun::erfcx(t) * std::exp(-t * t);
}

// Standard-normal hazard φ(z)/(1-Φ(z)).
double std_normal_hazard(double z)
{
    if (z < 0.0) {
        return kInvSqrt2Pi * std::exp(-0.5 * z * z) / std_normal_ccdf(z);
    }
    return kSqrt2OverPi / specfun::erfcx(z * kInvSqrt2);
}

// Weibull squared coefficient of variation Γ(1+2/a)/Γ(1+1/a)² - 1.
double weibull_cv2(double shape)
{
    const double g1 = specfun::ln_gamma(1.0 + 1.0 / shape);
    const double g2 = specfun::ln_gamma(1.0 + 2.0 / shape);
    return std::expm1(g2 - 2.0 * g1);
}

struct PhaseTypeEval {
    double density;
    double survival;
};

PhaseTypeEval eval_phase_type(const PhaseType& d, double x)
{
    const specfun::SquareMatrix e = specfun::mat_exp(d.s, x);
    const std::vector<double> row = e.apply_left(d.alpha);
    const std::vector<double> exit = d.exit_rates();
    PhaseTypeEval out{0.0, 0.0};
    for (std::size_t i = 0; i < row.size(); ++i) {
        out.density += row[i] * exit[i];
        out.survival += row[i];
    }
    return out;
}

} // namespace

std::vector<double> PhaseType::exit_rates() const
{
    std::vector<double> out(s.dim(), 0.0);
    for (std::size_t r = 0; r < s.dim(); ++r) {
        double acc = 0.0;
        for (std::size_t c = 0; c < s.dim(); ++c) acc += s(r, c);
        out[r] = -acc;
    }
    return out;
}

bool PhaseType::is_hyperexponential() const
{
    for (std::size_t r = 0; r < s.dim(); ++r) {
        for (std::size_t c = 0; c < s.dim(); ++c) {
            if (r != c && s(r, c) != 0.0) return false;
        }
    }
    return true;
}

std::string_view to_string(FamilyTag tag)
{
    switch (tag) {
    case FamilyTag::Exponential: return "exponential";
    case FamilyTag::Normal: return "normal";
    case FamilyTag::LogNormal: return "lognormal";
    case FamilyTag::Weibull: return "weibull";
    case FamilyTag::Gamma: return "gamma";
    case FamilyTag::HyperExp2: return "hyperexp2";
    }
    return "unknown";
}

std::optional<FamilyTag> parse_family_tag(std::string_view name)
{
    static constexpr std::array tags{FamilyTag::Exponential, FamilyTag::Normal,
                                     FamilyTag::LogNormal,   FamilyTag::Weibull,
                                     FamilyTag::Gamma,       FamilyTag::HyperExp2};
    for (FamilyTag t : tags) {
        if (to_string(t) == name) return t;
    }
    return std::nullopt;
}

std::string_view family_name(const Distribution& d)
{
    return std::visit(overloaded{
                          [](const Exponential&) { return std::string_view("exponential"); },
                          [](const Normal&) { return std::string_view("normal"); },
                          [](const LogNormal&) { return std::string_view("lognormal"); },
                          [](const Weibull&) { return std::string_view("weibull"); },
                          [](const Gamma&) { return std::string_view("gamma"); },
                          [](const PhaseType&) { return std::string_view("phasetype"); },
                      },
                      d);
}

void validate(const Distribution& d)
{
    std::visit(
        overloaded{
            [](const Exponential& e) { require(positive_finite(e.theta), "exponential: theta must be positive"); },
            [](const Normal& n) {
                require(std::isfinite(n.alpha), "normal: alpha must be finite");
                require(positive_finite(n.sigma), "normal: sigma must be positive");
            },
            [](const LogNormal& n) {
                require(std::isfinite(n.alpha), "lognormal: alpha must be finite");
                require(positive_finite(n.sigma), "lognormal: sigma must be positive");
            },
            [](const Weibull& w) {
                require(positive_finite(w.alpha), "weibull: alpha must be positive");
                require(positive_finite(w.beta), "weibull: beta must be positive");
            },
            [](const Gamma& g) {
                require(positive_finite(g.alpha), "gamma: alpha must be positive");
                require(positive_finite(g.beta), "gamma: beta must be positive");
            },
            [](const PhaseType& p) {
                const std::size_t n = p.s.dim();
                require(p.alpha.size() == n, "phasetype: alpha length must match S dimension");
                require(n <= specfun::kMaxExpDim, "phasetype: S dimension exceeds 32");
                double total = 0.0;
                for (double a : p.alpha) {
                    require(a >= 0.0 && std::isfinite(a), "phasetype: alpha entries must be nonnegative");
                    total += a;
                }
                require(std::abs(total - 1.0) <= 1e-12, "phasetype: alpha must sum to 1");
                for (std::size_t r = 0; r < n; ++r) {
                    require(p.s(r, r) < 0.0, "phasetype: S diagonal must be negative");
                    double row = 0.0;
                    for (std::size_t c = 0; c < n; ++c) {
                        if (c != r) require(p.s(r, c) >= 0.0, "phasetype: S off-diagonal must be nonnegative");
                        row += p.s(r, c);
                    }
                    require(row <= 1e-12 * std::abs(p.s(r, r)), "phasetype: S row sums must be nonpositive");
                }
            },
        },
        d);
}

Distribution make_exponential(double theta)
{
    Distribution d = Exponential{theta};
    validate(d);
    return d;
}

Distribution make_normal(double alpha, double sigma)
{
    Distribution d = Normal{alpha, sigma};
    validate(d);
    return d;
}

Distribution make_lognormal(double alpha, double sigma)
{
    Distribution d = LogNormal{alpha, sigma};
    validate(d);
    return d;
}

Distribution make_weibull(double alpha, double beta)
{
    Distribution d = Weibull{alpha, beta};
    validate(d);
    return d;
}

Distribution make_gamma(double alpha, double beta)
{
    Distribution d = Gamma{alpha, beta};
    validate(d);
    return d;
}

Distribution make_phase_type(std::vector<double> alpha, specfun::SquareMatrix s)
{
    Distribution d = PhaseType{std::move(alpha), std::move(s)};
    validate(d);
    return d;
}

Distribution make_hyperexponential(std::vector<double> weights, std::vector<double> rates)
{
    require(weights.size() == rates.size() && !rates.empty(),
            "hyperexponential: weights and rates must have equal nonzero length");
    std::vector<double> diag(rates.size());
    std::transform(rates.begin(), rates.end(), diag.begin(), [](double r) { return -r; });
    return make_phase_type(std::move(weights), specfun::SquareMatrix::diagonal(diag));
}

double pdf(const Distribution& d, double x)
{
    return std::visit(
        overloaded{
            [x](const Exponential& e) { return x < 0.0 ? 0.0 : e.theta * std::exp(-e.theta * x); },
            [x](const Normal& n) {
                const double z = (x - n.alpha) / n.sigma;
                return kInvSqrt2Pi * std::exp(-0.5 * z * z) / n.sigma;
            },
            [x](const LogNormal& n) {
                if (x <= 0.0) return 0.0;
                const double z = (std::log(x) - n.alpha) / n.sigma;
                return kInvSqrt2Pi * std::exp(-0.5 * z * z) / (x * n.sigma);
            },
            [x](const Weibull& w) {
                if (x < 0.0) return 0.0;
                return w.beta * w.alpha * std::pow(x, w.alpha - 1.0) * std::exp(-w.beta * std::pow(x, w.alpha));
            },
            [x](const Gamma& g) {
                if (x < 0.0) return 0.0;
                if (x == 0.0) {
                    if (g.alpha < 1.0) return std::numeric_limits<double>::infinity();
                    return g.alpha == 1.0 ? g.beta : 0.0;
                }
                return std::exp(g.alpha * std::log(g.beta) + (g.alpha - 1.0) * std::log(x) - g.beta * x -
                                specfun::ln_gamma(g.alpha));
            },
            [x](const PhaseType& p) { return x < 0.0 ? 0.0 : std::max(0.0, eval_phase_type(p, x).density); },
        },
        d);
}

double ccdf(const Distribution& d, double x)
{
    return std::visit(
        overloaded{
            [x](const Exponential& e) { return x <= 0.0 ? 1.0 : std::exp(-e.theta * x); },
            [x](const Normal& n) { return std_normal_ccdf((x - n.alpha) / n.sigma); },
            [x](const LogNormal& n) {
                if (x <= 0.0) return 1.0;
                return std_normal_ccdf((std::log(x) - n.alpha) / n.sigma);
            },
            [x](const Weibull& w) { return x <= 0.0 ? 1.0 : std::exp(-w.beta * std::pow(x, w.alpha)); },
            [x](const Gamma& g) { return x <= 0.0 ? 1.0 : specfun::reg_upper_gamma(g.alpha, g.beta * x); },
            [x](const PhaseType& p) {
                if (x <= 0.0) return 1.0;
                return std::clamp(eval_phase_type(p, x).survival, 0.0, 1.0);
            },
        },
        d);
}

double hazard(const Distribution& d, double x)
{
    return std::visit(
        overloaded{
            [x](const Exponential& e) { return x < 0.0 ? 0.0 : e.theta; },
            [x](const Normal& n) { return std_normal_hazard((x - n.alpha) / n.sigma) / n.sigma; },
            [x](const LogNormal& n) {
                if (x <= 0.0) return 0.0;
                return std_normal_hazard((std::log(x) - n.alpha) / n.sigma) / (x * n.sigma);
            },
            [x](const Weibull& w) {
                if (x < 0.0) return 0.0;
                return w.beta * w.alpha * std::pow(x, w.alpha - 1.0);
            },
            [x, &d](const Gamma& g) {
                if (x < 0.0) return 0.0;
                if (x == 0.0) return pdf(d, 0.0);
                // g/Ḡ = β^α x^{α-1} e^{-βx} / (e^{-βx} (βx)^α · scaled) = 1/(x · scaled)
                return 1.0 / (x * specfun::upper_gamma_scaled(g.alpha, g.beta * x));
            },
            [x](const PhaseType& p) {
                if (x < 0.0) return 0.0;
                const PhaseTypeEval e = eval_phase_type(p, x);
                if (!(e.survival >= std::numeric_limits<double>::min())) {
                    throw NumericalError("phasetype hazard: survival function underflowed at x = " +
                                         std::to_string(x));
                }
                return std::max(0.0, e.density) / e.survival;
            },
        },
        d);
}

double phase_type_moment(const PhaseType& d, int n)
{
    if (n < 1 || n > 8) throw DomainError("phase_type_moment: order must be in [1, 8]");
    const specfun::SquareMatrix inv = specfun::mat_inverse(d.s);
    std::vector<double> v(d.s.dim(), 1.0);
    for (int k = 0; k < n; ++k) v = inv.apply(v);
    const double dot = std::inner_product(d.alpha.begin(), d.alpha.end(), v.begin(), 0.0);
    double factorial = 1.0;
    for (int k = 2; k <= n; ++k) factorial *= k;
    return (n % 2 == 0 ? 1.0 : -1.0) * factorial * dot;
}

double mean(const Distribution& d)
{
    return std::visit(
        overloaded{
            [](const Exponential& e) { return 1.0 / e.theta; },
            [](const Normal& n) { return n.alpha; },
            [](const LogNormal& n) { return std::exp(n.alpha + 0.5 * n.sigma * n.sigma); },
            [](const Weibull& w) {
                return std::exp(-std::log(w.beta) / w.alpha + specfun::ln_gamma(1.0 + 1.0 / w.alpha));
            },
            [](const Gamma& g) { return g.alpha / g.beta; },
            [](const PhaseType& p) { return phase_type_moment(p, 1); },
        },
        d);
}

double variance(const Distribution& d)
{
    return std::visit(
        overloaded{
            [](const Exponential& e) { return 1.0 / (e.theta * e.theta); },
            [](const Normal& n) { return n.sigma * n.sigma; },
            [](const LogNormal& n) {
                const double s2 = n.sigma * n.sigma;
                return std::expm1(s2) * std::exp(2.0 * n.alpha + s2);
            },
            [](const Weibull& w) {
                // β^{-2/α} Γ(1+1/α)² · cv²
                const double g1 = specfun::ln_gamma(1.0 + 1.0 / w.alpha);
                return std::exp(2.0 * (g1 - std::log(w.beta) / w.alpha)) * weibull_cv2(w.alpha);
            },
            [](const Gamma& g) { return g.alpha / (g.beta * g.beta); },
            [](const PhaseType& p) {
                const double m1 = phase_type_moment(p, 1);
                return phase_type_moment(p, 2) - m1 * m1;
            },
        },
        d);
}

Distribution weibull_with_mean(double shape, double m)
{
    require(positive_finite(shape), "weibull: shape must be positive");
    require(positive_finite(m), "weibull: mean must be positive");
    const double beta = std::exp(shape * (specfun::ln_gamma(1.0 + 1.0 / shape) - std::log(m)));
    return make_weibull(shape, beta);
}

Distribution weibull_with_variance(double shape, double v)
{
    require(positive_finite(shape), "weibull: shape must be positive");
    require(positive_finite(v), "weibull: variance must be positive");
    const double log_g = 2.0 * specfun::ln_gamma(1.0 + 1.0 / shape) + std::log(weibull_cv2(shape));
    const double beta = std::exp(0.5 * shape * (log_g - std::log(v)));
    return make_weibull(shape, beta);
}

Distribution from_moments(FamilyTag family, double m, double v)
{
    if (!positive_finite(m) || !positive_finite(v)) {
        throw InfeasibleError("from_moments: mean and variance must be positive");
    }
    switch (family) {
    case FamilyTag::Exponential:
        if (std::abs(v - m * m) > 1e-9 * m * m) {
            throw InfeasibleError("from_moments: exponential requires variance = mean^2");
        }
        return make_exponential(1.0 / m);
    case FamilyTag::Normal:
        return make_normal(m, std::sqrt(v));
    case FamilyTag::LogNormal: {
        const double s2 = std::log1p(v / (m * m));
        return make_lognormal(std::log(m) - 0.5 * s2, std::sqrt(s2));
    }
    case FamilyTag::Gamma:
        return make_gamma(m * m / v, m / v);
    case FamilyTag::Weibull: {
        // cv² is strictly decreasing in the shape parameter.
        const double target = v / (m * m);
        double lo = 0.05;
        double hi = 50.0;
        if (!(target <= weibull_cv2(lo) && target >= weibull_cv2(hi))) {
            throw ConvergenceError("from_moments: weibull shape root outside [0.05, 50]");
        }
        for (int it = 0; it < 200; ++it) {
            const double mid = std::sqrt(lo * hi);
            if (weibull_cv2(mid) > target) {
                lo = mid;
            } else {
                hi = mid;
            }
            if (hi - lo <= 1e-15 * lo) break;
        }
        const double shape = std::sqrt(lo * hi);
        if (std::abs(weibull_cv2(shape) - target) > 1e-10 * target) {
            throw ConvergenceError("from_moments: weibull shape bisection did not reach tolerance");
        }
        return weibull_with_mean(shape, m);
    }
    case FamilyTag::HyperExp2: {
        // Evenly weighted branch means u ≥ w: u + w = 2m, u² + w² = v + m².
        if (!(v > m * m)) {
            throw InfeasibleError("from_moments: hyperexp2 requires variance > mean^2");
        }
        if (!(v < 3.0 * m * m)) {
            throw InfeasibleError("from_moments: evenly weighted hyperexp2 requires variance < 3 mean^2");
        }
        const double spread = std::sqrt(0.5 * (v - m * m));
        const double u = m + spread;
        const double w = m - spread;
        return make_hyperexponential({0.5, 0.5}, {1.0 / u, 1.0 / w});
    }
    }
    throw DomainError("from_moments: unknown family");
}

} // namespace delayq
