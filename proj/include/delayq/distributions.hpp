#pragma once

// The six distribution families whose complementary CDF serves as the choice
// weight of the queueing model. Each family exposes pdf, ccdf, hazard, mean
// and variance; from_moments builds a family member with a prescribed mean and
// variance.
//
// Parameterizations:
//   Exponential{theta}      ccdf e^{-θx}
//   Normal{alpha, sigma}    location / scale
//   LogNormal{alpha, sigma} log-location / log-scale
//   Weibull{alpha, beta}    ccdf e^{-βx^α}  (β is a rate-like factor, not a scale)
//   Gamma{alpha, beta}      shape / rate
//   PhaseType{alpha, S}     initial row vector and sub-generator

#include "delayq/specfun.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace delayq {

struct Exponential {
    double theta;

    bool operator==(const Exponential&) const = default;
};

struct Normal {
    double alpha;
    double sigma;

    bool operator==(const Normal&) const = default;
};

struct LogNormal {
    double alpha;
    double sigma;

    bool operator==(const LogNormal&) const = default;
};

struct Weibull {
    double alpha;
    double beta;

    bool operator==(const Weibull&) const = default;
};

struct Gamma {
    double alpha;
    double beta;

    bool operator==(const Gamma&) const = default;
};

struct PhaseType {
    std::vector<double> alpha;
    specfun::SquareMatrix s;

    /// Exit-rate vector S⁰ = -S·1.
    std::vector<double> exit_rates() const;
    /// True when S is diagonal, i.e. the distribution is a hyperexponential mixture.
    bool is_hyperexponential() const;

    bool operator==(const PhaseType&) const = default;
};

using Distribution = std::variant<Exponential, Normal, LogNormal, Weibull, Gamma, PhaseType>;

/// Selects the moment-matching rule of from_moments.
enum class FamilyTag { Exponential, Normal, LogNormal, Weibull, Gamma, HyperExp2 };

std::string_view to_string(FamilyTag tag);
std::optional<FamilyTag> parse_family_tag(std::string_view name);

/// Name of the family held by d ("exponential", "normal", ... "phasetype").
std::string_view family_name(const Distribution& d);

/// Throws DomainError unless every parameter satisfies its family's invariants.
void validate(const Distribution& d);

// Checked constructors.
Distribution make_exponential(double theta);
Distribution make_normal(double alpha, double sigma);
Distribution make_lognormal(double alpha, double sigma);
Distribution make_weibull(double alpha, double beta);
Distribution make_gamma(double alpha, double beta);
Distribution make_phase_type(std::vector<double> alpha, specfun::SquareMatrix s);
/// Hyperexponential mixture Σ p_k θ_k e^{-θ_k x} as a diagonal phase-type.
Distribution make_hyperexponential(std::vector<double> weights, std::vector<double> rates);

double pdf(const Distribution& d, double x);
double ccdf(const Distribution& d, double x);

/// g(x)/Ḡ(x). Normal, log-normal and gamma use tail-stable evaluations, so
/// the result stays finite after Ḡ underflows. Phase-type has no such path
/// and throws NumericalError when Ḡ underflows.
double hazard(const Distribution& d, double x);

double mean(const Distribution& d);
double variance(const Distribution& d);

/// E[X^n] = (-1)^n n! α S^{-n} 1 for 1 ≤ n ≤ 8.
double phase_type_moment(const PhaseType& d, int n);

/// Member of `family` with mean m and variance v. Throws InfeasibleError when
/// the family cannot attain (m, v) and ConvergenceError if the Weibull shape
/// search fails.
Distribution from_moments(FamilyTag family, double m, double v);

/// Weibull with shape pinned to `shape` and β chosen to hit the given mean.
Distribution weibull_with_mean(double shape, double m);
/// Weibull with shape pinned to `shape` and β chosen to hit the given variance.
Distribution weibull_with_variance(double shape, double v);

} // namespace delayq
