#include "delayq/stability.hpp"

#include "delayq/error.hpp"

#include <cmath>
#include <string>

namespace delayq {

void validate(const QueueParams& p)
{
    if (p.n < 2) throw DomainError("QueueParams: N must be at least 2");
    if (!(p.lambda > 0.0) || !std::isfinite(p.lambda)) {
        throw DomainError("QueueParams: lambda must be positive and finite");
    }
    if (!(p.mu > 0.0) || !std::isfinite(p.mu)) {
        throw DomainError("QueueParams: mu must be positive and finite");
    }
}

std::string_view to_string(Regime r)
{
    switch (r) {
    case Regime::HopfAtDeltaCr: return "HopfAtDelta_cr";
    case Regime::DelayIndependentStable: return "DelayIndependentStable";
    case Regime::Boundary: return "Boundary";
    case Regime::UnstableAllDelay: return "UnstableAllDelay";
    }
    return "Unknown";
}

double equilibrium(const QueueParams& p)
{
    validate(p);
    return p.lambda / (p.n * p.mu);
}

double eigenvalue_c(const Distribution& d, const QueueParams& p)
{
    const double q_star = equilibrium(p);
    return -(p.lambda / p.n) * hazard(d, q_star);
}

Regime classify(double c, double mu)
{
    const double mag = std::abs(c);
    if (std::abs(mag - mu) <= kBoundaryTol * mu) return Regime::Boundary;
    if (mag < mu) return Regime::DelayIndependentStable;
    return c < 0.0 ? Regime::HopfAtDeltaCr : Regime::UnstableAllDelay;
}

CriticalDelay critical_delay(double c, double mu)
{
    if (classify(c, mu) != Regime::HopfAtDeltaCr) {
        throw RegimeError("critical_delay: requires C < -mu (C = " + std::to_string(c) +
                          ", mu = " + std::to_string(mu) + ")");
    }
    // (C - μ)(C + μ) avoids cancellation when |C| is close to μ.
    const double omega = std::sqrt((c - mu) * (c + mu));
    return {omega, std::acos(mu / c) / omega};
}

std::complex<double> char_residual(std::complex<double> r, double c, double mu, double delta)
{
    return r - c * std::exp(-r * delta) + mu;
}

specfun::SquareMatrix linearization_matrix(double c, int n)
{
    if (n < 2) throw DomainError("linearization_matrix: N must be at least 2");
    const auto dim = static_cast<std::size_t>(n);
    specfun::SquareMatrix a(dim);
    const double off = -c / n;
    const double diag = c * (n - 1) / n;
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) a(i, j) = (i == j) ? diag : off;
    }
    return a;
}

StabilityReport analyze(const Distribution& d, const QueueParams& p)
{
    validate(d);
    StabilityReport report{};
    report.q_star = equilibrium(p);
    report.c = eigenvalue_c(d, p);
    report.regime = classify(report.c, p.mu);
    if (report.regime == Regime::HopfAtDeltaCr) {
        const CriticalDelay cd = critical_delay(report.c, p.mu);
        report.omega = cd.omega;
        report.delta_cr = cd.delta_cr;
    }
    return report;
}

} // namespace delayq
