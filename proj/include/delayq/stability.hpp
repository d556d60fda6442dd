#pragma once

// Linear stability of the symmetric equilibrium of the delayed N-queue fluid
// model. The equilibrium is q* = λ/(Nμ) for every choice weight; the
// linearization has a single repeated eigenvalue C = -(λ/N)·h(q*), and the
// imaginary-axis crossing of r - C e^{-rΔ} + μ = 0 gives the critical delay
// Δ_cr = arccos(μ/C)/√(C² - μ²).

#include "delayq/distributions.hpp"
#include "delayq/specfun.hpp"

#include <complex>
#include <optional>
#include <string_view>

namespace delayq {

struct QueueParams {
    int n;
    double lambda;
    double mu;
};

/// Throws DomainError unless N ≥ 2 and λ, μ are positive and finite.
void validate(const QueueParams& p);

enum class Regime { HopfAtDeltaCr, DelayIndependentStable, Boundary, UnstableAllDelay };

std::string_view to_string(Regime r);

/// Relative band around |C| = μ reported as Boundary.
inline constexpr double kBoundaryTol = 1e-12;

struct CriticalDelay {
    double omega;
    double delta_cr;
};

struct StabilityReport {
    double q_star;
    double c;
    Regime regime;
    std::optional<double> omega;
    std::optional<double> delta_cr;
};

double equilibrium(const QueueParams& p);

/// -(λ/N)·hazard(d, q*). Propagates NumericalError from hazard.
double eigenvalue_c(const Distribution& d, const QueueParams& p);

Regime classify(double c, double mu);

/// Smallest positive crossing delay. Throws RegimeError unless
/// classify(c, mu) == HopfAtDeltaCr.
CriticalDelay critical_delay(double c, double mu);

/// r - C e^{-rΔ} + μ.
std::complex<double> char_residual(std::complex<double> r, double c, double mu, double delta);

/// C·(I - 11ᵀ/N): diagonal C(N-1)/N, off-diagonal -C/N.
specfun::SquareMatrix linearization_matrix(double c, int n);

StabilityReport analyze(const Distribution& d, const QueueParams& p);

} // namespace delayq
