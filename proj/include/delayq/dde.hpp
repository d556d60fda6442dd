#pragma once

// Fixed-step integration of the delayed fluid system
//
//   q_i'(t) = λ Ḡ(q_i(t-Δ)) / Σ_j Ḡ(q_j(t-Δ)) - μ q_i(t),   i = 1..N
//
// with a constant history on [-Δ, 0].

#include "delayq/distributions.hpp"
#include "delayq/stability.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace delayq {

struct HistorySpec {
    std::vector<double> values;
};

struct RunConfig {
    double delta = 0.0;
    double horizon = 40.0;
    double h_target = 0.01;
    double classify_window_frac = 0.2;
    double amp_tol_rel = 1e-3;

    /// Step actually used: Δ/ceil(Δ/h_target) when Δ > 0, else h_target.
    double step() const;
    /// Steps per delay interval (0 when Δ = 0).
    std::size_t steps_per_delay() const;
};

/// Defaults used when the caller does not pick a step or horizon:
/// h = min(Δ/100, 1/(50|C|)) and horizon = max(40, 30·Δ_cr).
RunConfig default_run_config(double delta, const StabilityReport& report);

class Trajectory {
public:
    Trajectory(std::size_t n_queues, double step, std::size_t reserve_points = 0);

    std::size_t n_queues() const noexcept { return n_; }
    std::size_t size() const noexcept { return times_.size(); }
    double step() const noexcept { return h_; }

    std::span<const double> times() const noexcept { return times_; }
    double time(std::size_t k) const noexcept { return times_[k]; }
    std::span<const double> state(std::size_t k) const noexcept
    {
        return {states_.data() + k * n_, n_};
    }
    std::span<const double> deriv(std::size_t k) const noexcept
    {
        return {derivs_.data() + k * n_, n_};
    }

    void push_back(double t, std::span<const double> q, std::span<const double> dq);

private:
    std::size_t n_;
    double h_;
    std::vector<double> times_;
    std::vector<double> states_;
    std::vector<double> derivs_;
};

enum class Verdict { ConvergedToEquilibrium, Oscillatory, Indeterminate };

std::string_view to_string(Verdict v);

struct Classification {
    Verdict verdict;
    double amplitude;
    std::optional<double> period_estimate;
};

struct PhaseRow {
    std::size_t queue; ///< 1-based queue index
    double q;
    double q_dot;
};

/// Right-hand side of the delayed system for one (current, delayed) pair.
std::vector<double> rhs(const Distribution& d, std::span<const double> q_now,
                        std::span<const double> q_delayed, const QueueParams& p);

/// Allocation-free variant writing into `out`; `weights` is scratch of length N.
void rhs_into(const Distribution& d, std::span<const double> q_now, std::span<const double> q_delayed,
              const QueueParams& p, std::span<double> weights, std::span<double> out);

/// Classical RK4 with delayed values read from the stored grid by cubic Hermite
/// interpolation on (state, derivative) pairs. Δ = 0 reduces to plain RK4.
Trajectory simulate(const Distribution& d, const QueueParams& p, const HistorySpec& hist,
                    const RunConfig& cfg);

Classification classify_trajectory(const Trajectory& t, double q_star, const RunConfig& cfg);

std::vector<PhaseRow> phase_data(const Trajectory& t);

} // namespace delayq
