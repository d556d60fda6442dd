#include "delayq/dde.hpp"

#include "delayq/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace delayq {

namespace {

constexpr double kNegativityTol = -1e-9;

void check_config(const RunConfig& cfg)
{
    if (!(cfg.horizon > 0.0) || !std::isfinite(cfg.horizon)) {
        throw ConfigError("simulate: horizon must be positive and finite");
    }
    if (!(cfg.delta >= 0.0) || !std::isfinite(cfg.delta)) {
        throw ConfigError("simulate: delay must be nonnegative and finite");
    }
    if (!(cfg.h_target > 0.0) || !std::isfinite(cfg.h_target)) {
        throw ConfigError("simulate: step target must be positive");
    }
    if (!(cfg.classify_window_frac > 0.0 && cfg.classify_window_frac < 1.0)) {
        throw ConfigError("simulate: classify_window_frac must lie in (0, 1)");
    }
    if (!(cfg.amp_tol_rel > 0.0)) throw ConfigError("simulate: amp_tol_rel must be positive");
}

void check_state(std::span<const double> q, double t)
{
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (!std::isfinite(q[i]) || q[i] < kNegativityTol) {
            throw NumericalError("simulate: queue " + std::to_string(i + 1) + " left the admissible range (" +
                                 std::to_string(q[i]) + ") at t = " + std::to_string(t));
        }
    }
}

} // namespace

double RunConfig::step() const
{
    if (delta > 0.0) return delta / static_cast<double>(steps_per_delay());
    return h_target;
}

std::size_t RunConfig::steps_per_delay() const
{
    if (!(delta > 0.0)) return 0;
    return static_cast<std::size_t>(std::max(1.0, std::ceil(delta / h_target)));
}

RunConfig default_run_config(double delta, const StabilityReport& report)
{
    RunConfig cfg;
    cfg.delta = delta;
    const double c_mag = std::abs(report.c);
    const double c_step = c_mag > 0.0 ? 1.0 / (50.0 * c_mag) : 0.01;
    cfg.h_target = delta > 0.0 ? std::min(delta / 100.0, c_step) : std::min(0.01, c_step);
    cfg.horizon = report.delta_cr ? std::max(40.0, 30.0 * *report.delta_cr) : 40.0;
    return cfg;
}

Trajectory::Trajectory(std::size_t n_queues, double step, std::size_t reserve_points)
    : n_(n_queues), h_(step)
{
    times_.reserve(reserve_points);
    states_.reserve(reserve_points * n_);
    derivs_.reserve(reserve_points * n_);
}

void Trajectory::push_back(double t, std::span<const double> q, std::span<const double> dq)
{
    times_.push_back(t);
    states_.insert(states_.end(), q.begin(), q.end());
    derivs_.insert(derivs_.end(), dq.begin(), dq.end());
}

std::string_view to_string(Verdict v)
{
    switch (v) {
    case Verdict::ConvergedToEquilibrium: return "ConvergedToEquilibrium";
    case Verdict::Oscillatory: return "Oscillatory";
    case Verdict::Indeterminate: return "Indeterminate";
    }
    return "Unknown";
}

void rhs_into(const Distribution& d, std::span<const double> q_now, std::span<const double> q_delayed,
              const QueueParams& p, std::span<double> weights, std::span<double> out)
{
    const std::size_t n = q_now.size();
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        weights[j] = ccdf(d, q_delayed[j]);
        total += weights[j];
    }
    if (!(total > 0.0) || !std::isfinite(total)) {
        throw NumericalError("rhs: choice-weight denominator is degenerate");
    }
    const double scale = p.lambda / total;
    for (std::size_t i = 0; i < n; ++i) out[i] = scale * weights[i] - p.mu * q_now[i];
}

std::vector<double> rhs(const Distribution& d, std::span<const double> q_now,
                        std::span<const double> q_delayed, const QueueParams& p)
{
    if (q_now.size() != static_cast<std::size_t>(p.n) || q_delayed.size() != q_now.size()) {
        throw DomainError("rhs: state vectors must have length N");
    }
    std::vector<double> weights(q_now.size());
    std::vector<double> out(q_now.size());
    rhs_into(d, q_now, q_delayed, p, weights, out);
    return out;
}

Trajectory simulate(const Distribution& d, const QueueParams& p, const HistorySpec& hist,
                    const RunConfig& cfg)
{
    validate(d);
    validate(p);
    check_config(cfg);
    const auto n = static_cast<std::size_t>(p.n);
    if (hist.values.size() != n) throw ConfigError("simulate: history must have N entries");
    for (double v : hist.values) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("simulate: history entries must be nonnegative");
    }

    const double h = cfg.step();
    const std::size_t m = cfg.steps_per_delay();
    const auto steps = static_cast<std::size_t>(std::ceil(cfg.horizon / h - 1e-9));

    Trajectory traj(n, h, steps + 1);

    std::vector<double> weights(n);
    std::vector<double> hist_deriv(n);
    rhs_into(d, hist.values, hist.values, p, weights, hist_deriv);

    // Grid index j < 0 is the constant history.
    auto state_at = [&](std::ptrdiff_t j) -> std::span<const double> {
        return j < 0 ? std::span<const double>(hist.values) : traj.state(static_cast<std::size_t>(j));
    };
    auto deriv_at = [&](std::ptrdiff_t j) -> std::span<const double> {
        return j < 0 ? std::span<const double>(hist_deriv) : traj.deriv(static_cast<std::size_t>(j));
    };

    std::vector<double> y(hist.values);
    std::vector<double> dy(n);
    rhs_into(d, y, hist.values, p, weights, dy);
    traj.push_back(0.0, y, dy);

    std::vector<double> k1(n), k2(n), k3(n), k4(n), stage(n), mid(n), next(n);

    for (std::size_t k = 0; k < steps; ++k) {
        const auto lag = static_cast<std::ptrdiff_t>(k) - static_cast<std::ptrdiff_t>(m);
        std::copy(traj.deriv(k).begin(), traj.deriv(k).end(), k1.begin());
        const std::span<const double> yk = traj.state(k);

        if (m == 0) {
            for (std::size_t i = 0; i < n; ++i) stage[i] = yk[i] + 0.5 * h * k1[i];
            rhs_into(d, stage, stage, p, weights, k2);
            for (std::size_t i = 0; i < n; ++i) stage[i] = yk[i] + 0.5 * h * k2[i];
            rhs_into(d, stage, stage, p, weights, k3);
            for (std::size_t i = 0; i < n; ++i) stage[i] = yk[i] + h * k3[i];
            rhs_into(d, stage, stage, p, weights, k4);
        } else {
            const std::span<const double> y0 = state_at(lag);
            const std::span<const double> y1 = state_at(lag + 1);
            const std::span<const double> d0 = deriv_at(lag);
            const std::span<const double> d1 = deriv_at(lag + 1);
            // Cubic Hermite value at the midpoint of [t_lag, t_lag+1].
            for (std::size_t i = 0; i < n; ++i) mid[i] = 0.5 * (y0[i] + y1[i]) + 0.125 * h * (d0[i] - d1[i]);

            for (std::size_t i = 0; i < n; ++i) stage[i] = yk[i] + 0.5 * h * k1[i];
            rhs_into(d, stage, mid, p, weights, k2);
            for (std::size_t i = 0; i < n; ++i) stage[i] = yk[i] + 0.5 * h * k2[i];
            rhs_into(d, stage, mid, p, weights, k3);
            for (std::size_t i = 0; i < n; ++i) stage[i] = yk[i] + h * k3[i];
            rhs_into(d, stage, y1, p, weights, k4);
        }

        for (std::size_t i = 0; i < n; ++i) {
            next[i] = yk[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        const double t_next = static_cast<double>(k + 1) * h;
        check_state(next, t_next);

        if (m == 0) {
            rhs_into(d, next, next, p, weights, dy);
        } else {
            rhs_into(d, next, state_at(lag + 1), p, weights, dy);
        }
        traj.push_back(t_next, next, dy);
    }
    return traj;
}

Classification classify_trajectory(const Trajectory& t, double q_star, const RunConfig& cfg)
{
    if (!(cfg.classify_window_frac > 0.0 && cfg.classify_window_frac <= 0.5)) {
        throw InsufficientDataError("classify_trajectory: window fraction must lie in (0, 0.5]");
    }
    if (t.size() < 2) throw InsufficientDataError("classify_trajectory: trajectory is empty");

    const double t_end = t.time(t.size() - 1);
    const double t_start = t_end * (1.0 - cfg.classify_window_frac);
    const auto first = static_cast<std::size_t>(
        std::lower_bound(t.times().begin(), t.times().end(), t_start) - t.times().begin());
    if (t.size() - first < 3) {
        throw InsufficientDataError("classify_trajectory: tail window holds fewer than 3 samples");
    }

    double lo = t.state(first)[0];
    double hi = lo;
    std::vector<double> maxima;
    for (std::size_t k = first; k < t.size(); ++k) {
        const double v = t.state(k)[0];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        if (k > first && k + 1 < t.size()) {
            const double prev = t.state(k - 1)[0];
            const double next = t.state(k + 1)[0];
            if (v > prev && v > next) maxima.push_back(t.time(k));
        }
    }

    Classification out{Verdict::Indeterminate, hi - lo, std::nullopt};
    if (maxima.size() >= 2) {
        out.period_estimate = (maxima.back() - maxima.front()) / static_cast<double>(maxima.size() - 1);
    }

    const double threshold = cfg.amp_tol_rel * q_star;
    double final_dev = 0.0;
    for (double v : t.state(t.size() - 1)) final_dev = std::max(final_dev, std::abs(v - q_star));

    if (out.amplitude > 1.2 * threshold) {
        out.verdict = Verdict::Oscillatory;
    } else if (out.amplitude < 0.8 * threshold && final_dev <= threshold) {
        out.verdict = Verdict::ConvergedToEquilibrium;
    }
    return out;
}

std::vector<PhaseRow> phase_data(const Trajectory& t)
{
    std::vector<PhaseRow> rows;
    rows.reserve(t.size() * t.n_queues());
    for (std::size_t k = 0; k < t.size(); ++k) {
        const auto q = t.state(k);
        const auto dq = t.deriv(k);
        for (std::size_t i = 0; i < t.n_queues(); ++i) rows.push_back({i + 1, q[i], dq[i]});
    }
    return rows;
}

} // namespace delayq
