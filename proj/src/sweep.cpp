#include "delayq/sweep.hpp"

#include "delayq/error.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace delayq {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool is_weibull_mode(const SweepMode& m)
{
    return std::holds_alternative<WeibullMeanSweep>(m) || std::holds_alternative<WeibullVarianceSweep>(m);
}

// Sign of |C| - μ at x: +1 Hopf side, -1 delay-independent side, 0 boundary.
int crossing_side(const SweepSpec& s, double x)
{
    const double c = eigenvalue_c(resolve(s, x), s.params);
    const Regime r = classify(c, s.params.mu);
    if (r == Regime::Boundary) return 0;
    return r == Regime::DelayIndependentStable ? -1 : 1;
}

} // namespace

std::string_view to_string(RowNote n)
{
    switch (n) {
    case RowNote::Infeasible: return "Infeasible";
    case RowNote::Unbounded: return "Unbounded";
    case RowNote::Failed: return "Failed";
    }
    return "Unknown";
}

void validate(const SweepSpec& s)
{
    validate(s.params);
    if (s.grid.empty()) throw ConfigError("sweep: grid is empty");
    for (std::size_t i = 0; i < s.grid.size(); ++i) {
        if (!(s.grid[i] > 0.0) || !std::isfinite(s.grid[i])) {
            throw ConfigError("sweep: grid values must be positive and finite");
        }
        if (i > 0 && !(s.grid[i] > s.grid[i - 1])) throw ConfigError("sweep: grid must be strictly increasing");
    }
    const double fixed = std::visit(overloaded{
                                        [](const MeanSweep& m) { return m.fixed_variance; },
                                        [](const VarianceSweep& m) { return m.fixed_mean; },
                                        [](const WeibullMeanSweep& m) { return m.fixed_alpha; },
                                        [](const WeibullVarianceSweep& m) { return m.fixed_alpha; },
                                    },
                                    s.mode);
    if (!(fixed > 0.0) || !std::isfinite(fixed)) throw ConfigError("sweep: fixed statistic must be positive");
    if (is_weibull_mode(s.mode) && s.family != FamilyTag::Weibull) {
        throw ConfigError("sweep: pinned-shape modes require the weibull family");
    }
}

std::vector<double> linear_grid(double lo, double hi, std::size_t n)
{
    if (n < 2 || !(lo < hi)) throw ConfigError("linear_grid: need n >= 2 and lo < hi");
    std::vector<double> g(n);
    const double span = hi - lo;
    for (std::size_t i = 0; i < n; ++i) {
        g[i] = lo + span * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    g.back() = hi;
    return g;
}

Distribution resolve(const SweepSpec& s, double x)
{
    return std::visit(overloaded{
                          [&](const MeanSweep& m) {
                              if (s.family == FamilyTag::Exponential) return make_exponential(1.0 / x);
                              return from_moments(s.family, x, m.fixed_variance);
                          },
                          [&](const VarianceSweep& m) {
                              if (s.family == FamilyTag::Exponential) return make_exponential(1.0 / std::sqrt(x));
                              return from_moments(s.family, m.fixed_mean, x);
                          },
                          [&](const WeibullMeanSweep& m) { return weibull_with_mean(m.fixed_alpha, x); },
                          [&](const WeibullVarianceSweep& m) { return weibull_with_variance(m.fixed_alpha, x); },
                      },
                      s.mode);
}

SweepRow evaluate_point(const SweepSpec& s, double x)
{
    SweepRow row{x, std::nullopt, std::nullopt, std::nullopt, std::nullopt, std::nullopt};
    try {
        row.resolved = resolve(s, x);
    } catch (const InfeasibleError&) {
        row.note = RowNote::Infeasible;
        return row;
    } catch (const Error&) {
        row.note = RowNote::Failed;
        return row;
    }
    try {
        const StabilityReport rep = analyze(*row.resolved, s.params);
        row.c = rep.c;
        row.regime = rep.regime;
        row.delta_cr = rep.delta_cr;
        if (rep.regime == Regime::DelayIndependentStable || rep.regime == Regime::Boundary) {
            row.note = RowNote::Unbounded;
        }
    } catch (const Error&) {
        row.note = RowNote::Failed;
    }
    return row;
}

std::vector<SweepRow> run_sweep_serial(const SweepSpec& s)
{
    validate(s);
    std::vector<SweepRow> rows;
    rows.reserve(s.grid.size());
    for (double x : s.grid) rows.push_back(evaluate_point(s, x));
    return rows;
}

std::vector<SweepRow> run_sweep(const SweepSpec& s)
{
    validate(s);
    const auto n = static_cast<std::ptrdiff_t>(s.grid.size());
    std::vector<SweepRow> rows(s.grid.size(),
                               SweepRow{0.0, std::nullopt, std::nullopt, std::nullopt, std::nullopt, std::nullopt});
#pragma omp parallel for schedule(dynamic, 8)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        rows[static_cast<std::size_t>(i)] = evaluate_point(s, s.grid[static_cast<std::size_t>(i)]);
    }
    return rows;
}

std::vector<DensityRow> density_curves(const SweepSpec& s, const std::vector<double>& selected,
                                       const std::vector<double>& x_grid)
{
    std::vector<Distribution> dists;
    std::ostringstream bad;
    for (double v : selected) {
        try {
            dists.push_back(resolve(s, v));
        } catch (const Error& e) {
            bad << (bad.tellp() > 0 ? ", " : "") << v << " (" << e.what() << ")";
        }
    }
    if (bad.tellp() > 0) throw InfeasibleError("density_curves: infeasible selections: " + bad.str());

    std::vector<DensityRow> rows;
    rows.reserve(selected.size() * x_grid.size());
    for (std::size_t k = 0; k < selected.size(); ++k) {
        for (double x : x_grid) rows.push_back({selected[k], x, pdf(dists[k], x)});
    }
    return rows;
}

double locate_asymptote(const SweepSpec& s, std::pair<double, double> bracket)
{
    auto [lo, hi] = bracket;
    if (!(lo < hi)) std::swap(lo, hi);
    int side_lo = crossing_side(s, lo);
    const int side_hi = crossing_side(s, hi);
    if (side_lo == 0) return lo;
    if (side_hi == 0) return hi;
    if (side_lo == side_hi) {
        throw ConfigError("locate_asymptote: bracket endpoints classify identically");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-13 * std::abs(0.5 * (lo + hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const int side = crossing_side(s, mid);
        if (side == 0) return mid;
        if (side == side_lo) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::vector<double> find_asymptotes(const SweepSpec& s)
{
    const std::vector<SweepRow> rows = run_sweep(s);
    std::vector<double> out;
    auto side = [](const SweepRow& r) -> int {
        if (!r.regime) return 2;
        if (*r.regime == Regime::HopfAtDeltaCr) return 1;
        if (*r.regime == Regime::DelayIndependentStable) return -1;
        return 0;
    };
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        const int a = side(rows[i]);
        const int b = side(rows[i + 1]);
        if (a == 0) {
            out.push_back(rows[i].swept);
        } else if (std::abs(a) == 1 && std::abs(b) == 1 && a != b) {
            out.push_back(locate_asymptote(s, {rows[i].swept, rows[i + 1].swept}));
        }
    }
    if (!rows.empty() && side(rows.back()) == 0) out.push_back(rows.back().swept);
    return out;
}

} // namespace delayq
