#pragma once

// Critical delay as a function of a distribution's mean or variance.
//
// Each grid point is resolved to a concrete distribution by moment matching,
// then analyzed independently. run_sweep evaluates points with OpenMP;
// run_sweep_serial is the single-threaded reference and must produce
// identical rows.

#include "delayq/distributions.hpp"
#include "delayq/stability.hpp"

#include <optional>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace delayq {

/// Sweep the mean with the variance held fixed.
struct MeanSweep {
    double fixed_variance;
};
/// Sweep the variance with the mean held fixed.
struct VarianceSweep {
    double fixed_mean;
};
/// Weibull with pinned shape; the mean sets β.
struct WeibullMeanSweep {
    double fixed_alpha;
};
/// Weibull with pinned shape; the variance sets β.
struct WeibullVarianceSweep {
    double fixed_alpha;
};

using SweepMode = std::variant<MeanSweep, VarianceSweep, WeibullMeanSweep, WeibullVarianceSweep>;

struct SweepSpec {
    FamilyTag family;
    SweepMode mode;
    std::vector<double> grid;
    QueueParams params;
};

enum class RowNote { Infeasible, Unbounded, Failed };

std::string_view to_string(RowNote n);

struct SweepRow {
    double swept;
    std::optional<Distribution> resolved;
    std::optional<double> c;
    std::optional<Regime> regime;
    std::optional<double> delta_cr;
    std::optional<RowNote> note;
};

struct DensityRow {
    double swept;
    double x;
    double pdf;
};

/// Throws ConfigError on an empty or non-increasing grid, a nonpositive fixed
/// statistic, or a Weibull mode paired with another family.
void validate(const SweepSpec& s);

/// `n` evenly spaced points from lo to hi inclusive.
std::vector<double> linear_grid(double lo, double hi, std::size_t n);

/// Distribution at swept value x. The exponential family has one parameter,
/// so the fixed statistic is ignored and x alone determines θ.
Distribution resolve(const SweepSpec& s, double x);

SweepRow evaluate_point(const SweepSpec& s, double x);

std::vector<SweepRow> run_sweep(const SweepSpec& s);
std::vector<SweepRow> run_sweep_serial(const SweepSpec& s);

std::vector<DensityRow> density_curves(const SweepSpec& s, const std::vector<double>& selected,
                                       const std::vector<double>& x_grid);

/// Bisection on |C(x)| = μ inside a bracket whose endpoints classify as
/// HopfAtDelta_cr and DelayIndependentStable (either order).
double locate_asymptote(const SweepSpec& s, std::pair<double, double> bracket);

/// Every |C| = μ crossing between consecutive feasible grid points, refined by
/// locate_asymptote.
std::vector<double> find_asymptotes(const SweepSpec& s);

} // namespace delayq
