#pragma once

// CSV and SVG writers shared by the CLI.

#include "delayq/dde.hpp"
#include "delayq/stability.hpp"
#include "delayq/sweep.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace delayq::report {

/// Shortest decimal string that parses back to exactly `v`.
std::string format_exact(double v);

/// Six significant digits, for human-readable summaries.
std::string format_summary(double v);

/// Header `t,q1,...,qN,dq1,...,dqN`.
void write_trajectory_csv(std::ostream& os, const Trajectory& t);

/// Header `queue,q,dq`.
void write_phase_csv(std::ostream& os, const std::vector<PhaseRow>& rows);

/// Header `swept,param1,param2,C,regime,delta_cr,note`.
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

/// Header `swept,x,pdf`.
void write_density_csv(std::ostream& os, const std::vector<DensityRow>& rows);

/// key=value lines: q_star, C, regime, omega and delta_cr (the last two only in
/// the Hopf regime).
void write_stability_summary(std::ostream& os, const StabilityReport& r);

struct SvgSeries {
    std::string title;
    std::string x_label;
    std::string y_label;
    /// Points in order; a NaN y breaks the polyline.
    std::vector<double> x;
    std::vector<double> y;
};

/// 800×600 single-series line chart with linear axes and five ticks per axis.
void write_line_svg(std::ostream& os, const SvgSeries& series);

/// Δ_cr against swept value, with gaps at rows that carry no critical delay.
SvgSeries sweep_series(const std::vector<SweepRow>& rows, std::string_view swept_label);

} // namespace delayq::report
