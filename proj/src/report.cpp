#include "delayq/report.hpp"

#include "delayq/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace delayq::report {

namespace {

std::string xml_escape(std::string_view s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string tick_label(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string coord(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::pair<std::string, std::string> row_params(const Distribution& d)
{
    if (const auto* e = std::get_if<Exponential>(&d)) return {format_exact(e->theta), ""};
    if (const auto* n = std::get_if<Normal>(&d)) return {format_exact(n->alpha), format_exact(n->sigma)};
    if (const auto* n = std::get_if<LogNormal>(&d)) return {format_exact(n->alpha), format_exact(n->sigma)};
    if (const auto* w = std::get_if<Weibull>(&d)) return {format_exact(w->alpha), format_exact(w->beta)};
    if (const auto* g = std::get_if<Gamma>(&d)) return {format_exact(g->alpha), format_exact(g->beta)};
    // Two-branch hyperexponential: branch rates.
    const auto& p = std::get<PhaseType>(d);
    if (p.s.dim() == 2) return {format_exact(-p.s(0, 0)), format_exact(-p.s(1, 1))};
    return {"", ""};
}

} // namespace

std::string format_exact(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string format_summary(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& t)
{
    const std::size_t n = t.n_queues();
    os << "t";
    for (std::size_t i = 1; i <= n; ++i) os << ",q" << i;
    for (std::size_t i = 1; i <= n; ++i) os << ",dq" << i;
    os << '\n';
    for (std::size_t k = 0; k < t.size(); ++k) {
        os << format_exact(t.time(k));
        for (double v : t.state(k)) os << ',' << format_exact(v);
        for (double v : t.deriv(k)) os << ',' << format_exact(v);
        os << '\n';
    }
}

void write_phase_csv(std::ostream& os, const std::vector<PhaseRow>& rows)
{
    os << "queue,q,dq\n";
    for (const auto& r : rows) os << r.queue << ',' << format_exact(r.q) << ',' << format_exact(r.q_dot) << '\n';
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows)
{
    os << "swept,param1,param2,C,regime,delta_cr,note\n";
    for (const auto& r : rows) {
        os << format_exact(r.swept) << ',';
        if (r.resolved) {
            const auto [p1, p2] = row_params(*r.resolved);
            os << p1 << ',' << p2;
        } else {
            os << ',';
        }
        os << ',' << (r.c ? format_exact(*r.c) : "");
        os << ',' << (r.regime ? std::string(to_string(*r.regime)) : "");
        os << ',' << (r.delta_cr ? format_exact(*r.delta_cr) : "");
        os << ',' << (r.note ? std::string(to_string(*r.note)) : "");
        os << '\n';
    }
}

void write_density_csv(std::ostream& os, const std::vector<DensityRow>& rows)
{
    os << "swept,x,pdf\n";
    for (const auto& r : rows) os << format_exact(r.swept) << ',' << format_exact(r.x) << ',' << format_exact(r.pdf) << '\n';
}

void write_stability_summary(std::ostream& os, const StabilityReport& r)
{
    os << "q_star=" << format_summary(r.q_star) << '\n';
    os << "C=" << format_summary(r.c) << '\n';
    os << "regime=" << to_string(r.regime) << '\n';
    if (r.omega) os << "omega=" << format_summary(*r.omega) << '\n';
    if (r.delta_cr) os << "delta_cr=" << format_summary(*r.delta_cr) << '\n';
}

SvgSeries sweep_series(const std::vector<SweepRow>& rows, std::string_view swept_label)
{
    SvgSeries s;
    s.title = "critical delay vs " + std::string(swept_label);
    s.x_label = std::string(swept_label);
    s.y_label = "delta_cr";
    for (const auto& r : rows) {
        s.x.push_back(r.swept);
        s.y.push_back(r.delta_cr ? *r.delta_cr : std::numeric_limits<double>::quiet_NaN());
    }
    return s;
}

void write_line_svg(std::ostream& os, const SvgSeries& series)
{
    if (series.x.size() != series.y.size()) throw DomainError("write_line_svg: x/y length mismatch");
    constexpr double width = 800.0;
    constexpr double height = 600.0;
    constexpr double left = 80.0;
    constexpr double right = 30.0;
    constexpr double top = 50.0;
    constexpr double bottom = 70.0;
    constexpr int ticks = 5;

    double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
    if (!series.x.empty()) {
        const auto [xlo, xhi] = std::minmax_element(series.x.begin(), series.x.end());
        x_min = *xlo;
        x_max = *xhi;
    }
    bool any_y = false;
    for (double y : series.y) {
        if (!std::isfinite(y)) continue;
        if (!any_y) {
            y_min = y_max = y;
            any_y = true;
        }
        y_min = std::min(y_min, y);
        y_max = std::max(y_max, y);
    }
    if (x_max == x_min) x_max = x_min + 1.0;
    if (y_max == y_min) y_max = y_min + 1.0;

    const double pw = width - left - right;
    const double ph = height - top - bottom;
    auto px = [&](double x) { return left + (x - x_min) / (x_max - x_min) * pw; };
    auto py = [&](double y) { return top + (1.0 - (y - y_min) / (y_max - y_min)) * ph; };

    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" viewBox=\"0 0 800 600\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
    os << "<text x=\"400\" y=\"30\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"18\">"
       << xml_escape(series.title) << "</text>\n";
    os << "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
    os << "<line x1=\"" << coord(left) << "\" y1=\"" << coord(top + ph) << "\" x2=\"" << coord(left + pw)
       << "\" y2=\"" << coord(top + ph) << "\"/>\n";
    os << "<line x1=\"" << coord(left) << "\" y1=\"" << coord(top) << "\" x2=\"" << coord(left) << "\" y2=\""
       << coord(top + ph) << "\"/>\n";
    for (int i = 0; i < ticks; ++i) {
        const double fx = left + pw * i / (ticks - 1);
        const double fy = top + ph - ph * i / (ticks - 1);
        os << "<line x1=\"" << coord(fx) << "\" y1=\"" << coord(top + ph) << "\" x2=\"" << coord(fx) << "\" y2=\""
           << coord(top + ph + 6) << "\"/>\n";
        os << "<line x1=\"" << coord(left - 6) << "\" y1=\"" << coord(fy) << "\" x2=\"" << coord(left)
           << "\" y2=\"" << coord(fy) << "\"/>\n";
    }
    os << "</g>\n";
    os << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
    for (int i = 0; i < ticks; ++i) {
        const double xv = x_min + (x_max - x_min) * i / (ticks - 1);
        const double yv = y_min + (y_max - y_min) * i / (ticks - 1);
        os << "<text x=\"" << coord(px(xv)) << "\" y=\"" << coord(top + ph + 22)
           << "\" text-anchor=\"middle\">" << tick_label(xv) << "</text>\n";
        os << "<text x=\"" << coord(left - 10) << "\" y=\"" << coord(py(yv) + 4) << "\" text-anchor=\"end\">"
           << tick_label(yv) << "</text>\n";
    }
    os << "<text x=\"" << coord(left + pw / 2) << "\" y=\"" << coord(height - 20) << "\" text-anchor=\"middle\">"
       << xml_escape(series.x_label) << "</text>\n";
    os << "<text x=\"20\" y=\"" << coord(top + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
       << coord(top + ph / 2) << ")\">" << xml_escape(series.y_label) << "</text>\n";
    os << "</g>\n";

    std::string points;
    auto flush = [&] {
        if (!points.empty()) {
            os << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"" << points << "\"/>\n";
            points.clear();
        }
    };
    for (std::size_t i = 0; i < series.x.size(); ++i) {
        if (!std::isfinite(series.y[i])) {
            flush();
            continue;
        }
        if (!points.empty()) points += ' ';
        points += coord(px(series.x[i])) + "," + coord(py(series.y[i]));
    }
    flush();
    os << "</svg>\n";
}

} // namespace delayq::report
