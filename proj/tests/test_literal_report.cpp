#include "delayq/error.hpp"
#include "delayq/literal.hpp"
#include "delayq/report.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace delayq;

namespace {

std::vector<std::string> lines(const std::string& s)
{
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::size_t count(const std::string& hay, const std::string& needle)
{
    std::size_t n = 0;
    for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
    return n;
}

// Minimal tag balance check: every opened element closes in order.
bool balanced_xml(const std::string& doc)
{
    std::vector<std::string> stack;
    std::size_t pos = 0;
    while ((pos = doc.find('<', pos)) != std::string::npos) {
        const auto end = doc.find('>', pos);
        if (end == std::string::npos) return false;
        const std::string tag = doc.substr(pos + 1, end - pos - 1);
        pos = end + 1;
        if (tag.empty() || tag.front() == '?') continue;
        if (tag.back() == '/') continue;
        if (tag.front() == '/') {
            if (stack.empty() || stack.back() != tag.substr(1)) return false;
            stack.pop_back();
            continue;
        }
        stack.push_back(tag.substr(0, tag.find(' ')));
    }
    return stack.empty();
}

} // namespace

TEST_CASE("parse_distribution: each family")
{
    CHECK(parse_distribution("exponential:theta=1") == Distribution{Exponential{1.0}});
    CHECK(parse_distribution("normal:alpha=1,sigma=2") == Distribution{Normal{1.0, 2.0}});
    CHECK(parse_distribution(" lognormal: sigma=0.5 ; alpha=-0.25 ") == Distribution{LogNormal{-0.25, 0.5}});
    CHECK(parse_distribution("weibull:alpha=2,beta=0.785") == Distribution{Weibull{2.0, 0.785}});
    CHECK(parse_distribution("gamma:alpha=+2,beta=1e0") == Distribution{Gamma{2.0, 1.0}});

    const Distribution ph = parse_distribution("phasetype:alpha=0.3,0.7;s=-1.8367,0,0,-0.8367");
    const auto& p = std::get<PhaseType>(ph);
    CHECK(p.alpha == std::vector<double>{0.3, 0.7});
    CHECK(p.s(0, 0) == -1.8367);
    CHECK(p.s(1, 1) == -0.8367);
    CHECK(p.s(0, 1) == 0.0);
    // Keys may also be separated by commas.
    CHECK(parse_distribution("phasetype:alpha=1,s=-2") == Distribution{make_phase_type({1.0}, specfun::SquareMatrix{{-2.0}})});
}

TEST_CASE("parse_distribution: errors")
{
    CHECK_THROWS_AS(parse_distribution("exponential"), ParseError);
    CHECK_THROWS_AS(parse_distribution("cauchy:x=1"), ParseError);
    CHECK_THROWS_AS(parse_distribution("exponential:rate=1"), ParseError);
    CHECK_THROWS_AS(parse_distribution("exponential:theta=abc"), ParseError);
    CHECK_THROWS_AS(parse_distribution("exponential:theta=1x"), ParseError);
    CHECK_THROWS_AS(parse_distribution("exponential:theta=inf"), ParseError);
    CHECK_THROWS_AS(parse_distribution("exponential:theta=1,theta=2"), ParseError);
    CHECK_THROWS_AS(parse_distribution("exponential:theta=1,2"), ParseError);
    CHECK_THROWS_AS(parse_distribution("normal:alpha=1"), ParseError);
    CHECK_THROWS_AS(parse_distribution("normal:alpha=1,,sigma=1"), ParseError);
    CHECK_THROWS_AS(parse_distribution("normal:1,alpha=1,sigma=1"), ParseError);
    CHECK_THROWS_AS(parse_distribution("phasetype:alpha=0.5,0.5;s=-1,0,0"), ParseError);
    // Well-formed text with invalid parameters is a domain problem.
    CHECK_THROWS_AS(parse_distribution("exponential:theta=-1"), DomainError);
    CHECK_THROWS_AS(parse_distribution("phasetype:alpha=0.5,0.6;s=-1,0,0,-1"), DomainError);
}

TEST_CASE("format_distribution round-trips exactly")
{
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(0.01, 10.0);
    for (int i = 0; i < 200; ++i) {
        const std::vector<Distribution> ds{
            make_exponential(u(gen)),
            make_normal(u(gen) - 5.0, u(gen)),
            make_lognormal(u(gen) - 5.0, u(gen)),
            make_weibull(u(gen), u(gen)),
            make_gamma(u(gen), u(gen)),
            make_phase_type({0.25, 0.75}, specfun::SquareMatrix{{-u(gen) - 1.0, 0.5}, {0.25, -u(gen) - 1.0}}),
        };
        for (const Distribution& d : ds) {
            const std::string text = format_distribution(d);
            INFO(text);
            CHECK(parse_distribution(text) == d);
        }
    }
}

TEST_CASE("number parsing")
{
    CHECK(parse_number(" 0.1 ") == 0.1);
    CHECK(parse_number("-2.5e-3") == -2.5e-3);
    CHECK_THROWS_AS(parse_number(""), ParseError);
    CHECK_THROWS_AS(parse_number("nan"), ParseError);
    CHECK_THROWS_AS(parse_number("1.0.0"), ParseError);
    CHECK(parse_number_list("4.99,5.01") == std::vector<double>{4.99, 5.01});
    CHECK(parse_number_list("7") == std::vector<double>{7.0});
    CHECK_THROWS_AS(parse_number_list("1,,2"), ParseError);
}

TEST_CASE("number formatting")
{
    CHECK(report::format_exact(0.1) == "0.1");
    CHECK(report::format_exact(5.0) == "5");
    for (double v : {0.36173947100747127, 1.0 / 3.0, 1e-300, -6.02e23}) {
        CHECK(std::stod(report::format_exact(v)) == v);
    }
    CHECK(report::format_summary(0.36173947100747127) == "0.361739");
    CHECK(report::format_summary(-5.0) == "-5");
}

TEST_CASE("trajectory and phase CSV")
{
    Trajectory t(2, 0.5);
    const std::vector<double> q0{4.99, 5.01}, d0{0.1, -0.1};
    const std::vector<double> q1{5.0, 5.0}, d1{0.0, 0.0};
    t.push_back(0.0, q0, d0);
    t.push_back(0.5, q1, d1);

    std::ostringstream traj;
    report::write_trajectory_csv(traj, t);
    const auto tl = lines(traj.str());
    REQUIRE(tl.size() == 3);
    CHECK(tl[0] == "t,q1,q2,dq1,dq2");
    CHECK(tl[1] == "0,4.99,5.01,0.1,-0.1");
    CHECK(tl[2] == "0.5,5,5,0,0");

    std::ostringstream phase;
    report::write_phase_csv(phase, phase_data(t));
    const auto pl = lines(phase.str());
    REQUIRE(pl.size() == 5);
    CHECK(pl[0] == "queue,q,dq");
    CHECK(pl[1] == "1,4.99,0.1");
    CHECK(pl[2] == "2,5.01,-0.1");
}

TEST_CASE("sweep and density CSV")
{
    const SweepSpec s{FamilyTag::HyperExp2, MeanSweep{1.0}, {0.8, 1.2}, {2, 10.0, 1.0}};
    std::ostringstream out;
    report::write_sweep_csv(out, run_sweep(s));
    const auto sl = lines(out.str());
    REQUIRE(sl.size() == 3);
    CHECK(sl[0] == "swept,param1,param2,C,regime,delta_cr,note");
    CHECK(sl[1].rfind("0.8,", 0) == 0);
    CHECK(count(sl[1], ",") == 6);
    CHECK(sl[1].find("HopfAtDelta_cr") != std::string::npos);
    CHECK(sl[2] == "1.2,,,,,,Infeasible");

    const SweepSpec e{FamilyTag::Exponential, MeanSweep{1.0}, {8.0}, {2, 10.0, 1.0}};
    std::ostringstream eo;
    report::write_sweep_csv(eo, run_sweep(e));
    CHECK(lines(eo.str())[1] == "8,0.125,,-0.625,DelayIndependentStable,,Unbounded");

    std::ostringstream dens;
    report::write_density_csv(dens, {{1.0, 0.0, 1.0}, {1.0, 0.5, 0.25}});
    CHECK(dens.str() == "swept,x,pdf\n1,0,1\n1,0.5,0.25\n");
}

TEST_CASE("stability summary")
{
    std::ostringstream hopf;
    report::write_stability_summary(hopf, analyze(make_exponential(1.0), {2, 10.0, 1.0}));
    CHECK(hopf.str() == "q_star=5\nC=-5\nregime=HopfAtDelta_cr\nomega=4.89898\ndelta_cr=0.361739\n");

    std::ostringstream stable;
    report::write_stability_summary(stable, analyze(make_exponential(0.1), {2, 10.0, 1.0}));
    CHECK(stable.str() == "q_star=5\nC=-0.5\nregime=DelayIndependentStable\n");
}

TEST_CASE("line SVG")
{
    report::SvgSeries s{"Critical delay <vs> mean & more", "mean", "delta_cr", {1, 2, 3, 4, 5}, {1, 2, NAN, 4, 5}};
    std::ostringstream out;
    report::write_line_svg(out, s);
    const std::string doc = out.str();
    CHECK(doc.rfind("<?xml", 0) == 0);
    CHECK(balanced_xml(doc));
    CHECK(count(doc, "<polyline") == 2);
    CHECK(doc.find("&lt;vs&gt;") != std::string::npos);
    CHECK(doc.find("&amp;") != std::string::npos);
    CHECK(doc.find("width=\"800\"") != std::string::npos);
    CHECK(doc.find("nan") == std::string::npos);

    report::SvgSeries empty{"empty", "x", "y", {}, {}};
    std::ostringstream eo;
    report::write_line_svg(eo, empty);
    CHECK(balanced_xml(eo.str()));
    CHECK(count(eo.str(), "<polyline") == 0);

    report::SvgSeries bad{"bad", "x", "y", {1.0}, {}};
    std::ostringstream bo;
    CHECK_THROWS_AS(report::write_line_svg(bo, bad), DomainError);
}

TEST_CASE("sweep_series leaves gaps where no critical delay exists")
{
    const SweepSpec e{FamilyTag::Exponential, MeanSweep{1.0}, linear_grid(1.0, 9.0, 9), {2, 10.0, 1.0}};
    const report::SvgSeries s = report::sweep_series(run_sweep(e), "mean");
    REQUIRE(s.x.size() == 9);
    CHECK(s.x_label == "mean");
    for (std::size_t i = 0; i < 9; ++i) CHECK(std::isnan(s.y[i]) == (s.x[i] >= 5.0));
}
