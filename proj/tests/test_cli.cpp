#include "delayq/cli.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using delayq::cli::run;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::path(DELAYQ_TEST_TMPDIR) / "cli_scratch";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<std::string> csv_lines(const fs::path& p)
{
    std::vector<std::string> out;
    std::istringstream in(slurp(p));
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::string value_of(const std::string& text, const std::string& key)
{
    const auto pos = text.find(key + "=");
    if (pos == std::string::npos) return {};
    const auto end = text.find('\n', pos);
    return text.substr(pos + key.size() + 1, end - pos - key.size() - 1);
}

} // namespace

TEST_CASE("stability subcommand")
{
    const Result e = invoke({"stability", "--dist", "exponential:theta=1", "--n", "2", "--lambda", "10", "--mu", "1"});
    CHECK(e.code == 0);
    CHECK(value_of(e.out, "delta_cr") == "0.361739");
    CHECK(value_of(e.out, "regime") == "HopfAtDelta_cr");
    CHECK(value_of(e.out, "q_star") == "5");
    CHECK(value_of(e.out, "C") == "-5");

    const Result n = invoke({"stability", "--dist", "normal:alpha=1,sigma=1"});
    CHECK(n.code == 0);
    CHECK(value_of(n.out, "delta_cr") == "0.0766735");

    const Result s = invoke({"stability", "--dist", "exponential:theta=0.1", "--n", "2", "--lambda", "10", "--mu", "1"});
    CHECK(s.code == 0);
    CHECK(value_of(s.out, "regime") == "DelayIndependentStable");
    CHECK(s.out.find("delta_cr") == std::string::npos);
    CHECK(s.out.find("omega") == std::string::npos);

    const fs::path csv = scratch("stability.csv");
    CHECK(invoke({"stability", "--dist", "exponential:theta=1", "--csv", csv.string()}).code == 0);
    const auto lines = csv_lines(csv);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "q_star,C,regime,omega,delta_cr");
    CHECK(lines[1].rfind("5,-5,HopfAtDelta_cr,", 0) == 0);
    CHECK(std::stod(lines[1].substr(lines[1].rfind(',') + 1)) == doctest::Approx(0.36173947100747127).epsilon(1e-15));
}

TEST_CASE("exit codes")
{
    CHECK(invoke({}).code == 2);
    CHECK(invoke({"bogus"}).code == 2);
    CHECK(invoke({"stability"}).code == 2);
    CHECK(invoke({"stability", "--dist", "exponential:theta"}).code == 2);
    CHECK(invoke({"stability", "--dist", "cauchy:x=1"}).code == 2);
    CHECK(invoke({"stability", "--dist", "exponential:theta=1", "--n", "two"}).code == 2);
    CHECK(invoke({"stability", "--dist", "exponential:theta=1", "--lambda", "10", "--lambda"}).code == 2);

    const Result dom = invoke({"stability", "--dist", "exponential:theta=-1"});
    CHECK(dom.code == 3);
    CHECK_FALSE(dom.err.empty());
    CHECK(invoke({"stability", "--dist", "exponential:theta=1", "--n", "1"}).code == 3);
    CHECK(invoke({"stability", "--dist", "phasetype:alpha=0.5,0.5;s=-1,0,0,-2", "--lambda", "5000"}).code == 3);

    CHECK(invoke({"--help"}).code == 0);
    CHECK(invoke({"stability", "--help"}).code == 0);
}

TEST_CASE("simulate subcommand")
{
    const fs::path below = scratch("sim_below.csv");
    const Result a = invoke({"simulate", "--dist", "exponential:theta=1", "--delta", "0.3", "--hist", "4.99,5.01",
                             "--out", below.string()});
    CHECK(a.code == 0);
    CHECK(value_of(a.out, "verdict") == "ConvergedToEquilibrium");
    const auto lines = csv_lines(below);
    REQUIRE(lines.size() > 100);
    CHECK(lines[0] == "t,q1,q2,dq1,dq2");
    CHECK(lines[1].rfind("0,4.99,5.01,", 0) == 0);

    const Result b = invoke({"simulate", "--dist", "exponential:theta=1", "--delta", "0.7", "--hist", "4.99,5.01"});
    CHECK(b.code == 0);
    CHECK(value_of(b.out, "verdict") == "Oscillatory");
    CHECK_FALSE(value_of(b.out, "period_estimate").empty());

    const Result c = invoke({"simulate", "--dist", "gamma:alpha=2,beta=1", "--delta", "0"});
    CHECK(c.code == 0);
    CHECK(value_of(c.out, "verdict") == "ConvergedToEquilibrium");
    CHECK(std::stod(value_of(c.out, "amplitude")) <= 1e-12);

    CHECK(invoke({"simulate", "--dist", "exponential:theta=1"}).code == 2);
    CHECK(invoke({"simulate", "--dist", "exponential:theta=1", "--delta", "0.3", "--hist", "1,2,3"}).code == 2);
    CHECK(invoke({"simulate", "--dist", "exponential:theta=1", "--delta", "0.3", "--horizon", "-1"}).code == 3);
    CHECK(invoke({"simulate", "--dist", "exponential:theta=1", "--delta", "0.3", "--out", "/nonexistent/dir/x.csv"})
              .code == 3);
}

TEST_CASE("phase subcommand")
{
    const fs::path spiral = scratch("phase_spiral.csv");
    const Result a = invoke({"phase", "--dist", "exponential:theta=1", "--delta", "0.3", "--hist", "4.99,5.01",
                             "--out", spiral.string()});
    CHECK(a.code == 0);
    const auto lines = csv_lines(spiral);
    REQUIRE(lines.size() > 3);
    CHECK(lines[0] == "queue,q,dq");
    CHECK(lines[1].rfind("1,4.99,", 0) == 0);
    CHECK(lines[2].rfind("2,5.01,", 0) == 0);

    const fs::path constant = scratch("phase_constant.csv");
    CHECK(invoke({"phase", "--dist", "exponential:theta=1", "--delta", "0.3", "--out", constant.string()}).code == 0);
    const auto cl = csv_lines(constant);
    for (std::size_t i = 1; i < cl.size(); ++i) {
        const double dq = std::stod(cl[i].substr(cl[i].rfind(',') + 1));
        CHECK(dq == 0.0);
    }
}

TEST_CASE("sweep subcommand")
{
    const fs::path csv = scratch("sweep_exp.csv");
    const fs::path svg = scratch("sweep_exp.svg");
    const Result r = invoke({"sweep", "--family", "exponential", "--mode", "mean", "--grid-min", "0.1", "--grid-max",
                             "6", "--grid-n", "60", "--out", csv.string(), "--svg", svg.string()});
    CHECK(r.code == 0);
    CHECK(value_of(r.out, "rows") == "60");
    CHECK(std::stod(value_of(r.out, "asymptote")) == doctest::Approx(5.0).epsilon(1e-6));
    const auto lines = csv_lines(csv);
    REQUIRE(lines.size() == 61);
    CHECK(lines[0] == "swept,param1,param2,C,regime,delta_cr,note");
    CHECK(lines.back().find("Unbounded") != std::string::npos);
    const std::string doc = slurp(svg);
    CHECK(doc.find("<svg") != std::string::npos);
    CHECK(doc.find("</svg>") != std::string::npos);
    CHECK(doc.find("<polyline") != std::string::npos);

    // Each row's critical delay matches a standalone stability run at full precision.
    const std::string row = lines[10];
    const auto c1 = row.find(',');
    const auto c2 = row.find(',', c1 + 1);
    const std::string theta = row.substr(c1 + 1, c2 - c1 - 1);
    const Result st = invoke({"stability", "--dist", "exponential:theta=" + theta, "--csv", scratch("row.csv").string()});
    const std::string st_row = csv_lines(scratch("row.csv"))[1];
    CHECK(row.substr(row.rfind(",HopfAtDelta_cr,") + 16, row.rfind(',') - row.rfind(",HopfAtDelta_cr,") - 16) ==
          st_row.substr(st_row.rfind(',') + 1));

    const fs::path w = scratch("sweep_weibull.csv");
    CHECK(invoke({"sweep", "--family", "weibull", "--mode", "variance", "--weibull-alpha", "2", "--grid-min", "0.05",
                  "--grid-max", "3", "--grid-n", "50", "--out", w.string()})
              .code == 0);
    CHECK(csv_lines(w).size() == 51);

    const fs::path h = scratch("sweep_h2.csv");
    CHECK(invoke({"sweep", "--family", "hyperexp2", "--mode", "variance", "--fixed", "1", "--grid-min", "0.5",
                  "--grid-max", "2.5", "--grid-n", "21", "--out", h.string()})
              .code == 0);
    const auto hl = csv_lines(h);
    for (std::size_t i = 1; i < hl.size(); ++i) {
        const double v = std::stod(hl[i].substr(0, hl[i].find(',')));
        CHECK((hl[i].find("Infeasible") != std::string::npos) == (v <= 1.0 + 1e-12));
    }

    const std::string out = scratch("bad.csv").string();
    CHECK(invoke({"sweep", "--family", "gamma", "--grid-min", "1", "--grid-max", "2", "--out", out}).code == 2);
    CHECK(invoke({"sweep", "--family", "cauchy", "--fixed", "1", "--grid-min", "1", "--grid-max", "2", "--out", out})
              .code == 2);
    CHECK(invoke({"sweep", "--family", "gamma", "--fixed", "1", "--grid-min", "2", "--grid-max", "1", "--out", out})
              .code == 2);
    CHECK(invoke({"sweep", "--family", "gamma", "--fixed", "1", "--mode", "median", "--grid-min", "1", "--grid-max",
                  "2", "--out", out})
              .code == 2);
    CHECK(invoke({"sweep", "--family", "gamma", "--weibull-alpha", "2", "--grid-min", "1", "--grid-max", "2", "--out",
                  out})
              .code == 2);
}

TEST_CASE("densities subcommand")
{
    const fs::path csv = scratch("dens.csv");
    const Result r = invoke({"densities", "--family", "exponential", "--select", "1,2", "--x-min", "0", "--x-max", "1",
                             "--x-n", "3", "--out", csv.string()});
    CHECK(r.code == 0);
    const auto lines = csv_lines(csv);
    REQUIRE(lines.size() == 7);
    CHECK(lines[0] == "swept,x,pdf");
    CHECK(lines[1] == "1,0,1");
    CHECK(lines[4] == "2,0,0.5");

    const Result bad = invoke({"densities", "--family", "hyperexp2", "--fixed", "1", "--select", "0.8,1.5", "--out",
                               scratch("dens_bad.csv").string()});
    CHECK(bad.code == 3);
    CHECK(bad.err.find("1.5") != std::string::npos);
}

TEST_CASE("args file and determinism")
{
    const fs::path args = scratch("stability.args");
    {
        std::ofstream f(args);
        f << "# two queues, exponential\n"
          << "stability\n"
          << "--dist exponential:theta=1\n"
          << "\n"
          << "--lambda   10\n";
    }
    const Result a = invoke({"--args-file", args.string()});
    CHECK(a.code == 0);
    CHECK(value_of(a.out, "delta_cr") == "0.361739");
    const Result b = invoke({"--args-file=" + args.string()});
    CHECK(b.out == a.out);
    CHECK(invoke({"--args-file", (scratch("missing.args")).string()}).code == 2);
    CHECK(invoke({"stability", "--args-file"}).code == 2);

    const fs::path first = scratch("det1.csv");
    const fs::path second = scratch("det2.csv");
    for (const fs::path& p : {first, second}) {
        REQUIRE(invoke({"sweep", "--family", "lognormal", "--mode", "variance", "--fixed", "1", "--grid-min", "0.1",
                        "--grid-max", "5", "--grid-n", "200", "--out", p.string()})
                    .code == 0);
    }
    CHECK(slurp(first) == slurp(second));

    const fs::path t1 = scratch("det_traj1.csv");
    const fs::path t2 = scratch("det_traj2.csv");
    for (const fs::path& p : {t1, t2}) {
        REQUIRE(invoke({"simulate", "--dist", "normal:alpha=1,sigma=1", "--delta", "0.1", "--hist", "4.99,5.01",
                        "--horizon", "5", "--out", p.string()})
                    .code == 0);
    }
    CHECK(slurp(t1) == slurp(t2));
}
