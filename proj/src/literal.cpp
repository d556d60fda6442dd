#include "delayq/literal.hpp"

#include "delayq/error.hpp"
#include "delayq/report.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <set>

namespace delayq {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

using KeyValues = std::map<std::string, std::vector<double>, std::less<>>;

KeyValues parse_body(std::string_view body, std::string_view family, const std::set<std::string_view>& allowed)
{
    KeyValues out;
    std::string current;
    std::size_t pos = 0;
    while (pos <= body.size()) {
        const auto end = body.find_first_of(",;", pos);
        const std::string_view token = trim(body.substr(pos, end == std::string_view::npos ? body.npos : end - pos));
        if (token.empty()) throw ParseError("distribution literal: empty field in '" + std::string(body) + "'");
        const auto eq = token.find('=');
        if (eq != std::string_view::npos) {
            const std::string_view key = trim(token.substr(0, eq));
            if (!allowed.contains(key)) {
                throw ParseError("distribution literal: unknown key '" + std::string(key) + "' for " +
                                 std::string(family));
            }
            current = std::string(key);
            if (out.contains(current)) throw ParseError("distribution literal: repeated key '" + current + "'");
            out[current].push_back(parse_number(token.substr(eq + 1)));
        } else {
            if (current.empty()) throw ParseError("distribution literal: value before any key");
            out[current].push_back(parse_number(token));
        }
        if (end == std::string_view::npos) break;
        pos = end + 1;
    }
    for (std::string_view key : allowed) {
        if (!out.contains(key)) {
            throw ParseError("distribution literal: missing key '" + std::string(key) + "' for " +
                             std::string(family));
        }
    }
    return out;
}

double scalar(const KeyValues& kv, std::string_view key)
{
    const auto& v = kv.find(key)->second;
    if (v.size() != 1) throw ParseError("distribution literal: key '" + std::string(key) + "' takes one value");
    return v.front();
}

} // namespace

double parse_number(std::string_view text)
{
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        throw ParseError("not a number: '" + std::string(text) + "'");
    }
    if (!std::isfinite(v)) throw ParseError("number must be finite: '" + std::string(text) + "'");
    return v;
}

std::vector<double> parse_number_list(std::string_view text)
{
    std::vector<double> out;
    std::size_t pos = 0;
    while (true) {
        const auto end = text.find(',', pos);
        out.push_back(parse_number(text.substr(pos, end == std::string_view::npos ? text.npos : end - pos)));
        if (end == std::string_view::npos) break;
        pos = end + 1;
    }
    return out;
}

Distribution parse_distribution(std::string_view text)
{
    text = trim(text);
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) {
        throw ParseError("distribution literal: expected 'family:key=value,...', got '" + std::string(text) + "'");
    }
    const std::string_view family = trim(text.substr(0, colon));
    const std::string_view body = text.substr(colon + 1);

    if (family == "exponential") {
        const auto kv = parse_body(body, family, {"theta"});
        return make_exponential(scalar(kv, "theta"));
    }
    if (family == "normal" || family == "lognormal") {
        const auto kv = parse_body(body, family, {"alpha", "sigma"});
        return family == "normal" ? make_normal(scalar(kv, "alpha"), scalar(kv, "sigma"))
                                  : make_lognormal(scalar(kv, "alpha"), scalar(kv, "sigma"));
    }
    if (family == "weibull" || family == "gamma") {
        const auto kv = parse_body(body, family, {"alpha", "beta"});
        return family == "weibull" ? make_weibull(scalar(kv, "alpha"), scalar(kv, "beta"))
                                   : make_gamma(scalar(kv, "alpha"), scalar(kv, "beta"));
    }
    if (family == "phasetype") {
        auto kv = parse_body(body, family, {"alpha", "s"});
        std::vector<double> alpha = std::move(kv["alpha"]);
        std::vector<double> s = std::move(kv["s"]);
        if (s.size() != alpha.size() * alpha.size()) {
            throw ParseError("distribution literal: phasetype S needs " + std::to_string(alpha.size() * alpha.size()) +
                             " entries, got " + std::to_string(s.size()));
        }
        const std::size_t dim = alpha.size();
        return make_phase_type(std::move(alpha), specfun::SquareMatrix(dim, std::move(s)));
    }
    throw ParseError("distribution literal: unknown family '" + std::string(family) + "'");
}

std::string format_distribution(const Distribution& d)
{
    using report::format_exact;
    if (const auto* e = std::get_if<Exponential>(&d)) return "exponential:theta=" + format_exact(e->theta);
    if (const auto* n = std::get_if<Normal>(&d)) {
        return "normal:alpha=" + format_exact(n->alpha) + ",sigma=" + format_exact(n->sigma);
    }
    if (const auto* n = std::get_if<LogNormal>(&d)) {
        return "lognormal:alpha=" + format_exact(n->alpha) + ",sigma=" + format_exact(n->sigma);
    }
    if (const auto* w = std::get_if<Weibull>(&d)) {
        return "weibull:alpha=" + format_exact(w->alpha) + ",beta=" + format_exact(w->beta);
    }
    if (const auto* g = std::get_if<Gamma>(&d)) {
        return "gamma:alpha=" + format_exact(g->alpha) + ",beta=" + format_exact(g->beta);
    }
    const auto& p = std::get<PhaseType>(d);
    std::string out = "phasetype:alpha=";
    for (std::size_t i = 0; i < p.alpha.size(); ++i) out += (i ? "," : "") + format_exact(p.alpha[i]);
    out += ";s=";
    const auto entries = p.s.entries();
    for (std::size_t i = 0; i < entries.size(); ++i) out += (i ? "," : "") + format_exact(entries[i]);
    return out;
}

} // namespace delayq
