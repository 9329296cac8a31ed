#include "isocert/config.hpp"

#include "isocert/errors.hpp"
#include "isocert/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <string>
#include <vector>

namespace isocert {

namespace {

std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

double to_number(std::string_view s, std::string_view what) {
    const std::string t = trim(s);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(v))
        throw ArgumentError("invalid number '" + t + "' in " + std::string(what));
    return v;
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.push_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    return out;
}

// "name:a:b" or "name(a, b)" -> name and the raw argument text "a:b" / "a, b".
struct Head {
    std::string name;
    std::string rest;
    char sep = ':';
};

Head split_head(std::string_view text) {
    const std::string t = trim(text);
    Head h;
    const std::size_t paren = t.find('(');
    const std::size_t colon = t.find(':');
    if (paren != std::string::npos && (colon == std::string::npos || paren < colon)) {
        if (t.back() != ')') throw ArgumentError("missing ')' in '" + t + "'");
        h.name = trim(t.substr(0, paren));
        h.rest = t.substr(paren + 1, t.size() - paren - 2);
        h.sep = ',';
    } else if (colon != std::string::npos) {
        h.name = trim(t.substr(0, colon));
        h.rest = t.substr(colon + 1);
    } else {
        h.name = t;
    }
    return h;
}

std::vector<double> numbers(std::string_view s, std::string_view what) {
    std::vector<double> v;
    for (const auto& part : split(s, ',')) v.push_back(to_number(part, what));
    return v;
}

bool starts_with_expr(std::string_view t) { return t.substr(0, 5) == "expr:"; }

EntropyBase parse_base(std::string_view text) {
    const std::string t = trim(text);
    if (t == "log") return EntropyBase::log();
    if (t == "iterlog") return EntropyBase::iterated_log_square();
    if (starts_with_expr(t)) {
        const std::string body = t.substr(5);
        return EntropyBase::expression(Expr::parse(body), body);
    }
    throw ArgumentError("unknown entropy base '" + t + "' (log, iterlog, expr:<text>)");
}

} // namespace

Potential parse_measure_spec(std::string_view text) {
    const std::string t = trim(text);
    if (t.empty()) throw ArgumentError("empty measure specification");
    if (starts_with_expr(t)) {
        const std::string body = t.substr(5);
        auto e = std::make_shared<Expr>(Expr::parse(body));
        return Potential{[e](double x) { return e->eval(x); }, body, false};
    }
    const Head h = split_head(t);
    if (h.name == "gauss" && h.rest.empty()) return Potential::gauss();
    if (h.name == "exp" && h.rest.empty()) return Potential::exp();
    if (h.name == "loglog" && h.rest.empty()) return Potential::loglog();
    if (h.name == "exp_power") {
        const double alpha = to_number(h.rest, "exp_power");
        if (!(alpha > 0.0)) throw ArgumentError("exp_power needs alpha > 0");
        return Potential::exp_power(alpha);
    }
    throw ArgumentError("unknown measure '" + t + "' (gauss, exp, exp_power:<alpha>, loglog, expr:<V>)");
}

EntropyFunction parse_entropy_spec(std::string_view text) {
    const std::string t = trim(text);
    if (t == "log") return EntropyFunction::log();
    if (t == "iterlog") return EntropyFunction::make(EntropyBase::iterated_log_square());
    if (starts_with_expr(t)) return EntropyFunction::make(parse_base(t));
    const Head h = split_head(t);
    if (h.name == "F_tau") {
        const std::size_t cut = h.rest.rfind(h.sep);
        if (cut == std::string::npos) throw ArgumentError("F_tau needs a base and an exponent");
        const double tau = to_number(h.rest.substr(cut + 1), "F_tau");
        return EntropyFunction::make(parse_base(h.rest.substr(0, cut)), tau);
    }
    throw ArgumentError("unknown entropy '" + t + "' (log, iterlog, F_tau:<phi>:<tau>, expr:<phi>)");
}

CostSpec parse_cost_spec(std::string_view text) {
    CostSpec c;
    c.text = trim(text);
    const std::string& t = c.text;
    if (starts_with_expr(t)) {
        const Expr e = Expr::parse(t.substr(5));
        if (std::abs(e(0.0)) > 1e-12) throw ArgumentError("expression cost must vanish at 0");
        auto grid = linspace(0.0, 50.0, 5001);
        std::vector<double> v(grid.size());
        for (std::size_t i = 1; i < grid.size(); ++i) v[i] = e(grid[i]);
        if (!is_discretely_convex(grid, v)) throw ArgumentError("expression cost is not convex on [0, 50]");
        c.cost = CostFunction::sampled(std::move(grid), std::move(v));
        return c;
    }
    const Head h = split_head(t);
    if (h.name == "quadratic") {
        c.cost = CostFunction::quadratic();
        if (!h.rest.empty()) c.delta = to_number(h.rest, "quadratic");
        if (!(c.delta > 0.0)) throw ArgumentError("quadratic delta must be positive");
        return c;
    }
    if (h.name == "c" || h.name == "c_A_alpha") {
        const auto args = split(h.rest, h.sep);
        if (args.size() != 2) throw ArgumentError("c_A_alpha needs A and alpha");
        c.cost = CostFunction::closed_form(to_number(args[0], "cost A"), to_number(args[1], "cost alpha"));
        return c;
    }
    throw ArgumentError("unknown cost '" + t + "' (quadratic[:delta], c:<A>:<alpha>, expr:<c>)");
}

TestFamily parse_family_spec(std::string_view text, std::uint64_t seed, double floor) {
    const std::string t = trim(text);
    if (starts_with_expr(t)) {
        const std::string body = t.substr(5);
        return TestFamily::expression(Expr::parse(body), body, {0.0}, floor);
    }
    const Head h = split_head(t);
    // Parenthesized lists share ',' between parameters and values; only the
    // colon form is accepted for families.
    if (h.sep != ':') throw ArgumentError("family specs use the form name:values");
    if (h.name == "exponential") return TestFamily::exponential(numbers(h.rest, "exponential"));
    if (h.name == "bump") return TestFamily::bump(numbers(h.rest, "bump"));
    if (h.name == "linear") return TestFamily::shifted_linear(numbers(h.rest, "linear"), floor);
    if (h.name == "constant") return TestFamily::constant(numbers(h.rest, "constant"));
    if (h.name == "random") {
        const double n = to_number(h.rest, "random");
        if (!(n >= 1.0) || n != std::floor(n)) throw ArgumentError("random family size must be a positive integer");
        return TestFamily::random_smooth(static_cast<std::size_t>(n), seed, floor);
    }
    if (h.name == "radial") {
        const std::size_t cut = h.rest.find(':');
        if (cut == std::string::npos) throw ArgumentError("radial needs gamma and a parameter list");
        return TestFamily::radial(numbers(h.rest.substr(cut + 1), "radial"), to_number(h.rest.substr(0, cut), "radial"));
    }
    throw ArgumentError("unknown family '" + t + "'");
}

GridSpec parse_grid_spec(std::string_view text) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw ArgumentError("grid must be lo:hi:n");
    GridSpec g;
    g.lo = to_number(parts[0], "grid");
    g.hi = to_number(parts[1], "grid");
    const double n = to_number(parts[2], "grid");
    if (!(n >= 2.0) || n != std::floor(n)) throw ArgumentError("grid needs an integer point count >= 2");
    if (!(g.hi > g.lo)) throw ArgumentError("grid needs lo < hi");
    g.n = static_cast<std::size_t>(n);
    return g;
}

} // namespace isocert
