// Command-line front end over the C interface.

#include "isocert/isocert.h"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitInconclusive = 3;
constexpr int kExitViolation = 4;

// Failure of a C call; `config` marks errors in the user's specification.
struct CallError {
    std::string message;
    bool config = false;
};

void ok(isocert_status s, bool config = false) {
    if (s != ISOCERT_OK) {
        // Argument and parse errors from object construction are configuration errors.
        throw CallError{isocert_last_error(),
                        config || s == ISOCERT_ERR_ARGUMENT || s == ISOCERT_ERR_PARSE};
    }
}

template <class T, void (*Destroy)(T*)>
struct Handle {
    T* p = nullptr;
    Handle() = default;
    Handle(const Handle&) = delete;
    Handle& operator=(const Handle&) = delete;
    ~Handle() { Destroy(p); }
    T** out() { return &p; }
    T* get() const { return p; }
};

using Measure = Handle<isocert_measure, isocert_measure_destroy>;
using Entropy = Handle<isocert_entropy, isocert_entropy_destroy>;
using Cost = Handle<isocert_cost, isocert_cost_destroy>;
using Family = Handle<isocert_family, isocert_family_destroy>;
using Report = Handle<isocert_report, isocert_report_destroy>;

struct Options {
    std::string measure = "gauss";
    std::optional<double> lo;
    std::optional<double> hi;
    std::size_t grid_points = 0;
    double drop = 0.0;
    std::string entropy = "log";
    std::string cost = "quadratic:0.5";
    double delta = 0.0;
    double K = 2.0;
    double t_min = 1e-12;
    std::string family = "exponential:0.25,0.5,1";
    std::string inequality = "defective";
    double alpha = 1.5;
    double tau = 1.0;
    double A = 1.0;
    double floor = 1e-3;
    std::uint64_t seed = 0;
    std::string grid = "0:10:2000";
    std::string t_grid = "1e-8:0.5:200";
    std::string r_grid = "0:10:101";
    std::string out;
    std::string csv;
    std::string entropy_out;
};

struct Grid {
    double lo, hi;
    std::size_t n;
};

Grid parse_grid(const std::string& text) {
    Grid g{};
    std::istringstream in(text);
    char c1 = 0, c2 = 0;
    if (!(in >> g.lo >> c1 >> g.hi >> c2 >> g.n) || c1 != ':' || c2 != ':' || !in.eof() || g.n < 2 || !(g.hi > g.lo))
        throw CallError{"invalid grid '" + text + "' (expected lo:hi:n with lo < hi, n >= 2)", true};
    return g;
}

std::vector<double> linear_grid(const Grid& g) {
    std::vector<double> v(g.n);
    for (std::size_t i = 0; i < g.n; ++i) v[i] = g.lo + (g.hi - g.lo) * static_cast<double>(i) / (g.n - 1);
    v.back() = g.hi;
    return v;
}

std::vector<double> log_grid(const Grid& g) {
    if (!(g.lo > 0.0)) throw CallError{"log-spaced grid needs lo > 0", true};
    std::vector<double> v(g.n);
    const double a = std::log(g.lo), b = std::log(g.hi);
    for (std::size_t i = 0; i < g.n; ++i) v[i] = std::exp(a + (b - a) * static_cast<double>(i) / (g.n - 1));
    v.front() = g.lo;
    v.back() = g.hi;
    return v;
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw CallError{"cannot write '" + path + "'", false};
    f << text;
}

void make_measure(const Options& o, Measure& m) {
    isocert_measure_options mo{};
    mo.has_lo = o.lo.has_value();
    mo.lo = o.lo.value_or(0.0);
    mo.has_hi = o.hi.has_value();
    mo.hi = o.hi.value_or(0.0);
    mo.grid_points = o.grid_points;
    mo.log_density_drop = o.drop;
    ok(isocert_measure_create(o.measure.c_str(), &mo, m.out()), true);
}

int run_conjugate(const Options& o) {
    Cost c;
    ok(isocert_cost_create(o.cost.c_str(), c.out()), true);
    const auto xs = linear_grid(parse_grid(o.grid));
    std::vector<double> values(xs.size()), argmax(xs.size());
    std::vector<int> truncated(xs.size());
    ok(isocert_cost_conjugate(c.get(), xs.data(), xs.size(), values.data(), argmax.data(), truncated.data()));
    std::string out = "x,conjugate,argmax,truncated\n";
    char buf[128];
    for (std::size_t i = 0; i < xs.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%d\n", xs[i], values[i], argmax[i], truncated[i]);
        out += buf;
    }
    emit(o.out, out);
    return kExitOk;
}

int run_profile(const Options& o) {
    Measure m;
    make_measure(o, m);
    Entropy e;
    ok(isocert_entropy_create(o.entropy.c_str(), e.out()), true);
    const auto ts = log_grid(parse_grid(o.t_grid));
    const auto rs = linear_grid(parse_grid(o.r_grid));
    Report r;
    ok(isocert_profile(m.get(), e.get(), ts.data(), ts.size(), rs.data(), rs.size(), r.out()));
    const std::string tilde = isocert_report_csv(r.get(), 0);
    const std::string entropy = isocert_report_csv(r.get(), 1);
    if (o.out.empty() && o.entropy_out.empty()) {
        emit("", tilde + "\n" + entropy);
    } else {
        emit(o.out, tilde);
        if (!o.entropy_out.empty()) emit(o.entropy_out, entropy);
    }
    if (!o.csv.empty()) emit(o.csv, isocert_report_json(r.get()));
    return kExitOk;
}

isocert_verdict check(const Options& o, const Measure& m, const Entropy& e, const Cost& c, std::string& json) {
    isocert_check_params p;
    isocert_check_params_default(&p);
    p.delta = o.delta;
    p.K = o.K;
    p.t_min = o.t_min;
    Report r;
    ok(isocert_check(m.get(), e.get(), c.get(), &p, r.out()), true);
    json = isocert_report_json(r.get());
    return isocert_report_verdict(r.get());
}

int run_check(const Options& o) {
    Measure m;
    make_measure(o, m);
    Entropy e;
    ok(isocert_entropy_create(o.entropy.c_str(), e.out()), true);
    Cost c;
    ok(isocert_cost_create(o.cost.c_str(), c.out()), true);
    std::string json;
    const isocert_verdict v = check(o, m, e, c, json);
    emit(o.out, json);
    return v == ISOCERT_VERDICT_INCONCLUSIVE ? kExitInconclusive : kExitOk;
}

// Runs the configured inequality test; returns the report's margin flag.
int test(const Options& o, const Measure& m, std::string& json, std::string& csv) {
    Family f;
    ok(isocert_family_create(o.family.c_str(), o.seed, o.floor, f.out()), true);
    Report r;
    if (o.inequality == "defective") {
        Entropy e;
        ok(isocert_entropy_create(o.entropy.c_str(), e.out()), true);
        Cost c;
        ok(isocert_cost_create(o.cost.c_str(), c.out()), true);
        ok(isocert_test_defective(m.get(), e.get(), c.get(), f.get(), o.K, r.out()));
    } else if (o.inequality == "tight") {
        ok(isocert_test_tight(m.get(), o.alpha, o.tau, o.A, f.get(), r.out()));
    } else if (o.inequality == "beta") {
        ok(isocert_test_beta(m.get(), o.alpha, f.get(), r.out()));
    } else {
        throw CallError{"unknown inequality '" + o.inequality + "' (defective, tight, beta)", true};
    }
    json = isocert_report_json(r.get());
    const char* table = isocert_report_csv(r.get(), 0);
    csv = table ? table : "";
    return isocert_report_margins_ok(r.get());
}

int run_test(const Options& o) {
    Measure m;
    make_measure(o, m);
    std::string json, csv;
    const int margins = test(o, m, json, csv);
    emit(o.out, json);
    if (!o.csv.empty()) emit(o.csv, csv);
    return margins == 0 ? kExitViolation : kExitOk;
}

int run_certify(const Options& o) {
    Measure m;
    make_measure(o, m);
    Entropy e;
    ok(isocert_entropy_create(o.entropy.c_str(), e.out()), true);
    Cost c;
    ok(isocert_cost_create(o.cost.c_str(), c.out()), true);
    std::string check_json;
    const isocert_verdict v = check(o, m, e, c, check_json);
    std::string test_json = "null\n", csv;
    int margins = -1;
    if (v == ISOCERT_VERDICT_FINITE) margins = test(o, m, test_json, csv);
    check_json.pop_back();
    test_json.pop_back();
    emit(o.out, "{\n\"check\": " + check_json + ",\n\"test\": " + test_json + "\n}\n");
    if (!o.csv.empty() && !csv.empty()) emit(o.csv, csv);
    if (v == ISOCERT_VERDICT_INCONCLUSIVE) return kExitInconclusive;
    if (v != ISOCERT_VERDICT_FINITE || margins == 0) return kExitViolation;
    return kExitOk;
}

int run_examples(const Options& o) {
    Report r;
    ok(isocert_example_suite(o.seed, r.out()));
    emit(o.out, isocert_report_json(r.get()));
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Integrability conditions and empirical tests for entropy-energy inequalities on the line"};
    app.set_version_flag("--version", isocert_version());
    app.set_config("--config", "", "Flat key = value file; command-line flags override it");
    app.require_subcommand(1, 1);
    app.fallthrough();

    Options o;
    app.add_option("--measure", o.measure, "gauss | exp | exp_power:<alpha> | loglog | expr:<V(x)>")
        ->capture_default_str();
    app.add_option("--lo", o.lo, "Cut the support below here");
    app.add_option("--hi", o.hi, "Cut the support above here");
    app.add_option("--grid-points", o.grid_points, "Measure grid size")->check(CLI::Range(17, 1 << 24));
    app.add_option("--drop", o.drop, "Automatic cut where log density falls this far below its peak")
        ->check(CLI::PositiveNumber);
    app.add_option("--entropy", o.entropy, "log | iterlog | F_tau:<phi>:<tau> | expr:<phi(x)>")->capture_default_str();
    app.add_option("--cost", o.cost, "quadratic[:<delta>] | c:<A>:<alpha> | expr:<c(x)>")->capture_default_str();
    app.add_option("--delta", o.delta, "Override the cost multiplier")->check(CLI::PositiveNumber);
    app.add_option("--K", o.K, "Truncation level (> 1)")->capture_default_str();
    app.add_option("--t-min", o.t_min, "Lower end of the integrability integral")->capture_default_str();
    app.add_option("--family", o.family, "Test family spec")->capture_default_str();
    app.add_option("--inequality", o.inequality, "defective | tight | beta")->capture_default_str();
    app.add_option("--alpha", o.alpha, "Exponent of e^{-|x|^alpha} for tight and beta tests")->capture_default_str();
    app.add_option("--tau", o.tau, "Entropy exponent for the tight test")->capture_default_str();
    app.add_option("--A", o.A, "Branch point of the cost for the tight test")->capture_default_str();
    app.add_option("--floor", o.floor, "Floor added to test functions")->capture_default_str();
    app.add_option("--seed", o.seed, "Seed of random families")->capture_default_str();
    app.add_option("--grid", o.grid, "Dual grid lo:hi:n for conjugate")->capture_default_str();
    app.add_option("--t-grid", o.t_grid, "Log-spaced t grid lo:hi:n for profile")->capture_default_str();
    app.add_option("--r-grid", o.r_grid, "Radius grid lo:hi:n for profile")->capture_default_str();
    app.add_option("--out", o.out, "Output file (default stdout)");
    app.add_option("--csv", o.csv, "CSV rows (test, certify) or JSON summary (profile)");
    app.add_option("--entropy-out", o.entropy_out, "Entropy-profile CSV for profile");

    auto* conjugate = app.add_subcommand("conjugate", "Legendre transform table of a cost (CSV)");
    auto* profile = app.add_subcommand("profile", "Half-line and entropy profiles of a measure (CSV)");
    auto* check = app.add_subcommand("check", "Integrability condition verdict (JSON)");
    auto* test = app.add_subcommand("test", "Empirical inequality test over a family (JSON and CSV)");
    auto* certify = app.add_subcommand("certify", "check, then test when the verdict is FINITE");
    auto* examples = app.add_subcommand("paper-examples", "Bundled example suite (JSON)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*conjugate) return run_conjugate(o);
        if (*profile) return run_profile(o);
        if (*check) return run_check(o);
        if (*test) return run_test(o);
        if (*certify) return run_certify(o);
        if (*examples) return run_examples(o);
    } catch (const CallError& e) {
        std::cerr << "error: " << e.message << '\n';
        return e.config ? kExitConfig : kExitFailure;
    }
    return kExitFailure;
}
