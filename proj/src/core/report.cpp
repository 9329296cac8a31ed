#include "isocert/report.hpp"

#include "isocert/entropy.hpp"

#include <cmath>
#include <cstdio>
#include <memory>

namespace isocert {

namespace {

std::string num(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// CSV cells print non-finite values as inf / -inf / nan.
std::string cell(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return num(v);
}

std::string csv_text(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

void dump_into(const Json& j, int indent, int depth, std::string& out) {
    const auto pad = [&](int d) {
        if (indent >= 0) {
            out += '\n';
            out.append(static_cast<std::size_t>(indent * d), ' ');
        }
    };
    switch (j.type()) {
    case Json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += '{';
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) out += ',';
            first = false;
            pad(depth + 1);
            out += Json(it.key()).dump();
            out += indent >= 0 ? ": " : ":";
            dump_into(it.value(), indent, depth + 1, out);
        }
        pad(depth);
        out += '}';
        return;
    }
    case Json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        out += '[';
        bool first = true;
        for (const auto& v : j) {
            if (!first) out += ',';
            first = false;
            pad(depth + 1);
            dump_into(v, indent, depth + 1, out);
        }
        pad(depth);
        out += ']';
        return;
    }
    case Json::value_t::number_float: out += num(j.get<double>()); return;
    default: out += j.dump(); return;
    }
}

Json verdict_json(Verdict v) { return to_string(v); }

} // namespace

Json to_json(const TailModel& t) {
    return Json{{"p", t.p}, {"b", t.b}, {"c", t.c}, {"rms", t.rms}, {"power_law", t.power_law},
                {"integrable", t.integrable}};
}

Json to_json(const ConditionReport& r) {
    Json decades = Json::array();
    for (const auto& d : r.decades)
        decades.push_back(Json{{"t_lo", d.t_lo}, {"t_hi", d.t_hi}, {"partial_sum", d.partial_sum},
                               {"log_partial_sum", d.log_partial_sum}});
    Json j{{"verdict", verdict_json(r.verdict)},
           {"integral_estimate", r.integral_estimate},
           {"log_integral_estimate", r.log_integral_estimate},
           {"delta", r.delta},
           {"K", r.K},
           {"t_min", r.t_min},
           {"tail_fit", to_json(r.tail)},
           {"geometric_decay", r.geometric_decay},
           {"nondecreasing", r.nondecreasing},
           {"phi_truncated", r.phi_truncated},
           {"truncated_at_t", r.truncated_at_t},
           {"zero_profile", r.zero_profile},
           {"note", r.note},
           {"decades", std::move(decades)}};
    return j;
}

Json to_json(const DeltaSweep& s) {
    Json reports = Json::array();
    for (const auto& r : s.reports) reports.push_back(to_json(r));
    return Json{{"largest_finite_delta", s.largest_finite_delta}, {"reports", std::move(reports)}};
}

Json to_json(const TestReport& r) {
    Json rows = Json::array();
    for (const auto& x : r.rows)
        rows.push_back(Json{{"label", x.label},
                            {"parameter", x.parameter},
                            {"entropy_F", x.entropy_F},
                            {"classical_entropy", x.classical_entropy},
                            {"mass", x.mass},
                            {"variance", x.variance},
                            {"grad_energy", x.grad_energy},
                            {"modified_energy", x.modified_energy},
                            {"restricted_energy", x.restricted_energy},
                            {"centered_energy", x.centered_energy},
                            {"median_energy", x.median_energy},
                            {"ratio", x.ratio},
                            {"b_hat", x.b_hat},
                            {"b_hat_variance", x.b_hat_variance},
                            {"step_one", x.step_one},
                            {"step_one_margin", x.step_one_margin},
                            {"skipped", x.skipped},
                            {"saturated", x.saturated}});
    return Json{{"measure", r.measure},
                {"entropy", r.entropy},
                {"cost", r.cost},
                {"family", r.family},
                {"K", r.K},
                {"C_hat", r.C_hat},
                {"B_hat", r.B_hat},
                {"B_hat_variance", r.B_hat_variance},
                {"min_step_one_margin", r.min_step_one_margin},
                {"rows", std::move(rows)}};
}

Json to_json(const BetaReport& r) {
    Json rows = Json::array();
    for (const auto& x : r.rows)
        rows.push_back(Json{{"label", x.label},
                            {"entropy", x.entropy},
                            {"gradient", x.gradient},
                            {"variance", x.variance},
                            {"ratio", x.ratio},
                            {"skipped", x.skipped}});
    return Json{{"alpha", r.alpha}, {"beta", r.beta}, {"epsilon", r.epsilon}, {"C_hat", r.C_hat},
                {"rows", std::move(rows)}};
}

Json to_json(const RestrictedReport& r) {
    Json rows = Json::array();
    for (const auto& x : r.rows)
        rows.push_back(Json{{"label", x.label},
                            {"full", x.full},
                            {"restricted", x.restricted},
                            {"complement", x.complement},
                            {"excess", x.excess},
                            {"variance", x.variance},
                            {"margin_first", x.margin_first},
                            {"b_min", x.b_min}});
    return Json{{"K", r.K}, {"C", r.C}, {"min_margin_first", r.min_margin_first}, {"B_min", r.B_min},
                {"rows", std::move(rows)}};
}

Json to_json(const MixedBound& b) {
    return Json{{"lhs", b.lhs}, {"rhs", b.rhs}, {"C", b.C}, {"margin", b.margin}};
}

Json to_json(const CheegerResult& c) { return Json{{"lambda", c.lambda}, {"argmax_t", c.argmax_t}}; }

Json to_json(const BobkovGoetzeResult& b) {
    return Json{{"value", b.value}, {"log_value", b.log_value}, {"argmax", b.argmax}, {"divergent", b.divergent}};
}

std::string dump_json(const Json& j, int indent) {
    std::string out;
    dump_into(j, indent, 0, out);
    out += '\n';
    return out;
}

std::string conjugate_csv(const ConjugateTable& t) {
    std::string out = "x,conjugate,argmax,truncated\n";
    for (std::size_t i = 0; i < t.grid.size(); ++i)
        out += cell(t.grid[i]) + ',' + cell(t.values[i]) + ',' + cell(t.argmax[i]) + ',' +
               (t.truncated[i] ? "1" : "0") + '\n';
    return out;
}

std::string tilde_profile_csv(const IsoProfile& p) {
    std::string out = "t,u,v,tilde_I\n";
    for (std::size_t i = 0; i < p.t.size(); ++i)
        out += cell(p.t[i]) + ',' + cell(p.u[i]) + ',' + cell(p.v[i]) + ',' + cell(p.tilde_I[i]) + '\n';
    return out;
}

std::string entropy_profile_csv(const EntropyProfile& p) {
    std::string out = "r,s,I_F,empty\n";
    for (std::size_t i = 0; i < p.r.size(); ++i)
        out += cell(p.r[i]) + ',' + cell(p.s[i]) + ',' + cell(p.value[i]) + ',' + (p.empty[i] ? "1" : "0") + '\n';
    return out;
}

std::string test_rows_csv(const TestReport& r) {
    std::string out =
        "label,parameter,entropy_F,classical_entropy,mass,variance,grad_energy,modified_energy,restricted_energy,"
        "centered_energy,median_energy,ratio,b_hat,b_hat_variance,step_one,step_one_margin,skipped,saturated\n";
    for (const auto& x : r.rows) {
        out += csv_text(x.label);
        for (double v : {x.parameter, x.entropy_F, x.classical_entropy, x.mass, x.variance, x.grad_energy,
                         x.modified_energy, x.restricted_energy, x.centered_energy, x.median_energy, x.ratio, x.b_hat,
                         x.b_hat_variance, x.step_one, x.step_one_margin})
            out += ',' + cell(v);
        out += std::string(",") + (x.skipped ? "1" : "0") + ',' + (x.saturated ? "1" : "0") + '\n';
    }
    return out;
}

std::string beta_rows_csv(const BetaReport& r) {
    std::string out = "label,entropy,gradient,variance,ratio,skipped\n";
    for (const auto& x : r.rows)
        out += csv_text(x.label) + ',' + cell(x.entropy) + ',' + cell(x.gradient) + ',' + cell(x.variance) + ',' +
               cell(x.ratio) + ',' + (x.skipped ? "1" : "0") + '\n';
    return out;
}

Json measure_summary(const Measure1D& mu) {
    Json j{{"name", mu.name()},
           {"lo", mu.lo()},
           {"hi", mu.hi()},
           {"grid_points", mu.grid().size()},
           {"log_Z", mu.log_Z()},
           {"median", mu.median()},
           {"center", mu.center()},
           {"log_concave", mu.log_concave()},
           {"outside_mass", mu.outside_mass()},
           {"cheeger", to_json(cheeger_constant(mu))},
           {"line_criterion_left", to_json(bobkov_goetze(mu, Side::left))},
           {"line_criterion_right", to_json(bobkov_goetze(mu, Side::right))}};
    return j;
}

Json run_example_suite(std::uint64_t seed) {
    Json out;
    out["seed"] = seed;

    // Measure with potential |x| log(1 + x^2) against the log^2(log) entropy.
    {
        ConditionSpec spec;
        spec.measure = std::make_shared<const Measure1D>(Measure1D::build(Potential::loglog()));
        spec.F = EntropyFunction::make(EntropyBase::iterated_log_square());
        spec.cost = CostFunction::quadratic();
        spec.K = 3.0;
        const DeltaSweep sweep = delta_sweep(spec, {1.0, 0.5, 0.25, 0.1, 0.05});
        out["loglog_measure"] = Json{{"measure", spec.measure->name()},
                                     {"entropy", spec.F.describe()},
                                     {"cost", spec.cost.describe()},
                                     {"K", spec.K},
                                     {"sweep", to_json(sweep)}};
    }

    // e^{-|x|^alpha}: the two conditions at the ends of the tau range and the
    // empirical constant of the tight inequality with its enrichment.
    {
        Json cases = Json::array();
        const TestFamily family = TestFamily::radial({0.1, 0.25, 0.5}, 0.75);
        for (double alpha : {1.5, 2.0}) {
            auto mu = std::make_shared<const Measure1D>(Measure1D::build(Potential::exp_power(alpha)));
            const double tau_lo = 2.0 * (1.0 - 1.0 / alpha);
            std::vector<double> taus{tau_lo};
            if (tau_lo < 1.0) taus.push_back(1.0);
            for (double tau : taus) {
                const ExpPowerReports cond = check_exp_power(alpha, tau, 1.0, 0.25, 2.0, mu);
                const TestReport a = verify_tight_modified_inequality(*mu, alpha, tau, 1.0, family);
                const TestReport b = verify_tight_modified_inequality(*mu, alpha, tau, 1.0, family.enriched());
                cases.push_back(Json{{"alpha", alpha},
                                     {"tau", tau},
                                     {"modified_condition", to_json(cond.modified)},
                                     {"quadratic_condition", to_json(cond.quadratic)},
                                     {"C_hat", a.C_hat},
                                     {"C_hat_enriched", b.C_hat},
                                     {"family", family.describe()}});
            }
        }
        out["exp_power_endpoints"] = std::move(cases);
    }

    // Entropy of |f|^beta against the beta-energy plus a variance term.
    {
        const Measure1D mu = Measure1D::build(Potential::exp_power(1.5));
        Json fams = Json::array();
        for (const TestFamily& family : {TestFamily::radial({0.1, 0.2, 0.4}, 0.7), TestFamily::random_smooth(10, seed)}) {
            const BetaReport a = verify_beta_entropy_inequality(mu, 1.5, family);
            const BetaReport b = verify_beta_entropy_inequality(mu, 1.5, family.enriched());
            fams.push_back(Json{{"family", family.describe()}, {"C_hat", a.C_hat}, {"C_hat_enriched", b.C_hat},
                                {"report", to_json(a)}});
        }
        out["beta_entropy"] = Json{{"measure", mu.name()}, {"alpha", 1.5}, {"families", std::move(fams)}};
    }

    // Gaussian log-Sobolev extremals on a bounded grid.
    {
        MeasureOptions o;
        o.lo = -12.0;
        o.hi = 12.0;
        o.grid_points = 4001;
        const Measure1D mu = Measure1D::build(Potential::gauss(), o);
        const TestReport r = verify_defective_inequality(mu, EntropyFunction::log(), CostFunction::quadratic(), 2.0,
                                                         TestFamily::exponential({0.25, 0.5, 1.0}));
        Json sat = Json::array();
        for (const auto& row : r.rows) sat.push_back(row.entropy_F / (2.0 * row.grad_energy));
        out["gaussian_log_sobolev"] = Json{{"saturation", std::move(sat)}, {"report", to_json(r)}};
    }
    return out;
}

} // namespace isocert
