#include <doctest.h>

#include "isocert/checker.hpp"
#include "isocert/errors.hpp"

#include <cmath>
#include <memory>

using namespace isocert;

namespace {

std::shared_ptr<const Measure1D> shared(Potential p) {
    return std::make_shared<const Measure1D>(Measure1D::build(std::move(p)));
}

// With I(t) = k t sqrt(log(1/t)), F = log and c = x^2 the integrand is
// exp(delta log(1/t) / k^2) = t^{-a}, a = delta / k^2.
double power_integral(double a, double t_lo, double t_hi) {
    return (std::pow(t_hi, 1.0 - a) - std::pow(t_lo, 1.0 - a)) / (1.0 - a);
}

ConditionSpec model_spec(double k, double delta) {
    ConditionSpec s;
    s.profile = ProfileChoice::lower_bound_model;
    s.model_k = k;
    s.model_alpha = 2.0;
    s.delta = delta;
    s.K = 2.0;
    return s;
}

} // namespace

TEST_CASE("model profile integral matches the closed form") {
    for (double delta : {0.25, 0.5}) {
        const ConditionReport r = check_condition(model_spec(1.0, delta));
        const double exact = power_integral(delta, 1e-12, 0.5);
        CHECK(r.integral_estimate == doctest::Approx(exact).epsilon(1e-6));
        CHECK(r.verdict == Verdict::finite);
    }
}

TEST_CASE("model profile with a too small constant diverges") {
    // a = 0.5 / 0.25 = 2: t^{-2} is not integrable at 0.
    const ConditionReport r = check_condition(model_spec(0.5, 0.5));
    CHECK(r.verdict == Verdict::divergent_likely);
    CHECK(r.integral_estimate == doctest::Approx(power_integral(2.0, 1e-12, 0.5)).epsilon(1e-6));
}

TEST_CASE("verdict fixtures") {
    const auto g = shared(Potential::gauss());
    const auto e = shared(Potential::exp());
    ConditionSpec s;
    s.measure = g;
    s.delta = 0.5;
    s.K = 2.0;
    CHECK(check_condition(s).verdict == Verdict::finite);

    s.measure = e;
    for (double d : {1.0, 0.25, 0.0625}) {
        s.delta = d;
        CHECK(check_condition(s).verdict == Verdict::divergent_likely);
    }

    s.measure = shared(Potential::loglog());
    s.F = EntropyFunction::make(EntropyBase::iterated_log_square());
    s.K = 3.0;
    s.delta = 0.1;
    const ConditionReport r = check_condition(s);
    CHECK(r.verdict == Verdict::finite);
    CHECK(r.tail.p < 1.0);
}

TEST_CASE("decade sums cover the interval") {
    const auto g = shared(Potential::gauss());
    ConditionSpec s;
    s.measure = g;
    const ConditionReport r = check_condition(s);
    REQUIRE(!r.decades.empty());
    CHECK(r.decades.front().t_hi == doctest::Approx(0.5));
    CHECK(r.decades.back().t_lo == doctest::Approx(1e-12));
    double total = 0.0;
    for (const auto& d : r.decades) total += d.partial_sum;
    CHECK(total == doctest::Approx(r.integral_estimate).epsilon(1e-12));
}

TEST_CASE("exp_power conditions") {
    const ExpPowerReports r = check_exp_power(1.5, 1.0, 1.0, 0.25, 2.0);
    CHECK(r.modified.verdict == Verdict::finite);
    CHECK(r.quadratic.verdict == Verdict::finite);
    CHECK_THROWS_AS(check_exp_power(1.5, 0.5, 1.0, 0.25, 2.0), ArgumentError);
    CHECK_THROWS_AS(check_exp_power(1.0, 1.0, 1.0, 0.25, 2.0), ArgumentError);
}

TEST_CASE("delta sweep reports the largest finite delta") {
    const auto e = shared(Potential::exp());
    ConditionSpec s;
    s.measure = e;
    const DeltaSweep sw = delta_sweep(s, {1.0, 0.5});
    CHECK(sw.reports.size() == 2);
    CHECK(sw.largest_finite_delta == 0.0);

    const DeltaSweep m = delta_sweep(model_spec(1.0, 0.5), {2.0, 0.5, 0.25});
    CHECK(m.largest_finite_delta == 0.5);
}

TEST_CASE("argument validation") {
    ConditionSpec s = model_spec(1.0, 0.5);
    s.delta = 0.0;
    CHECK_THROWS_AS(check_condition(s), ArgumentError);
    s = model_spec(1.0, 0.5);
    s.K = 1.0;
    CHECK_THROWS_AS(check_condition(s), ArgumentError);
    s = model_spec(1.0, 0.5);
    s.t_min = 0.9;
    CHECK_THROWS_AS(check_condition(s), ArgumentError);
    ConditionSpec missing;
    CHECK_THROWS_AS(check_condition(missing), ArgumentError);
}

TEST_CASE("growth condition for the gaussian tail") {
    const Measure1D& g = Measure1D::build(Potential::gauss());
    // e^{eps x^2} with eps < 1/2 has a finite moment; eps = 1/10 decays well
    // inside the grid.
    const auto res = verify_growth_condition(g, [](double r) { return 0.1 * r * r; }, EntropyBase::log(), 2.0);
    CHECK(res.bounded_away);
    CHECK(res.C > 0.0);
    CHECK_THROWS_AS(verify_growth_condition(g, [](double r) { return r * r; }, EntropyBase::log(), 2.0),
                    ConstructionError);
}
