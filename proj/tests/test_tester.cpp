#include <doctest.h>

#include "isocert/errors.hpp"
#include "isocert/tester.hpp"

#include <cmath>
#include <numbers>

using namespace isocert;

namespace {

const Measure1D& gauss() {
    static const Measure1D mu = Measure1D::build(Potential::gauss());
    return mu;
}

const Measure1D& gauss_box(std::size_t points = 4001) {
    MeasureOptions o;
    o.lo = -12.0;
    o.hi = 12.0;
    o.grid_points = points;
    static const Measure1D a = Measure1D::build(Potential::gauss(), o);
    o.grid_points = 2 * 4001 - 1;
    static const Measure1D b = Measure1D::build(Potential::gauss(), o);
    return points == 4001 ? a : b;
}

const Measure1D& exp_power(double alpha) {
    static const Measure1D m15 = Measure1D::build(Potential::exp_power(1.5));
    static const Measure1D m2 = Measure1D::build(Potential::exp_power(2.0));
    return alpha == 2.0 ? m2 : m15;
}

double normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

SampledFunction exp_member(const Measure1D& mu, double lambda) {
    return TestFamily::exponential({lambda}).member(mu, 0);
}

} // namespace

TEST_CASE("entropy of exponentials under the gaussian") {
    const auto f = exp_member(gauss(), 1.0);
    CHECK(entropy_functional(gauss(), f, EntropyFunction::log()) == doctest::Approx(0.82436063535006407).epsilon(1e-7));
    SampledFunction twice = f;
    for (auto& v : twice.values) v *= 2.0;
    CHECK(entropy_functional(gauss(), twice, EntropyFunction::log()) ==
          doctest::Approx(4.0 * entropy_functional(gauss(), f, EntropyFunction::log())).epsilon(1e-12));
}

TEST_CASE("constants carry no entropy or energy") {
    const auto c = TestFamily::constant({3.0}).member(gauss(), 0);
    const auto F = EntropyFunction::make(EntropyBase::iterated_log_square());
    CHECK(std::abs(entropy_functional(gauss(), c, F)) < 1e-12);
    CHECK(std::abs(entropy_functional(gauss(), c, EntropyFunction::log())) < 1e-12);
    CHECK(modified_energy(gauss(), c, CostFunction::quadratic()) == 0.0);
    CHECK(gradient_energy(gauss(), c) == 0.0);
    CHECK(variance(gauss(), c) < 1e-24);
}

TEST_CASE("modified energy oracles") {
    const auto f = exp_member(gauss(), 0.5);  // e^{x/4}
    const CostFunction half_square = CostFunction::closed_form(1.0, 2.0);
    CHECK(modified_energy(gauss(), f, half_square) == doctest::Approx(std::exp(1.0 / 8.0) / 32.0).epsilon(1e-9));
    const auto g = TestFamily::bump({0.7}).member(gauss(), 0);
    CHECK(modified_energy(gauss(), g, half_square) == doctest::Approx(0.5 * gradient_energy(gauss(), g)).epsilon(1e-12));

    SampledFunction zero = f;
    zero.values[100] = 0.0;
    CHECK_THROWS_AS(modified_energy(gauss(), zero, half_square), DomainError);
}

TEST_CASE("restricted energy matches the gaussian tail integral") {
    // f = e^{lambda x / 2}: {f^2 >= K mu f^2} = {x >= x*}, and the energy with
    // c* = x^2/2 is (lambda^2 / 8) e^{lambda^2/2} P(Z >= x* - lambda).
    const CostFunction half_square = CostFunction::closed_form(1.0, 2.0);
    for (double lambda : {0.5, 1.0}) {
        for (double K : {2.0, 4.0}) {
            const auto f = exp_member(gauss(), lambda);
            const double xs = (std::log(K) + 0.5 * lambda * lambda) / lambda;
            const double exact = lambda * lambda / 8.0 * std::exp(0.5 * lambda * lambda) * normal_sf(xs - lambda);
            CHECK(restricted_modified_energy(gauss(), f, half_square, K) == doctest::Approx(exact).epsilon(1e-6));
        }
    }
}

TEST_CASE("variance and median") {
    const auto f = exp_member(gauss(), 1.0);
    CHECK(variance(gauss(), f) == doctest::Approx(std::exp(0.5) - std::exp(0.25)).epsilon(1e-9));
    CHECK(median_value(gauss(), f) == doctest::Approx(1.0).epsilon(1e-3));
    SampledFunction x;
    x.values = gauss().grid();
    x.derivative.assign(x.values.size(), 1.0);
    CHECK(median_energy(gauss(), x) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("gaussian log-Sobolev saturation") {
    const TestReport r = verify_defective_inequality(gauss_box(), EntropyFunction::log(), CostFunction::quadratic(), 2.0,
                                                     TestFamily::exponential({0.25, 0.5, 1.0}));
    REQUIRE(r.rows.size() == 3);
    for (const auto& row : r.rows) {
        CHECK(row.entropy_F / (2.0 * row.grad_energy) == doctest::Approx(1.0).epsilon(1e-3));
        CHECK(row.entropy_F >= 0.0);
        CHECK(row.step_one_margin >= 0.0);
    }
    CHECK(r.B_hat >= 0.0);
    CHECK(std::isfinite(r.B_hat_variance));
}

TEST_CASE("functionals are stable under grid refinement") {
    const auto fam = TestFamily::random_smooth(3, 7);
    for (std::size_t i = 0; i < fam.size(); ++i) {
        const auto a = fam.member(gauss_box(4001), i);
        const auto b = fam.member(gauss_box(8001), i);
        const auto F = EntropyFunction::log();
        CHECK(entropy_functional(gauss_box(8001), b, F) ==
              doctest::Approx(entropy_functional(gauss_box(4001), a, F)).epsilon(1e-3));
        CHECK(gradient_energy(gauss_box(8001), b) == doctest::Approx(gradient_energy(gauss_box(4001), a)).epsilon(1e-3));
        CHECK(variance(gauss_box(8001), b) == doctest::Approx(variance(gauss_box(4001), a)).epsilon(1e-3));
    }
}

TEST_CASE("constant family gives zero defect") {
    const TestReport r = verify_defective_inequality(gauss(), EntropyFunction::log(), CostFunction::quadratic(), 2.0,
                                                     TestFamily::constant({1.0, 5.0}));
    CHECK(r.B_hat < 1e-12);
    CHECK(r.C_hat == 0.0);
    for (const auto& row : r.rows) CHECK(row.skipped);
    CHECK_THROWS_AS(verify_defective_inequality(gauss(), EntropyFunction::log(), CostFunction::quadratic(), 2.0,
                                                TestFamily::exponential({})),
                    ArgumentError);
}

TEST_CASE("variance form stays finite under shifts") {
    const auto fam = TestFamily::expression(Expr::parse("exp(x/2)"), "exp(x/2)", {0.0, 1.0, 10.0}, 0.0);
    const TestReport r =
        verify_defective_inequality(gauss(), EntropyFunction::log(), CostFunction::quadratic(), 2.0, fam);
    for (const auto& row : r.rows) CHECK(std::isfinite(row.b_hat_variance));
}

TEST_CASE("step-one constant bound") {
    for (double K : {2.0, 4.0}) {
        const TestReport r = verify_defective_inequality(gauss(), EntropyFunction::log(), CostFunction::quadratic(), K,
                                                         TestFamily::exponential({0.25, 0.5, 1.0, 2.0}));
        CHECK(r.min_step_one_margin >= 0.0);
    }
    CHECK(step_one_constant(4.0, EntropyFunction::log()) == doctest::Approx(111.0));
}

TEST_CASE("tight inequality on e^{-x^2} reduces to the log-Sobolev constant") {
    const TestReport r = verify_tight_modified_inequality(exp_power(2.0), 2.0, 1.0, 1.0,
                                                          TestFamily::exponential({0.25, 0.5, 1.0}));
    CHECK(r.C_hat == doctest::Approx(2.0).epsilon(1e-3));
    const TestReport c =
        verify_tight_modified_inequality(exp_power(2.0), 2.0, 1.0, 1.0, TestFamily::constant({2.0}));
    CHECK(c.rows[0].skipped);
    CHECK_THROWS_AS(verify_tight_modified_inequality(exp_power(1.5), 1.5, 0.5, 1.0, TestFamily::constant({1.0})),
                    ArgumentError);
}

TEST_CASE("tight inequality for alpha = 1.5 is finite and stable") {
    const auto fam = TestFamily::radial({0.25, 0.5, 1.0}, 0.75);
    const TestReport a = verify_tight_modified_inequality(exp_power(1.5), 1.5, 1.0, 1.0, fam);
    const TestReport b = verify_tight_modified_inequality(exp_power(1.5), 1.5, 1.0, 1.0, fam.enriched());
    CHECK(std::isfinite(a.C_hat));
    CHECK(a.C_hat > 0.0);
    CHECK(b.C_hat == doctest::Approx(a.C_hat).epsilon(0.1));
}

TEST_CASE("beta entropy inequality") {
    const auto fam = TestFamily::radial({0.1, 0.2, 0.4}, 0.7);
    const BetaReport a = verify_beta_entropy_inequality(exp_power(1.5), 1.5, fam);
    const BetaReport b = verify_beta_entropy_inequality(exp_power(1.5), 1.5, fam.enriched());
    CHECK(a.beta == doctest::Approx(3.0));
    CHECK(a.epsilon > 0.0);
    CHECK(std::isfinite(a.C_hat));
    CHECK(b.C_hat == doctest::Approx(a.C_hat).epsilon(0.1));

    const BetaReport c = verify_beta_entropy_inequality(exp_power(1.5), 1.5, TestFamily::constant({2.0}));
    CHECK(c.rows[0].entropy == 0.0);
    CHECK(c.rows[0].gradient == 0.0);
    CHECK(c.rows[0].variance == 0.0);

    const auto one = TestFamily::expression(Expr::parse("exp(0.3*x)"), "f", {0.0}, 0.0);
    const auto two = TestFamily::expression(Expr::parse("2*exp(0.3*x)"), "2f", {0.0}, 0.0);
    CHECK(verify_beta_entropy_inequality(exp_power(1.5), 1.5, two).C_hat ==
          doctest::Approx(verify_beta_entropy_inequality(exp_power(1.5), 1.5, one).C_hat).epsilon(1e-9));

    const Measure1D bimodal = Measure1D::build(Potential{[](double x) { return (x * x - 4) * (x * x - 4) / 4; }, "bimodal"});
    CHECK_THROWS_AS(verify_beta_entropy_inequality(bimodal, 1.5, fam), ArgumentError);
}

TEST_CASE("restricted entropy bounds") {
    const RestrictedReport r = check_restricted_entropy_bounds(gauss(), EntropyFunction::log(), 2.0,
                                                               TestFamily::exponential({0.25, 0.5, 1.0}));
    CHECK(r.min_margin_first >= 0.0);
    for (const auto& row : r.rows) CHECK(row.full <= r.B_min * row.variance + 2.0 * row.excess + 1e-12);

    // A small bump never reaches K mu(f^2): the restricted part is empty.
    const RestrictedReport s =
        check_restricted_entropy_bounds(gauss(), EntropyFunction::log(), 2.0, TestFamily::bump({0.1}));
    CHECK(s.rows[0].restricted == 0.0);
    CHECK(s.rows[0].complement == s.rows[0].full);

    const RestrictedReport c =
        check_restricted_entropy_bounds(gauss(), EntropyFunction::log(), 2.0, TestFamily::constant({1.0}));
    CHECK(std::abs(c.rows[0].full) < 1e-12);
}

TEST_CASE("mixed entropy bound holds on random pairs") {
    const PhiConjugate Phi(EntropyFunction::log());
    const auto fam = TestFamily::random_smooth(6, 3);
    for (std::size_t i = 0; i + 1 < fam.size(); ++i) {
        const MixedBound b = check_mixed_entropy_bound(gauss(), EntropyFunction::log(), Phi, fam.member(gauss(), i),
                                                       fam.member(gauss(), i + 1));
        CHECK(b.margin >= 0.0);
    }
    // g = f: the left side is the entropy itself.
    const auto f = fam.member(gauss(), 0);
    const MixedBound same = check_mixed_entropy_bound(gauss(), EntropyFunction::log(), Phi, f, f);
    CHECK(same.lhs == doctest::Approx(entropy_functional(gauss(), f, EntropyFunction::log())));
}

TEST_CASE("random family is reproducible") {
    const auto a = TestFamily::random_smooth(4, 11);
    const auto b = TestFamily::random_smooth(4, 11);
    CHECK(a.member(gauss(), 2).values == b.member(gauss(), 2).values);
    CHECK(a.member(gauss(), 2).values != a.member(gauss(), 3).values);
    CHECK(a.enriched().size() == 8);
    CHECK(TestFamily::exponential({1, 2, 3}).enriched().size() == 5);
    // Closed-form derivative agrees with differences of the values.
    const auto f = a.member(gauss(), 1);
    const auto d = finite_difference(gauss().grid(), f.values);
    for (std::size_t i = 1000; i < 15000; i += 1000) CHECK(d[i] == doctest::Approx(f.derivative[i]).epsilon(1e-4));
}
