#include <doctest.h>

#include "isocert/errors.hpp"
#include "isocert/expr.hpp"
#include "isocert/measure.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace isocert;

namespace {

const Measure1D& gauss() {
    static const Measure1D mu = Measure1D::build(Potential::gauss());
    return mu;
}

const Measure1D& expm() {
    static const Measure1D mu = Measure1D::build(Potential::exp());
    return mu;
}

// Standard normal upper quantile by bisection on erfc.
double normal_upper_quantile(double t) {
    double a = 0, b = 40;
    for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (a + b);
        if (0.5 * std::erfc(m / std::numbers::sqrt2) > t)
            a = m;
        else
            b = m;
    }
    return 0.5 * (a + b);
}

} // namespace

TEST_CASE("normalization and medians") {
    auto e = Expr::parse("x^2");
    auto mu = Measure1D::build({[e](double x) { return e(x); }, "x^2", false});
    CHECK(mu.log_Z() == doctest::Approx(0.57236494292470008).epsilon(1e-12));
    CHECK(std::abs(mu.median()) < 1e-12);
    CHECK(mu.log_concave());
    CHECK(gauss().log_Z() == doctest::Approx(0.91893853320467274).epsilon(1e-12));
    CHECK(expm().cdf(0.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(expm().quantile(0.25) == doctest::Approx(-0.69314718055994531).epsilon(1e-12));
    CHECK(expm().upper_quantile(1e-12) == doctest::Approx(-std::log(2e-12)).epsilon(1e-12));
    CHECK(gauss().outside_mass() <= 1e-9);
}

TEST_CASE("non-integrable potentials are refused") {
    auto e = Expr::parse("log(1 + abs(x))");
    CHECK_THROWS_AS(Measure1D::build({[e](double x) { return e(x); }, "slow", false}), ConstructionError);
    CHECK_THROWS_AS(Measure1D::build({[](double) { return 0.0; }, "flat", false}), ConstructionError);
}

TEST_CASE("quantile inverts the cdf") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (const Measure1D* mu : {&gauss(), &expm()}) {
        for (int k = 0; k < 1000; ++k) {
            const double p = U(rng);
            const double x = mu->quantile(p);
            CHECK(mu->cdf(x) == doctest::Approx(p).epsilon(1e-10));
            CHECK(std::abs(mu->quantile(mu->cdf(x)) - x) <= mu->cell_width());
            const double y = mu->upper_quantile(p);
            CHECK(mu->sf(y) == doctest::Approx(p).epsilon(1e-10));
        }
        CHECK(mu->cdf(mu->median()) == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("explicit support bounds") {
    MeasureOptions o;
    o.lo = -12;
    o.hi = 12;
    o.grid_points = 4001;
    auto mu = Measure1D::build(Potential::gauss(), o);
    CHECK(mu.lo() == -12.0);
    CHECK(mu.hi() == 12.0);
    CHECK(mu.grid().size() == 4001);
    double s = 0;
    for (double w : mu.node_weights()) s += w;
    CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("loglog tail") {
    auto mu = Measure1D::build(Potential::loglog());
    for (double s : {6.0, 8.0}) {
        const double V1 = std::log1p(s * s) + 2 * s * s / (1 + s * s);
        const double ratio = mu.sf(s) * V1 / mu.density(s);
        CHECK(ratio > 0.95);
        CHECK(ratio < 1.0);
    }
}

TEST_CASE("half-line profile") {
    CHECK(tilde_I(gauss(), 0.5) == doctest::Approx(0.3989422804014327).epsilon(1e-10));
    for (double t : {1e-9, 1e-4, 0.1, 0.5}) CHECK(tilde_I(expm(), t) == doctest::Approx(t).epsilon(1e-9));
    for (double t : logspace(1e-6, 0.5, 50)) {
        const double v = normal_upper_quantile(t);
        const double exact = std::exp(-0.5 * v * v) / std::sqrt(2 * std::numbers::pi);
        CHECK(tilde_I(gauss(), t) == doctest::Approx(exact).epsilon(1e-6));
    }
    auto p = tilde_profile(gauss(), std::vector<double>{0.01, 0.2, 0.5});
    for (std::size_t i = 0; i < p.t.size(); ++i) {
        CHECK(p.u[i] <= gauss().median() + 1e-12);
        CHECK(p.v[i] >= gauss().median() - 1e-12);
        CHECK(p.tilde_I[i] > 0);
    }
    CHECK_THROWS_AS(tilde_profile(gauss(), std::vector<double>{0.7}), ArgumentError);
}

TEST_CASE("entropy profile") {
    auto F = EntropyFunction::log();
    auto e = entropy_profile(expm(), F, std::vector<double>{0.0, 1.0, 5.0, 20.0});
    CHECK(e.value[0] == 0.0);
    CHECK(e.value[1] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(e.value[2] == doctest::Approx(5.0).epsilon(1e-9));
    CHECK(e.value[3] == doctest::Approx(20.0).epsilon(1e-9));
    auto g = entropy_profile(gauss(), F, std::vector<double>{3.0, 4.0, 5.0});
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(g.value[i] / g.r[i] > 0.35);
        CHECK(g.value[i] / g.r[i] < 0.7);
    }
}

TEST_CASE("Cheeger constant") {
    auto e = cheeger_constant(expm());
    CHECK(e.lambda == doctest::Approx(1.0).epsilon(1e-9));
    auto g = cheeger_constant(gauss());
    CHECK(g.lambda == doctest::Approx(1.2533141373155001).epsilon(1e-9));
    CHECK(g.argmax_t == doctest::Approx(0.5));
}

TEST_CASE("line criterion") {
    auto r = bobkov_goetze(gauss(), Side::right);
    auto l = bobkov_goetze(gauss(), Side::left);
    CHECK_FALSE(r.divergent);
    CHECK(std::isfinite(r.value));
    CHECK(r.value == doctest::Approx(l.value).epsilon(1e-6));
    MeasureOptions fine;
    fine.grid_points = 32769;
    auto r2 = bobkov_goetze(Measure1D::build(Potential::gauss(), fine), Side::right);
    CHECK(r2.value == doctest::Approx(r.value).epsilon(0.05));
    CHECK(bobkov_goetze(expm(), Side::right).divergent);
    CHECK(bobkov_goetze(expm(), Side::left).divergent);
}

TEST_CASE("convex-measure bound") {
    const auto ts = linspace(0.01, 0.5, 50);
    CHECK(bobkov_bound_check(gauss(), ts).min_margin >= -1e-8);
    CHECK(bobkov_bound_check(expm(), ts).min_margin >= -1e-8);
    auto half = bobkov_bound_check(gauss(), std::vector<double>{0.5});
    CHECK(half.r[0] > 0.0);
}

TEST_CASE("rearrangement") {
    const auto& mu = gauss();
    const auto& x = mu.grid();
    SampledFunction inc, cst, lin;
    for (double xi : x) {
        inc.values.push_back(1 + xi * xi);
        cst.values.push_back(3.0);
        lin.values.push_back(std::max(1 + xi, 0.0));
    }
    auto ri = rearrange(mu, inc);
    double worst = 0;
    for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(ri.values[i] - inc.values[i]));
    const double cell = 2 * std::abs(x.back()) * mu.cell_width() + mu.cell_width() * mu.cell_width();
    CHECK(worst <= cell);
    auto rc = rearrange(mu, cst);
    for (double v : rc.values) CHECK(v == 3.0);
    auto rl = rearrange(mu, lin);
    CHECK(kolmogorov_distance(mu, lin.values, rl.values) <= rearrangement_resolution(mu));
    for (std::size_t i = 1; i < x.size(); ++i)
        if (std::abs(x[i]) > std::abs(x[i - 1])) CHECK(rl.values[i] >= rl.values[i - 1]);
    SampledFunction neg{std::vector<double>(x.size(), -1.0), {}};
    CHECK_THROWS_AS(rearrange(mu, neg), DomainError);
}

TEST_CASE("log profile growth windows") {
    MeasureOptions deep;
    deep.log_density_drop = 600;
    for (double alpha : {1.0, 1.5, 2.0}) {
        auto mu = Measure1D::build(Potential::exp_power(alpha), deep);
        auto w = log_profile_growth(mu, std::vector<double>{2, 4, 8});
        for (std::size_t i = 1; i < w.size(); ++i) CHECK(w[i].sup_ratio <= w[i - 1].sup_ratio * (1 + 1e-9));
    }
}

TEST_CASE("profile lower-bound constant") {
    const auto ts = logspace(1e-12, 0.5, 200);
    CHECK(fit_profile_lower_bound(gauss(), EntropyBase::log(), 2.0, ts) > 0.5);
    auto mu = Measure1D::build(Potential::exp_power(1.5));
    CHECK(fit_profile_lower_bound(mu, EntropyBase::log(), 1.5, ts) > 0.5);
}
