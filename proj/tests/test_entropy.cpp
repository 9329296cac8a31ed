#include <doctest.h>

#include "isocert/entropy.hpp"
#include "isocert/errors.hpp"

#include <cmath>
#include <numbers>

using namespace isocert;

TEST_CASE("F_tau branches") {
    auto F1 = EntropyFunction::make(EntropyBase::log(), 1.0);
    CHECK(F1(7.5) == doctest::Approx(std::log(7.5)));
    auto F = EntropyFunction::make(EntropyBase::log(), 0.5);
    CHECK(F.x0() == doctest::Approx(std::numbers::e).epsilon(1e-12));
    CHECK(F(std::numbers::e) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(F(std::exp(4.0)) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(F(0.5) == doctest::Approx(std::log(0.5)));
    CHECK_THROWS_AS(F(0.0), DomainError);
    CHECK_THROWS_AS(EntropyFunction::make(EntropyBase::log(), 1.5), ArgumentError);
    CHECK_THROWS_AS(EntropyFunction::make(EntropyBase::expression(Expr::parse("0.5"), "0.5"), 0.5),
                    ConstructionError);
}

TEST_CASE("elasticity matches finite differences") {
    auto F = EntropyFunction::make(EntropyBase::iterated_log_square(), 0.7).with_psi(0.9, 3.0);
    for (double u : {-3.0, 0.5, 2.0, 5.0, 30.0}) {
        const double h = 1e-6;
        const double fd = (F.value_at_log(u + h) - F.value_at_log(u - h)) / (2 * h);
        CHECK(F.elasticity_at_log(u) == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("psi perturbation") {
    CHECK(psi_tau_beta(0.5, 4.0, 7.0) == doctest::Approx(7.0).epsilon(1e-14));
    CHECK(psi_tau_beta(0.8, 4.0, 1.0) == 1.0);
    CHECK(psi_tau_beta(1.0, 4.0, 5.0) == doctest::Approx(3.4721359549995796).epsilon(1e-14));
    CHECK_THROWS_AS(psi_tau_beta(0.4, 4.0, 2.0), ArgumentError);
    for (double x = 1.0; x < 1e6; x *= 1.7) {
        const double p = psi_tau_beta(1.0, 3.0, x);
        CHECK(p <= x * (1 + 1e-15));
        const double e = x * psi_tau_beta_derivative(1.0, 3.0, x) / p;
        CHECK(e >= 0.0);
        CHECK(e <= 1.0 + 1e-12);
    }
}

TEST_CASE("psi of F_tau is F_{2/beta}") {
    const double beta = 3.0;
    for (double tau : {2.0 / 3.0, 0.8, 1.0}) {
        auto lhs = EntropyFunction::make(EntropyBase::log(), tau).with_psi(tau, beta);
        auto rhs = EntropyFunction::make(EntropyBase::log(), 2.0 / beta);
        for (double x : {0.3, 1.0, 2.0, 10.0, 1e4, 1e30}) CHECK(lhs(x) == doctest::Approx(rhs(x)).epsilon(1e-10));
    }
}

TEST_CASE("iterated log square glues at e^e") {
    auto b = EntropyBase::iterated_log_square();
    const double u = std::numbers::e;
    CHECK(b.value_at_log(u + 1e-9) == doctest::Approx(b.value_at_log(u - 1e-9)).epsilon(1e-8));
    CHECK(b.value_at_log(std::exp(2.0)) == doctest::Approx(0.5 * std::numbers::e * 5.0));
}

TEST_CASE("Phi for the log entropy is e^x") {
    PhiConjugate Phi(EntropyFunction::log());
    CHECK(Phi(0.0) == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(Phi(1.0) == doctest::Approx(std::numbers::e).epsilon(1e-7));
    for (double x = 0; x <= 5.0; x += 0.01) CHECK(Phi(x) == doctest::Approx(std::exp(x)).epsilon(1e-5));
    // past the tabulated range the stationarity solve takes over
    auto far = Phi.log_eval(500.0);
    CHECK(far.beyond_grid);
    CHECK_FALSE(far.truncated);
    CHECK(far.log_value == doctest::Approx(500.0).epsilon(1e-10));
    auto near = Phi.log_eval(27.0);
    CHECK(near.log_value == doctest::Approx(27.0).epsilon(1e-8));
}

TEST_CASE("Phi bounds") {
    auto F = EntropyFunction::make(EntropyBase::log(), 0.5);
    PhiConjugate Phi(F);
    CHECK(Phi(0.0) >= 1.0 - 1e-9);
    for (double x : {5.0, 10.0, 20.0, 40.0}) CHECK(Phi(x) <= F.inverse(1.0 + x) * (1 + 1e-9));
    auto t = Phi.table(std::vector<double>{0, 1, 2, 3});
    for (std::size_t i = 1; i < t.values.size(); ++i) CHECK(t.values[i] > t.values[i - 1]);
}

TEST_CASE("assumption checks") {
    auto log_report = check_assumptions(EntropyFunction::log());
    CHECK(log_report.a1);
    CHECK(log_report.a2);
    CHECK(log_report.a3);
    CHECK(log_report.a4);
    CHECK(log_report.delta == doctest::Approx(9.0));
    CHECK(log_report.y0 == doctest::Approx(1.0));

    auto lin = check_assumptions(EntropyFunction::make(EntropyBase::expression(Expr::parse("x - 1"), "x - 1")));
    CHECK(lin.a1);
    CHECK_FALSE(lin.a4);

    auto half = check_assumptions(EntropyFunction::make(EntropyBase::log(), 0.5));
    CHECK(half.a1);
    CHECK(half.a2);
    CHECK(half.a3);
    CHECK(half.a4);
}

TEST_CASE("Phi(delta F(y)) <= y^(2 delta)") {
    auto F = EntropyFunction::log();
    PhiConjugate Phi(F);
    for (double d : {0.25, 0.5}) {
        auto r = check_phi_power_bound(F, Phi, d);
        CHECK(r.found);
        CHECK(r.T == doctest::Approx(1.0));
        CHECK(r.min_margin >= -1e-9);
    }
    auto Fh = EntropyFunction::make(EntropyBase::log(), 0.5);
    PhiConjugate Phih(Fh);
    auto r = check_phi_power_bound(Fh, Phih, 0.1);
    CHECK(r.found);
    CHECK(r.min_margin >= -1e-9);
}
