// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
// Usage: acceptance <path to the isocert executable>

#include "isocert/checker.hpp"
#include "isocert/convex.hpp"
#include "isocert/entropy.hpp"
#include "isocert/measure.hpp"
#include "isocert/tester.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iterator>
#include <memory>
#include <string>

using namespace isocert;

namespace {

int failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
    std::printf("%s %2d %-28s %s\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
    if (!pass) ++failures;
}

std::string fmt(const char* f, double a = 0, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Runs `body` and reports an exception as a failure of criterion `id`.
void criterion(int id, const char* name, const std::function<void()>& body) {
    try {
        body();
    } catch (const std::exception& e) {
        report(id, name, false, std::string("threw: ") + e.what());
    }
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

} // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";

    criterion(1, "conjugate duality", [] {
        const auto t0 = std::chrono::steady_clock::now();
        const auto xs = linspace(0.0, 10.0, 2000);
        double worst = 0.0;
        for (double A : {0.5, 1.0, 2.0})
            for (double alpha : {1.2, 1.5, 2.0}) {
                const auto t = legendre_transform(CostFunction::closed_form(A, alpha), xs);
                const double beta = conjugate_exponent(alpha);
                for (std::size_t i = 1; i < xs.size(); ++i) {
                    const double exact = cost_c_A_alpha(A, beta, xs[i]);
                    worst = std::max(worst, std::abs(t.values[i] - exact) / exact);
                }
                worst = std::max(worst, std::abs(t.values[0]));
            }
        const double dt = seconds_since(t0);
        report(1, "conjugate duality", worst <= 1e-4 && dt < 1.0, fmt("max rel err %.3g, %.3f s", worst, dt));
    });

    criterion(2, "involution", [] {
        double worst = 0.0;
        for (double A : {0.5, 1.0, 2.0})
            for (double alpha : {1.2, 1.5, 2.0}) {
                const CostFunction c = CostFunction::closed_form(A, alpha);
                const auto t1 = legendre_transform(c, linspace(0.0, 10.0, 2000));
                const auto ys = linspace(0.0, 0.9 * t1.argmax.back(), 500);
                const auto t2 = conjugate_sampled(t1.grid, t1.values, ys);
                double cmax = 0.0, err = 0.0;
                for (std::size_t i = 1; i + 1 < ys.size(); ++i) {
                    cmax = std::max(cmax, c(ys[i]));
                    err = std::max(err, std::abs(t2.values[i] - c(ys[i])));
                }
                worst = std::max(worst, err / (1.0 + cmax));
            }
        report(2, "involution", worst <= 1e-6, fmt("max |c** - c| / (1 + |c|) %.3g", worst));
    });

    criterion(3, "Phi oracle", [] {
        const PhiConjugate Phi(EntropyFunction::log());
        double worst = 0.0;
        for (double x : linspace(0.0, 5.0, 501)) worst = std::max(worst, std::abs(Phi(x) / std::exp(x) - 1.0));
        report(3, "Phi oracle", worst <= 1e-5, fmt("max rel err %.3g", worst));
    });

    criterion(4, "Phi power bound", [] {
        bool pass = true;
        std::string detail;
        for (double tau : {1.0, 0.5}) {
            const EntropyFunction F = EntropyFunction::make(EntropyBase::log(), tau);
            const PhiConjugate Phi(F);
            for (double delta : {0.1, 0.25, 0.5}) {
                const PhiPowerBound b = check_phi_power_bound(F, Phi, delta);
                pass = pass && b.found && b.min_margin >= 0.0;
                detail += fmt("T(%g,%g)=%g ", tau, delta, b.T);
            }
        }
        report(4, "Phi power bound", pass, detail);
    });

    criterion(5, "gaussian LSI saturation", [] {
        bool pass = true;
        std::string detail;
        for (double lambda : {0.25, 0.5, 1.0}) {
            const auto t0 = std::chrono::steady_clock::now();
            MeasureOptions o;
            o.lo = -12.0;
            o.hi = 12.0;
            o.grid_points = 4001;
            const Measure1D mu = Measure1D::build(Potential::gauss(), o);
            const TestReport r = verify_defective_inequality(mu, EntropyFunction::log(), CostFunction::quadratic(), 2.0,
                                                             TestFamily::exponential({lambda}));
            const double ratio = r.rows[0].entropy_F / (2.0 * r.rows[0].grad_energy);
            const double dt = seconds_since(t0);
            pass = pass && std::abs(ratio - 1.0) <= 1e-3 && dt < 1.0;
            detail += fmt("%g: %.9f (%.3f s) ", lambda, ratio, dt);
        }
        report(5, "gaussian LSI saturation", pass, detail);
    });

    criterion(6, "verdict table", [] {
        bool pass = true;
        std::string detail;
        auto timed = [&](const char* name, Verdict want, const std::function<ConditionReport()>& run) {
            const auto t0 = std::chrono::steady_clock::now();
            const ConditionReport r = run();
            const double dt = seconds_since(t0);
            const bool ok = r.verdict == want && dt < 5.0;
            pass = pass && ok;
            detail += std::string(name) + "=" + to_string(r.verdict) + fmt(" (%.2f s) ", dt);
            return r;
        };
        timed("gauss", Verdict::finite, [] {
            ConditionSpec s;
            s.measure = std::make_shared<const Measure1D>(Measure1D::build(Potential::gauss()));
            s.delta = 0.5;
            s.K = 2.0;
            return check_condition(s);
        });
        for (double delta : {1.0, 0.5, 0.25, 0.125, 0.0625}) {
            timed(fmt("exp[%g]", delta).c_str(), Verdict::divergent_likely, [delta] {
                ConditionSpec s;
                s.measure = std::make_shared<const Measure1D>(Measure1D::build(Potential::exp()));
                s.delta = delta;
                return check_condition(s);
            });
        }
        const ConditionReport ll = timed("loglog", Verdict::finite, [] {
            ConditionSpec s;
            s.measure = std::make_shared<const Measure1D>(Measure1D::build(Potential::loglog()));
            s.F = EntropyFunction::make(EntropyBase::iterated_log_square());
            s.delta = 0.1;
            s.K = 3.0;
            return check_condition(s);
        });
        pass = pass && ll.tail.p < 1.0;
        detail += fmt("loglog p=%.3f ", ll.tail.p);
        // The energy cost c_{1,3} enters the condition through its conjugate c_{1,3/2}.
        timed("exp_power1.5", Verdict::finite,
              [] { return check_exp_power(1.5, 1.0, 1.0, 0.25, 2.0).modified; });
        report(6, "verdict table", pass, detail);
    });

    criterion(7, "log profile growth", [] {
        bool pass = true;
        std::string detail;
        MeasureOptions deep;
        deep.log_density_drop = 600.0;
        for (double alpha : {1.0, 1.5, 2.0}) {
            const Measure1D mu = Measure1D::build(Potential::exp_power(alpha), deep);
            const auto w = log_profile_growth(mu, std::vector<double>{2.0, 4.0, 8.0});
            for (std::size_t i = 1; i < w.size(); ++i) pass = pass && w[i].sup_ratio <= w[i - 1].sup_ratio * (1 + 1e-9);
            detail += fmt("a=%g: %.4f %.4f ", alpha, w[0].sup_ratio, w[2].sup_ratio);
        }
        const Measure1D g = Measure1D::build(Potential::gauss());
        const auto rs = linspace(3.0, 5.0, 201);
        const EntropyProfile p = entropy_profile(g, EntropyFunction::log(), rs);
        double lo = INFINITY, hi = -INFINITY;
        for (std::size_t i = 0; i < rs.size(); ++i) {
            lo = std::min(lo, p.value[i] / rs[i]);
            hi = std::max(hi, p.value[i] / rs[i]);
        }
        pass = pass && lo >= 0.35 && hi <= 0.7;
        detail += fmt("gauss [%.4f, %.4f]", lo, hi);
        report(7, "log profile growth", pass, detail);
    });

    criterion(8, "convex-measure bound", [] {
        const auto ts = linspace(0.01, 0.5, 50);
        const double g = bobkov_bound_check(Measure1D::build(Potential::gauss()), ts).min_margin;
        const double e = bobkov_bound_check(Measure1D::build(Potential::exp()), ts).min_margin;
        report(8, "convex-measure bound", g >= -1e-8 && e >= -1e-8, fmt("min margin gauss %.3g exp %.3g", g, e));
    });

    criterion(9, "rearrangement", [] {
        const Measure1D mu = Measure1D::build(Potential::gauss());
        const TestFamily fam = TestFamily::random_smooth(20, 0);
        const double cell = rearrangement_resolution(mu);
        double worst = 0.0;
        for (std::size_t i = 0; i < fam.size(); ++i) {
            const SampledFunction f = fam.member(mu, i);
            const SampledFunction r = rearrange(mu, f);
            worst = std::max(worst, kolmogorov_distance(mu, f.values, r.values));
        }
        report(9, "rearrangement", worst <= cell, fmt("max distance %.3g, cell %.3g", worst, cell));
    });

    criterion(10, "step-one constant", [] {
        const Measure1D mu = Measure1D::build(Potential::gauss());
        double worst = INFINITY;
        for (double K : {2.0, 4.0}) {
            const TestReport r = verify_defective_inequality(mu, EntropyFunction::log(), CostFunction::quadratic(), K,
                                                             TestFamily::exponential({0.25, 0.5, 1.0, 1.5, 2.0}));
            worst = std::min(worst, r.min_step_one_margin);
        }
        report(10, "step-one constant", worst >= 0.0, fmt("min margin %.4g", worst));
    });

    criterion(11, "beta entropy constant", [] {
        const Measure1D mu = Measure1D::build(Potential::exp_power(1.5));
        bool pass = true;
        std::string detail;
        for (const TestFamily& fam : {TestFamily::random_smooth(10, 0), TestFamily::radial({0.1, 0.2, 0.4}, 0.7)}) {
            const BetaReport a = verify_beta_entropy_inequality(mu, 1.5, fam);
            const BetaReport b = verify_beta_entropy_inequality(mu, 1.5, fam.enriched());
            const double change = std::abs(b.C_hat / a.C_hat - 1.0);
            pass = pass && std::isfinite(a.C_hat) && std::isfinite(b.C_hat) && a.C_hat > 0.0 && change <= 0.1;
            detail += fam.describe() + fmt(": %.4f -> %.4f ", a.C_hat, b.C_hat);
        }
        report(11, "beta entropy constant", pass, detail);
    });

    criterion(12, "determinism", [&] {
        if (cli.empty()) {
            report(12, "determinism", false, "no executable given");
            return;
        }
        const std::string a = "acceptance_examples_a.json", b = "acceptance_examples_b.json";
        const int ra = std::system((cli + " paper-examples --seed 0 --out " + a).c_str());
        const int rb = std::system(("ISOCERT_THREADS=1 " + cli + " paper-examples --seed 0 --out " + b).c_str());
        const std::string ja = slurp(a), jb = slurp(b);
        const bool pass = ra == 0 && rb == 0 && !ja.empty() && ja == jb;
        report(12, "determinism", pass, fmt("%g bytes, identical=%g", static_cast<double>(ja.size()), ja == jb));
        std::remove(a.c_str());
        std::remove(b.c_str());
    });

    std::printf("%s\n", failures == 0 ? "ALL PASS" : "SOME FAILED");
    return failures == 0 ? 0 : 1;
}
