#include "isocert/isocert.h"

#include "isocert/checker.hpp"
#include "isocert/config.hpp"
#include "isocert/errors.hpp"
#include "isocert/report.hpp"
#include "isocert/tester.hpp"

#include <cmath>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

using namespace isocert;

struct isocert_measure {
    std::shared_ptr<const Measure1D> mu;
};

struct isocert_entropy {
    EntropyFunction F;
    std::string spec;
    mutable std::unique_ptr<PhiConjugate> phi;  // built on first use
    mutable std::once_flag phi_once;

    const PhiConjugate& Phi() const {
        std::call_once(phi_once, [this] { phi = std::make_unique<PhiConjugate>(F); });
        return *phi;
    }
};

struct isocert_cost {
    CostSpec spec;
};

struct isocert_family {
    TestFamily family;
};

struct isocert_report {
    std::string json;
    std::vector<std::string> csv;
    isocert_verdict verdict = ISOCERT_VERDICT_NONE;
    int margins_ok = -1;
};

namespace {

thread_local std::string last_error;

template <class Fn>
isocert_status guarded(Fn&& fn) {
    try {
        fn();
        return ISOCERT_OK;
    } catch (const ParseError& e) {
        last_error = e.what();
        return ISOCERT_ERR_PARSE;
    } catch (const DomainError& e) {
        last_error = e.what();
        return ISOCERT_ERR_DOMAIN;
    } catch (const ArgumentError& e) {
        last_error = e.what();
        return ISOCERT_ERR_ARGUMENT;
    } catch (const ConstructionError& e) {
        last_error = e.what();
        return ISOCERT_ERR_CONSTRUCTION;
    } catch (const std::exception& e) {
        last_error = e.what();
        return ISOCERT_ERR_INTERNAL;
    } catch (...) {
        last_error = "unknown error";
        return ISOCERT_ERR_INTERNAL;
    }
}

void require(const void* p, const char* what) {
    if (!p) throw ArgumentError(std::string("null ") + what);
}

isocert_verdict to_c(Verdict v) {
    switch (v) {
    case Verdict::finite: return ISOCERT_VERDICT_FINITE;
    case Verdict::divergent_likely: return ISOCERT_VERDICT_DIVERGENT_LIKELY;
    case Verdict::inconclusive: return ISOCERT_VERDICT_INCONCLUSIVE;
    }
    return ISOCERT_VERDICT_NONE;
}

bool stable(double a, double b) { return std::isfinite(a) && std::isfinite(b) && a > 0.0 && std::abs(b / a - 1.0) <= 0.1; }

} // namespace

extern "C" {

const char* isocert_version(void) { return "1.0.0"; }

const char* isocert_last_error(void) { return last_error.c_str(); }

// ---- measures ---------------------------------------------------------------

isocert_status isocert_measure_create(const char* spec, const isocert_measure_options* options,
                                      isocert_measure** out) {
    return guarded([&] {
        require(spec, "measure spec");
        require(out, "output handle");
        MeasureOptions o;
        if (options) {
            if (options->has_lo) o.lo = options->lo;
            if (options->has_hi) o.hi = options->hi;
            if (options->grid_points) o.grid_points = options->grid_points;
            if (options->log_density_drop > 0.0) o.log_density_drop = options->log_density_drop;
        }
        auto mu = std::make_shared<const Measure1D>(Measure1D::build(parse_measure_spec(spec), o));
        *out = new isocert_measure{std::move(mu)};
    });
}

void isocert_measure_destroy(isocert_measure* m) { delete m; }

isocert_status isocert_measure_cdf(const isocert_measure* m, double x, double* out) {
    return guarded([&] {
        require(m, "measure");
        require(out, "output");
        *out = m->mu->cdf(x);
    });
}

isocert_status isocert_measure_quantile(const isocert_measure* m, double p, double* out) {
    return guarded([&] {
        require(m, "measure");
        require(out, "output");
        *out = m->mu->quantile(p);
    });
}

isocert_status isocert_measure_density(const isocert_measure* m, double x, double* out) {
    return guarded([&] {
        require(m, "measure");
        require(out, "output");
        *out = m->mu->density(x);
    });
}

isocert_status isocert_measure_tilde_profile(const isocert_measure* m, double t, double* out) {
    return guarded([&] {
        require(m, "measure");
        require(out, "output");
        *out = tilde_I(*m->mu, t);
    });
}

isocert_status isocert_measure_outside_ball(const isocert_measure* m, double r, double* out) {
    return guarded([&] {
        require(m, "measure");
        require(out, "output");
        *out = m->mu->outside_ball(r);
    });
}

// ---- entropies, costs, families -------------------------------------------

isocert_status isocert_entropy_create(const char* spec, isocert_entropy** out) {
    return guarded([&] {
        require(spec, "entropy spec");
        require(out, "output handle");
        auto e = std::make_unique<isocert_entropy>();
        e->F = parse_entropy_spec(spec);
        e->spec = spec;
        *out = e.release();
    });
}

void isocert_entropy_destroy(isocert_entropy* e) { delete e; }

isocert_status isocert_entropy_eval(const isocert_entropy* e, double x, double* out) {
    return guarded([&] {
        require(e, "entropy");
        require(out, "output");
        *out = e->F(x);
    });
}

isocert_status isocert_entropy_phi(const isocert_entropy* e, double x, double* out) {
    return guarded([&] {
        require(e, "entropy");
        require(out, "output");
        *out = e->Phi()(x);
    });
}

isocert_status isocert_cost_create(const char* spec, isocert_cost** out) {
    return guarded([&] {
        require(spec, "cost spec");
        require(out, "output handle");
        *out = new isocert_cost{parse_cost_spec(spec)};
    });
}

void isocert_cost_destroy(isocert_cost* c) { delete c; }

isocert_status isocert_cost_eval(const isocert_cost* c, double x, double* out) {
    return guarded([&] {
        require(c, "cost");
        require(out, "output");
        *out = c->spec.cost(x);
    });
}

double isocert_cost_delta(const isocert_cost* c) { return c ? c->spec.delta : 0.0; }

isocert_status isocert_cost_conjugate(const isocert_cost* c, const double* grid, size_t n, double* values,
                                      double* argmax, int* truncated) {
    return guarded([&] {
        require(c, "cost");
        require(grid, "grid");
        const ConjugateTable t = legendre_transform(c->spec.cost, std::span<const double>(grid, n));
        for (size_t i = 0; i < n; ++i) {
            if (values) values[i] = t.values[i];
            if (argmax) argmax[i] = t.argmax[i];
            if (truncated) truncated[i] = t.truncated[i] ? 1 : 0;
        }
    });
}

isocert_status isocert_family_create(const char* spec, uint64_t seed, double floor_value, isocert_family** out) {
    return guarded([&] {
        require(spec, "family spec");
        require(out, "output handle");
        *out = new isocert_family{parse_family_spec(spec, seed, floor_value)};
    });
}

void isocert_family_destroy(isocert_family* f) { delete f; }

size_t isocert_family_size(const isocert_family* f) { return f ? f->family.size() : 0; }

// ---- reports ------------------------------------------------------------------

void isocert_check_params_default(isocert_check_params* p) {
    if (!p) return;
    p->delta = 0.0;
    p->K = 2.0;
    p->t_min = 1e-12;
    p->nodes_per_decade = 0;
}

isocert_status isocert_check(const isocert_measure* m, const isocert_entropy* e, const isocert_cost* c,
                             const isocert_check_params* params, isocert_report** out) {
    return guarded([&] {
        require(m, "measure");
        require(e, "entropy");
        require(c, "cost");
        require(out, "output handle");
        isocert_check_params p;
        isocert_check_params_default(&p);
        if (params) p = *params;
        ConditionSpec spec;
        spec.measure = m->mu;
        spec.F = e->F;
        spec.cost = c->spec.cost;
        spec.delta = p.delta > 0.0 ? p.delta : c->spec.delta;
        spec.K = p.K;
        spec.t_min = p.t_min;
        if (p.nodes_per_decade) spec.nodes_per_decade = p.nodes_per_decade;
        const ConditionReport r = check_condition(spec, e->Phi());
        Json j{{"measure", m->mu->name()},
               {"entropy", e->F.describe()},
               {"cost", c->spec.cost.describe()},
               {"report", to_json(r)}};
        auto rep = std::make_unique<isocert_report>();
        rep->json = dump_json(j);
        rep->verdict = to_c(r.verdict);
        *out = rep.release();
    });
}

isocert_status isocert_profile(const isocert_measure* m, const isocert_entropy* e, const double* t_grid, size_t nt,
                               const double* r_grid, size_t nr, isocert_report** out) {
    return guarded([&] {
        require(m, "measure");
        require(e, "entropy");
        require(out, "output handle");
        if (nt) require(t_grid, "t grid");
        if (nr) require(r_grid, "r grid");
        const IsoProfile iso = tilde_profile(*m->mu, std::span<const double>(t_grid, nt));
        const EntropyProfile ent = entropy_profile(*m->mu, e->F, std::span<const double>(r_grid, nr));
        Json j{{"measure", measure_summary(*m->mu)}, {"entropy", e->F.describe()}};
        auto rep = std::make_unique<isocert_report>();
        rep->json = dump_json(j);
        rep->csv = {tilde_profile_csv(iso), entropy_profile_csv(ent)};
        *out = rep.release();
    });
}

isocert_status isocert_test_defective(const isocert_measure* m, const isocert_entropy* e, const isocert_cost* c,
                                      const isocert_family* f, double K, isocert_report** out) {
    return guarded([&] {
        require(m, "measure");
        require(e, "entropy");
        require(c, "cost");
        require(f, "family");
        require(out, "output handle");
        const Measure1D& mu = *m->mu;
        const TestReport t = verify_defective_inequality(mu, e->F, c->spec.cost, K, f->family);
        const RestrictedReport rb = check_restricted_entropy_bounds(mu, e->F, K, f->family);

        bool ok = t.min_step_one_margin >= 0.0 && rb.min_margin_first >= 0.0;
        bool entropy_nonnegative = true;
        for (const auto& row : t.rows)
            if (row.entropy_F < -1e-12 * row.mass) entropy_nonnegative = false;
        ok = ok && entropy_nonnegative;

        Json mixed = Json::array();
        for (std::size_t i = 0; i + 1 < f->family.size(); ++i) {
            const MixedBound b = check_mixed_entropy_bound(mu, e->F, e->Phi(), f->family.member(mu, i),
                                                           f->family.member(mu, i + 1));
            Json jb = to_json(b);
            jb["f"] = f->family.label(i);
            jb["g"] = f->family.label(i + 1);
            mixed.push_back(std::move(jb));
            if (!(b.margin >= 0.0)) ok = false;
        }
        Json j{{"defective", to_json(t)},
               {"restricted_bounds", to_json(rb)},
               {"mixed_bounds", std::move(mixed)},
               {"entropy_nonnegative", entropy_nonnegative},
               {"margins_ok", ok}};
        auto rep = std::make_unique<isocert_report>();
        rep->json = dump_json(j);
        rep->csv = {test_rows_csv(t)};
        rep->margins_ok = ok ? 1 : 0;
        *out = rep.release();
    });
}

isocert_status isocert_test_tight(const isocert_measure* m, double alpha, double tau, double A,
                                  const isocert_family* f, isocert_report** out) {
    return guarded([&] {
        require(m, "measure");
        require(f, "family");
        require(out, "output handle");
        const TestReport a = verify_tight_modified_inequality(*m->mu, alpha, tau, A, f->family);
        const TestReport b = verify_tight_modified_inequality(*m->mu, alpha, tau, A, f->family.enriched());
        const bool ok = stable(a.C_hat, b.C_hat);
        Json j{{"alpha", alpha},     {"tau", tau},   {"A", A},
               {"report", to_json(a)}, {"C_hat_enriched", b.C_hat}, {"stable", ok}};
        auto rep = std::make_unique<isocert_report>();
        rep->json = dump_json(j);
        rep->csv = {test_rows_csv(a)};
        rep->margins_ok = ok ? 1 : 0;
        *out = rep.release();
    });
}

isocert_status isocert_test_beta(const isocert_measure* m, double alpha, const isocert_family* f,
                                 isocert_report** out) {
    return guarded([&] {
        require(m, "measure");
        require(f, "family");
        require(out, "output handle");
        const BetaReport a = verify_beta_entropy_inequality(*m->mu, alpha, f->family);
        const BetaReport b = verify_beta_entropy_inequality(*m->mu, alpha, f->family.enriched());
        const bool ok = stable(a.C_hat, b.C_hat);
        Json j{{"report", to_json(a)}, {"C_hat_enriched", b.C_hat}, {"stable", ok}};
        auto rep = std::make_unique<isocert_report>();
        rep->json = dump_json(j);
        rep->csv = {beta_rows_csv(a)};
        rep->margins_ok = ok ? 1 : 0;
        *out = rep.release();
    });
}

isocert_status isocert_example_suite(uint64_t seed, isocert_report** out) {
    return guarded([&] {
        require(out, "output handle");
        auto rep = std::make_unique<isocert_report>();
        rep->json = dump_json(run_example_suite(seed));
        *out = rep.release();
    });
}

void isocert_report_destroy(isocert_report* r) { delete r; }

const char* isocert_report_json(const isocert_report* r) { return r ? r->json.c_str() : nullptr; }

const char* isocert_report_csv(const isocert_report* r, size_t index) {
    if (!r || index >= r->csv.size()) return nullptr;
    return r->csv[index].c_str();
}

isocert_verdict isocert_report_verdict(const isocert_report* r) { return r ? r->verdict : ISOCERT_VERDICT_NONE; }

int isocert_report_margins_ok(const isocert_report* r) { return r ? r->margins_ok : -1; }

} // extern "C"
