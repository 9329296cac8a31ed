#include "isocert/checker.hpp"

#include "isocert/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace isocert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Sample {
    double log_h = 0.0;
    bool truncated = false;
    bool zero = false;
};

double log_sum_exp(const std::vector<double>& terms) {
    double m = -kInf;
    for (double t : terms) m = std::max(m, t);
    if (m == -kInf || m == kInf) return m;
    double s = 0.0;
    for (double t : terms) s += std::exp(t - m);
    return m + std::log(s);
}

TailModel fit_tail(const std::vector<double>& s, const std::vector<double>& w) {
    TailModel best;
    const std::size_t n = s.size();
    if (n < 3) return best;

    auto fit = [&](double p, double& b, double& c) {
        double mz = 0.0, mw = 0.0;
        std::vector<double> z(n);
        for (std::size_t i = 0; i < n; ++i) {
            z[i] = std::pow(s[i], p);
            mz += z[i];
            mw += w[i];
        }
        mz /= double(n);
        mw /= double(n);
        double szz = 0.0, szw = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            szz += (z[i] - mz) * (z[i] - mz);
            szw += (z[i] - mz) * (w[i] - mw);
        }
        b = szz > 0.0 ? szw / szz : 0.0;
        c = mw - b * mz;
        double ssr = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = w[i] - c - b * z[i];
            ssr += r * r;
        }
        return ssr;
    };

    double best_ssr = kInf;
    for (int k = 0; k <= 790; ++k) {
        const double p = 0.05 + 0.005 * k;
        double b, c;
        const double ssr = fit(p, b, c);
        if (ssr < best_ssr) {
            best_ssr = ssr;
            best.p = p;
            best.b = b;
            best.c = c;
        }
    }
    if (std::abs(best.p - 1.0) <= 0.15) {
        best.power_law = true;
        best_ssr = fit(1.0, best.b, best.c);
    }
    best.rms = std::sqrt(best_ssr / double(n));
    best.integrable = best.b <= 0.0 || (best.power_law ? best.b < 0.98 : best.p < 0.85);
    return best;
}

bool tail_divergent(const TailModel& t) {
    return t.b > 0.0 && (t.power_law ? t.b >= 1.0 : t.p > 1.15);
}

} // namespace

const char* to_string(Verdict v) noexcept {
    switch (v) {
    case Verdict::finite: return "FINITE";
    case Verdict::divergent_likely: return "DIVERGENT_LIKELY";
    case Verdict::inconclusive: return "INCONCLUSIVE";
    }
    return "?";
}

ConditionReport check_condition(const ConditionSpec& spec) {
    const PhiConjugate Phi(spec.F);
    return check_condition(spec, Phi);
}

ConditionReport check_condition(const ConditionSpec& spec, const PhiConjugate& Phi) {
    if (!(spec.delta > 0.0)) throw ArgumentError("delta must be positive");
    if (!(spec.K > 1.0)) throw ArgumentError("K must exceed 1");
    if (!(spec.t_min > 0.0) || !(spec.t_min < 1.0 / spec.K)) throw ArgumentError("t_min must lie in (0, 1/K)");
    if (spec.profile == ProfileChoice::tilde && !spec.measure)
        throw ArgumentError("the tilde profile needs a measure");
    if (spec.profile == ProfileChoice::lower_bound_model && (!(spec.model_k > 0.0) || !(spec.model_alpha > 1.0)))
        throw ArgumentError("lower-bound model needs k > 0 and alpha > 1");
    if (spec.nodes_per_decade < 2) throw ArgumentError("need at least two quadrature intervals per decade");

    ConditionReport rep;
    rep.delta = spec.delta;
    rep.K = spec.K;
    rep.t_min = spec.t_min;

    auto sample = [&](double s) {
        Sample out;
        const double t = std::exp(-s);
        double log_I;
        if (spec.profile == ProfileChoice::tilde) {
            const Measure1D& mu = *spec.measure;
            log_I = std::min(mu.log_density(mu.quantile(t)), mu.log_density(mu.upper_quantile(t)));
        } else {
            log_I = std::log(spec.model_k) - s + (1.0 - 1.0 / spec.model_alpha) * std::log(s);
        }
        if (!(log_I > -kInf)) {
            out.zero = true;
            out.log_h = kInf;
            return out;
        }
        const double x = spec.F.value_at_log(s) * std::exp(-s - log_I);
        const double y = spec.delta * spec.cost(std::max(x, 0.0));
        if (!std::isfinite(y)) {
            out.truncated = true;
            out.log_h = kInf;
            return out;
        }
        const auto v = Phi.log_eval(y);
        out.truncated = v.truncated;
        out.log_h = v.log_value;
        return out;
    };

    const double s0 = std::log(spec.K);
    const double s1 = -std::log(spec.t_min);
    const double decade = std::numbers::ln10;

    // Decade boundaries counted from t_min so the deepest decades are whole.
    std::vector<std::pair<double, double>> spans;
    for (double hi = s1; hi > s0 + 1e-12; hi -= decade) spans.push_back({std::max(s0, hi - decade), hi});
    std::reverse(spans.begin(), spans.end());

    std::vector<double> fit_s, fit_w;
    const double fit_from = std::max(s0, s1 - 3.0 * decade);
    std::vector<double> all_terms;
    for (const auto& [a, b] : spans) {
        std::size_t m = static_cast<std::size_t>(
            std::ceil(double(spec.nodes_per_decade) * (b - a) / decade / 2.0)) * 2;
        m = std::max<std::size_t>(m, 2);
        const double step = (b - a) / double(m);
        std::vector<double> terms;
        terms.reserve(m + 1);
        for (std::size_t k = 0; k <= m; ++k) {
            const double s = a + step * double(k);
            const Sample smp = sample(s);
            if (smp.zero && !rep.zero_profile) {
                rep.zero_profile = true;
                rep.truncated_at_t = std::exp(-s);
            }
            if (smp.truncated && !rep.phi_truncated) {
                rep.phi_truncated = true;
                rep.truncated_at_t = std::exp(-s);
            }
            const double weight = (k == 0 || k == m) ? 1.0 : (k % 2 ? 4.0 : 2.0);
            terms.push_back(smp.log_h - s + std::log(weight * step / 3.0));
            if (s >= fit_from && k % 8 == 0 && std::isfinite(smp.log_h)) {
                fit_s.push_back(s);
                fit_w.push_back(smp.log_h);
            }
        }
        DecadeSum d;
        d.t_lo = std::exp(-b);
        d.t_hi = std::exp(-a);
        d.log_partial_sum = log_sum_exp(terms);
        d.partial_sum = std::exp(d.log_partial_sum);
        rep.decades.push_back(d);
        all_terms.push_back(d.log_partial_sum);
    }
    rep.log_integral_estimate = log_sum_exp(all_terms);
    rep.integral_estimate = std::exp(rep.log_integral_estimate);
    rep.tail = fit_tail(fit_s, fit_w);

    const std::size_t nd = rep.decades.size();
    const std::size_t used = std::min<std::size_t>(nd, 4);
    if (used >= 2) {
        rep.geometric_decay = true;
        rep.nondecreasing = true;
        for (std::size_t k = nd - used + 1; k < nd; ++k) {
            const double step = rep.decades[k].log_partial_sum - rep.decades[k - 1].log_partial_sum;
            if (!(step <= std::log(0.95))) rep.geometric_decay = false;
            if (!(step >= 0.0)) rep.nondecreasing = false;
        }
    }

    if (rep.zero_profile) {
        rep.verdict = Verdict::divergent_likely;
        rep.note = "profile vanishes inside the integration range";
    } else if (rep.phi_truncated) {
        rep.verdict = Verdict::inconclusive;
        rep.note = "Phi saturates inside the integration range";
    } else if (rep.geometric_decay && rep.tail.integrable) {
        rep.verdict = Verdict::finite;
    } else if (rep.nondecreasing || tail_divergent(rep.tail)) {
        rep.verdict = Verdict::divergent_likely;
    } else {
        rep.verdict = Verdict::inconclusive;
        rep.note = "decade sums and tail fit disagree";
    }
    return rep;
}

DeltaSweep delta_sweep(const ConditionSpec& spec, std::vector<double> deltas) {
    if (deltas.empty()) throw ArgumentError("delta sweep needs at least one delta");
    const PhiConjugate Phi(spec.F);
    DeltaSweep out;
    for (double d : deltas) {
        ConditionSpec s = spec;
        s.delta = d;
        out.reports.push_back(check_condition(s, Phi));
        if (out.reports.back().verdict == Verdict::finite) out.largest_finite_delta = std::max(out.largest_finite_delta, d);
    }
    return out;
}

ExpPowerReports check_exp_power(double alpha, double tau, double A, double delta, double K,
                                std::shared_ptr<const Measure1D> measure) {
    if (!(alpha > 1.0) || alpha > 2.0) throw ArgumentError("alpha must lie in (1, 2]");
    const double tau_min = 2.0 * (1.0 - 1.0 / alpha);
    if (tau < tau_min * (1.0 - 1e-12) || tau > 1.0) throw ArgumentError("tau must lie in [2(1 - 1/alpha), 1]");
    if (!measure) measure = std::make_shared<Measure1D>(Measure1D::build(Potential::exp_power(alpha)));

    // The inequality's gradient cost is c_{A, gamma}; the integrability
    // condition uses its conjugate c_{A, gamma / (gamma - 1)}.
    const double gamma = alpha * tau / (alpha - 1.0);
    ExpPowerReports out;

    ConditionSpec mod;
    mod.measure = measure;
    mod.F = EntropyFunction::make(EntropyBase::log(), tau);
    mod.cost = CostFunction::closed_form(A, conjugate_exponent(gamma));
    mod.delta = delta;
    mod.K = K;
    out.modified = check_condition(mod);

    ConditionSpec quad;
    quad.measure = measure;
    quad.F = EntropyFunction::make(EntropyBase::log(), std::min(1.0, tau_min));
    quad.cost = CostFunction::quadratic();
    quad.delta = delta;
    quad.K = K;
    out.quadratic = check_condition(quad);
    return out;
}

GrowthConditionResult verify_growth_condition(const Measure1D& mu, const std::function<double(double)>& g,
                                              const EntropyBase& phi, double alpha, double r_max) {
    if (!(alpha > 1.0)) throw ArgumentError("alpha must exceed 1");
    const auto& x = mu.grid();
    const auto& w = mu.node_weights();
    const double c = mu.center();

    std::vector<double> terms(x.size());
    double peak = -kInf;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double gi = g(std::abs(x[i] - c));
        terms[i] = w[i] > 0.0 ? gi + std::log(w[i]) : -kInf;
        peak = std::max(peak, terms[i]);
    }
    // the moment must have decayed well before either end of the grid
    const double edge = std::max(terms.front(), terms.back());
    if (!std::isfinite(peak) || edge > peak - 20.0)
        throw ConstructionError("exponential moment does not converge on the measure's grid");

    GrowthConditionResult res;
    res.log_normalizer = log_sum_exp(terms);

    double a = 0.0, b = std::max(mu.hi() - c, c - mu.lo());
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (a + b);
        if (mu.outside_ball(mid) > 0.5)
            a = mid;
        else
            b = mid;
    }
    res.R_half = 0.5 * (a + b);
    if (!(r_max > 100.0 * res.R_half)) throw ArgumentError("r_max must span at least two decades above R_1/2");

    const auto rs = logspace(res.R_half, r_max, 4001);
    const double l_hi = std::log10(r_max);
    res.C = kInf;
    double last = kInf, prev = kInf;
    for (double r : rs) {
        const double gt = g(r) - res.log_normalizer;
        const double p = phi.value_at_log(gt);
        if (!(p >= 1.0)) continue;
        const double ratio = gt / (r * std::pow(p, 1.0 - 1.0 / alpha));
        res.C = std::min(res.C, ratio);
        res.tail_ratio = ratio;
        const double l = std::log10(r);
        if (l >= l_hi - 1.0)
            last = std::min(last, ratio);
        else if (l >= l_hi - 2.0)
            prev = std::min(prev, ratio);
    }
    if (!std::isfinite(res.C)) res.C = 0.0;
    res.bounded_away = std::isfinite(last) && std::isfinite(prev) && prev > 0.0 && last >= 0.5 * prev;
    return res;
}

} // namespace isocert
