#include "isocert/tester.hpp"

#include "isocert/errors.hpp"
#include "isocert/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>

namespace isocert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kRandomTerms = 4;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::vector<double> with_midpoints(const std::vector<double>& p) {
    if (p.size() < 2) return p;
    std::vector<double> out;
    out.reserve(2 * p.size() - 1);
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        out.push_back(p[i]);
        out.push_back(0.5 * (p[i] + p[i + 1]));
    }
    out.push_back(p.back());
    return out;
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct RandomCoefficients {
    double a[kRandomTerms];
    double w[kRandomTerms];
    double phase[kRandomTerms];
};

RandomCoefficients draw(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    std::mt19937_64 rng(seq);
    RandomCoefficients c{};
    for (int k = 0; k < kRandomTerms; ++k) {
        c.a[k] = (2.0 * uniform01(rng) - 1.0) / (k + 1);
        c.w[k] = 0.2 + 1.8 * uniform01(rng);
        c.phase[k] = 2.0 * std::numbers::pi * uniform01(rng);
    }
    return c;
}

// Entropies of constants come out at rounding level rather than exactly 0.
bool negligible(double entropy, double mass) { return std::abs(entropy) <= 1e-12 * mass; }

void require_family(const TestFamily& family) {
    if (family.size() == 0) throw ArgumentError("test family is empty");
}

double safe_mass(const Measure1D& mu, const SampledFunction& f) {
    const double m = second_moment(mu, f);
    if (!(m > 0.0)) throw ArgumentError("function has zero mass under the measure");
    return m;
}

// F(f^2 / m) evaluated in log space; 0 where f vanishes (paired with f^2 = 0).
double entropy_density(const EntropyFunction& F, double f, double log_m) {
    if (f == 0.0) return 0.0;
    return F.value_at_log(2.0 * std::log(std::abs(f)) - log_m);
}

// Fraction of each node's weight lying in {q >= 0}, with q linear on cells.
std::vector<double> level_set_fractions(const std::vector<double>& q) {
    const std::size_t n = q.size();
    std::vector<double> frac(n, 0.0);
    auto half_cell = [&](std::size_t i, std::size_t j) {
        if (q[i] >= 0.0 && q[j] >= 0.0) return 1.0;
        if (q[i] < 0.0 && q[j] < 0.0) return 0.0;
        const double s = q[i] / (q[i] - q[j]);  // crossing, as a fraction of the cell from node i
        return q[i] >= 0.0 ? std::min(s, 0.5) / 0.5 : std::max(0.0, 0.5 - s) / 0.5;
    };
    if (n == 1) {
        frac[0] = q[0] >= 0.0 ? 1.0 : 0.0;
        return frac;
    }
    frac[0] = half_cell(0, 1);
    frac[n - 1] = half_cell(n - 1, n - 2);
    for (std::size_t i = 1; i + 1 < n; ++i) frac[i] = 0.5 * (half_cell(i, i - 1) + half_cell(i, i + 1));
    return frac;
}

std::vector<double> upper_fractions(const SampledFunction& f, double level) {
    std::vector<double> q(f.values.size());
    for (std::size_t i = 0; i < q.size(); ++i) q[i] = f.values[i] * f.values[i] - level;
    return level_set_fractions(q);
}

} // namespace

// ---- TestFamily -----------------------------------------------------------

TestFamily TestFamily::exponential(std::vector<double> lambdas) {
    TestFamily t;
    t.kind_ = Kind::exponential;
    t.params_ = std::move(lambdas);
    return t;
}

TestFamily TestFamily::bump(std::vector<double> amplitudes) {
    for (double a : amplitudes)
        if (!(a > -1.0)) throw ArgumentError("bump amplitude must exceed -1");
    TestFamily t;
    t.kind_ = Kind::bump;
    t.params_ = std::move(amplitudes);
    return t;
}

TestFamily TestFamily::shifted_linear(std::vector<double> slopes, double floor) {
    if (!(floor > 0.0)) throw ArgumentError("floor must be positive");
    TestFamily t;
    t.kind_ = Kind::shifted_linear;
    t.params_ = std::move(slopes);
    t.floor_ = floor;
    return t;
}

TestFamily TestFamily::random_smooth(std::size_t count, std::uint64_t seed, double floor) {
    if (!(floor > 0.0)) throw ArgumentError("floor must be positive");
    TestFamily t;
    t.kind_ = Kind::random_smooth;
    t.params_.resize(count);
    for (std::size_t i = 0; i < count; ++i) t.params_[i] = static_cast<double>(i);
    t.floor_ = floor;
    t.seed_ = seed;
    return t;
}

TestFamily TestFamily::radial(std::vector<double> lambdas, double gamma) {
    if (!(gamma > 0.0)) throw ArgumentError("radial exponent must be positive");
    TestFamily t;
    t.kind_ = Kind::radial;
    t.params_ = std::move(lambdas);
    t.gamma_ = gamma;
    return t;
}

TestFamily TestFamily::expression(Expr e, std::string text, std::vector<double> shifts, double floor) {
    if (floor < 0.0) throw ArgumentError("floor must be nonnegative");
    TestFamily t;
    t.kind_ = Kind::expression;
    t.params_ = std::move(shifts);
    t.floor_ = floor;
    t.expr_ = std::move(e);
    t.text_ = std::move(text);
    return t;
}

TestFamily TestFamily::constant(std::vector<double> values) {
    for (double v : values)
        if (!(v > 0.0)) throw ArgumentError("constant members must be positive");
    TestFamily t;
    t.kind_ = Kind::constant;
    t.params_ = std::move(values);
    return t;
}

std::string TestFamily::label(std::size_t i) const {
    const double p = params_.at(i);
    switch (kind_) {
    case Kind::exponential: return "exp(" + fmt(p) + "*x/2)";
    case Kind::bump: return "1+" + fmt(p) + "*exp(-x^2/2)";
    case Kind::shifted_linear: return "(1+" + fmt(p) + "*x)_+ + " + fmt(floor_);
    case Kind::random_smooth: return "random[" + std::to_string(seed_) + ":" + std::to_string(i) + "]";
    case Kind::radial: return "exp(" + fmt(p) + "*(1+x^2)^" + fmt(gamma_ / 2) + ")";
    case Kind::expression: return text_ + " + " + fmt(p + floor_);
    case Kind::constant: return fmt(p);
    }
    return {};
}

std::string TestFamily::describe() const {
    switch (kind_) {
    case Kind::exponential: return "exponential";
    case Kind::bump: return "bump";
    case Kind::shifted_linear: return "shifted_linear(floor=" + fmt(floor_) + ")";
    case Kind::random_smooth: return "random_smooth(seed=" + std::to_string(seed_) + ")";
    case Kind::radial: return "radial(gamma=" + fmt(gamma_) + ")";
    case Kind::expression: return "expression(" + text_ + ")";
    case Kind::constant: return "constant";
    }
    return {};
}

TestFamily TestFamily::enriched() const {
    TestFamily t = *this;
    if (kind_ == Kind::random_smooth) {
        const std::size_t n = params_.size() * 2;
        t.params_.resize(n);
        for (std::size_t i = 0; i < n; ++i) t.params_[i] = static_cast<double>(i);
    } else {
        t.params_ = with_midpoints(params_);
    }
    return t;
}

SampledFunction TestFamily::member(const Measure1D& mu, std::size_t i) const {
    const double p = params_.at(i);
    const auto& x = mu.grid();
    const std::size_t n = x.size();
    SampledFunction f;
    f.values.resize(n);
    f.derivative.resize(n);
    switch (kind_) {
    case Kind::exponential:
        for (std::size_t k = 0; k < n; ++k) {
            f.values[k] = std::exp(0.5 * p * x[k]);
            f.derivative[k] = 0.5 * p * f.values[k];
        }
        break;
    case Kind::bump:
        for (std::size_t k = 0; k < n; ++k) {
            const double g = std::exp(-0.5 * x[k] * x[k]);
            f.values[k] = 1.0 + p * g;
            f.derivative[k] = -p * x[k] * g;
        }
        break;
    case Kind::shifted_linear:
        for (std::size_t k = 0; k < n; ++k) {
            const double lin = 1.0 + p * x[k];
            f.values[k] = std::max(lin, 0.0) + floor_;
            f.derivative[k] = lin > 0.0 ? p : 0.0;
        }
        break;
    case Kind::random_smooth: {
        const RandomCoefficients c = draw(seed_, i);
        for (std::size_t k = 0; k < n; ++k) {
            double s = 0.0, ds = 0.0;
            for (int j = 0; j < kRandomTerms; ++j) {
                const double arg = c.w[j] * x[k] + c.phase[j];
                s += c.a[j] * std::cos(arg);
                ds -= c.a[j] * c.w[j] * std::sin(arg);
            }
            const double e = std::exp(s);
            f.values[k] = floor_ + e;
            f.derivative[k] = ds * e;
        }
        break;
    }
    case Kind::radial:
        for (std::size_t k = 0; k < n; ++k) {
            const double r2 = 1.0 + x[k] * x[k];
            const double g = std::pow(r2, 0.5 * gamma_);
            f.values[k] = std::exp(p * g);
            f.derivative[k] = f.values[k] * p * gamma_ * x[k] * g / r2;
        }
        break;
    case Kind::expression: {
        const Expr& e = *expr_;
        for (std::size_t k = 0; k < n; ++k) {
            const double h = 1e-5 * std::max(1.0, std::abs(x[k]));
            f.values[k] = e(x[k]) + p + floor_;
            f.derivative[k] = (e(x[k] + h) - e(x[k] - h)) / (2.0 * h);
        }
        for (double v : f.values)
            if (!(v > 0.0)) throw DomainError("expression family member is not strictly positive");
        break;
    }
    case Kind::constant:
        std::fill(f.values.begin(), f.values.end(), p);
        std::fill(f.derivative.begin(), f.derivative.end(), 0.0);
        break;
    }
    return f;
}

// ---- functionals ----------------------------------------------------------

double second_moment(const Measure1D& mu, const SampledFunction& f) {
    const auto& w = mu.node_weights();
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * f.values[i] * f.values[i];
    return s;
}

double mean(const Measure1D& mu, const SampledFunction& f) {
    const auto& w = mu.node_weights();
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * f.values[i];
    return s;
}

double variance(const Measure1D& mu, const SampledFunction& f) {
    const auto& w = mu.node_weights();
    const double m = mean(mu, f);
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * (f.values[i] - m) * (f.values[i] - m);
    return s;
}

double gradient_energy(const Measure1D& mu, const SampledFunction& f) {
    const auto& w = mu.node_weights();
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * f.derivative[i] * f.derivative[i];
    return s;
}

double entropy_functional(const Measure1D& mu, const SampledFunction& f, const EntropyFunction& F) {
    const double log_m = std::log(safe_mass(mu, f));
    const auto& w = mu.node_weights();
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (f.values[i] < 0.0) throw DomainError("entropy functional needs f >= 0");
        s += w[i] * f.values[i] * f.values[i] * entropy_density(F, f.values[i], log_m);
    }
    return s;
}

namespace {

double energy_term(const CostFunction& cost, double f, double df) {
    if (!(f > 0.0)) throw DomainError("modified energy needs f > 0 on the grid");
    return f * f * cost.conjugate_value(std::abs(df) / f);
}

} // namespace

double modified_energy(const Measure1D& mu, const SampledFunction& f, const CostFunction& cost) {
    const auto& w = mu.node_weights();
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * energy_term(cost, f.values[i], f.derivative[i]);
    return s;
}

double restricted_modified_energy(const Measure1D& mu, const SampledFunction& f, const CostFunction& cost,
                                  double K) {
    const auto frac = upper_fractions(f, K * second_moment(mu, f));
    const auto& w = mu.node_weights();
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i)
        if (frac[i] > 0.0) s += frac[i] * w[i] * energy_term(cost, f.values[i], f.derivative[i]);
    return s;
}

double centered_modified_energy(const Measure1D& mu, const SampledFunction& f, const CostFunction& cost) {
    const auto& w = mu.node_weights();
    const double m = mean(mu, f);
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double d = std::abs(f.values[i] - m);
        const double df = std::abs(f.derivative[i]);
        if (df == 0.0) continue;
        if (d == 0.0) return kInf;
        s += w[i] * d * d * cost.conjugate_value(df / d);
    }
    return s;
}

double median_value(const Measure1D& mu, const SampledFunction& f) {
    const auto& w = mu.node_weights();
    std::vector<std::size_t> idx(w.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return f.values[a] < f.values[b]; });
    // Walk down from the largest value; the answer is the smallest value whose
    // strict upper mass is at most 1/2.
    double above = 0.0;
    std::size_t k = idx.size();
    double answer = f.values[idx.back()];
    while (k > 0) {
        std::size_t j = k;
        const double v = f.values[idx[k - 1]];
        double tie = 0.0;
        while (j > 0 && f.values[idx[j - 1]] == v) tie += w[idx[--j]];
        if (above > 0.5) break;
        answer = v;
        above += tie;
        k = j;
    }
    return answer;
}

double median_energy(const Measure1D& mu, const SampledFunction& f) {
    const double m = median_value(mu, f);
    const auto& w = mu.node_weights();
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * (f.values[i] - m) * (f.values[i] - m);
    return s;
}

double step_one_constant(double K, const EntropyFunction& F) {
    const double sk = std::sqrt(K) + 1.0;
    return (4.0 * (K + 1.0) * (K + 1.0) + 2.0 + sk * sk) * F.derivative(1.0);
}

// ---- defective inequality -------------------------------------------------

TestReport verify_defective_inequality(const Measure1D& mu, const EntropyFunction& F, const CostFunction& cost,
                                       double K, const TestFamily& family) {
    require_family(family);
    if (!(K > 1.0)) throw ArgumentError("K must exceed 1");
    const EntropyFunction log_entropy = EntropyFunction::log();
    const double C1 = step_one_constant(K, F);

    auto rows = parallel_map<TestRow>(family.size(), [&](std::size_t i) {
        const SampledFunction f = family.member(mu, i);
        TestRow r;
        r.label = family.label(i);
        r.parameter = family.parameter(i);
        r.mass = safe_mass(mu, f);
        r.entropy_F = entropy_functional(mu, f, F);
        r.classical_entropy = entropy_functional(mu, f, log_entropy);
        r.variance = variance(mu, f);
        r.grad_energy = gradient_energy(mu, f);
        r.modified_energy = modified_energy(mu, f, cost);
        r.restricted_energy = restricted_modified_energy(mu, f, cost, K);
        r.centered_energy = centered_modified_energy(mu, f, cost);
        r.median_energy = median_energy(mu, f);

        r.skipped = negligible(r.entropy_F, r.mass) && r.modified_energy == 0.0;
        r.ratio = r.skipped ? 0.0 : r.entropy_F / r.modified_energy;
        r.b_hat = std::max(0.0, (r.entropy_F - 4.0 * r.restricted_energy) / r.mass);
        const double excess_var = r.entropy_F - 4.0 * r.centered_energy;
        r.b_hat_variance = excess_var <= 0.0 ? 0.0 : (r.variance > 0.0 ? excess_var / r.variance : kInf);

        // I_1 = int min(f^2, K mu(f^2)) F(f^2 / mu(f^2)).
        const auto& w = mu.node_weights();
        const double log_m = std::log(r.mass);
        double I1 = 0.0;
        for (std::size_t k = 0; k < w.size(); ++k) {
            const double f2 = f.values[k] * f.values[k];
            I1 += w[k] * std::min(f2, K * r.mass) * entropy_density(F, f.values[k], log_m);
        }
        r.step_one = I1;
        r.step_one_margin = C1 * r.variance - I1;
        return r;
    });

    TestReport rep;
    rep.measure = mu.name();
    rep.entropy = F.describe();
    rep.cost = cost.describe();
    rep.family = family.describe();
    rep.K = K;
    rep.min_step_one_margin = kInf;
    for (const auto& r : rows) {
        if (!r.skipped) rep.C_hat = std::max(rep.C_hat, r.ratio);
        rep.B_hat = std::max(rep.B_hat, r.b_hat);
        rep.B_hat_variance = std::max(rep.B_hat_variance, r.b_hat_variance);
        rep.min_step_one_margin = std::min(rep.min_step_one_margin, r.step_one_margin);
    }
    for (auto& r : rows) r.saturated = !r.skipped && rep.C_hat > 0.0 && r.ratio >= (1.0 - 1e-3) * rep.C_hat;
    rep.rows = std::move(rows);
    return rep;
}

// ---- tight modified inequality on e^{-|x|^alpha} ----------------------------

TestReport verify_tight_modified_inequality(const Measure1D& mu, double alpha, double tau, double A,
                                            const TestFamily& family) {
    require_family(family);
    if (!(alpha > 1.0)) throw ArgumentError("alpha must exceed 1");
    if (!(A > 0.0)) throw ArgumentError("A must be positive");
    const double tau_min = 2.0 * (1.0 - 1.0 / alpha);
    if (!(tau >= tau_min - 1e-12 && tau <= 1.0)) throw ArgumentError("tau must lie in [2(1 - 1/alpha), 1]");
    const double gamma = alpha * tau / (alpha - 1.0);
    if (!(gamma > 1.0)) throw ArgumentError("cost exponent alpha tau / (alpha - 1) must exceed 1");
    const EntropyFunction F = EntropyFunction::make(EntropyBase::log(), tau);
    const EntropyFunction log_entropy = EntropyFunction::log();
    // The energy integrand is c_{A,gamma} itself: the conjugate of c_{A,gamma*}.
    const CostFunction cost = CostFunction::closed_form(A, conjugate_exponent(gamma));

    auto rows = parallel_map<TestRow>(family.size(), [&](std::size_t i) {
        const SampledFunction f = family.member(mu, i);
        TestRow r;
        r.label = family.label(i);
        r.parameter = family.parameter(i);
        r.mass = safe_mass(mu, f);
        r.entropy_F = entropy_functional(mu, f, F);
        r.classical_entropy = entropy_functional(mu, f, log_entropy);
        r.variance = variance(mu, f);
        r.grad_energy = gradient_energy(mu, f);
        r.modified_energy = modified_energy(mu, f, cost);
        r.median_energy = median_energy(mu, f);
        r.skipped = negligible(r.entropy_F, r.mass) && r.modified_energy == 0.0;
        r.ratio = r.skipped ? 0.0 : r.entropy_F / r.modified_energy;
        return r;
    });

    TestReport rep;
    rep.measure = mu.name();
    rep.entropy = F.describe();
    char buf[96];
    std::snprintf(buf, sizeof buf, "c_{%.6g,%.6g}", A, gamma);
    rep.cost = buf;
    rep.family = family.describe();
    for (const auto& r : rows)
        if (!r.skipped) rep.C_hat = std::max(rep.C_hat, r.ratio);
    for (auto& r : rows) r.saturated = !r.skipped && rep.C_hat > 0.0 && r.ratio >= (1.0 - 1e-3) * rep.C_hat;
    rep.rows = std::move(rows);
    return rep;
}

// ---- beta entropy inequality ----------------------------------------------

BetaReport verify_beta_entropy_inequality(const Measure1D& mu, double alpha, const TestFamily& family) {
    require_family(family);
    if (!(alpha > 1.0)) throw ArgumentError("alpha must exceed 1");
    if (!mu.log_concave()) throw ArgumentError("measure is not log-concave");

    // Exponential moment: the integrand e^{eps |x|^alpha} rho must have decayed
    // well below its peak at both ends of the grid.
    const auto& x = mu.grid();
    const double c = mu.center();
    auto log_integrand = [&](double eps, double xi) {
        return eps * std::pow(std::abs(xi - c), alpha) + mu.log_density(xi);
    };
    double eps_found = 0.0;
    for (int k = 0; k <= 10 && eps_found == 0.0; ++k) {
        const double eps = std::ldexp(1.0, -k);
        double peak = -kInf;
        for (double xi : x) peak = std::max(peak, log_integrand(eps, xi));
        const double edge = std::max(log_integrand(eps, x.front()), log_integrand(eps, x.back()));
        if (std::isfinite(peak) && edge <= peak - 15.0) eps_found = eps;
    }
    if (eps_found == 0.0) throw ArgumentError("no exponential moment e^{eps |x|^alpha} found on the grid");

    const double beta = conjugate_exponent(alpha);
    const auto& w = mu.node_weights();
    auto rows = parallel_map<BetaRow>(family.size(), [&](std::size_t i) {
        const SampledFunction f = family.member(mu, i);
        BetaRow r;
        r.label = family.label(i);
        const std::size_t n = w.size();
        std::vector<double> g(n);  // |f|^{beta/2}
        double m2 = 0.0, m1 = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            g[k] = std::pow(std::abs(f.values[k]), 0.5 * beta);
            m2 += w[k] * g[k] * g[k];
            m1 += w[k] * g[k];
            r.gradient += w[k] * std::pow(std::abs(f.derivative[k]), beta);
        }
        if (!(m2 > 0.0)) throw ArgumentError("function has zero mass under the measure");
        const double log_m2 = std::log(m2);
        for (std::size_t k = 0; k < n; ++k) {
            if (g[k] > 0.0) r.entropy += w[k] * g[k] * g[k] * (2.0 * std::log(g[k]) - log_m2);
            r.variance += w[k] * (g[k] - m1) * (g[k] - m1);
        }
        // Rounding of a constant function leaves entropy and variance at the
        // 1e-16 level; treat those as exact zeros.
        if (std::abs(r.entropy) <= 1e-13 * m2) r.entropy = 0.0;
        if (r.variance <= 1e-26 * m2) r.variance = 0.0;
        const double rhs = r.gradient + r.variance;
        r.skipped = r.entropy == 0.0 && rhs == 0.0;
        r.ratio = r.skipped ? 0.0 : (rhs > 0.0 ? r.entropy / rhs : kInf);
        return r;
    });

    BetaReport rep;
    rep.alpha = alpha;
    rep.beta = beta;
    rep.epsilon = eps_found;
    for (const auto& r : rows)
        if (!r.skipped) rep.C_hat = std::max(rep.C_hat, r.ratio);
    rep.rows = std::move(rows);
    return rep;
}

// ---- restricted entropy bounds ----------------------------------------------

RestrictedReport check_restricted_entropy_bounds(const Measure1D& mu, const EntropyFunction& F, double K,
                                                 const TestFamily& family) {
    require_family(family);
    if (!(K > 1.0)) throw ArgumentError("K must exceed 1");
    RestrictedReport rep;
    rep.K = K;
    rep.C = step_one_constant(K, F);
    const auto& w = mu.node_weights();

    rep.rows = parallel_map<RestrictedRow>(family.size(), [&](std::size_t i) {
        const SampledFunction f = family.member(mu, i);
        RestrictedRow r;
        r.label = family.label(i);
        const double m = safe_mass(mu, f);
        const double log_m = std::log(m);
        const double root = std::sqrt(K * m);
        const auto frac = upper_fractions(f, K * m);
        for (std::size_t k = 0; k < w.size(); ++k) {
            const double term = w[k] * f.values[k] * f.values[k] * entropy_density(F, f.values[k], log_m);
            r.full += term;
            r.restricted += frac[k] * term;
            const double e = std::max(f.values[k] - root, 0.0);
            r.excess += w[k] * e * e * entropy_density(F, f.values[k], log_m);
        }
        r.complement = r.full - r.restricted;
        r.variance = variance(mu, f);
        r.margin_first = rep.C * r.variance + r.full - r.restricted;
        const double gap = r.full - 2.0 * r.excess;
        r.b_min = gap <= 0.0 ? 0.0 : (r.variance > 0.0 ? gap / r.variance : kInf);
        return r;
    });

    rep.min_margin_first = kInf;
    for (const auto& r : rep.rows) {
        rep.min_margin_first = std::min(rep.min_margin_first, r.margin_first);
        rep.B_min = std::max(rep.B_min, r.b_min);
    }
    return rep;
}

// ---- mixed entropy bound ----------------------------------------------------

MixedBound check_mixed_entropy_bound(const Measure1D& mu, const EntropyFunction& F, const PhiConjugate& Phi,
                                     const SampledFunction& f, const SampledFunction& g) {
    const auto& w = mu.node_weights();
    const double mf = safe_mass(mu, f);
    const double mg = safe_mass(mu, g);
    const double log_mg = std::log(mg);
    MixedBound b;
    double phi_int = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
        if (g.values[k] == 0.0) continue;  // h = 0: u = -inf and Phi(-inf) = 0
        const double lh = 2.0 * std::log(std::abs(g.values[k])) - log_mg;
        const double Fh = F.value_at_log(lh);
        const double u = Fh + F.elasticity_at_log(lh) - 1.0;
        phi_int += w[k] * Phi(0.5 * u);
        b.lhs += w[k] * f.values[k] * f.values[k] * Fh;
    }
    b.C = 2.0 * phi_int - 1.0;
    b.rhs = 2.0 * entropy_functional(mu, f, F) + b.C * mf;
    b.margin = b.rhs - b.lhs;
    return b;
}

} // namespace isocert
