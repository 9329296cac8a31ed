#include "isocert/entropy.hpp"

#include "isocert/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

namespace isocert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Bisection for an increasing function on [lo, hi] with f(lo) <= 0 <= f(hi).
template <class Fn>
double bisect(Fn&& f, double lo, double hi, double tol) {
    for (int it = 0; it < 400 && hi - lo > tol * std::max(1.0, std::abs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

EntropyBase EntropyBase::log() { return EntropyBase{}; }

EntropyBase EntropyBase::iterated_log_square() {
    EntropyBase b;
    b.kind_ = Kind::iterated_log_square;
    return b;
}

EntropyBase EntropyBase::expression(Expr e, std::string text) {
    EntropyBase b;
    b.kind_ = Kind::expression;
    b.expr_ = std::move(e);
    b.text_ = std::move(text);
    return b;
}

double EntropyBase::value_at_log(double u) const {
    switch (kind_) {
    case Kind::log: return u;
    case Kind::iterated_log_square: {
        if (u <= std::numbers::e) return u;
        const double L = std::log(u);
        return 0.5 * std::numbers::e * (L * L + 1.0);
    }
    case Kind::expression: return expr_->eval(std::exp(u));
    }
    return kNaN;
}

double EntropyBase::elasticity_at_log(double u) const {
    switch (kind_) {
    case Kind::log: return 1.0;
    case Kind::iterated_log_square:
        if (u <= std::numbers::e) return 1.0;
        return std::numbers::e * std::log(u) / u;
    case Kind::expression: {
        const double h = 1e-5 * std::max(1.0, std::abs(u));
        return (value_at_log(u + h) - value_at_log(u - h)) / (2.0 * h);
    }
    }
    return kNaN;
}

double EntropyBase::operator()(double y) const {
    if (!(y > 0.0)) throw DomainError("entropy base evaluated at a nonpositive point");
    return value_at_log(std::log(y));
}

std::string EntropyBase::describe() const {
    switch (kind_) {
    case Kind::log: return "log";
    case Kind::iterated_log_square: return "loglog";
    case Kind::expression: return "expr:" + text_;
    }
    return "?";
}

double psi_tau_beta(double tau, double beta, double x) {
    if (!(beta > 0.0) || !(tau > 0.0)) throw ArgumentError("psi requires tau > 0 and beta > 0");
    if (tau < 2.0 / beta * (1.0 - 1e-12)) throw ArgumentError("psi requires tau >= 2/beta");
    if (x <= 1.0) return x;
    return 0.5 * beta * (std::pow(1.0 + tau * (x - 1.0), 2.0 / (tau * beta)) - 1.0) + 1.0;
}

double psi_tau_beta_derivative(double tau, double beta, double x) {
    if (!(beta > 0.0) || !(tau > 0.0)) throw ArgumentError("psi requires tau > 0 and beta > 0");
    if (tau < 2.0 / beta * (1.0 - 1e-12)) throw ArgumentError("psi requires tau >= 2/beta");
    if (x <= 1.0) return 1.0;
    return std::pow(1.0 + tau * (x - 1.0), 2.0 / (tau * beta) - 1.0);
}

EntropyFunction EntropyFunction::make(EntropyBase base, double tau) {
    if (!(tau > 0.0) || tau > 1.0) throw ArgumentError("entropy exponent tau must lie in (0, 1]");
    EntropyFunction F;
    F.base_ = std::move(base);
    F.tau_ = tau;

    auto g = [&](double u) { return F.base_.value_at_log(u) - 1.0; };
    const double u_hi = std::log(1e9);
    double g_lo = kNaN;
    double g_hi = kNaN;
    try {
        g_lo = g(0.0);
        g_hi = g(u_hi);
    } catch (const DomainError&) {
    }
    if (g_lo <= 0.0 && g_hi >= 0.0) {
        F.log_x0_ = bisect(g, 0.0, u_hi, 1e-13);
        F.x0_ = std::exp(F.log_x0_);
    } else if (tau < 1.0) {
        throw ConstructionError("phi(x) = 1 has no root in [1, 1e9]");
    } else {
        F.log_x0_ = kInf;
        F.x0_ = kInf;
    }
    return F;
}

EntropyFunction EntropyFunction::with_psi(double psi_tau, double beta) const {
    psi_tau_beta(psi_tau, beta, 1.0);  // validates the range
    EntropyFunction F = *this;
    F.psi_tau_ = psi_tau;
    F.psi_beta_ = beta;
    return F;
}

double EntropyFunction::value_at_log(double u) const {
    double z = base_.value_at_log(u);
    if (tau_ < 1.0 && u > log_x0_) z = (std::pow(z, tau_) - 1.0) / tau_ + 1.0;
    if (has_psi()) z = psi_tau_beta(psi_tau_, psi_beta_, z);
    return z;
}

double EntropyFunction::elasticity_at_log(double u) const {
    double e = base_.elasticity_at_log(u);
    double z = base_.value_at_log(u);
    if (tau_ < 1.0 && u > log_x0_) {
        e *= std::pow(z, tau_ - 1.0);
        z = (std::pow(z, tau_) - 1.0) / tau_ + 1.0;
    }
    if (has_psi()) e *= psi_tau_beta_derivative(psi_tau_, psi_beta_, z);
    return e;
}

double EntropyFunction::operator()(double x) const {
    if (!(x > 0.0)) throw DomainError("entropy evaluated at a nonpositive point");
    return value_at_log(std::log(x));
}

double EntropyFunction::derivative(double x) const {
    if (!(x > 0.0)) throw DomainError("entropy derivative at a nonpositive point");
    return elasticity_at_log(std::log(x)) / x;
}

double EntropyFunction::inverse(double v) const {
    const double lo = -700.0;
    const double hi = 700.0;
    if (v >= value_at_log(hi)) return kInf;
    if (v <= value_at_log(lo)) return 0.0;
    return std::exp(bisect([&](double u) { return value_at_log(u) - v; }, lo, hi, 1e-15));
}

std::string EntropyFunction::describe() const {
    std::string s = base_.describe();
    char buf[96];
    if (tau_ != 1.0) {
        std::snprintf(buf, sizeof buf, ",tau=%.17g", tau_);
        s = "F_tau(" + s + buf + ")";
    }
    if (has_psi()) {
        std::snprintf(buf, sizeof buf, "psi(tau=%.17g,beta=%.17g,", psi_tau_, psi_beta_);
        s = buf + s + ")";
    }
    return s;
}

PhiConjugate::PhiConjugate(const EntropyFunction& F, std::size_t points_per_decade) : F_(F) {
    if (points_per_decade < 10) throw ArgumentError("Phi grid needs at least 10 points per decade");
    const auto tail = logspace(1e-12, 1e12, 24 * points_per_decade + 1);
    grid_.reserve(tail.size() + 1);
    grid_.push_back(0.0);
    grid_.insert(grid_.end(), tail.begin(), tail.end());
    values_.resize(grid_.size());
    values_[0] = 0.0;
    for (std::size_t i = 1; i < grid_.size(); ++i) {
        const double y = grid_[i];
        values_[i] = y * F_.value_at_log(std::log(y)) - y;
        if (!std::isfinite(values_[i])) throw ConstructionError("y F(y) - y is not finite on the Phi grid");
    }
    slopes_.resize(grid_.size() - 1);
    for (std::size_t i = 0; i + 1 < grid_.size(); ++i)
        slopes_[i] = (values_[i + 1] - values_[i]) / (grid_[i + 1] - grid_[i]);
    convex_ = is_discretely_convex(grid_, values_);
}

PhiConjugate::Value PhiConjugate::stationary(double x) const {
    auto h = [&](double u) { return F_.value_at_log(u) + F_.elasticity_at_log(u) - 1.0 - x; };
    double lo = std::log(grid_.back());
    double hi = 2.0 * lo;
    while (h(hi) < 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e15) return {kInf, true, true};
    }
    const double u = bisect(h, lo, hi, 1e-15);
    const double e = F_.elasticity_at_log(u);
    if (!(e > 0.0)) return {kInf, true, true};
    return {u + std::log(e), false, true};
}

double PhiConjugate::polished(double x, std::size_t j) const {
    // The maximizer lies between the neighbours of node j; solve
    // F(y) + y F'(y) - 1 = x there. The value is taken at a feasible y, so
    // it never exceeds the true supremum beyond rounding.
    if (j < 2 || j + 1 >= grid_.size()) return -kInf;
    auto h = [&](double u) { return F_.value_at_log(u) + F_.elasticity_at_log(u) - 1.0 - x; };
    const double lo = std::log(grid_[j - 1]);
    const double hi = std::log(grid_[j + 1]);
    if (!(h(lo) <= 0.0 && h(hi) >= 0.0)) return -kInf;
    const double u = bisect(h, lo, hi, 1e-16);
    const double y = std::exp(u);
    return y * (x - F_.value_at_log(u) + 1.0);
}

PhiConjugate::Value PhiConjugate::log_eval(double x) const {
    if (std::isnan(x)) throw DomainError("Phi evaluated at NaN");
    double value;
    if (convex_) {
        const auto it = std::lower_bound(slopes_.begin(), slopes_.end(), x);
        const auto j = static_cast<std::size_t>(it - slopes_.begin());
        if (j == slopes_.size()) return stationary(x);
        value = polished(x, j);
        if (!std::isfinite(value)) value = refined_sup(grid_, values_, x, j);
    } else {
        const double xs[1] = {x};
        const auto t = conjugate_sampled(grid_, values_, xs, GridSpacing::logarithmic);
        if (t.truncated[0]) return stationary(x);
        value = t.values[0];
    }
    return {value > 0.0 ? std::log(value) : -kInf, false, false};
}

double PhiConjugate::operator()(double x) const {
    const Value v = log_eval(x);
    return v.truncated ? kInf : std::exp(v.log_value);
}

ConjugateTable PhiConjugate::table(std::span<const double> dual_grid) const {
    return conjugate_sampled(grid_, values_, dual_grid, GridSpacing::logarithmic);
}

AssumptionReport check_assumptions(const EntropyFunction& F) {
    AssumptionReport r;
    r.a1_witness = r.a2_witness = r.a3_witness = r.a4_witness = kNaN;

    auto safe_value = [&](double u) {
        try {
            return F.value_at_log(u);
        } catch (const DomainError&) {
            return kNaN;
        }
    };

    // A1 on a log grid over [1e-12, 1e12].
    const auto ys = logspace(1e-12, 1e12, 24 * 4096 + 1);
    std::vector<double> v(ys.size());
    for (std::size_t i = 0; i < ys.size(); ++i) v[i] = safe_value(std::log(ys[i]));
    r.F_at_1 = safe_value(0.0);
    r.a1 = std::abs(r.F_at_1) <= 1e-10;
    if (!r.a1) r.a1_witness = 1.0;
    for (std::size_t i = 0; r.a1 && i < ys.size(); ++i) {
        if (!std::isfinite(v[i])) {
            r.a1 = false;
            r.a1_witness = ys[i];
            break;
        }
        if (i == 0) continue;
        const double tol = 1e-12 * (1.0 + std::abs(v[i]));
        if (v[i] < v[i - 1] - tol) {
            r.a1 = false;
            r.a1_witness = ys[i];
        } else if (i + 1 < ys.size() && std::isfinite(v[i + 1])) {
            const double h0 = ys[i] - ys[i - 1];
            const double h1 = ys[i + 1] - ys[i];
            const double s0 = (v[i] - v[i - 1]) / h0;
            const double s1 = (v[i + 1] - v[i]) / h1;
            if (s1 - s0 > 2.0 * tol * (1.0 / h0 + 1.0 / h1)) {
                r.a1 = false;
                r.a1_witness = ys[i];
            }
        }
    }

    // A2 along y = 10^-k.
    r.a2 = true;
    double prev = kInf;
    for (int k = 1; k <= 12; ++k) {
        const double y = std::pow(10.0, -k);
        const double m = std::abs(y * safe_value(std::log(y)));
        if (!std::isfinite(m) || (k >= 6 && m > prev * (1.0 + 1e-12))) {
            r.a2 = false;
            r.a2_witness = y;
            break;
        }
        prev = m;
    }
    if (r.a2 && prev > 1e-6) {
        r.a2 = false;
        r.a2_witness = 1e-12;
    }

    // A3: convexity of y F(y) on a linear grid over [0, 10].
    {
        const std::size_t n = 10 * 4096 + 1;
        const auto lin = linspace(0.0, 10.0, n);
        std::vector<double> w(n);
        w[0] = 0.0;
        for (std::size_t i = 1; i < n; ++i) w[i] = lin[i] * safe_value(std::log(lin[i]));
        std::size_t bad = n;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (!std::isfinite(w[i]) || !std::isfinite(w[i + 1])) {
                bad = i;
                break;
            }
            const double tol = 1e-12 * (1.0 + std::abs(w[i]));
            const double h = lin[i] - lin[i - 1];
            if ((w[i + 1] - 2.0 * w[i] + w[i - 1]) / h < -4.0 * tol / h) {
                bad = i;
                break;
            }
        }
        const double reach = bad == n ? 10.0 : lin[bad - 1];
        r.delta = std::min(9.0, reach - 1.0);
        r.a3 = r.delta > 0.0;
        if (bad != n) r.a3_witness = lin[bad];
    }

    // A4: y F'(y) nonincreasing and <= 1 on a suffix of [1, 1e12].
    {
        const auto grid = logspace(1.0, 1e12, 12 * 4096 + 1);
        std::vector<double> e(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            try {
                e[i] = F.elasticity_at_log(std::log(grid[i]));
            } catch (const DomainError&) {
                e[i] = kNaN;
            }
        }
        std::size_t start = grid.size();
        for (std::size_t i = grid.size(); i-- > 0;) {
            const bool ok_value = std::isfinite(e[i]) && e[i] <= 1.0 + 1e-9;
            const bool ok_mono = i + 1 == grid.size() || e[i + 1] <= e[i] + 1e-9 * (1.0 + std::abs(e[i]));
            if (!ok_value || !ok_mono) {
                r.a4_witness = grid[i];
                break;
            }
            start = i;
        }
        r.a4 = start < grid.size();
        r.y0 = r.a4 ? grid[start] : kNaN;
    }
    return r;
}

PhiPowerBound check_phi_power_bound(const EntropyFunction& F, const PhiConjugate& Phi, double delta, double y_lo,
                                    double y_hi, std::size_t points) {
    if (!(delta > 0.0)) throw ArgumentError("delta must be positive");
    PhiPowerBound out;
    out.delta = delta;
    const auto ys = logspace(y_lo, y_hi, points);
    std::vector<double> lhs(ys.size());
    std::vector<double> rhs(ys.size());
    for (std::size_t i = 0; i < ys.size(); ++i) {
        const double u = std::log(ys[i]);
        const auto v = Phi.log_eval(delta * F.value_at_log(u));
        if (v.truncated) out.truncated = true;
        lhs[i] = 2.0 * delta * u;
        rhs[i] = v.log_value;
    }
    std::size_t start = ys.size();
    for (std::size_t i = ys.size(); i-- > 0;) {
        if (rhs[i] > lhs[i] + 1e-9) break;
        start = i;
    }
    out.found = start < ys.size();
    out.T = out.found ? ys[start] : kNaN;
    out.min_margin = kInf;
    for (std::size_t i = start; i < ys.size(); ++i)
        out.min_margin = std::min(out.min_margin, std::exp(lhs[i]) - std::exp(rhs[i]));
    if (!out.found) out.min_margin = kNaN;
    return out;
}

} // namespace isocert
