#include "isocert/measure.hpp"

#include "isocert/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

namespace isocert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 8-point Gauss-Legendre nodes and weights on [-1, 1].
constexpr std::array<double, 4> kGLNodes{0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                                         0.9602898564975363};
constexpr std::array<double, 4> kGLWeights{0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                                           0.1012285362903763};

template <class Fn>
double gauss_legendre(Fn&& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        sum += kGLWeights[k] * (f(mid - half * kGLNodes[k]) + f(mid + half * kGLNodes[k]));
    }
    return sum * half;
}

double log_add(double a, double b) {
    if (a == -kInf) return b;
    if (b == -kInf) return a;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(-std::abs(a - b)));
}

} // namespace

Potential Potential::gauss() {
    return {[](double x) { return 0.5 * x * x; }, "gauss", true};
}

Potential Potential::exp() {
    return {[](double x) { return std::abs(x); }, "exp", true};
}

Potential Potential::exp_power(double alpha) {
    if (!(alpha > 0.0)) throw ArgumentError("exp_power requires alpha > 0");
    char buf[64];
    std::snprintf(buf, sizeof buf, "exp_power:%.17g", alpha);
    return {[alpha](double x) { return std::pow(std::abs(x), alpha); }, buf, alpha >= 1.0};
}

Potential Potential::loglog() {
    return {[](double x) { return std::abs(x) * std::log1p(x * x); }, "loglog", true};
}

double Measure1D::potential(double x) const {
    try {
        const double v = potential_.V(x);
        return std::isnan(v) ? kInf : v;
    } catch (const DomainError&) {
        return kInf;
    }
}

Measure1D Measure1D::build(Potential potential, const MeasureOptions& options) {
    if (!potential.V) throw ArgumentError("measure needs a potential");
    if (options.grid_points < 3) throw ArgumentError("measure grid needs at least 3 points");
    if (!(options.log_density_drop > 0.0)) throw ArgumentError("log density drop must be positive");
    if (options.lo && options.hi && !(*options.lo < *options.hi))
        throw ArgumentError("support bounds must satisfy lo < hi");

    Measure1D mu;
    mu.potential_ = std::move(potential);
    auto V = [&](double x) { return mu.potential(x); };
    auto inside = [&](double x) {
        return (!options.lo || x >= *options.lo) && (!options.hi || x <= *options.hi);
    };

    // Locate the bottom of the potential.
    std::vector<double> probes{0.0};
    for (int k = -20; k <= 27; ++k) {
        probes.push_back(std::ldexp(1.0, k));
        probes.push_back(-std::ldexp(1.0, k));
    }
    if (options.lo && options.hi) {
        for (double x : linspace(*options.lo, *options.hi, 1001)) probes.push_back(x);
    } else if (options.lo) {
        for (int k = -20; k <= 27; ++k) probes.push_back(*options.lo + std::ldexp(1.0, k));
    } else if (options.hi) {
        for (int k = -20; k <= 27; ++k) probes.push_back(*options.hi - std::ldexp(1.0, k));
    }
    double x_star = std::numeric_limits<double>::quiet_NaN();
    double v_min = kInf;
    for (double x : probes) {
        if (!inside(x)) continue;
        const double v = V(x);
        if (v < v_min) {
            v_min = v;
            x_star = x;
        }
    }
    if (!std::isfinite(v_min)) throw ConstructionError("potential is not finite anywhere on the support");

    const double drop = options.log_density_drop;
    auto find_end = [&](double dir) {
        double prev = x_star;
        double step = std::max(1.0, std::abs(x_star));
        double x = x_star + dir * step;
        while (V(x) - v_min < drop) {
            prev = x;
            step *= 2.0;
            x = x_star + dir * step;
            if (std::abs(x) > 1e8) throw ConstructionError("density does not decay; tail is not integrable");
        }
        double a = prev;
        double b = x;
        for (int it = 0; it < 200 && std::abs(b - a) > 1e-13 * std::max(1.0, std::abs(b)); ++it) {
            const double mid = 0.5 * (a + b);
            if (V(mid) - v_min < drop)
                a = mid;
            else
                b = mid;
        }
        return b;
    };
    const double lo = options.lo ? *options.lo : find_end(-1.0);
    const double hi = options.hi ? *options.hi : find_end(1.0);

    const std::size_t n = options.grid_points;
    mu.x_ = linspace(lo, hi, n);
    mu.h_ = (hi - lo) / double(n - 1);
    mu.v_min_ = v_min;

    auto rel_density = [&](double x) { return std::exp(-(V(x) - v_min)); };
    mu.cell_mass_.resize(n - 1);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        mu.cell_mass_[i] = gauss_legendre(rel_density, mu.x_[i], mu.x_[i + 1]);
        total += mu.cell_mass_[i];
    }
    if (!(total > 0.0) || !std::isfinite(total)) throw ConstructionError("density has no finite positive mass");

    // Past an automatic cut the density is continued as rho(b) e^{-V'(b)|x - b|},
    // which keeps tail masses relatively accurate near the cut.
    auto tail_rate = [&](double b, double dir) {
        const double eps = 1e-6 * std::max(1.0, std::abs(b));
        const double slope = dir * (V(b + eps) - V(b - eps)) / (2.0 * eps);
        if (!(slope > 0.0)) throw ConstructionError("potential is not increasing at the truncation point");
        return slope;
    };
    double tail_lo = 0.0;
    double tail_hi = 0.0;
    if (!options.lo) {
        mu.rate_lo_ = tail_rate(lo, -1.0);
        tail_lo = std::exp(-(V(lo) - v_min)) / mu.rate_lo_;
    }
    if (!options.hi) {
        mu.rate_hi_ = tail_rate(hi, 1.0);
        tail_hi = std::exp(-(V(hi) - v_min)) / mu.rate_hi_;
    }
    total += tail_lo + tail_hi;
    mu.outside_mass_ = (tail_lo + tail_hi) / total;
    if (mu.outside_mass_ > 1e-9) throw ConstructionError("more than 1e-9 of the mass lies outside the truncation");
    for (double& m : mu.cell_mass_) m /= total;
    mu.log_Z_ = std::log(total) - v_min;
    mu.tail_lo_ = tail_lo / total;
    mu.tail_hi_ = tail_hi / total;

    mu.left_.assign(n, mu.tail_lo_);
    mu.right_.assign(n, mu.tail_hi_);
    for (std::size_t i = 1; i < n; ++i) mu.left_[i] = mu.left_[i - 1] + mu.cell_mass_[i - 1];
    for (std::size_t i = n - 1; i-- > 0;) mu.right_[i] = mu.right_[i + 1] + mu.cell_mass_[i];

    mu.w_.resize(n);
    double wsum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mu.w_[i] = rel_density(mu.x_[i]) * ((i == 0 || i + 1 == n) ? 0.5 : 1.0);
        wsum += mu.w_[i];
    }
    for (double& w : mu.w_) w /= wsum;

    mu.median_ = mu.quantile(0.5);
    mu.center_ = (lo <= 0.0 && 0.0 <= hi) ? 0.0 : mu.median_;
    mu.bounded_lo_ = options.lo.has_value();
    mu.bounded_hi_ = options.hi.has_value();

    mu.log_concave_ = mu.potential_.convex;
    if (!mu.log_concave_) {
        mu.log_concave_ = true;
        double vmax = 0.0;
        std::vector<double> vs(n);
        for (std::size_t i = 0; i < n; ++i) {
            vs[i] = V(mu.x_[i]);
            if (!std::isfinite(vs[i])) {
                mu.log_concave_ = false;
                break;
            }
            vmax = std::max(vmax, std::abs(vs[i]));
        }
        const double tol = 1e-12 * (1.0 + vmax);
        for (std::size_t i = 1; mu.log_concave_ && i + 1 < n; ++i)
            if (vs[i + 1] - 2.0 * vs[i] + vs[i - 1] < -4.0 * tol) mu.log_concave_ = false;
    }
    return mu;
}

double Measure1D::log_density(double x) const {
    if (x < lo()) return bounded_lo_ ? -kInf : -potential(lo()) - rate_lo_ * (lo() - x) - log_Z_;
    if (x > hi()) return bounded_hi_ ? -kInf : -potential(hi()) - rate_hi_ * (x - hi()) - log_Z_;
    return -potential(x) - log_Z_;
}

double Measure1D::cell_integral(std::size_t, double a, double b) const {
    const double scale = std::exp(log_Z_ + v_min_);
    return gauss_legendre([&](double x) { return std::exp(-(potential(x) - v_min_)); }, a, b) / scale;
}

double Measure1D::cdf(double x) const {
    if (x <= lo()) return tail_lo_ * std::exp(-rate_lo_ * (lo() - x));
    if (x >= hi()) return 1.0 - tail_hi_ * std::exp(-rate_hi_ * (x - hi()));
    const auto i = std::min<std::size_t>(static_cast<std::size_t>((x - lo()) / h_), x_.size() - 2);
    if (x < x_[i]) return left_[i] - cell_integral(i, x, x_[i]);
    return left_[i] + cell_integral(i, x_[i], x);
}

double Measure1D::sf(double x) const {
    if (x <= lo()) return 1.0 - tail_lo_ * std::exp(-rate_lo_ * (lo() - x));
    if (x >= hi()) return tail_hi_ * std::exp(-rate_hi_ * (x - hi()));
    const auto i = std::min<std::size_t>(static_cast<std::size_t>((x - lo()) / h_), x_.size() - 2);
    if (x > x_[i + 1]) return right_[i + 1] - cell_integral(i, x_[i + 1], x);
    return right_[i + 1] + cell_integral(i, x, x_[i + 1]);
}

double Measure1D::invert(double target, bool from_left) const {
    const std::size_t n = x_.size();
    std::size_t i;
    if (from_left) {
        // last i with left_[i] <= target
        const auto it = std::upper_bound(left_.begin(), left_.end(), target);
        i = std::min<std::size_t>(static_cast<std::size_t>(it - left_.begin()) - 1, n - 2);
    } else {
        // right_ is nonincreasing; last i with right_[i] >= target
        const auto it = std::lower_bound(right_.rbegin(), right_.rend(), target);
        const std::size_t k = static_cast<std::size_t>(it - right_.rbegin());  // count with right_ < target
        i = n - 1 - k;
        i = std::min<std::size_t>(i, n - 2);
    }
    const double a = x_[i];
    const double b = x_[i + 1];
    const double need = from_left ? target - left_[i] : target - right_[i + 1];
    // mass of [a, x] (from the left) or [x, b] (from the right) equals `need`
    auto residual = [&](double x) { return from_left ? cell_integral(i, a, x) - need : cell_integral(i, x, b) - need; };

    double lo_x = a;
    double hi_x = b;
    const double m = cell_mass_[i];
    double x = m > 0.0 ? (from_left ? a + (b - a) * need / m : b - (b - a) * need / m) : 0.5 * (a + b);
    x = std::clamp(x, a, b);
    for (int it = 0; it < 60; ++it) {
        const double r = residual(x);
        const double incr = from_left ? r : -r;  // increasing-in-x residual
        if (incr > 0.0)
            hi_x = x;
        else
            lo_x = x;
        const double d = density(x);
        double next = d > 0.0 ? x - incr / d : 0.5 * (lo_x + hi_x);
        if (!(next > lo_x && next < hi_x)) next = 0.5 * (lo_x + hi_x);
        if (std::abs(next - x) <= 1e-15 * std::max(1.0, std::abs(x)) || hi_x - lo_x <= 1e-15 * std::max(1.0, std::abs(x)))
            return next;
        x = next;
    }
    return x;
}

double Measure1D::quantile(double p) const {
    if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError("quantile level must lie in [0, 1]");
    if (p < tail_lo_) return p == 0.0 ? -kInf : lo() - std::log(tail_lo_ / p) / rate_lo_;
    if (p == 0.0) return lo();
    if (p == 1.0) return bounded_hi_ ? hi() : kInf;
    return invert(p, true);
}

double Measure1D::upper_quantile(double q) const {
    if (!(q >= 0.0 && q <= 1.0)) throw ArgumentError("tail level must lie in [0, 1]");
    if (q < tail_hi_) return q == 0.0 ? kInf : hi() + std::log(tail_hi_ / q) / rate_hi_;
    if (q == 0.0) return hi();
    if (q == 1.0) return bounded_lo_ ? lo() : -kInf;
    return invert(q, false);
}

double Measure1D::outside_ball(double r) const {
    if (r <= 0.0) return 1.0;
    return cdf(center_ - r) + sf(center_ + r);
}

double tilde_I(const Measure1D& mu, double t) {
    if (!(t > 0.0 && t < 1.0)) throw ArgumentError("profile level must lie in (0, 1)");
    return std::min(mu.density(mu.quantile(t)), mu.density(mu.upper_quantile(t)));
}

IsoProfile tilde_profile(const Measure1D& mu, std::span<const double> t_grid) {
    IsoProfile p;
    for (double t : t_grid) {
        if (!(t > 0.0 && t <= 0.5)) throw ArgumentError("profile levels must lie in (0, 1/2]");
        const double u = mu.quantile(t);
        const double v = mu.upper_quantile(t);
        p.t.push_back(t);
        p.u.push_back(u);
        p.v.push_back(v);
        p.tilde_I.push_back(std::min(mu.density(u), mu.density(v)));
    }
    return p;
}

EntropyProfile entropy_profile(const Measure1D& mu, const EntropyFunction& F, std::span<const double> r_grid) {
    EntropyProfile out;
    for (double r : r_grid) {
        if (r < 0.0) throw ArgumentError("radii must be nonnegative");
        const double s = mu.outside_ball(r);
        double value = 0.0;
        const bool empty = !(s > 0.0);
        if (!empty && s < 1.0) value = s * F.value_at_log(-std::log(s)) / tilde_I(mu, s);
        out.r.push_back(r);
        out.s.push_back(s);
        out.value.push_back(value);
        out.empty.push_back(empty);
    }
    return out;
}

CheegerResult cheeger_constant(const Measure1D& mu, std::span<const double> t_grid) {
    CheegerResult best;
    for (double t : t_grid) {
        if (!(t > 0.0 && t < 1.0)) throw ArgumentError("profile level must lie in (0, 1)");
        const double ratio = std::min(t, 1.0 - t) / tilde_I(mu, t);
        if (ratio > best.lambda) {
            best.lambda = ratio;
            best.argmax_t = t;
        }
    }
    return best;
}

CheegerResult cheeger_constant(const Measure1D& mu) {
    return cheeger_constant(mu, logspace(1e-8, 0.5, 2000));
}

BobkovGoetzeResult bobkov_goetze(const Measure1D& mu, Side side) {
    const auto& x = mu.grid();
    const double m = mu.median();
    const std::size_t n = x.size();
    const double log_Z = mu.log_Z();

    // log of int over [a, b] of e^{V}, shifted by the larger endpoint value
    auto log_inverse_density_integral = [&](double a, double b) {
        const double shift = std::max(mu.potential(a), mu.potential(b));
        const double I = gauss_legendre([&](double z) { return std::exp(mu.potential(z) - shift); }, a, b);
        return std::log(I) + shift;
    };

    std::vector<std::size_t> order;
    if (side == Side::right) {
        for (std::size_t i = 0; i < n; ++i)
            if (x[i] > m) order.push_back(i);
    } else {
        for (std::size_t i = n; i-- > 0;)
            if (x[i] < m) order.push_back(i);
    }

    BobkovGoetzeResult res;
    res.log_value = -kInf;
    std::vector<double> L;
    std::vector<double> val;
    std::vector<double> where;
    double acc = -kInf;
    double prev = m;
    for (std::size_t i : order) {
        const double a = std::min(prev, x[i]);
        const double b = std::max(prev, x[i]);
        acc = log_add(acc, log_inverse_density_integral(a, b));
        prev = x[i];
        const double S = side == Side::right ? mu.sf(x[i]) : mu.cdf(x[i]);
        if (!(S > 0.0) || S >= 1.0) continue;
        const double l = -std::log(S);
        L.push_back(l);
        val.push_back(std::log(S) + std::log(l) + acc + log_Z);
        where.push_back(x[i]);
    }
    if (val.empty()) return res;
    const double l_end = *std::max_element(L.begin(), L.end());
    double half = -kInf;
    for (std::size_t k = 0; k < val.size(); ++k) {
        if (val[k] > res.log_value) {
            res.log_value = val[k];
            res.argmax = where[k];
        }
        if (L[k] <= 0.5 * l_end) half = std::max(half, val[k]);
    }
    res.value = std::exp(res.log_value);
    res.divergent = res.log_value - half >= std::log(1.25);
    return res;
}

BobkovBoundResult bobkov_bound_check(const Measure1D& mu, std::span<const double> t_grid) {
    if (!mu.log_concave()) throw ArgumentError("the convex-measure bound needs a log-concave measure");
    BobkovBoundResult out;
    out.min_margin = kInf;
    const double c = mu.center();
    const double r_max = std::max(mu.hi() - c, c - mu.lo());
    for (double t : t_grid) {
        if (!(t > 0.0 && t <= 0.5)) throw ArgumentError("levels must lie in (0, 1/2]");
        const double v = mu.upper_quantile(t);
        double a = 0.0;
        double b = r_max;
        for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, b); ++it) {
            const double mid = 0.5 * (a + b);
            if (mu.outside_ball(mid) > t)
                a = mid;
            else
                b = mid;
        }
        const double r = 0.5 * (a + b);
        const double bracket = t * std::log(1.0 / t) + (1.0 - t) * std::log(1.0 / (1.0 - t)) + std::log1p(-t);
        const double margin = 2.0 * r * mu.density(v) - bracket;
        out.t.push_back(t);
        out.r.push_back(r);
        out.margin.push_back(margin);
        out.min_margin = std::min(out.min_margin, margin);
    }
    return out;
}

std::vector<double> finite_difference(std::span<const double> grid, std::span<const double> values) {
    const std::size_t n = grid.size();
    if (n != values.size() || n < 2) throw ArgumentError("finite differences need matching grids of size >= 2");
    std::vector<double> d(n);
    d[0] = (values[1] - values[0]) / (grid[1] - grid[0]);
    d[n - 1] = (values[n - 1] - values[n - 2]) / (grid[n - 1] - grid[n - 2]);
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (values[i + 1] - values[i - 1]) / (grid[i + 1] - grid[i - 1]);
    return d;
}

namespace {

// Groups of node indices sharing |x - center| (within rounding), in
// increasing distance.
std::vector<std::vector<std::size_t>> distance_groups(const Measure1D& mu) {
    const auto& x = mu.grid();
    const double c = mu.center();
    std::vector<std::size_t> idx(x.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return std::abs(x[a] - c) < std::abs(x[b] - c); });
    std::vector<std::vector<std::size_t>> groups;
    double last = -1.0;
    for (std::size_t i : idx) {
        const double d = std::abs(x[i] - c);
        if (groups.empty() || d - last > 1e-9 * mu.cell_width()) {
            groups.push_back({});
            last = d;
        }
        groups.back().push_back(i);
    }
    return groups;
}

} // namespace

SampledFunction rearrange(const Measure1D& mu, const SampledFunction& f) {
    const auto& w = mu.node_weights();
    const std::size_t n = w.size();
    if (f.values.size() != n) throw ArgumentError("function does not live on the measure grid");
    for (double v : f.values)
        if (v < 0.0 || std::isnan(v)) throw DomainError("rearrangement needs a nonnegative function");

    std::vector<std::size_t> by_value(n);
    std::iota(by_value.begin(), by_value.end(), 0);
    std::stable_sort(by_value.begin(), by_value.end(),
                     [&](std::size_t a, std::size_t b) { return f.values[a] < f.values[b]; });
    // Mass at or below / at or above each sorted value, each summed from its
    // own end so extreme levels keep their precision.
    std::vector<double> below(n), above(n);
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) below[k] = (acc += w[by_value[k]]);
    acc = 0.0;
    for (std::size_t k = n; k-- > 0;) above[k] = (acc += w[by_value[k]]);

    const auto groups = distance_groups(mu);
    std::vector<double> group_mass(groups.size(), 0.0);
    for (std::size_t g = 0; g < groups.size(); ++g)
        for (std::size_t i : groups[g]) group_mass[g] += w[i];
    std::vector<double> mass_after(groups.size(), 0.0);
    for (std::size_t g = groups.size() - 1; g-- > 0;) mass_after[g] = mass_after[g + 1] + group_mass[g + 1];

    SampledFunction out;
    out.values.assign(n, 0.0);
    double before = 0.0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        // mid-rank level of this distance group
        const double level = before + 0.5 * group_mass[g];
        const double upper = mass_after[g] + 0.5 * group_mass[g];
        std::size_t k;
        if (level <= 0.5) {
            // first k with below[k] >= level
            k = static_cast<std::size_t>(std::lower_bound(below.begin(), below.end(), level) - below.begin());
        } else {
            // first k with above[k + 1] <= upper, i.e. mass strictly above k is at most `upper`
            std::size_t j = 1;
            std::size_t a = 1, b = n;  // search j in [1, n]; above[n] treated as 0
            while (a < b) {
                const std::size_t mid = (a + b) / 2;
                if (above[mid] <= upper)
                    b = mid;
                else
                    a = mid + 1;
            }
            j = a;
            k = j - 1;
        }
        k = std::min(k, n - 1);
        const double value = f.values[by_value[k]];
        for (std::size_t i : groups[g]) out.values[i] = value;
        before += group_mass[g];
    }
    out.derivative = finite_difference(mu.grid(), out.values);
    return out;
}

double kolmogorov_distance(const Measure1D& mu, std::span<const double> a, std::span<const double> b) {
    const auto& w = mu.node_weights();
    if (a.size() != w.size() || b.size() != w.size()) throw ArgumentError("functions must live on the measure grid");
    struct Atom {
        double value;
        double wa;
        double wb;
    };
    std::vector<Atom> atoms;
    atoms.reserve(2 * w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        atoms.push_back({a[i], w[i], 0.0});
        atoms.push_back({b[i], 0.0, w[i]});
    }
    std::sort(atoms.begin(), atoms.end(), [](const Atom& p, const Atom& q) { return p.value < q.value; });
    double fa = 0.0, fb = 0.0, worst = 0.0;
    for (std::size_t k = 0; k < atoms.size();) {
        const double v = atoms[k].value;
        while (k < atoms.size() && atoms[k].value == v) {
            fa += atoms[k].wa;
            fb += atoms[k].wb;
            ++k;
        }
        worst = std::max(worst, std::abs(fa - fb));
    }
    return worst;
}

double rearrangement_resolution(const Measure1D& mu) {
    const auto& w = mu.node_weights();
    double group_max = 0.0;
    for (const auto& g : distance_groups(mu)) {
        double m = 0.0;
        for (std::size_t i : g) m += w[i];
        group_max = std::max(group_max, m);
    }
    return group_max + *std::max_element(w.begin(), w.end());
}

std::vector<GrowthWindow> log_profile_growth(const Measure1D& mu, std::span<const double> Rs,
                                             std::size_t points_per_window) {
    const auto F = EntropyFunction::log();
    std::vector<GrowthWindow> out;
    for (double R : Rs) {
        if (!(R > 0.0)) throw ArgumentError("window start must be positive");
        const auto rs = linspace(R, 2.0 * R, points_per_window);
        const auto prof = entropy_profile(mu, F, rs);
        GrowthWindow g;
        g.R = R;
        for (std::size_t i = 0; i < rs.size(); ++i) {
            if (prof.empty[i]) throw ArgumentError("radius beyond the resolved tail of the measure");
            const double ratio = prof.value[i] / rs[i];
            if (ratio > g.sup_ratio) {
                g.sup_ratio = ratio;
                g.argmax = rs[i];
            }
        }
        out.push_back(g);
    }
    return out;
}

double fit_profile_lower_bound(const Measure1D& mu, const EntropyBase& phi, double alpha,
                               std::span<const double> t_grid) {
    if (!(alpha > 1.0)) throw ArgumentError("alpha must exceed 1");
    double k = kInf;
    for (double t : t_grid) {
        const double p = phi.value_at_log(-std::log(t));
        if (!(p > 0.0)) continue;
        k = std::min(k, tilde_I(mu, t) / (t * std::pow(p, 1.0 - 1.0 / alpha)));
    }
    return k;
}

} // namespace isocert
