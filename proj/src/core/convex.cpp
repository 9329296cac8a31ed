#include "isocert/convex.hpp"

#include "isocert/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace isocert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Parabola {
    double y = 0.0;
    double value = 0.0;
    bool concave = false;
};

// Vertex of the parabola through three points, clamped to [lo, hi].
Parabola parabola_vertex(double y0, double o0, double y1, double o1, double y2, double o2, double lo,
                         double hi) {
    const double d1 = (o1 - o0) / (y1 - y0);
    const double d2 = (o2 - o1) / (y2 - y1);
    const double a = (d2 - d1) / (y2 - y0);
    if (!(a < 0.0) || !std::isfinite(a)) return {};
    double y = 0.5 * (y0 + y1) - d1 / (2.0 * a);
    y = std::clamp(y, lo, hi);
    const double value = o0 + d1 * (y - y0) + a * (y - y0) * (y - y1);
    return {y, value, true};
}

} // namespace

double conjugate_exponent(double alpha) {
    if (!(alpha > 1.0)) throw ArgumentError("conjugate exponent requires alpha > 1");
    return alpha / (alpha - 1.0);
}

double cost_c_A_alpha(double A, double alpha, double x) {
    if (x < 0.0 || std::isnan(x)) throw DomainError("cost evaluated at negative argument");
    if (x <= A) return 0.5 * x * x;
    return std::pow(A, 2.0 - alpha) * std::pow(x, alpha) / alpha + A * A * (alpha - 2.0) / (2.0 * alpha);
}

CostFunction CostFunction::closed_form(double A, double alpha, double scale) {
    if (!(A > 0.0) || !std::isfinite(A)) throw ArgumentError("cost branch point A must be positive");
    if (!(alpha > 1.0) || !std::isfinite(alpha)) throw ArgumentError("cost exponent alpha must exceed 1");
    if (!(scale > 0.0) || !std::isfinite(scale)) throw ArgumentError("cost scale must be positive");
    CostFunction c;
    c.kind_ = Kind::closed_form;
    c.A_ = A;
    c.alpha_ = alpha;
    c.scale_ = scale;
    return c;
}

CostFunction CostFunction::quadratic() { return closed_form(1.0, 2.0, 2.0); }

CostFunction CostFunction::sampled(std::vector<double> grid, std::vector<double> values) {
    if (grid.size() < 2 || grid.size() != values.size())
        throw ArgumentError("sampled cost needs at least two matching grid/value entries");
    if (grid.front() != 0.0 || values.front() != 0.0)
        throw ArgumentError("sampled cost must start at (0, 0)");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) throw ArgumentError("sampled cost grid must be strictly increasing");
        if (!std::isfinite(values[i]) || values[i] < 0.0)
            throw ArgumentError("sampled cost values must be finite and nonnegative");
    }
    if (!is_discretely_convex(grid, values)) throw ArgumentError("sampled cost is not convex on its grid");
    CostFunction c;
    c.kind_ = Kind::sampled;
    c.grid_ = std::move(grid);
    c.values_ = std::move(values);
    return c;
}

CostValue CostFunction::eval(double x) const {
    if (x < 0.0 || std::isnan(x)) throw DomainError("cost evaluated at negative argument");
    if (kind_ == Kind::closed_form) return {scale_ * cost_c_A_alpha(A_, alpha_, x), false};

    const std::size_t n = grid_.size();
    if (x >= grid_.back()) {
        const double slope = (values_[n - 1] - values_[n - 2]) / (grid_[n - 1] - grid_[n - 2]);
        return {values_[n - 1] + slope * (x - grid_[n - 1]), x > grid_.back()};
    }
    const auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - grid_.begin()) - 1;
    const double w = (x - grid_[i]) / (grid_[i + 1] - grid_[i]);
    return {values_[i] + w * (values_[i + 1] - values_[i]), false};
}

double CostFunction::derivative(double x) const {
    if (x < 0.0 || std::isnan(x)) throw DomainError("cost derivative at negative argument");
    if (kind_ == Kind::closed_form) {
        if (x <= A_) return scale_ * x;
        return scale_ * std::pow(A_, 2.0 - alpha_) * std::pow(x, alpha_ - 1.0);
    }
    const std::size_t n = grid_.size();
    std::size_t i = n - 2;
    if (x < grid_.back()) {
        const auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
        i = static_cast<std::size_t>(it - grid_.begin()) - 1;
    }
    return (values_[i + 1] - values_[i]) / (grid_[i + 1] - grid_[i]);
}

double CostFunction::inverse_derivative(double slope) const {
    if (slope <= 0.0) return 0.0;
    if (kind_ == Kind::closed_form) {
        const double q = slope / scale_;
        if (q <= A_) return q;
        return std::pow(q * std::pow(A_, alpha_ - 2.0), 1.0 / (alpha_ - 1.0));
    }
    for (std::size_t i = 0; i + 1 < grid_.size(); ++i) {
        const double s = (values_[i + 1] - values_[i]) / (grid_[i + 1] - grid_[i]);
        if (s >= slope) return grid_[i];
    }
    return grid_.back();
}

double CostFunction::conjugate_value(double x) const {
    if (!has_closed_form_conjugate()) throw ArgumentError("cost has no closed-form conjugate");
    if (x < 0.0 || std::isnan(x)) throw DomainError("conjugate evaluated at negative argument");
    return scale_ * cost_c_A_alpha(A_, conjugate_exponent(alpha_), x / scale_);
}

CostFunction CostFunction::conjugate() const {
    if (!has_closed_form_conjugate()) throw ArgumentError("cost has no closed-form conjugate");
    if (scale_ != 1.0) throw ArgumentError("closed-form conjugate cost requires unit scale");
    return closed_form(A_, conjugate_exponent(alpha_));
}

double CostFunction::max_trusted_slope() const noexcept {
    if (kind_ == Kind::closed_form) return kInf;
    const std::size_t n = grid_.size();
    return (values_[n - 1] - values_[n - 2]) / (grid_[n - 1] - grid_[n - 2]);
}

std::string CostFunction::describe() const {
    char buf[128];
    if (kind_ == Kind::sampled) {
        std::snprintf(buf, sizeof buf, "sampled(%zu points)", grid_.size());
    } else if (scale_ == 1.0) {
        std::snprintf(buf, sizeof buf, "c_A_alpha(A=%.17g,alpha=%.17g)", A_, alpha_);
    } else {
        std::snprintf(buf, sizeof buf, "%.17g*c_A_alpha(A=%.17g,alpha=%.17g)", scale_, A_, alpha_);
    }
    return buf;
}

double refined_sup(std::span<const double> grid, std::span<const double> values, double x, std::size_t j) {
    const std::size_t n = grid.size();
    auto objective = [&](std::size_t k) { return x * grid[k] - values[k]; };
    double value = objective(j);
    if (n >= 3) {
        const std::size_t c = std::clamp<std::size_t>(j, 1, n - 2);
        const double lo = grid[j == 0 ? 0 : j - 1];
        const double hi = grid[std::min(j + 1, n - 1)];
        const Parabola p = parabola_vertex(grid[c - 1], objective(c - 1), grid[c], objective(c), grid[c + 1],
                                           objective(c + 1), lo, hi);
        if (p.concave && p.value > value) value = p.value;
    }
    return value;
}

bool ConjugateTable::any_truncated() const {
    return std::any_of(truncated.begin(), truncated.end(), [](bool b) { return b; });
}

double ConjugateTable::interpolate(double x) const {
    if (grid.empty() || x < grid.front() || x > grid.back())
        throw ArgumentError("conjugate table queried outside its grid");
    if (grid.size() == 1 || x == grid.back()) return values.back();
    const auto it = std::upper_bound(grid.begin(), grid.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - grid.begin()) - 1;
    const double w = (x - grid[i]) / (grid[i + 1] - grid[i]);
    return values[i] + w * (values[i + 1] - values[i]);
}

bool is_discretely_convex(std::span<const double> grid, std::span<const double> values) {
    if (grid.size() != values.size()) throw ArgumentError("grid/value size mismatch");
    if (grid.size() < 3) return true;
    double vmax = 0.0;
    for (double v : values) vmax = std::max(vmax, std::abs(v));
    const double tol = 1e-12 * (1.0 + vmax);
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        const double h0 = grid[i] - grid[i - 1];
        const double h1 = grid[i + 1] - grid[i];
        const double s0 = (values[i] - values[i - 1]) / h0;
        const double s1 = (values[i + 1] - values[i]) / h1;
        if (s1 - s0 < -2.0 * tol * (1.0 / h0 + 1.0 / h1)) return false;
    }
    return true;
}

ConjugateTable conjugate_sampled(std::span<const double> primal_grid, std::span<const double> primal_values,
                                 std::span<const double> dual_grid, GridSpacing spacing) {
    if (primal_grid.empty() || dual_grid.empty()) throw ArgumentError("conjugation needs nonempty grids");
    if (primal_grid.size() != primal_values.size()) throw ArgumentError("primal grid/value size mismatch");
    for (std::size_t i = 1; i < primal_grid.size(); ++i)
        if (!(primal_grid[i] > primal_grid[i - 1])) throw ArgumentError("primal grid must be strictly increasing");
    for (std::size_t i = 1; i < dual_grid.size(); ++i)
        if (dual_grid[i] < dual_grid[i - 1]) throw ArgumentError("dual grid must be nondecreasing");

    const std::size_t n = primal_grid.size();
    ConjugateTable table;
    table.grid.assign(dual_grid.begin(), dual_grid.end());
    table.values.resize(dual_grid.size());
    table.argmax.resize(dual_grid.size());
    table.truncated.resize(dual_grid.size());
    table.primal_spacing = spacing;
    table.full_scan = !is_discretely_convex(primal_grid, primal_values);
    table.trusted_slope = n >= 2 ? (primal_values[n - 1] - primal_values[n - 2]) /
                                       (primal_grid[n - 1] - primal_grid[n - 2])
                                 : kInf;

    auto objective = [&](double x, std::size_t j) { return x * primal_grid[j] - primal_values[j]; };

    std::size_t j = 0;
    for (std::size_t i = 0; i < dual_grid.size(); ++i) {
        const double x = dual_grid[i];
        if (table.full_scan) {
            j = 0;
            double best = objective(x, 0);
            for (std::size_t k = 1; k < n; ++k) {
                const double o = objective(x, k);
                if (o > best) {
                    best = o;
                    j = k;
                }
            }
        } else {
            // argmax is nondecreasing in x for convex input
            while (j + 1 < n && objective(x, j + 1) >= objective(x, j)) ++j;
        }

        const double value = refined_sup(primal_grid, primal_values, x, j);
        table.values[i] = value;
        table.argmax[i] = primal_grid[j];
        table.truncated[i] = (j == n - 1) && n > 1;
    }
    return table;
}

ConjugateTable legendre_transform(const CostFunction& cost, std::span<const double> dual_grid,
                                  const LegendreOptions& options) {
    if (dual_grid.empty()) throw ArgumentError("conjugation needs a nonempty dual grid");
    for (double x : dual_grid)
        if (x < 0.0 || !std::isfinite(x)) throw ArgumentError("dual grid must be finite and nonnegative");

    if (cost.kind() == CostFunction::Kind::sampled)
        return conjugate_sampled(cost.grid(), cost.values(), dual_grid, GridSpacing::linear);

    const double x_max = *std::max_element(dual_grid.begin(), dual_grid.end());
    double x_min_pos = kInf;
    for (double x : dual_grid)
        if (x > 0.0) x_min_pos = std::min(x_min_pos, x);

    const double A = cost.branch_point();
    const double y_max = std::max(1.25 * cost.inverse_derivative(x_max), A);
    const double y_lo =
        (std::isfinite(x_min_pos) ? std::min(cost.inverse_derivative(x_min_pos), A) : A) / 10.0;

    std::vector<double> primal;
    GridSpacing spacing = GridSpacing::linear;
    if (y_max / y_lo > 100.0) {
        spacing = GridSpacing::logarithmic;
        const double decades = std::log10(y_max / y_lo);
        const auto count = static_cast<std::size_t>(std::ceil(decades * double(options.primal_points_per_decade))) + 1;
        primal.reserve(count + 1);
        primal.push_back(0.0);
        const auto tail = logspace(y_lo, y_max, count);
        primal.insert(primal.end(), tail.begin(), tail.end());
    } else {
        primal = linspace(0.0, y_max, options.linear_primal_points);
    }
    std::vector<double> values(primal.size());
    for (std::size_t i = 0; i < primal.size(); ++i) values[i] = cost(primal[i]);
    return conjugate_sampled(primal, values, dual_grid, spacing);
}

std::vector<GrowthRatio> check_growth_condition(const CostFunction& cost, std::span<const double> ks,
                                                const GrowthOptions& options) {
    const auto xs = logspace(options.x_min, options.x_max, options.points);
    std::vector<GrowthRatio> out;
    out.reserve(ks.size());
    for (double k : ks) {
        if (!(k > 0.0)) throw ArgumentError("growth ratio requires k > 0");
        GrowthRatio r;
        r.k = k;
        for (double x : xs) {
            const double base = cost(x);
            if (base > 0.0) r.n_cost = std::max(r.n_cost, cost(k * x) / base);
        }

        if (cost.has_closed_form_conjugate()) {
            for (double x : xs) {
                const double base = cost.conjugate_value(x);
                if (base > 0.0) r.n_conjugate = std::max(r.n_conjugate, cost.conjugate_value(k * x) / base);
            }
        } else {
            const double limit = cost.max_trusted_slope();
            std::vector<double> dual;
            for (double x : xs)
                if (std::max(x, k * x) < limit) dual.push_back(x);
            std::vector<double> scaled = dual;
            for (double& v : scaled) v *= k;
            if (!dual.empty()) {
                const auto base = legendre_transform(cost, dual);
                std::vector<double> sorted = scaled;
                const auto up = legendre_transform(cost, sorted);
                for (std::size_t i = 0; i < dual.size(); ++i)
                    if (base.values[i] > 0.0) r.n_conjugate = std::max(r.n_conjugate, up.values[i] / base.values[i]);
            }
        }
        r.n = std::max(r.n_cost, r.n_conjugate);
        r.finite = std::isfinite(r.n);
        out.push_back(r);
    }
    return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    if (n == 0) return {};
    if (n == 1) return {lo};
    std::vector<double> out(n);
    const double h = (hi - lo) / double(n - 1);
    for (std::size_t i = 0; i < n; ++i) out[i] = lo + h * double(i);
    out.back() = hi;
    return out;
}

std::vector<double> logspace(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0) || !(hi > lo)) throw ArgumentError("logspace requires 0 < lo < hi");
    auto out = linspace(std::log(lo), std::log(hi), n);
    for (double& v : out) v = std::exp(v);
    if (!out.empty()) {
        out.front() = lo;
        out.back() = hi;
    }
    return out;
}

} // namespace isocert
