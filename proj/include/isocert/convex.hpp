#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace isocert {

enum class GridSpacing { linear, logarithmic };

/// Result of evaluating a cost. `extrapolated` is set when a sampled cost was
/// evaluated past its last abscissa (final chord slope continuation).
struct CostValue {
    double value = 0.0;
    bool extrapolated = false;
};

/// Convex superlinear cost on the nonnegative half-line.
///
/// Two kinds are supported: the closed-form family c_{A,alpha} (quadratic up
/// to the branch point A, power alpha beyond it, glued C^1 at A) and a
/// tabulated convex function with linear interpolation. Every cost carries a
/// positive multiplier `scale`, so the quadratic x^2 is c_{1,2} with scale 2.
class CostFunction {
public:
    enum class Kind { closed_form, sampled };

    /// c_{A,alpha}. Requires A > 0 and alpha > 1.
    static CostFunction closed_form(double A, double alpha, double scale = 1.0);
    /// c(x) = x^2.
    static CostFunction quadratic();
    /// Tabulated cost; grid strictly increasing, starting at 0 with value 0.
    static CostFunction sampled(std::vector<double> grid, std::vector<double> values);

    Kind kind() const noexcept { return kind_; }
    double branch_point() const noexcept { return A_; }
    double exponent() const noexcept { return alpha_; }
    double scale() const noexcept { return scale_; }
    const std::vector<double>& grid() const noexcept { return grid_; }
    const std::vector<double>& values() const noexcept { return values_; }

    /// Throws DomainError for negative x.
    CostValue eval(double x) const;
    double operator()(double x) const { return eval(x).value; }
    /// Right derivative (chord slope for the sampled kind).
    double derivative(double x) const;
    /// Smallest y with derivative(y) >= slope; the primal maximizer of the
    /// conjugate at `slope`. Sampled costs return the grid end when the slope
    /// exceeds the last chord.
    double inverse_derivative(double slope) const;

    /// Closed-form conjugate available (closed_form kind only):
    /// (s c_{A,alpha})^*(x) = s c_{A,beta}(x / s) with 1/alpha + 1/beta = 1.
    bool has_closed_form_conjugate() const noexcept { return kind_ == Kind::closed_form; }
    double conjugate_value(double x) const;
    /// The conjugate as a closed-form cost (requires scale == 1).
    CostFunction conjugate() const;

    /// Last chord slope of a sampled cost; +inf for the closed form.
    double max_trusted_slope() const noexcept;

    std::string describe() const;

private:
    Kind kind_ = Kind::closed_form;
    double A_ = 1.0;
    double alpha_ = 2.0;
    double scale_ = 1.0;
    std::vector<double> grid_;
    std::vector<double> values_;
};

/// Evaluate c_{A,alpha}(x) for x >= 0 without constructing a CostFunction.
double cost_c_A_alpha(double A, double alpha, double x);

/// Hoelder conjugate exponent beta with 1/alpha + 1/beta = 1.
double conjugate_exponent(double alpha);

/// Tabulated Legendre-Fenchel conjugate f^*(x) = sup_y (x y - f(y)).
struct ConjugateTable {
    std::vector<double> grid;     ///< dual abscissae
    std::vector<double> values;   ///< conjugate ordinates
    std::vector<double> argmax;   ///< primal grid node attaining the discrete sup
    std::vector<bool> truncated;  ///< maximizer sits on the last primal node
    GridSpacing primal_spacing = GridSpacing::linear;
    bool full_scan = false;       ///< convexity diagnostic failed
    double trusted_slope = 0.0;   ///< last primal chord slope

    bool any_truncated() const;
    /// Linear interpolation inside the table; throws ArgumentError outside.
    double interpolate(double x) const;
};

/// Options for conjugating a closed-form cost.
struct LegendreOptions {
    std::size_t primal_points_per_decade = 2000;
    std::size_t linear_primal_points = 20001;
};

/// Discrete conjugate of a sampled convex function. `primal_grid` must be
/// strictly increasing, `dual_grid` nondecreasing. Uses the monotone argmax
/// sweep, falling back to a full scan when the convexity diagnostic fails,
/// followed by a three-point parabolic refinement around the discrete argmax.
ConjugateTable conjugate_sampled(std::span<const double> primal_grid,
                                 std::span<const double> primal_values,
                                 std::span<const double> dual_grid,
                                 GridSpacing spacing = GridSpacing::linear);

/// Value of sup_j (x y_j - f_j) near the discrete maximizer `j`, refined by
/// the vertex of the parabola through the neighbouring nodes (clamped to
/// them). Never smaller than the discrete sup at `j`.
double refined_sup(std::span<const double> grid, std::span<const double> values, double x, std::size_t j);

/// Conjugate of a cost over `dual_grid`. Closed-form costs get a primal grid
/// sized to cover every requested slope (log-spaced when it spans more than
/// two decades); sampled costs are conjugated on their own grid.
ConjugateTable legendre_transform(const CostFunction& cost, std::span<const double> dual_grid,
                                  const LegendreOptions& options = {});

/// True when the sampled values are convex up to a perturbation of
/// 1e-12 * (1 + max|values|) per ordinate.
bool is_discretely_convex(std::span<const double> grid, std::span<const double> values);

/// Sampled growth-condition diagnostics for c(kx) <= n(k) c(x) and the same
/// bound for the conjugate. The values are suprema over the sampled range and
/// therefore lower bounds for the true n(k).
struct GrowthRatio {
    double k = 0.0;
    double n_cost = 0.0;
    double n_conjugate = 0.0;
    double n = 0.0;  ///< max(n_cost, n_conjugate)
    bool finite = false;
};

struct GrowthOptions {
    double x_min = 1e-3;
    double x_max = 1e3;
    std::size_t points = 4001;  ///< log-spaced
};

std::vector<GrowthRatio> check_growth_condition(const CostFunction& cost, std::span<const double> ks,
                                                const GrowthOptions& options = {});

/// Evenly spaced grid [lo, hi] with n points.
std::vector<double> linspace(double lo, double hi, std::size_t n);
/// Log-spaced grid [lo, hi] with n points; requires 0 < lo < hi.
std::vector<double> logspace(double lo, double hi, std::size_t n);

} // namespace isocert
