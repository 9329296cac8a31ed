#pragma once

#include "isocert/entropy.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace isocert {

/// Potential V of a density proportional to e^{-V}. Points where V throws
/// DomainError or is not finite carry zero density.
struct Potential {
    std::function<double(double)> V;
    std::string name;
    /// V known to be convex; otherwise convexity is checked on the grid.
    bool convex = false;

    static Potential gauss();               ///< x^2 / 2
    static Potential exp();                 ///< |x|
    static Potential exp_power(double alpha);  ///< |x|^alpha
    static Potential loglog();              ///< |x| log(1 + x^2)
};

struct MeasureOptions {
    std::optional<double> lo;  ///< explicit support bounds; density is cut there
    std::optional<double> hi;
    std::size_t grid_points = 16385;
    /// Automatic truncation where the density falls below e^{-drop} times
    /// its peak.
    double log_density_drop = 36.841361487904734;  // log(1e16)
};

/// Probability measure e^{-V(x)} dx / Z.
///
/// The resolved interval is split into uniform cells; cell masses come from
/// 8-point Gauss-Legendre rules. Left masses are accumulated from the left
/// and right masses from the right so that both tails keep full relative
/// precision. Past an automatic cut point the density is continued by the
/// exponential tail matching V and V' at the cut; explicit bounds cut the
/// measure there instead.
class Measure1D {
public:
    /// Throws ConstructionError when the density does not decay (no
    /// truncation point within |x| <= 1e8) or too much mass lies outside.
    static Measure1D build(Potential potential, const MeasureOptions& options = {});

    const std::string& name() const noexcept { return potential_.name; }
    double lo() const noexcept { return x_.front(); }
    double hi() const noexcept { return x_.back(); }
    const std::vector<double>& grid() const noexcept { return x_; }
    /// Trapezoid weights of the density at the grid nodes, summing to 1.
    const std::vector<double>& node_weights() const noexcept { return w_; }
    double cell_width() const noexcept { return h_; }
    /// log Z with Z = int e^{-V}.
    double log_Z() const noexcept { return log_Z_; }
    bool log_concave() const noexcept { return log_concave_; }
    double median() const noexcept { return median_; }
    /// Centre used for balls B_r: 0 when it lies inside the support,
    /// otherwise the median.
    double center() const noexcept { return center_; }
    /// Mass carried by the exponential tails past automatic cuts.
    double outside_mass() const noexcept { return outside_mass_; }

    double potential(double x) const;
    double log_density(double x) const;
    double density(double x) const { return std::exp(log_density(x)); }
    /// mu((-inf, x]).
    double cdf(double x) const;
    /// mu((x, inf)).
    double sf(double x) const;
    /// x with cdf(x) = p, p in [0, 1].
    double quantile(double p) const;
    /// x with sf(x) = q, q in [0, 1].
    double upper_quantile(double q) const;
    /// mu(|x - center| > r).
    double outside_ball(double r) const;

private:
    double cell_integral(std::size_t cell, double a, double b) const;
    double invert(double target, bool from_left) const;

    Potential potential_;
    std::vector<double> x_;
    std::vector<double> cell_mass_;  // normalized
    std::vector<double> left_;       // mass of (-inf, x_i]
    std::vector<double> right_;      // mass of (x_i, inf)
    std::vector<double> w_;
    double h_ = 0.0;
    double v_min_ = 0.0;
    double log_Z_ = 0.0;
    double median_ = 0.0;
    double center_ = 0.0;
    double outside_mass_ = 0.0;
    double tail_lo_ = 0.0;  // normalized mass modelled past each automatic cut
    double tail_hi_ = 0.0;
    double rate_lo_ = 0.0;
    double rate_hi_ = 0.0;
    bool bounded_lo_ = false;
    bool bounded_hi_ = false;
    bool log_concave_ = false;
};

/// Half-line isoperimetric profile: u(t) and v(t) with
/// mu((-inf, u)) = mu([v, inf)) = t and the boundary density
/// min(rho(u), rho(v)).
struct IsoProfile {
    std::vector<double> t;
    std::vector<double> u;
    std::vector<double> v;
    std::vector<double> tilde_I;
};

/// Throws ArgumentError for t outside (0, 1/2].
IsoProfile tilde_profile(const Measure1D& mu, std::span<const double> t_grid);
/// min(rho(quantile(t)), rho(upper_quantile(t))) for t in (0, 1).
double tilde_I(const Measure1D& mu, double t);

struct EntropyProfile {
    std::vector<double> r;
    std::vector<double> s;     ///< mu(|x - center| > r)
    std::vector<double> value; ///< I_F(r) = s F(1/s) / I(s)
    std::vector<bool> empty;   ///< s underflowed to 0; value set to 0
};

EntropyProfile entropy_profile(const Measure1D& mu, const EntropyFunction& F, std::span<const double> r_grid);

struct CheegerResult {
    double lambda = 0.0;
    double argmax_t = 0.0;
};

/// sup over t_grid of min(t, 1-t) / I(t).
CheegerResult cheeger_constant(const Measure1D& mu, std::span<const double> t_grid);
/// Same over a default grid of 2000 log-spaced points in [1e-8, 1/2].
CheegerResult cheeger_constant(const Measure1D& mu);

enum class Side { left, right };

struct BobkovGoetzeResult {
    double log_value = 0.0;  ///< log of the supremum
    double value = 0.0;      ///< exp(log_value), may be +inf
    double argmax = 0.0;
    bool divergent = false;  ///< still growing at the truncation boundary
};

/// sup over x beyond the median of S(x) log(1/S(x)) int_m^x dx / rho, where
/// S is the tail mass on that side. The integral of 1/rho is accumulated in
/// log space.
BobkovGoetzeResult bobkov_goetze(const Measure1D& mu, Side side);

struct BobkovBoundResult {
    std::vector<double> t;
    std::vector<double> r;
    std::vector<double> margin;
    double min_margin = 0.0;
};

/// For each t: A = [v(t), inf), r with mu(|x - center| > r) = t, and
/// margin = 2 r rho(v) - [t log(1/t) + (1-t) log(1/(1-t)) + log(1 - t)].
/// Throws ArgumentError for measures that are not log-concave.
BobkovBoundResult bobkov_bound_check(const Measure1D& mu, std::span<const double> t_grid);

/// Values of a function at the nodes of a measure's grid, with derivative
/// samples.
struct SampledFunction {
    std::vector<double> values;
    std::vector<double> derivative;
};

/// Central differences (one-sided at the ends).
std::vector<double> finite_difference(std::span<const double> grid, std::span<const double> values);

/// Monotone rearrangement in |x - center|: f~(x) = g(|x - center|) with the
/// same law as f. Throws DomainError for negative values.
SampledFunction rearrange(const Measure1D& mu, const SampledFunction& f);

/// Kolmogorov distance between the laws of two node-valued functions under
/// the node weights of mu.
double kolmogorov_distance(const Measure1D& mu, std::span<const double> a, std::span<const double> b);

/// Largest mass carried by a group of nodes with equal |x - center|; the
/// resolution of rearrangement on this grid.
double rearrangement_resolution(const Measure1D& mu);

struct GrowthWindow {
    double R = 0.0;
    double sup_ratio = 0.0;  ///< sup over r in [R, 2R] of I_log(r) / r
    double argmax = 0.0;
};

/// Sampled suprema of I_log(r) / r over [R, 2R] for each R.
std::vector<GrowthWindow> log_profile_growth(const Measure1D& mu, std::span<const double> Rs,
                                             std::size_t points_per_window = 401);

/// Largest k with I(t) >= k t phi(1/t)^{1 - 1/alpha} on t_grid.
double fit_profile_lower_bound(const Measure1D& mu, const EntropyBase& phi, double alpha,
                               std::span<const double> t_grid);

} // namespace isocert
