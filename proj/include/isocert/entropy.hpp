#pragma once

#include "isocert/convex.hpp"
#include "isocert/expr.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace isocert {

/// Base profile phi on (0, inf). Everything is evaluated in the log variable
/// u = log y so tails far past double range stay representable.
class EntropyBase {
public:
    enum class Kind { log, iterated_log_square, expression };

    static EntropyBase log();
    /// log y up to y = e^e, then (e/2)(log^2(log y) + 1). C^1 and concave;
    /// grows like log^2(log y).
    static EntropyBase iterated_log_square();
    /// phi(y) given as an expression in x.
    static EntropyBase expression(Expr e, std::string text);

    Kind kind() const noexcept { return kind_; }
    /// phi(e^u).
    double value_at_log(double u) const;
    /// y phi'(y) at y = e^u.
    double elasticity_at_log(double u) const;
    double operator()(double y) const;
    std::string describe() const;

private:
    Kind kind_ = Kind::log;
    std::optional<Expr> expr_;
    std::string text_;
};

/// Concave perturbation applied on top of an entropy:
/// psi(x) = x for x <= 1, (beta/2)([1 + tau(x - 1)]^{2/(tau beta)} - 1) + 1 above.
double psi_tau_beta(double tau, double beta, double x);
/// d psi / dx.
double psi_tau_beta_derivative(double tau, double beta, double x);

/// Entropy profile F built from a base phi:
/// F_tau(x) = phi(x) for x <= x0 and (phi(x)^tau - 1)/tau + 1 above, where
/// phi(x0) = 1. Optionally composed with psi_{tau', beta}.
class EntropyFunction {
public:
    /// Throws ArgumentError for tau outside (0, 1] and ConstructionError when
    /// phi(x) = 1 has no root in [1, 1e9].
    static EntropyFunction make(EntropyBase base, double tau = 1.0);
    static EntropyFunction log() { return make(EntropyBase::log()); }

    /// Same entropy composed with psi_{psi_tau, beta}; requires
    /// psi_tau >= 2/beta.
    EntropyFunction with_psi(double psi_tau, double beta) const;

    const EntropyBase& base() const noexcept { return base_; }
    double tau() const noexcept { return tau_; }
    double x0() const noexcept { return x0_; }
    bool has_psi() const noexcept { return psi_beta_ > 0.0; }
    double psi_tau() const noexcept { return psi_tau_; }
    double psi_beta() const noexcept { return psi_beta_; }

    /// F(x); throws DomainError for x <= 0.
    double operator()(double x) const;
    /// F(e^u).
    double value_at_log(double u) const;
    /// x F'(x) at x = e^u.
    double elasticity_at_log(double u) const;
    double derivative(double x) const;
    /// F^{-1}(v) by bisection in log space; +inf when v exceeds F(e^700).
    double inverse(double v) const;

    std::string describe() const;

private:
    EntropyBase base_;
    double tau_ = 1.0;
    double x0_ = 1.0;
    double log_x0_ = 0.0;
    double psi_tau_ = 0.0;
    double psi_beta_ = 0.0;
};

/// Phi(x) = sup_y (x y - (y F(y) - y)).
///
/// Built once on the primal grid {0} U logspace(1e-12, 1e12). Dual points
/// whose maximizer would lie past 1e12 are solved from the stationarity
/// equation F(y) + y F'(y) - 1 = x in log space, so log Phi stays available
/// long after Phi itself overflows.
class PhiConjugate {
public:
    explicit PhiConjugate(const EntropyFunction& F, std::size_t points_per_decade = 1000);

    struct Value {
        double log_value = 0.0;
        /// Stationarity solve failed: the maximizer is beyond y = e^{1e15}.
        bool truncated = false;
        /// Maximizer was found past the tabulated grid.
        bool beyond_grid = false;
    };

    Value log_eval(double x) const;
    /// exp(log_eval(x)); +inf on overflow.
    double operator()(double x) const;

    /// Table on a dual grid built from the tabulated primal (truncation
    /// flags mark maximizers on the last primal node).
    ConjugateTable table(std::span<const double> dual_grid) const;

    const std::vector<double>& primal_grid() const noexcept { return grid_; }

private:
    Value stationary(double x) const;
    double polished(double x, std::size_t j) const;

    EntropyFunction F_;
    std::vector<double> grid_;
    std::vector<double> values_;
    std::vector<double> slopes_;
    bool convex_ = true;
};

struct AssumptionReport {
    bool a1 = false;  ///< F(1) = 0, nondecreasing, concave
    bool a2 = false;  ///< y F(y) -> 0 as y -> 0
    bool a3 = false;  ///< y F(y) convex on [0, 1 + Delta] for some Delta > 0
    bool a4 = false;  ///< y F'(y) nonincreasing and <= 1 on [y0, inf)
    double F_at_1 = 0.0;
    double delta = 0.0;  ///< largest sampled Delta <= 9
    double y0 = 0.0;     ///< smallest sampled y0 >= 1 for A4
    /// First failing sample per assumption (NaN when passing).
    double a1_witness = 0.0;
    double a2_witness = 0.0;
    double a3_witness = 0.0;
    double a4_witness = 0.0;
};

/// Sampled checks of A1-A4; a pass means no violation on the sample grid.
AssumptionReport check_assumptions(const EntropyFunction& F);

struct PhiPowerBound {
    double delta = 0.0;
    double T = 0.0;            ///< smallest sampled y from which the margin stays >= 0
    double min_margin = 0.0;   ///< min over sampled y >= T of y^{2 delta} - Phi(delta F(y))
    bool found = false;        ///< some T in the range works
    bool truncated = false;    ///< Phi truncated inside the sweep
};

/// Sweep y^{2 delta} - Phi(delta F(y)) over log-spaced y in [y_lo, y_hi].
PhiPowerBound check_phi_power_bound(const EntropyFunction& F, const PhiConjugate& Phi, double delta,
                                    double y_lo = 1.0, double y_hi = 1e6, std::size_t points = 2001);

} // namespace isocert
