#pragma once

#include "isocert/convex.hpp"
#include "isocert/entropy.hpp"
#include "isocert/expr.hpp"
#include "isocert/measure.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace isocert {

/// A parameterized family of strictly positive test functions.
class TestFamily {
public:
    enum class Kind { exponential, bump, shifted_linear, random_smooth, radial, expression, constant };

    /// e^{lambda x / 2}.
    static TestFamily exponential(std::vector<double> lambdas);
    /// 1 + a e^{-x^2 / 2}.
    static TestFamily bump(std::vector<double> amplitudes);
    /// (1 + eps x)_+ + floor.
    static TestFamily shifted_linear(std::vector<double> slopes, double floor = 1e-3);
    /// floor + exp(sum_k a_k cos(w_k x + phi_k)) with coefficients drawn
    /// from a seeded generator; member i uses stream (seed, i).
    static TestFamily random_smooth(std::size_t count, std::uint64_t seed = 0, double floor = 1e-3);
    /// exp(lambda (1 + x^2)^{gamma / 2}): a smoothed e^{lambda |x|^gamma}.
    static TestFamily radial(std::vector<double> lambdas, double gamma);
    /// expr(x) + floor for each shift in `shifts` (expr(x) + shift + floor).
    static TestFamily expression(Expr e, std::string text, std::vector<double> shifts = {0.0}, double floor = 0.0);
    /// Constants.
    static TestFamily constant(std::vector<double> values);

    Kind kind() const noexcept { return kind_; }
    std::size_t size() const noexcept { return params_.size(); }
    double parameter(std::size_t i) const { return params_.at(i); }
    std::string label(std::size_t i) const;
    std::string describe() const;

    /// The same family with twice as many members: parameter grids get
    /// midpoints inserted, random families draw more members.
    TestFamily enriched() const;

    /// Member i sampled on the measure's grid with its derivative.
    SampledFunction member(const Measure1D& mu, std::size_t i) const;

private:
    Kind kind_ = Kind::constant;
    std::vector<double> params_;
    double floor_ = 0.0;
    double gamma_ = 1.0;
    std::uint64_t seed_ = 0;
    std::optional<Expr> expr_;
    std::string text_;
};

/// Integrals against the measure's node weights (trapezoid rule).
double second_moment(const Measure1D& mu, const SampledFunction& f);
double mean(const Measure1D& mu, const SampledFunction& f);
double variance(const Measure1D& mu, const SampledFunction& f);
double gradient_energy(const Measure1D& mu, const SampledFunction& f);
/// int f^2 F(f^2 / mu(f^2)); ArgumentError when mu(f^2) = 0.
double entropy_functional(const Measure1D& mu, const SampledFunction& f, const EntropyFunction& F);
/// int f^2 c^*(|f'| / f); DomainError when f touches 0.
double modified_energy(const Measure1D& mu, const SampledFunction& f, const CostFunction& cost);
/// Same restricted to {f^2 >= K mu(f^2)}; crossing cells count by the
/// linearly interpolated fraction.
double restricted_modified_energy(const Measure1D& mu, const SampledFunction& f, const CostFunction& cost, double K);
/// int (f - mu f)^2 c^*(|f'| / |f - mu f|).
double centered_modified_energy(const Measure1D& mu, const SampledFunction& f, const CostFunction& cost);
/// inf{t : mu(f > t) <= 1/2}.
double median_value(const Measure1D& mu, const SampledFunction& f);
/// int (f - m_f)^2.
double median_energy(const Measure1D& mu, const SampledFunction& f);

/// [(4(K+1)^2 + 2) + (sqrt(K) + 1)^2] F'(1).
double step_one_constant(double K, const EntropyFunction& F);

struct TestRow {
    std::string label;
    double parameter = 0.0;
    double entropy_F = 0.0;
    double classical_entropy = 0.0;
    double mass = 0.0;           ///< mu(f^2)
    double variance = 0.0;
    double grad_energy = 0.0;
    double modified_energy = 0.0;
    double restricted_energy = 0.0;
    double centered_energy = 0.0;
    double median_energy = 0.0;
    double ratio = 0.0;          ///< entropy_F / modified_energy (0 when skipped)
    double b_hat = 0.0;          ///< smallest B for the defective form with constant 4
    double b_hat_variance = 0.0; ///< same for the variance form
    double step_one = 0.0;       ///< truncated part I_1
    double step_one_margin = 0.0;
    bool skipped = false;        ///< both sides vanish
    bool saturated = false;      ///< ratio within 1e-3 of the family supremum
};

struct TestReport {
    std::string measure;
    std::string entropy;
    std::string cost;
    std::string family;
    double K = 0.0;
    std::vector<TestRow> rows;
    double C_hat = 0.0;  ///< sup of ratio over the family (a lower bound)
    double B_hat = 0.0;  ///< sup of b_hat
    double B_hat_variance = 0.0;
    double min_step_one_margin = 0.0;
};

/// Defective inequality: entropy_F <= 4 * restricted energy + B mu(f^2), plus
/// its variance form and the explicit bound on the truncated part I_1.
TestReport verify_defective_inequality(const Measure1D& mu, const EntropyFunction& F, const CostFunction& cost,
                                       double K, const TestFamily& family);

/// Tight modified inequality on e^{-|x|^alpha}: entropy of F_tau against
/// int f^2 c_{A, alpha tau / (alpha - 1)}(|f'| / f). Requires
/// 2(1 - 1/alpha) <= tau <= 1; ratio rows for 0/0 members are skipped.
TestReport verify_tight_modified_inequality(const Measure1D& mu, double alpha, double tau, double A,
                                            const TestFamily& family);

struct BetaRow {
    std::string label;
    double entropy = 0.0;   ///< Ent |f|^beta
    double gradient = 0.0;  ///< int |f'|^beta
    double variance = 0.0;  ///< Var |f|^{beta / 2}
    double ratio = 0.0;
    bool skipped = false;
};

struct BetaReport {
    double alpha = 0.0;
    double beta = 0.0;
    double epsilon = 0.0;  ///< exponential moment e^{eps |x|^alpha} found finite
    std::vector<BetaRow> rows;
    double C_hat = 0.0;
};

/// Ent |f|^beta <= C [int |f'|^beta + Var |f|^{beta/2}], beta = alpha/(alpha-1).
/// Refuses measures that are not log-concave or lack an exponential moment.
BetaReport verify_beta_entropy_inequality(const Measure1D& mu, double alpha, const TestFamily& family);

struct RestrictedRow {
    std::string label;
    double full = 0.0;        ///< int f^2 F(f^2 / mu f^2)
    double restricted = 0.0;  ///< same over {f^2 >= K mu f^2}
    double complement = 0.0;  ///< same over the complement
    double excess = 0.0;      ///< int (f - sqrt(K mu f^2))_+^2 F(f^2 / mu f^2)
    double variance = 0.0;
    double margin_first = 0.0;   ///< C Var + full - restricted
    double b_min = 0.0;          ///< smallest B with full <= B Var + 2 excess
};

struct RestrictedReport {
    double K = 0.0;
    double C = 0.0;  ///< step_one_constant(K, F)
    std::vector<RestrictedRow> rows;
    double min_margin_first = 0.0;
    double B_min = 0.0;
};

RestrictedReport check_restricted_entropy_bounds(const Measure1D& mu, const EntropyFunction& F, double K,
                                                 const TestFamily& family);

struct MixedBound {
    double lhs = 0.0;  ///< int f^2 F(g^2 / mu g^2)
    double rhs = 0.0;  ///< 2 int f^2 F(f^2 / mu f^2) + C mu(f^2)
    double C = 0.0;    ///< 2 int Phi(u / 2) - 1, u = F(h) + h F'(h) - 1, h = g^2 / mu g^2
    double margin = 0.0;
};

MixedBound check_mixed_entropy_bound(const Measure1D& mu, const EntropyFunction& F, const PhiConjugate& Phi,
                                     const SampledFunction& f, const SampledFunction& g);

} // namespace isocert
