#pragma once

#include "isocert/convex.hpp"
#include "isocert/entropy.hpp"
#include "isocert/measure.hpp"

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace isocert {

enum class Verdict { finite, divergent_likely, inconclusive };
const char* to_string(Verdict v) noexcept;

enum class ProfileChoice {
    tilde,              ///< half-line boundary density of the measure
    lower_bound_model,  ///< k t phi(1/t)^{1 - 1/alpha} with phi = log
};

/// Integrability question: is int_0^{1/K} Phi(delta c(t F(1/t) / I(t))) dt finite?
struct ConditionSpec {
    std::shared_ptr<const Measure1D> measure;
    EntropyFunction F = EntropyFunction::log();
    CostFunction cost = CostFunction::quadratic();
    double delta = 0.5;
    double K = 2.0;
    double t_min = 1e-12;
    ProfileChoice profile = ProfileChoice::tilde;
    double model_k = 1.0;
    double model_alpha = 2.0;
    std::size_t nodes_per_decade = 256;  ///< Simpson intervals per decade of t
};

struct DecadeSum {
    double t_lo = 0.0;
    double t_hi = 0.0;
    double partial_sum = 0.0;      ///< may be +inf
    double log_partial_sum = 0.0;
};

/// Fit of log h(t) ~ c + b log^p(1/t) over the deep tail.
struct TailModel {
    double p = 0.0;
    double b = 0.0;
    double c = 0.0;
    double rms = 0.0;
    bool power_law = false;  ///< |p - 1| <= 0.15; refitted with p = 1
    bool integrable = false;
};

struct ConditionReport {
    Verdict verdict = Verdict::inconclusive;
    double integral_estimate = 0.0;  ///< over [t_min, 1/K]; may be +inf
    double log_integral_estimate = 0.0;
    double delta = 0.0;
    double K = 0.0;
    double t_min = 0.0;
    TailModel tail;
    std::vector<DecadeSum> decades;  ///< ordered from 1/K towards t_min
    bool geometric_decay = false;    ///< last three decade sums shrink by <= 0.95
    bool nondecreasing = false;      ///< last three decade sums do not shrink
    bool phi_truncated = false;
    double truncated_at_t = 0.0;
    bool zero_profile = false;       ///< I(t) = 0 met: integrand infinite
    std::string note;
};

/// Throws ArgumentError for delta <= 0, K <= 1, t_min >= 1/K or a missing
/// measure with the tilde profile.
ConditionReport check_condition(const ConditionSpec& spec);
/// Same with a prebuilt Phi for spec.F.
ConditionReport check_condition(const ConditionSpec& spec, const PhiConjugate& Phi);

struct DeltaSweep {
    std::vector<ConditionReport> reports;  ///< one per requested delta, same order
    double largest_finite_delta = 0.0;     ///< 0 when no delta gave FINITE
};

/// Default deltas {1, 1/2, 1/4, 1/8, 1/16}.
DeltaSweep delta_sweep(const ConditionSpec& spec, std::vector<double> deltas = {1.0, 0.5, 0.25, 0.125, 0.0625});

/// The two integrability conditions behind the tight modified inequality for
/// mu_alpha = e^{-|x|^alpha}: F_tau against the cost whose conjugate is
/// c_{A, alpha tau / (alpha - 1)}, and F_{2(1 - 1/alpha)} against x^2.
struct ExpPowerReports {
    ConditionReport modified;
    ConditionReport quadratic;
};

/// Requires 1 < alpha <= 2 and 2(1 - 1/alpha) <= tau <= 1.
ExpPowerReports check_exp_power(double alpha, double tau, double A, double delta, double K,
                                std::shared_ptr<const Measure1D> measure = nullptr);

struct GrowthConditionResult {
    double C = 0.0;            ///< inf of g(r) / (r phi(e^{g(r)})^{1 - 1/alpha}) over sampled r
    double tail_ratio = 0.0;   ///< ratio at the largest sampled r
    double log_normalizer = 0.0;  ///< log int e^{g(|x|)} dmu subtracted from g
    double R_half = 0.0;
    bool bounded_away = false;  ///< last decade min >= half the previous decade min > 0
};

/// Growth check for an exponential moment e^{g(|x|)}; g is shifted so that
/// int e^{g(|x - center|)} dmu = 1. Throws ConstructionError when the moment
/// does not converge on the measure's grid.
GrowthConditionResult verify_growth_condition(const Measure1D& mu, const std::function<double(double)>& g,
                                              const EntropyBase& phi, double alpha, double r_max = 1e4);

} // namespace isocert
