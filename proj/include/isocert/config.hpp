#pragma once

#include "isocert/convex.hpp"
#include "isocert/entropy.hpp"
#include "isocert/measure.hpp"
#include "isocert/tester.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace isocert {

// Text specifications accepted by the command line and the C API. Each
// builtin takes either `name:arg:arg` or `name(arg, arg)`; expressions are
// written `expr:<text>`. Errors raise ArgumentError (unknown names, bad
// numbers) or ParseError (expression syntax).

/// gauss | exp | exp_power:<alpha> | loglog | expr:<V(x)>
Potential parse_measure_spec(std::string_view text);

/// log | iterlog | F_tau:<phi>:<tau> | expr:<phi(x)>, where <phi> is log,
/// iterlog or expr:<text>. iterlog is the log^2(log y) profile.
EntropyFunction parse_entropy_spec(std::string_view text);

/// A cost with the multiplier delta applied in the integrability condition.
struct CostSpec {
    CostFunction cost = CostFunction::quadratic();
    double delta = 1.0;
    std::string text;
};

/// quadratic[:<delta>] | c:<A>:<alpha> | expr:<c(x)>. Expression costs are
/// sampled on [0, 50] with 5001 points and must come out convex.
CostSpec parse_cost_spec(std::string_view text);

/// exponential:<l1>,<l2>,... | bump:<a1>,... | linear:<e1>,... |
/// random:<count> | radial:<gamma>:<l1>,... | constant:<v1>,... |
/// expr:<f(x)>. `seed` feeds the random family; `floor` is added to the
/// linear, random and expression families.
TestFamily parse_family_spec(std::string_view text, std::uint64_t seed = 0, double floor = 1e-3);

/// "lo:hi:n" -> {lo, hi, n}.
struct GridSpec {
    double lo = 0.0;
    double hi = 0.0;
    std::size_t n = 0;
};
GridSpec parse_grid_spec(std::string_view text);

} // namespace isocert
