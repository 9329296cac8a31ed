#pragma once

#include "isocert/checker.hpp"
#include "isocert/convex.hpp"
#include "isocert/measure.hpp"
#include "isocert/tester.hpp"

#include <json.hpp>

#include <cstdint>
#include <span>
#include <string>

namespace isocert {

using Json = nlohmann::ordered_json;

Json to_json(const TailModel& t);
Json to_json(const ConditionReport& r);
Json to_json(const DeltaSweep& s);
Json to_json(const TestReport& r);
Json to_json(const BetaReport& r);
Json to_json(const RestrictedReport& r);
Json to_json(const MixedBound& b);
Json to_json(const CheegerResult& c);
Json to_json(const BobkovGoetzeResult& b);

/// Serialize with every floating value printed as %.17g; NaN and infinities
/// become null. Key order is insertion order, so equal inputs give equal
/// bytes.
std::string dump_json(const Json& j, int indent = 2);

// CSV writers: header row, comma separated, LF line endings.
std::string conjugate_csv(const ConjugateTable& t);
std::string tilde_profile_csv(const IsoProfile& p);
std::string entropy_profile_csv(const EntropyProfile& p);
std::string test_rows_csv(const TestReport& r);
std::string beta_rows_csv(const BetaReport& r);

/// Summary of the measure-side quantities reported next to a profile table.
Json measure_summary(const Measure1D& mu);

/// The bundled example suite: the log(1 + x^2)-tail measure with the
/// iterated-log entropy, the e^{-|x|^alpha} endpoint conditions and tight
/// inequality estimates, the beta-entropy estimates and the Gaussian
/// log-Sobolev saturation rows. `seed` drives the random families.
Json run_example_suite(std::uint64_t seed);

} // namespace isocert
