#pragma once

#include <json.hpp>

#include "cdt/axioms.hpp"
#include "cdt/represent.hpp"
#include "cdt/updating.hpp"

namespace cdt::cli {

using nlohmann::json;

json to_json(const Rational& q);
Rational rational_from_json(const json& j);

json pair_json(const Universe& u, Pair p);
json pairs_json(const Universe& u, const std::vector<Pair>& pairs);

json a1_json(const Universe& u, const A1Verdict& v);
json cancellation_json(const PreferenceData& prefs, const CancellationVerdict& v);
json brute_force_json(const PreferenceData& prefs, const BruteForceVerdict& v);
json objective_json(const PreferenceData& prefs, const std::vector<std::size_t>& outcomes, const ObjectiveVerdict& v);
json closure_json(const Universe& u, const ClosureResult& c);

json representation_to_json(const Representation& rep);
/// Throws MalformedRepresentation on schema problems.
Representation representation_from_json(const json& j);

json conditioned_json(const Representation& rep, const ConditionedSet& c);
json update_check_json(const Universe& u, const UpdateCheck& c);

}  // namespace cdt::cli
