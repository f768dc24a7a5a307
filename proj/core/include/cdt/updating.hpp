#pragma once

#include <cstddef>
#include <optional>
#include <stop_token>
#include <vector>

#include "cdt/axioms.hpp"
#include "cdt/represent.hpp"

namespace cdt {

/// Every measure gives the conditioning event probability zero.
class ConditioningUndefined : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

struct ConditionedSet {
    /// Renormalized survivors.
    std::vector<Sparse> survivors;
    /// Index in the original P of each survivor.
    std::vector<std::size_t> kept;
    std::size_t dropped = 0;
};

/// P|t: drops measures with p(pi(t)) = 0 and renormalizes the rest. Throws ConditioningUndefined
/// when nothing survives.
ConditionedSet condition_on_test(const Representation& rep, const TestFormula& t, const Universe& universe);

/// The representation with P replaced by P|t and V restricted to surviving measures.
Representation conditioned_representation(const Representation& rep, const TestFormula& t, const Universe& universe);

/// Closure of the declared pairs plus (a,b).
ClosureResult refine(const PreferenceData& prefs, Pair pair, std::stop_token stop = {});

struct UpdateCheck {
    bool agree = true;
    /// First ordered pair in name order on which the two paths differ.
    std::optional<Pair> discrepancy;
    /// Order from the syntactic path.
    std::vector<Pair> syntactic;
    /// Order induced by the conditioned representation.
    std::vector<Pair> semantic;
};

/// Path 1: contingent comparison under t. Path 2: condition the canonical multi-probability
/// representation on t and read off the induced order.
UpdateCheck verify_update_test(const PreferenceData& prefs, const TestFormula& t, std::stop_token stop = {});

/// Path 1: refine by (a,b). Path 2: keep exactly the measures whose ray weakly prefers a to b.
/// The canonical ray set here is the dual of the current cone together with the dual of the
/// refined cone, so the surviving rays generate the refined dual exactly.
UpdateCheck verify_update_pair(const PreferenceData& prefs, Pair pair, std::stop_token stop = {});

}  // namespace cdt
