#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <stop_token>
#include <string>
#include <utility>
#include <vector>

#include "cdt/axioms.hpp"
#include "cdt/error.hpp"
#include "cdt/geometry.hpp"

namespace cdt {

/// Sparse distribution: (index, weight) entries with strictly increasing indices.
using Sparse = std::vector<std::pair<std::size_t, Rational>>;

/// A constructive SEU representation over finite states and outcomes.
struct Representation {
    std::vector<std::string> states;
    std::vector<std::string> outcomes;
    /// Primitive choice names, in the universe's declared order.
    std::vector<std::string> primitives;
    /// For each basis test (by canonical key), the sorted states where it holds.
    std::vector<std::pair<std::string, std::vector<std::size_t>>> test_interp;
    /// choice_interp[primitive][state]: distribution over outcomes.
    std::vector<std::vector<Sparse>> choice_interp;
    std::vector<Sparse> probabilities;
    std::vector<Vector> utilities;
    /// (utility index, probability index)
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    /// Free-form construction notes carried into reports.
    std::vector<std::string> notes;
};

/// The representation violates its structural invariants.
class MalformedRepresentation : public InputError {
public:
    using InputError::InputError;
};

/// A required axiom does not hold; carries the axiom name and, when available, a witness pair.
class AxiomFailure : public PreconditionError {
public:
    AxiomFailure(std::string axiom, std::optional<Pair> witness, const std::string& what)
        : PreconditionError(what), axiom_(std::move(axiom)), witness_(witness) {}

    const std::string& axiom() const { return axiom_; }
    const std::optional<Pair>& witness() const { return witness_; }

private:
    std::string axiom_;
    std::optional<Pair> witness_;
};

struct StateDependentRep {
    std::size_t dim = 0;
    Matrix utilities;
};

/// U = dual generators of the preference cone; a single zero utility when the cone is the
/// whole space. Throws PreconditionError when cancellation fails.
StateDependentRep represent_state_dependent(const PreferenceData& prefs, std::size_t ray_limit = kDefaultRayLimit,
                                            std::stop_token stop = {});

/// One utility representing a complete relation: u.d = 0 on indifferent pairs and u.d >= 1 on
/// strict pairs, then shifted to minimum 0 and scaled so the first strict pair's gap is 1.
/// Throws PreconditionError when A1 or cancellation fails.
StateDependentRep represent_single(const PreferenceData& prefs, std::stop_token stop = {});

enum class BootstrapShape {
    MultiUtility,      // states = worlds, P = {base}, one utility per ray
    MultiProbability,  // states = worlds x rays, one utility, one measure per ray
};

/// Uniform measure over the universe's consistent worlds.
Vector uniform_base(const Universe& u);

/// Throws InputError unless base is strictly positive on every consistent world and sums to 1.
Representation bootstrap_seu(const StateDependentRep& sdr, const PreferenceData& prefs, const Vector& base,
                             BootstrapShape shape);

/// Calibration failed: outcome `outcome` gets different weights c_o from two (ray, world) cells.
class CalibrationError : public PreconditionError {
public:
    struct Cell {
        std::size_t ray;
        std::size_t world;
        Rational c;
    };
    CalibrationError(std::size_t outcome, Cell low, Cell high, const std::string& what)
        : PreconditionError(what), outcome_(outcome), low_(std::move(low)), high_(std::move(high)) {}

    std::size_t outcome() const { return outcome_; }
    const Cell& low() const { return low_; }
    const Cell& high() const { return high_; }

private:
    std::size_t outcome_;
    Cell low_;
    Cell high_;
};

struct ObjectiveResult {
    Representation rep;
    ObjectiveVerdict axioms;
    /// Normalized rays, one per kept dual generator.
    Matrix rays;
    /// c_o for each outcome, aligned with the outcome list passed in.
    Vector calibration;
};

/// Representation whose outcome space is O (primitive indices), with a single utility u(o) = c_o.
/// States are worlds x primitives x normalized rays. Throws PreconditionError when cancellation
/// or A4 fails, and CalibrationError when c_o depends on the ray or world.
ObjectiveResult represent_objective(const PreferenceData& prefs, const std::vector<std::size_t>& outcomes,
                                    std::size_t mixture_bound = 2, std::size_t ray_limit = kDefaultRayLimit,
                                    std::stop_token stop = {});

/// Expected utility of every choice in the universe under each (u,p) pair of the representation.
/// Result [v][choice]. Throws MalformedRepresentation on structural problems.
std::vector<Vector> expected_utilities(const Representation& rep, const Universe& universe);

/// Pairs (a,b) with EU(a) >= EU(b) under every selected (u,p) pair; an empty selection yields all pairs.
std::vector<Pair> induced_order(const std::vector<Vector>& eu, const std::vector<std::size_t>& selected,
                                std::size_t n);

struct VerifyResult {
    bool ok = true;
    /// First ordered pair in name order where closure membership and the EU test disagree.
    std::optional<Pair> discrepancy;
    bool in_closure = false;
};

/// Structural checks (throws MalformedRepresentation) then the pairwise biconditional.
VerifyResult verify_representation(const Representation& rep, const PreferenceData& prefs,
                                   std::stop_token stop = {});

/// Consistent-world index of every state, derived from the test interpretation.
/// Throws MalformedRepresentation when a state's assignment violates the theory.
std::vector<std::size_t> state_world_indices(const Representation& rep, const Universe& universe);

/// Checks normalization, index ranges and theory respect without touching preferences.
void check_well_formed(const Representation& rep, const Universe& universe);

}  // namespace cdt
