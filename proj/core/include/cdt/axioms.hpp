#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <stop_token>
#include <string>
#include <utility>
#include <vector>

#include "cdt/choice.hpp"
#include "cdt/geometry.hpp"
#include "cdt/logic.hpp"

namespace cdt {

/// A compiled finite decision problem: consistent worlds, primitives and the named choices C.
/// Choices are kept sorted by name; "name order" everywhere means index order here.
struct Universe {
    std::shared_ptr<const Basis> basis;
    Theory theory;
    std::vector<World> worlds;
    std::vector<std::string> primitives;
    std::vector<std::string> names;
    std::vector<ChoiceProgram> programs;
    /// Flattened tables f_a, index = world * |A0| + primitive.
    std::vector<Vector> vectors;

    std::size_t dim() const { return worlds.size() * primitives.size(); }
    std::size_t size() const { return names.size(); }
    std::size_t index_of(const std::string& name) const;
    std::size_t coord(std::size_t world, std::size_t primitive) const { return world * primitives.size() + primitive; }
    /// A when every program is mixture-free, A+ otherwise.
    Language language() const;
    /// Table of a single primitive choice (a point mass at every world).
    Vector primitive_vector(std::size_t primitive) const;
};

Universe make_universe(std::shared_ptr<const Basis> basis, Theory theory, std::vector<std::string> primitives,
                       const std::map<std::string, ChoiceProgram>& choices,
                       std::size_t world_limit = kDefaultBasisLimit);

using Pair = std::pair<std::size_t, std::size_t>;

/// Declared weak preferences a >= b over a universe, stored sorted and duplicate-free.
struct PreferenceData {
    std::shared_ptr<const Universe> universe;
    std::vector<Pair> weak_pairs;

    PreferenceData(std::shared_ptr<const Universe> u, std::vector<Pair> pairs);
    bool has(std::size_t a, std::size_t b) const;
    bool strict(std::size_t a, std::size_t b) const { return has(a, b) && !has(b, a); }
};

/// Cone generated by f_a - f_b over the declared pairs, in weak_pairs order.
ConeModel preference_cone(const PreferenceData& prefs);

struct A1Verdict {
    bool holds = true;
    std::optional<Pair> witness;
};

/// Completeness of the cancellation closure; witness is the first incomparable pair in name order.
A1Verdict check_A1(const PreferenceData& prefs, std::stop_token stop = {});

struct CancellationVerdict {
    bool holds = true;
    Language language = Language::A;
    /// Pair (a,b) forced by the cone but not declared.
    std::optional<Pair> witness;
    /// Coefficients aligned with weak_pairs; f_a - f_b = sum coefficients[i] * (f_x - f_y).
    Vector coefficients;
};

/// Cone decision of statewise cancellation (A) or its mixture form (A+). Under Language::A,
/// a universe containing mixtures is an InputError.
CancellationVerdict check_cancellation(const PreferenceData& prefs, Language language,
                                       std::stop_token stop = {});

/// Cancellation over indicator vectors of C, ignoring the tables. Holds iff the declared
/// relation is reflexive and transitive.
CancellationVerdict check_plain_cancellation(const PreferenceData& prefs, std::stop_token stop = {});

struct BruteForceLimits {
    std::size_t max_choices = 9;
    std::size_t max_multiplicity = 4;
    std::size_t max_states = 2000000;
};

/// Literal cancellation certificate: sequences lhs and rhs have equal per-world sums,
/// lhs[i] >= rhs[i] is declared for every premise position, and the trailing `multiplicity`
/// positions carry the conclusion.
struct SequenceCertificate {
    Pair conclusion;
    std::size_t multiplicity = 1;
    std::vector<std::pair<Pair, std::size_t>> premises;
    std::vector<std::size_t> lhs;
    std::vector<std::size_t> rhs;
};

struct BruteForceVerdict {
    bool holds = true;
    std::size_t bound = 0;
    std::optional<SequenceCertificate> witness;
};

/// Enumerates integer certificates with every multiplicity at most L, preferring the smallest
/// total multiplicity. Throws LimitExceeded when a guard is exceeded.
BruteForceVerdict brute_force_cancellation(const PreferenceData& prefs, std::size_t max_multiplicity,
                                           const BruteForceLimits& limits = {});

/// Checks the certificate directly against the tables. Used to validate brute-force output.
bool verify_certificate(const PreferenceData& prefs, const SequenceCertificate& cert);

struct ClosureResult {
    PreferenceData relation;
    /// Every pair of C is in the closure.
    bool total_collapse = false;
    /// Pairs (c,d), c < d, that were strict among the input pairs but are indifferent after closing.
    std::vector<Pair> forced_indifferences;
};

/// {(c,d) : f_c - f_d in cone(D+ plus the extra pair's difference)}.
ClosureResult closure(const PreferenceData& prefs, std::optional<Pair> extra = std::nullopt,
                      std::stop_token stop = {});

enum class Contingent {
    Weak,          // a >=_t b only
    Converse,      // b >=_t a only
    Indifferent,   // both
    Incomparable,  // neither
};

const char* to_string(Contingent c);

/// Indices of consistent worlds entailing t.
std::vector<std::size_t> worlds_entailing(const Universe& u, const TestFormula& t);

/// Vector d zeroed outside the given worlds.
Vector restrict_to(const Universe& u, const Vector& d, const std::vector<std::size_t>& worlds);

Contingent contingent_compare(const Vector& fa, const Vector& fb, const TestFormula& t, const PreferenceData& prefs,
                              std::stop_token stop = {});
Contingent contingent_compare(std::size_t a, std::size_t b, const TestFormula& t, const PreferenceData& prefs,
                              std::stop_token stop = {});

/// True iff every elementary per-world difference under t lies in the lineality of the cone.
bool null_test(const TestFormula& t, const PreferenceData& prefs, std::stop_token stop = {});

/// Whether the single consistent world `w` is null.
bool null_world(std::size_t w, const PreferenceData& prefs, std::stop_token stop = {});

struct ObjectiveVerdict {
    bool a4 = false;
    std::optional<std::size_t> best;   // o1, primitive index
    std::optional<std::size_t> worst;  // o0, primitive index

    bool a5 = true;
    std::size_t mixture_bound = 0;
    /// Failing A5+ instance: mixtures over O (weights per outcome), and the world.
    struct A5Witness {
        Vector left;
        Vector right;
        std::size_t world;
    };
    std::optional<A5Witness> a5_witness;

    bool a6 = true;
    std::optional<std::pair<std::size_t, std::size_t>> a6_witness;  // incomparable primitives
};

/// A4, A5+ (on atoms, mixtures over O with denominators up to `mixture_bound`) and A6.
/// `outcomes` are primitive indices. Throws InputError when empty.
ObjectiveVerdict check_objective_axioms(const PreferenceData& prefs, const std::vector<std::size_t>& outcomes,
                                        std::size_t mixture_bound = 2, std::stop_token stop = {});

/// All distributions over `count` items whose weights have denominator dividing some n <= bound,
/// deduplicated and sorted.
std::vector<Vector> bounded_mixtures(std::size_t count, std::size_t bound);

}  // namespace cdt
