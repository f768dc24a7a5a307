#include "cdt/updating.hpp"

#include <algorithm>

namespace cdt {

ConditionedSet condition_on_test(const Representation& rep, const TestFormula& t, const Universe& universe) {
    std::vector<std::size_t> sw = state_world_indices(rep, universe);
    std::vector<bool> in_event(rep.states.size());
    for (std::size_t s = 0; s < sw.size(); ++s) in_event[s] = entails(universe.worlds[sw[s]], t);
    ConditionedSet out;
    for (std::size_t i = 0; i < rep.probabilities.size(); ++i) {
        Rational mass = 0;
        for (const auto& [s, p] : rep.probabilities[i]) {
            if (in_event[s]) mass += p;
        }
        if (sgn(mass) == 0) {
            ++out.dropped;
            continue;
        }
        Sparse q;
        for (const auto& [s, p] : rep.probabilities[i]) {
            if (in_event[s]) q.emplace_back(s, p / mass);
        }
        out.survivors.push_back(std::move(q));
        out.kept.push_back(i);
    }
    if (out.survivors.empty()) {
        throw ConditioningUndefined("every measure assigns probability zero to " + t.key());
    }
    return out;
}

Representation conditioned_representation(const Representation& rep, const TestFormula& t, const Universe& universe) {
    ConditionedSet c = condition_on_test(rep, t, universe);
    Representation out = rep;
    std::vector<std::size_t> new_index(rep.probabilities.size(), rep.probabilities.size());
    for (std::size_t i = 0; i < c.kept.size(); ++i) new_index[c.kept[i]] = i;
    out.probabilities = std::move(c.survivors);
    out.pairs.clear();
    for (const auto& [ui, pi] : rep.pairs) {
        if (new_index[pi] < out.probabilities.size()) out.pairs.emplace_back(ui, new_index[pi]);
    }
    out.notes.push_back("conditioned on " + t.key());
    return out;
}

ClosureResult refine(const PreferenceData& prefs, Pair pair, std::stop_token stop) {
    return closure(prefs, pair, stop);
}

namespace {

UpdateCheck compare(std::vector<Pair> syntactic, std::vector<Pair> semantic) {
    std::sort(syntactic.begin(), syntactic.end());
    std::sort(semantic.begin(), semantic.end());
    UpdateCheck r;
    r.agree = syntactic == semantic;
    if (!r.agree) {
        std::vector<Pair> diff;
        std::set_symmetric_difference(syntactic.begin(), syntactic.end(), semantic.begin(), semantic.end(),
                                      std::back_inserter(diff));
        r.discrepancy = diff.front();
    }
    r.syntactic = std::move(syntactic);
    r.semantic = std::move(semantic);
    return r;
}

}  // namespace

UpdateCheck verify_update_test(const PreferenceData& prefs, const TestFormula& t, std::stop_token stop) {
    const Universe& u = *prefs.universe;
    std::vector<Pair> syntactic;
    for (std::size_t a = 0; a < u.size(); ++a) {
        for (std::size_t b = 0; b < u.size(); ++b) {
            Contingent c = contingent_compare(a, b, t, prefs, stop);
            if (c == Contingent::Weak || c == Contingent::Indifferent) syntactic.push_back({a, b});
        }
    }
    StateDependentRep sdr = represent_state_dependent(prefs, kDefaultRayLimit, stop);
    Representation rep = bootstrap_seu(sdr, prefs, uniform_base(u), BootstrapShape::MultiProbability);
    std::vector<Pair> semantic;
    try {
        Representation cond = conditioned_representation(rep, t, u);
        std::vector<Vector> eu = expected_utilities(cond, u);
        std::vector<std::size_t> all(eu.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        semantic = induced_order(eu, all, u.size());
    } catch (const ConditioningUndefined&) {
        // No measure survives: the quantifier over V is vacuous and every pair holds.
        semantic = induced_order({}, {}, u.size());
    }
    return compare(std::move(syntactic), std::move(semantic));
}

UpdateCheck verify_update_pair(const PreferenceData& prefs, Pair pair, std::stop_token stop) {
    const Universe& u = *prefs.universe;
    std::vector<Pair> syntactic = refine(prefs, pair, stop).relation.weak_pairs;

    StateDependentRep sdr = represent_state_dependent(prefs, kDefaultRayLimit, stop);
    ConeModel refined = preference_cone(prefs);
    Vector d = u.vectors[pair.first] - u.vectors[pair.second];
    refined.generators.push_back(d);
    for (auto& r : dual_generators(refined, kDefaultRayLimit, stop)) sdr.utilities.push_back(std::move(r));
    std::sort(sdr.utilities.begin(), sdr.utilities.end(), lex_less);
    sdr.utilities.erase(std::unique(sdr.utilities.begin(), sdr.utilities.end()), sdr.utilities.end());

    Representation rep = bootstrap_seu(sdr, prefs, uniform_base(u), BootstrapShape::MultiProbability);
    std::vector<Vector> eu = expected_utilities(rep, u);
    std::vector<std::size_t> keep;
    for (std::size_t v = 0; v < eu.size(); ++v) {
        if (eu[v][pair.first] >= eu[v][pair.second]) keep.push_back(v);
    }
    return compare(std::move(syntactic), induced_order(eu, keep, u.size()));
}

}  // namespace cdt
