#include "serialize.hpp"

#include "cdt/error.hpp"

namespace cdt::cli {

json to_json(const Rational& q) { return to_string(q); }

Rational rational_from_json(const json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
    throw InputError("expected a rational as a \"p/q\" string");
}

json pair_json(const Universe& u, Pair p) { return json::array({u.names[p.first], u.names[p.second]}); }

json pairs_json(const Universe& u, const std::vector<Pair>& pairs) {
    json out = json::array();
    for (const auto& p : pairs) out.push_back(pair_json(u, p));
    return out;
}

json a1_json(const Universe& u, const A1Verdict& v) {
    json j{{"holds", v.holds}};
    if (v.witness) j["witness"] = pair_json(u, *v.witness);
    return j;
}

json cancellation_json(const PreferenceData& prefs, const CancellationVerdict& v) {
    const Universe& u = *prefs.universe;
    json j{{"axiom", v.language == Language::A ? "A2'" : "A2+"}, {"holds", v.holds}};
    if (v.witness) {
        json coeffs = json::array();
        for (std::size_t i = 0; i < v.coefficients.size(); ++i) {
            if (sgn(v.coefficients[i]) == 0) continue;
            coeffs.push_back({{"pair", pair_json(u, prefs.weak_pairs[i])}, {"coefficient", to_json(v.coefficients[i])}});
        }
        j["witness"] = {{"pair", pair_json(u, *v.witness)}, {"coefficients", coeffs}};
    }
    return j;
}

json brute_force_json(const PreferenceData& prefs, const BruteForceVerdict& v) {
    const Universe& u = *prefs.universe;
    json j{{"holds", v.holds}, {"bound", v.bound}};
    if (v.witness) {
        const auto& w = *v.witness;
        json premises = json::array();
        for (const auto& [pair, count] : w.premises) {
            premises.push_back({{"pair", pair_json(u, pair)}, {"count", count}});
        }
        json lhs = json::array(), rhs = json::array();
        for (auto a : w.lhs) lhs.push_back(u.names[a]);
        for (auto b : w.rhs) rhs.push_back(u.names[b]);
        j["witness"] = {{"pair", pair_json(u, w.conclusion)},
                        {"multiplicity", w.multiplicity},
                        {"premises", premises},
                        {"lhs", lhs},
                        {"rhs", rhs}};
    }
    return j;
}

json objective_json(const PreferenceData& prefs, const std::vector<std::size_t>& outcomes, const ObjectiveVerdict& v) {
    const Universe& u = *prefs.universe;
    auto mixture = [&](const Vector& weights) {
        json m = json::object();
        for (std::size_t k = 0; k < outcomes.size(); ++k) {
            if (sgn(weights[k]) != 0) m[u.primitives[outcomes[k]]] = to_json(weights[k]);
        }
        return m;
    };
    json a4{{"holds", v.a4}};
    if (v.best) a4["best"] = u.primitives[*v.best];
    if (v.worst) a4["worst"] = u.primitives[*v.worst];
    json a5{{"holds", v.a5}, {"scope", "up to mixture denominator " + std::to_string(v.mixture_bound)}};
    if (v.a5_witness) {
        a5["witness"] = {{"left", mixture(v.a5_witness->left)},
                         {"right", mixture(v.a5_witness->right)},
                         {"world", u.worlds[v.a5_witness->world].label()}};
    }
    json a6{{"holds", v.a6}};
    if (v.a6_witness) {
        a6["witness"] = json::array({u.primitives[v.a6_witness->first], u.primitives[v.a6_witness->second]});
    }
    return {{"A4", a4}, {"A5+", a5}, {"A6", a6}};
}

json closure_json(const Universe& u, const ClosureResult& c) {
    return {{"pairs", pairs_json(u, c.relation.weak_pairs)},
            {"total_collapse", c.total_collapse},
            {"forced_indifferences", pairs_json(u, c.forced_indifferences)}};
}

namespace {

json sparse_json(const Sparse& s) {
    json out = json::array();
    for (const auto& [i, q] : s) out.push_back(json::array({i, to_json(q)}));
    return out;
}

Sparse sparse_from_json(const json& j, const char* what) {
    if (!j.is_array()) throw MalformedRepresentation(std::string(what) + " must be an array of [index, weight]");
    Sparse out;
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned()) {
            throw MalformedRepresentation(std::string(what) + " entries must be [index, weight]");
        }
        out.emplace_back(e[0].get<std::size_t>(), rational_from_json(e[1]));
    }
    return out;
}

std::vector<std::string> strings(const json& j, const char* what) {
    if (!j.is_array()) throw MalformedRepresentation(std::string(what) + " must be an array of strings");
    std::vector<std::string> out;
    for (const auto& e : j) {
        if (!e.is_string()) throw MalformedRepresentation(std::string(what) + " must be an array of strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

}  // namespace

json representation_to_json(const Representation& rep) {
    json tests = json::array();
    for (const auto& [key, states] : rep.test_interp) tests.push_back({{"test", key}, {"states", states}});
    json choices = json::array();
    for (std::size_t p = 0; p < rep.choice_interp.size(); ++p) {
        json rows = json::array();
        for (const auto& d : rep.choice_interp[p]) rows.push_back(sparse_json(d));
        choices.push_back({{"primitive", rep.primitives[p]}, {"rows", rows}});
    }
    json probs = json::array();
    for (const auto& p : rep.probabilities) probs.push_back(sparse_json(p));
    json utils = json::array();
    for (const auto& u : rep.utilities) {
        json row = json::array();
        for (const auto& x : u) row.push_back(to_json(x));
        utils.push_back(row);
    }
    json pairs = json::array();
    for (const auto& [ui, pi] : rep.pairs) pairs.push_back(json::array({ui, pi}));
    return {{"states", rep.states},
            {"outcomes", rep.outcomes},
            {"primitives", rep.primitives},
            {"test_interp", tests},
            {"choice_interp", choices},
            {"probabilities", probs},
            {"utilities", utils},
            {"V", pairs},
            {"notes", rep.notes}};
}

Representation representation_from_json(const json& j) {
    if (!j.is_object()) throw MalformedRepresentation("representation must be a JSON object");
    for (const char* key : {"states", "outcomes", "primitives", "test_interp", "choice_interp", "probabilities",
                            "utilities", "V"}) {
        if (!j.contains(key)) throw MalformedRepresentation(std::string("representation lacks '") + key + "'");
    }
    Representation rep;
    rep.states = strings(j.at("states"), "states");
    rep.outcomes = strings(j.at("outcomes"), "outcomes");
    rep.primitives = strings(j.at("primitives"), "primitives");
    if (j.contains("notes")) rep.notes = strings(j.at("notes"), "notes");
    if (!j.at("test_interp").is_array()) throw MalformedRepresentation("test_interp must be an array");
    for (const auto& t : j.at("test_interp")) {
        if (!t.is_object() || !t.contains("test") || !t.contains("states") || !t.at("test").is_string() ||
            !t.at("states").is_array()) {
            throw MalformedRepresentation("test_interp entries must be {\"test\", \"states\"}");
        }
        std::vector<std::size_t> states;
        for (const auto& s : t.at("states")) {
            if (!s.is_number_unsigned()) throw MalformedRepresentation("test_interp states must be indices");
            states.push_back(s.get<std::size_t>());
        }
        rep.test_interp.emplace_back(t.at("test").get<std::string>(), std::move(states));
    }
    if (!j.at("choice_interp").is_array()) throw MalformedRepresentation("choice_interp must be an array");
    for (const auto& c : j.at("choice_interp")) {
        if (!c.is_object() || !c.contains("primitive") || !c.contains("rows") || !c.at("rows").is_array()) {
            throw MalformedRepresentation("choice_interp entries must be {\"primitive\", \"rows\"}");
        }
        std::vector<Sparse> rows;
        for (const auto& r : c.at("rows")) rows.push_back(sparse_from_json(r, "choice_interp row"));
        rep.choice_interp.push_back(std::move(rows));
    }
    if (rep.choice_interp.size() != rep.primitives.size()) {
        throw MalformedRepresentation("choice_interp must have one entry per primitive");
    }
    for (std::size_t p = 0; p < rep.primitives.size(); ++p) {
        if (j.at("choice_interp")[p].at("primitive") != rep.primitives[p]) {
            throw MalformedRepresentation("choice_interp must follow the primitive order");
        }
    }
    if (!j.at("probabilities").is_array()) throw MalformedRepresentation("probabilities must be an array");
    for (const auto& p : j.at("probabilities")) rep.probabilities.push_back(sparse_from_json(p, "probability"));
    if (!j.at("utilities").is_array()) throw MalformedRepresentation("utilities must be an array");
    for (const auto& u : j.at("utilities")) {
        if (!u.is_array()) throw MalformedRepresentation("each utility must be an array of rationals");
        Vector v;
        for (const auto& x : u) v.push_back(rational_from_json(x));
        rep.utilities.push_back(std::move(v));
    }
    if (!j.at("V").is_array()) throw MalformedRepresentation("V must be an array of [utility, probability]");
    for (const auto& v : j.at("V")) {
        if (!v.is_array() || v.size() != 2 || !v[0].is_number_unsigned() || !v[1].is_number_unsigned()) {
            throw MalformedRepresentation("V must be an array of [utility, probability]");
        }
        rep.pairs.emplace_back(v[0].get<std::size_t>(), v[1].get<std::size_t>());
    }
    return rep;
}

json conditioned_json(const Representation& rep, const ConditionedSet& c) {
    json survivors = json::array();
    for (std::size_t i = 0; i < c.survivors.size(); ++i) {
        json dist = json::object();
        for (const auto& [s, q] : c.survivors[i]) dist[rep.states[s]] = to_json(q);
        survivors.push_back({{"index", c.kept[i]}, {"p", dist}});
    }
    return {{"survivors", survivors}, {"dropped", c.dropped}};
}

json update_check_json(const Universe& u, const UpdateCheck& c) {
    json j{{"agree", c.agree}};
    if (c.discrepancy) j["discrepancy"] = pair_json(u, *c.discrepancy);
    return j;
}

}  // namespace cdt::cli
