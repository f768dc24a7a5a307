#include "cdt/represent.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace cdt {

namespace {

void require_cancellation(const PreferenceData& prefs, std::stop_token stop) {
    CancellationVerdict c = check_cancellation(prefs, prefs.universe->language(), stop);
    if (!c.holds) {
        const auto& u = *prefs.universe;
        throw AxiomFailure("cancellation", c.witness,
                           "cancellation fails: " + u.names[c.witness->first] + " >= " + u.names[c.witness->second] +
                               " is forced but not declared");
    }
}

std::string state_label(const World& w) { return "(" + w.label() + ")"; }

std::vector<std::pair<std::string, std::vector<std::size_t>>> interp_for(
    const Universe& u, const std::vector<std::size_t>& state_world) {
    std::vector<std::pair<std::string, std::vector<std::size_t>>> out;
    for (std::size_t i = 0; i < u.basis->size(); ++i) {
        std::vector<std::size_t> states;
        for (std::size_t s = 0; s < state_world.size(); ++s) {
            if (u.worlds[state_world[s]].value(i)) states.push_back(s);
        }
        out.emplace_back(u.basis->tests()[i].key(), std::move(states));
    }
    return out;
}

}  // namespace

StateDependentRep represent_state_dependent(const PreferenceData& prefs, std::size_t ray_limit, std::stop_token stop) {
    require_cancellation(prefs, stop);
    StateDependentRep r;
    r.dim = prefs.universe->dim();
    r.utilities = dual_generators(preference_cone(prefs), ray_limit, stop);
    if (r.utilities.empty()) r.utilities.push_back(zeros(r.dim));
    return r;
}

StateDependentRep represent_single(const PreferenceData& prefs, std::stop_token stop) {
    require_cancellation(prefs, stop);
    A1Verdict a1 = check_A1(prefs, stop);
    const Universe& u = *prefs.universe;
    if (!a1.holds) {
        throw AxiomFailure("A1", a1.witness,
                           "A1 fails: " + u.names[a1.witness->first] + " and " + u.names[a1.witness->second] +
                               " are incomparable");
    }
    ClosureResult c = closure(prefs, std::nullopt, stop);
    std::vector<Constraint> cons;
    std::optional<Pair> first_strict;
    for (std::size_t a = 0; a < u.size(); ++a) {
        for (std::size_t b = 0; b < u.size(); ++b) {
            if (a == b || !c.relation.has(a, b)) continue;
            Vector d = u.vectors[a] - u.vectors[b];
            if (c.relation.has(b, a)) {
                if (a < b) cons.push_back({std::move(d), Constraint::Rel::Eq, Rational(0)});
            } else {
                if (!first_strict) first_strict = Pair{a, b};
                cons.push_back({std::move(d), Constraint::Rel::Ge, Rational(1)});
            }
        }
    }
    auto sol = solve_constraints(cons, u.dim(), stop);
    if (!sol) throw std::logic_error("no single utility for a complete relation satisfying cancellation");
    Vector v = std::move(*sol);
    if (!v.empty()) {
        Rational lo = *std::min_element(v.begin(), v.end());
        for (auto& x : v) x -= lo;
    }
    if (first_strict) {
        Rational gap = dot(v, u.vectors[first_strict->first] - u.vectors[first_strict->second]);
        for (auto& x : v) x /= gap;
    }
    return {u.dim(), {std::move(v)}};
}

Vector uniform_base(const Universe& u) {
    if (u.worlds.empty()) throw PreconditionError("the theory is inconsistent: no consistent worlds");
    return Vector(u.worlds.size(), Rational(1, static_cast<unsigned long>(u.worlds.size())));
}

Representation bootstrap_seu(const StateDependentRep& sdr, const PreferenceData& prefs, const Vector& base,
                             BootstrapShape shape) {
    const Universe& u = *prefs.universe;
    if (u.worlds.empty()) throw PreconditionError("the theory is inconsistent: no consistent worlds");
    if (base.size() != u.worlds.size()) throw InputError("base measure must have one entry per consistent world");
    Rational total = 0;
    for (const auto& x : base) {
        if (sgn(x) <= 0) throw InputError("base measure must be strictly positive on consistent worlds");
        total += x;
    }
    if (total != 1) throw InputError("base measure sums to " + to_string(total) + ", expected 1/1");
    Matrix rays = sdr.utilities;
    if (rays.empty()) rays.push_back(zeros(u.dim()));
    for (const auto& r : rays) {
        if (r.size() != u.dim()) throw InputError("utility dimension does not match the universe");
    }

    const std::size_t nw = u.worlds.size();
    const std::size_t np = u.primitives.size();
    const std::size_t nk = rays.size();
    Representation rep;
    rep.primitives = u.primitives;
    std::vector<std::size_t> state_world;

    if (shape == BootstrapShape::MultiUtility) {
        for (std::size_t w = 0; w < nw; ++w) {
            rep.states.push_back(state_label(u.worlds[w]));
            state_world.push_back(w);
            for (std::size_t p = 0; p < np; ++p) {
                rep.outcomes.push_back("(" + u.worlds[w].label() + "|" + u.primitives[p] + ")");
            }
        }
        rep.choice_interp.assign(np, std::vector<Sparse>(nw));
        for (std::size_t p = 0; p < np; ++p) {
            for (std::size_t w = 0; w < nw; ++w) rep.choice_interp[p][w] = {{u.coord(w, p), Rational(1)}};
        }
        Sparse pr;
        for (std::size_t w = 0; w < nw; ++w) pr.emplace_back(w, base[w]);
        rep.probabilities.push_back(std::move(pr));
        for (std::size_t k = 0; k < nk; ++k) {
            Vector v(u.dim());
            for (std::size_t w = 0; w < nw; ++w) {
                for (std::size_t p = 0; p < np; ++p) v[u.coord(w, p)] = rays[k][u.coord(w, p)] / base[w];
            }
            rep.utilities.push_back(std::move(v));
            rep.pairs.emplace_back(k, 0);
        }
    } else {
        auto state = [&](std::size_t w, std::size_t k) { return w * nk + k; };
        auto outcome = [&](std::size_t w, std::size_t p, std::size_t k) { return (w * np + p) * nk + k; };
        for (std::size_t w = 0; w < nw; ++w) {
            for (std::size_t k = 0; k < nk; ++k) {
                rep.states.push_back("(" + u.worlds[w].label() + "|" + std::to_string(k) + ")");
                state_world.push_back(w);
            }
            for (std::size_t p = 0; p < np; ++p) {
                for (std::size_t k = 0; k < nk; ++k) {
                    rep.outcomes.push_back("(" + u.worlds[w].label() + "|" + u.primitives[p] + "|" +
                                           std::to_string(k) + ")");
                }
            }
        }
        rep.choice_interp.assign(np, std::vector<Sparse>(nw * nk));
        Vector v(nw * np * nk);
        for (std::size_t w = 0; w < nw; ++w) {
            for (std::size_t p = 0; p < np; ++p) {
                for (std::size_t k = 0; k < nk; ++k) {
                    rep.choice_interp[p][state(w, k)] = {{outcome(w, p, k), Rational(1)}};
                    v[outcome(w, p, k)] = rays[k][u.coord(w, p)] / base[w];
                }
            }
        }
        rep.utilities.push_back(std::move(v));
        for (std::size_t k = 0; k < nk; ++k) {
            Sparse pr;
            for (std::size_t w = 0; w < nw; ++w) pr.emplace_back(state(w, k), base[w]);
            rep.probabilities.push_back(std::move(pr));
            rep.pairs.emplace_back(0, k);
        }
    }
    rep.test_interp = interp_for(u, state_world);
    bool degenerate = std::all_of(rays.begin(), rays.end(), [](const Vector& r) { return is_zero(r); });
    if (degenerate) rep.notes.push_back("degenerate: every choice is indifferent; zero utility");
    return rep;
}

ObjectiveResult represent_objective(const PreferenceData& prefs, const std::vector<std::size_t>& outcomes,
                                    std::size_t mixture_bound, std::size_t ray_limit, std::stop_token stop) {
    const Universe& u = *prefs.universe;
    require_cancellation(prefs, stop);
    ObjectiveResult result;
    result.axioms = check_objective_axioms(prefs, outcomes, mixture_bound, stop);
    if (!result.axioms.a4) throw AxiomFailure("A4", std::nullopt, "A4 fails: no best and worst outcome in O");
    const std::size_t o1 = *result.axioms.best;
    const std::size_t o0 = *result.axioms.worst;
    const std::size_t nw = u.worlds.size();
    const std::size_t np = u.primitives.size();

    // Shift each world so u(w,o0) = 0, then scale so the o1 values sum to 1; rays with no
    // o1/o0 gap rank every choice equally and are dropped.
    for (const auto& ray : dual_generators(preference_cone(prefs), ray_limit, stop)) {
        Vector r = ray;
        Rational s = 0;
        for (std::size_t w = 0; w < nw; ++w) {
            Rational base = ray[u.coord(w, o0)];
            for (std::size_t p = 0; p < np; ++p) r[u.coord(w, p)] -= base;
            s += r[u.coord(w, o1)];
        }
        if (sgn(s) == 0) continue;
        if (sgn(s) < 0) throw std::logic_error("dual ray ranks o0 above o1 despite A4");
        for (auto& x : r) x /= s;
        result.rays.push_back(std::move(r));
    }
    if (result.rays.empty()) {
        throw AxiomFailure("A4", std::nullopt, "best and worst outcomes are indifferent; no normalizable ray");
    }
    const std::size_t nk = result.rays.size();

    // c_o = u(w,o) / u(w,o1) must not depend on the ray or the world.
    for (auto o : outcomes) {
        std::optional<CalibrationError::Cell> lo, hi;
        for (std::size_t k = 0; k < nk; ++k) {
            for (std::size_t w = 0; w < nw; ++w) {
                const Rational& top = result.rays[k][u.coord(w, o1)];
                if (sgn(top) <= 0) continue;
                Rational c = result.rays[k][u.coord(w, o)] / top;
                if (!lo || c < lo->c) lo = CalibrationError::Cell{k, w, c};
                if (!hi || c > hi->c) hi = CalibrationError::Cell{k, w, c};
            }
        }
        if (lo->c != hi->c) {
            throw CalibrationError(o, *lo, *hi,
                                   "calibration inconsistent for outcome " + u.primitives[o] + ": c = " +
                                       to_string(lo->c) + " at ray " + std::to_string(lo->ray) + " world " +
                                       u.worlds[lo->world].label() + ", c = " + to_string(hi->c) + " at ray " +
                                       std::to_string(hi->ray) + " world " + u.worlds[hi->world].label());
        }
        result.calibration.push_back(lo->c);
    }

    Representation& rep = result.rep;
    rep.primitives = u.primitives;
    auto state = [&](std::size_t w, std::size_t p, std::size_t k) { return (w * np + p) * nk + k; };
    std::vector<std::size_t> state_world;
    for (std::size_t w = 0; w < nw; ++w) {
        for (std::size_t p = 0; p < np; ++p) {
            for (std::size_t k = 0; k < nk; ++k) {
                rep.states.push_back("(" + u.worlds[w].label() + "|" + u.primitives[p] + "|" + std::to_string(k) +
                                     ")");
                state_world.push_back(w);
            }
        }
    }
    std::map<std::size_t, std::size_t> outcome_index;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        rep.outcomes.push_back(u.primitives[outcomes[i]]);
        outcome_index[outcomes[i]] = i;
    }
    rep.utilities.push_back(result.calibration);

    // Values are clamped to [0, u(w,o1)]; primitives that no choice in C constrains may fall outside.
    auto level = [&](std::size_t k, std::size_t w, std::size_t p) {
        const Rational& top = result.rays[k][u.coord(w, o1)];
        Rational x = result.rays[k][u.coord(w, p)];
        if (sgn(x) < 0) return Rational(0);
        if (x > top) return top;
        return x;
    };
    rep.choice_interp.assign(np, std::vector<Sparse>(rep.states.size()));
    for (std::size_t a = 0; a < np; ++a) {
        for (std::size_t w = 0; w < nw; ++w) {
            for (std::size_t ap = 0; ap < np; ++ap) {
                for (std::size_t k = 0; k < nk; ++k) {
                    std::size_t o;
                    if (auto it = outcome_index.find(a); it != outcome_index.end()) {
                        o = it->second;
                    } else {
                        o = outcome_index.at(level(k, w, a) >= level(k, w, ap) ? o1 : o0);
                    }
                    rep.choice_interp[a][state(w, ap, k)] = {{o, Rational(1)}};
                }
            }
        }
    }
    for (std::size_t k = 0; k < nk; ++k) {
        Sparse pr;
        for (std::size_t w = 0; w < nw; ++w) {
            // Mass v_j - v_{j-1} on the first primitive at each distinct level v_j.
            std::vector<std::pair<Rational, std::size_t>> levels;
            for (std::size_t p = 0; p < np; ++p) levels.emplace_back(level(k, w, p), p);
            std::stable_sort(levels.begin(), levels.end(),
                             [](const auto& x, const auto& y) { return x.first < y.first; });
            Rational prev = 0;
            std::vector<std::pair<std::size_t, Rational>> cell;
            for (std::size_t i = 0; i < levels.size(); ++i) {
                if (i > 0 && levels[i].first == levels[i - 1].first) continue;
                Rational mass = levels[i].first - prev;
                prev = levels[i].first;
                if (sgn(mass) != 0) cell.emplace_back(state(w, levels[i].second, k), mass);
            }
            std::sort(cell.begin(), cell.end());
            pr.insert(pr.end(), cell.begin(), cell.end());
        }
        std::sort(pr.begin(), pr.end());
        rep.probabilities.push_back(std::move(pr));
        rep.pairs.emplace_back(0, k);
    }
    rep.test_interp = interp_for(u, state_world);
    if (!result.axioms.a5) {
        rep.notes.push_back("A5+ fails up to mixture denominator " + std::to_string(result.axioms.mixture_bound));
    }
    if (!result.axioms.a6) rep.notes.push_back("A6 fails");
    return result;
}

std::vector<std::size_t> state_world_indices(const Representation& rep, const Universe& u) {
    const Basis& basis = *u.basis;
    std::vector<std::vector<bool>> assign(rep.states.size(), std::vector<bool>(basis.size(), false));
    std::vector<bool> seen(basis.size(), false);
    for (const auto& [key, states] : rep.test_interp) {
        std::optional<std::size_t> idx;
        for (std::size_t i = 0; i < basis.size(); ++i) {
            if (basis.tests()[i].key() == key) idx = i;
        }
        if (!idx) throw MalformedRepresentation("test interpretation names unknown test '" + key + "'");
        if (seen[*idx]) throw MalformedRepresentation("test '" + key + "' interpreted twice");
        seen[*idx] = true;
        for (auto s : states) {
            if (s >= rep.states.size()) throw MalformedRepresentation("test interpretation state out of range");
            assign[s][*idx] = true;
        }
    }
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (!seen[i]) throw MalformedRepresentation("test '" + basis.tests()[i].key() + "' has no interpretation");
    }
    std::map<std::vector<bool>, std::size_t> lookup;
    for (std::size_t w = 0; w < u.worlds.size(); ++w) lookup[u.worlds[w].assignment()] = w;
    std::vector<std::size_t> out;
    for (std::size_t s = 0; s < rep.states.size(); ++s) {
        auto it = lookup.find(assign[s]);
        if (it == lookup.end()) {
            throw MalformedRepresentation("state " + rep.states[s] + " does not respect the theory");
        }
        out.push_back(it->second);
    }
    return out;
}

namespace {

void check_distribution(const Sparse& d, std::size_t range, const std::string& what) {
    Rational total = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d[i].first >= range) throw MalformedRepresentation(what + ": index out of range");
        if (i > 0 && d[i].first <= d[i - 1].first) throw MalformedRepresentation(what + ": indices not increasing");
        if (sgn(d[i].second) < 0) throw MalformedRepresentation(what + ": negative weight");
        total += d[i].second;
    }
    if (total != 1) throw MalformedRepresentation(what + ": weights sum to " + to_string(total));
}

}  // namespace

void check_well_formed(const Representation& rep, const Universe& u) {
    if (rep.pairs.empty()) throw MalformedRepresentation("V is empty");
    if (rep.primitives != u.primitives) throw MalformedRepresentation("primitive choices do not match the problem");
    for (std::size_t i = 0; i < rep.probabilities.size(); ++i) {
        check_distribution(rep.probabilities[i], rep.states.size(), "probability " + std::to_string(i));
    }
    for (const auto& util : rep.utilities) {
        if (util.size() != rep.outcomes.size()) throw MalformedRepresentation("utility length differs from outcomes");
    }
    for (const auto& [ui, pi] : rep.pairs) {
        if (ui >= rep.utilities.size() || pi >= rep.probabilities.size()) {
            throw MalformedRepresentation("V refers to a missing utility or probability");
        }
    }
    if (rep.choice_interp.size() != u.primitives.size()) {
        throw MalformedRepresentation("choice interpretation must cover every primitive");
    }
    for (std::size_t p = 0; p < rep.choice_interp.size(); ++p) {
        if (rep.choice_interp[p].size() != rep.states.size()) {
            throw MalformedRepresentation("choice interpretation of " + u.primitives[p] + " must cover every state");
        }
        for (const auto& d : rep.choice_interp[p]) {
            check_distribution(d, rep.outcomes.size(), "choice interpretation of " + u.primitives[p]);
        }
    }
    state_world_indices(rep, u);
}

std::vector<Vector> expected_utilities(const Representation& rep, const Universe& u) {
    check_well_formed(rep, u);
    std::vector<std::size_t> sw = state_world_indices(rep, u);
    const std::size_t np = u.primitives.size();
    std::vector<Vector> out;
    out.reserve(rep.pairs.size());
    for (const auto& [ui, pi] : rep.pairs) {
        const Vector& util = rep.utilities[ui];
        Vector eu = zeros(u.size());
        for (const auto& [s, ps] : rep.probabilities[pi]) {
            if (sgn(ps) == 0) continue;
            Vector prim_value = zeros(np);
            for (std::size_t p = 0; p < np; ++p) {
                for (const auto& [o, q] : rep.choice_interp[p][s]) prim_value[p] += q * util[o];
            }
            const std::size_t w = sw[s];
            for (std::size_t c = 0; c < u.size(); ++c) {
                Rational v = 0;
                for (std::size_t p = 0; p < np; ++p) {
                    const Rational& f = u.vectors[c][u.coord(w, p)];
                    if (sgn(f) != 0) v += f * prim_value[p];
                }
                eu[c] += ps * v;
            }
        }
        out.push_back(std::move(eu));
    }
    return out;
}

std::vector<Pair> induced_order(const std::vector<Vector>& eu, const std::vector<std::size_t>& selected,
                                std::size_t n) {
    std::vector<Pair> out;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            bool all = true;
            for (auto v : selected) {
                if (eu[v][a] < eu[v][b]) {
                    all = false;
                    break;
                }
            }
            if (all) out.push_back({a, b});
        }
    }
    return out;
}

VerifyResult verify_representation(const Representation& rep, const PreferenceData& prefs, std::stop_token stop) {
    const Universe& u = *prefs.universe;
    std::vector<Vector> eu = expected_utilities(rep, u);
    ClosureResult c = closure(prefs, std::nullopt, stop);
    std::vector<std::size_t> all(eu.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    PreferenceData induced(prefs.universe, induced_order(eu, all, u.size()));
    VerifyResult r;
    for (std::size_t a = 0; a < u.size(); ++a) {
        for (std::size_t b = 0; b < u.size(); ++b) {
            bool in = c.relation.has(a, b);
            if (in != induced.has(a, b)) {
                r.ok = false;
                r.discrepancy = Pair{a, b};
                r.in_closure = in;
                return r;
            }
        }
    }
    return r;
}

}  // namespace cdt
