#include "cdt/axioms.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "cdt/error.hpp"

namespace cdt {

std::size_t Universe::index_of(const std::string& name) const {
    auto it = std::lower_bound(names.begin(), names.end(), name);
    if (it == names.end() || *it != name) throw InputError("unknown choice '" + name + "'");
    return static_cast<std::size_t>(it - names.begin());
}

Language Universe::language() const {
    for (const auto& p : programs) {
        if (!p.is_pure()) return Language::APlus;
    }
    return Language::A;
}

Vector Universe::primitive_vector(std::size_t primitive) const {
    Vector v = zeros(dim());
    for (std::size_t w = 0; w < worlds.size(); ++w) v[coord(w, primitive)] = 1;
    return v;
}

Universe make_universe(std::shared_ptr<const Basis> basis, Theory theory, std::vector<std::string> primitives,
                       const std::map<std::string, ChoiceProgram>& choices, std::size_t world_limit) {
    if (primitives.empty()) throw InputError("at least one primitive choice is required");
    Universe u;
    u.worlds = enumerate_worlds(basis, theory, world_limit);
    u.basis = std::move(basis);
    u.theory = std::move(theory);
    u.primitives = std::move(primitives);
    for (const auto& [name, program] : choices) {
        u.names.push_back(name);
        u.programs.push_back(program);
        u.vectors.push_back(compile(program, u.worlds, u.primitives).flatten());
    }
    return u;
}

PreferenceData::PreferenceData(std::shared_ptr<const Universe> u, std::vector<Pair> pairs)
    : universe(std::move(u)), weak_pairs(std::move(pairs)) {
    for (const auto& [a, b] : weak_pairs) {
        if (a >= universe->size() || b >= universe->size()) throw InputError("preference pair outside the universe");
    }
    std::sort(weak_pairs.begin(), weak_pairs.end());
    weak_pairs.erase(std::unique(weak_pairs.begin(), weak_pairs.end()), weak_pairs.end());
}

bool PreferenceData::has(std::size_t a, std::size_t b) const {
    return std::binary_search(weak_pairs.begin(), weak_pairs.end(), Pair{a, b});
}

ConeModel preference_cone(const PreferenceData& prefs) {
    const Universe& u = *prefs.universe;
    ConeModel cone;
    cone.dim = u.dim();
    for (const auto& [a, b] : prefs.weak_pairs) cone.generators.push_back(u.vectors[a] - u.vectors[b]);
    return cone;
}

namespace {

// First ordered pair (a,b), not declared, whose difference lies in the cone.
CancellationVerdict first_violation(const PreferenceData& prefs, const std::vector<Vector>& vectors,
                                    const ConeModel& cone, std::stop_token stop) {
    CancellationVerdict v;
    const std::size_t n = vectors.size();
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            if (prefs.has(a, b)) continue;
            Membership m = cone_member_minimal(vectors[a] - vectors[b], cone, stop);
            if (m.member) {
                v.holds = false;
                v.witness = Pair{a, b};
                v.coefficients = std::move(m.coefficients);
                return v;
            }
        }
    }
    return v;
}

}  // namespace

CancellationVerdict check_cancellation(const PreferenceData& prefs, Language language, std::stop_token stop) {
    const Universe& u = *prefs.universe;
    if (language == Language::A && u.language() == Language::APlus) {
        throw InputError("mixture choices present but language A requested");
    }
    CancellationVerdict v = first_violation(prefs, u.vectors, preference_cone(prefs), stop);
    v.language = language;
    return v;
}

CancellationVerdict check_plain_cancellation(const PreferenceData& prefs, std::stop_token stop) {
    const std::size_t n = prefs.universe->size();
    std::vector<Vector> indicators(n, zeros(n));
    for (std::size_t i = 0; i < n; ++i) indicators[i][i] = 1;
    ConeModel cone;
    cone.dim = n;
    for (const auto& [a, b] : prefs.weak_pairs) cone.generators.push_back(indicators[a] - indicators[b]);
    return first_violation(prefs, indicators, cone, stop);
}

namespace {

using IntVec = std::vector<long long>;

struct DpNode {
    std::size_t parent;  // node index, or npos for the origin
    std::size_t generator;
    std::size_t count;
    std::size_t total;
};

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

}  // namespace

BruteForceVerdict brute_force_cancellation(const PreferenceData& prefs, std::size_t max_multiplicity,
                                           const BruteForceLimits& limits) {
    const Universe& u = *prefs.universe;
    if (u.size() > limits.max_choices) {
        throw LimitExceeded("brute force limited to " + std::to_string(limits.max_choices) + " choices");
    }
    if (max_multiplicity == 0 || max_multiplicity > limits.max_multiplicity) {
        throw LimitExceeded("brute force multiplicity must be in 1.." + std::to_string(limits.max_multiplicity));
    }
    // Scale every table to integers with a common denominator.
    mpz_class lcd = 1;
    for (const auto& v : u.vectors) {
        for (const auto& x : v) mpz_lcm(lcd.get_mpz_t(), lcd.get_mpz_t(), x.get_den_mpz_t());
    }
    auto to_int = [&](const Vector& v) {
        IntVec out(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            mpz_class n = v[i].get_num() * (lcd / v[i].get_den());
            if (!n.fits_slong_p()) throw LimitExceeded("table entries too large for brute force");
            out[i] = n.get_si();
        }
        return out;
    };
    std::vector<IntVec> tables;
    for (const auto& v : u.vectors) tables.push_back(to_int(v));

    // Distinct nonzero generators, each remembering the first declared pair producing it.
    std::vector<IntVec> gens;
    std::vector<Pair> gen_pair;
    for (const auto& [a, b] : prefs.weak_pairs) {
        IntVec g(u.dim());
        bool nonzero = false;
        for (std::size_t i = 0; i < g.size(); ++i) {
            g[i] = tables[a][i] - tables[b][i];
            nonzero = nonzero || g[i] != 0;
        }
        if (!nonzero || std::find(gens.begin(), gens.end(), g) != gens.end()) continue;
        gens.push_back(std::move(g));
        gen_pair.push_back({a, b});
    }

    std::vector<DpNode> nodes{{kNone, 0, 0, 0}};
    std::map<IntVec, std::size_t> reach{{IntVec(u.dim(), 0), 0}};
    for (std::size_t gi = 0; gi < gens.size(); ++gi) {
        std::vector<std::pair<IntVec, std::size_t>> snapshot(reach.begin(), reach.end());
        for (const auto& [vec, id] : snapshot) {
            IntVec w = vec;
            for (std::size_t k = 1; k <= max_multiplicity; ++k) {
                for (std::size_t i = 0; i < w.size(); ++i) w[i] += gens[gi][i];
                std::size_t total = nodes[id].total + k;
                auto it = reach.find(w);
                if (it != reach.end() && nodes[it->second].total <= total) continue;
                nodes.push_back({id, gi, k, total});
                if (it == reach.end()) {
                    reach.emplace(w, nodes.size() - 1);
                } else {
                    it->second = nodes.size() - 1;
                }
                if (reach.size() > limits.max_states) {
                    throw LimitExceeded("brute force state budget of " + std::to_string(limits.max_states) +
                                        " exceeded");
                }
            }
        }
    }

    BruteForceVerdict verdict;
    verdict.bound = max_multiplicity;
    for (std::size_t c = 0; c < u.size(); ++c) {
        for (std::size_t d = 0; d < u.size(); ++d) {
            if (prefs.has(c, d)) continue;
            for (std::size_t m = 1; m <= max_multiplicity; ++m) {
                IntVec target(u.dim());
                for (std::size_t i = 0; i < target.size(); ++i) {
                    target[i] = static_cast<long long>(m) * (tables[c][i] - tables[d][i]);
                }
                auto it = reach.find(target);
                if (it == reach.end()) continue;
                SequenceCertificate cert;
                cert.conclusion = {c, d};
                cert.multiplicity = m;
                for (std::size_t id = it->second; nodes[id].parent != kNone; id = nodes[id].parent) {
                    cert.premises.push_back({gen_pair[nodes[id].generator], nodes[id].count});
                }
                std::sort(cert.premises.begin(), cert.premises.end());
                for (const auto& [pair, count] : cert.premises) {
                    for (std::size_t k = 0; k < count; ++k) {
                        cert.lhs.push_back(pair.first);
                        cert.rhs.push_back(pair.second);
                    }
                }
                for (std::size_t k = 0; k < m; ++k) {
                    cert.lhs.push_back(d);
                    cert.rhs.push_back(c);
                }
                if (!verify_certificate(prefs, cert)) {
                    throw std::logic_error("brute force produced an invalid certificate");
                }
                verdict.holds = false;
                verdict.witness = std::move(cert);
                return verdict;
            }
        }
    }
    return verdict;
}

bool verify_certificate(const PreferenceData& prefs, const SequenceCertificate& cert) {
    const Universe& u = *prefs.universe;
    if (cert.lhs.size() != cert.rhs.size() || cert.multiplicity == 0 || cert.lhs.size() < cert.multiplicity) {
        return false;
    }
    const std::size_t k = cert.lhs.size() - cert.multiplicity;
    for (std::size_t i = 0; i < k; ++i) {
        if (!prefs.has(cert.lhs[i], cert.rhs[i])) return false;
    }
    for (std::size_t i = k; i < cert.lhs.size(); ++i) {
        if (cert.lhs[i] != cert.conclusion.second || cert.rhs[i] != cert.conclusion.first) return false;
    }
    if (prefs.has(cert.conclusion.first, cert.conclusion.second)) return false;
    for (std::size_t w = 0; w < u.worlds.size(); ++w) {
        for (std::size_t p = 0; p < u.primitives.size(); ++p) {
            Rational left = 0, right = 0;
            for (auto a : cert.lhs) left += u.vectors[a][u.coord(w, p)];
            for (auto b : cert.rhs) right += u.vectors[b][u.coord(w, p)];
            if (left != right) return false;
        }
    }
    return true;
}

ClosureResult closure(const PreferenceData& prefs, std::optional<Pair> extra, std::stop_token stop) {
    const Universe& u = *prefs.universe;
    ConeModel cone = preference_cone(prefs);
    std::vector<Pair> input = prefs.weak_pairs;
    if (extra) {
        cone.generators.push_back(u.vectors[extra->first] - u.vectors[extra->second]);
        input.push_back(*extra);
    }
    PreferenceData before(prefs.universe, input);
    std::vector<Pair> pairs;
    for (std::size_t c = 0; c < u.size(); ++c) {
        for (std::size_t d = 0; d < u.size(); ++d) {
            if (before.has(c, d) || cone_member(u.vectors[c] - u.vectors[d], cone, stop).member) {
                pairs.push_back({c, d});
            }
        }
    }
    ClosureResult r{PreferenceData(prefs.universe, std::move(pairs)), false, {}};
    r.total_collapse = r.relation.weak_pairs.size() == u.size() * u.size();
    for (std::size_t c = 0; c < u.size(); ++c) {
        for (std::size_t d = c + 1; d < u.size(); ++d) {
            bool was_strict = prefs.has(c, d) != prefs.has(d, c);
            if (was_strict && r.relation.has(c, d) && r.relation.has(d, c)) r.forced_indifferences.push_back({c, d});
        }
    }
    return r;
}

A1Verdict check_A1(const PreferenceData& prefs, std::stop_token stop) {
    ClosureResult c = closure(prefs, std::nullopt, stop);
    A1Verdict v;
    const std::size_t n = prefs.universe->size();
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            if (!c.relation.has(a, b) && !c.relation.has(b, a)) {
                v.holds = false;
                v.witness = Pair{a, b};
                return v;
            }
        }
    }
    return v;
}

const char* to_string(Contingent c) {
    switch (c) {
        case Contingent::Weak: return "weak";
        case Contingent::Converse: return "converse";
        case Contingent::Indifferent: return "indifferent";
        case Contingent::Incomparable: return "incomparable";
    }
    return "";
}

std::vector<std::size_t> worlds_entailing(const Universe& u, const TestFormula& t) {
    std::vector<std::size_t> out;
    for (std::size_t w = 0; w < u.worlds.size(); ++w) {
        if (entails(u.worlds[w], t)) out.push_back(w);
    }
    return out;
}

Vector restrict_to(const Universe& u, const Vector& d, const std::vector<std::size_t>& worlds) {
    Vector r = zeros(d.size());
    for (auto w : worlds) {
        for (std::size_t p = 0; p < u.primitives.size(); ++p) r[u.coord(w, p)] = d[u.coord(w, p)];
    }
    return r;
}

namespace {

Contingent classify(const Vector& diff, const ConeModel& cone, std::stop_token stop) {
    bool fwd = cone_member(diff, cone, stop).member;
    bool bwd = cone_member(negate(diff), cone, stop).member;
    if (fwd && bwd) return Contingent::Indifferent;
    if (fwd) return Contingent::Weak;
    if (bwd) return Contingent::Converse;
    return Contingent::Incomparable;
}

}  // namespace

Contingent contingent_compare(const Vector& fa, const Vector& fb, const TestFormula& t, const PreferenceData& prefs,
                              std::stop_token stop) {
    const Universe& u = *prefs.universe;
    return classify(restrict_to(u, fa - fb, worlds_entailing(u, t)), preference_cone(prefs), stop);
}

Contingent contingent_compare(std::size_t a, std::size_t b, const TestFormula& t, const PreferenceData& prefs,
                              std::stop_token stop) {
    const Universe& u = *prefs.universe;
    return contingent_compare(u.vectors.at(a), u.vectors.at(b), t, prefs, stop);
}

bool null_world(std::size_t w, const PreferenceData& prefs, std::stop_token stop) {
    const Universe& u = *prefs.universe;
    ConeModel cone = preference_cone(prefs);
    for (std::size_t y = 1; y < u.primitives.size(); ++y) {
        Vector e = zeros(u.dim());
        e[u.coord(w, 0)] = 1;
        e[u.coord(w, y)] = -1;
        if (!in_lineality(e, cone, stop)) return false;
    }
    return true;
}

bool null_test(const TestFormula& t, const PreferenceData& prefs, std::stop_token stop) {
    for (auto w : worlds_entailing(*prefs.universe, t)) {
        if (!null_world(w, prefs, stop)) return false;
    }
    return true;
}

std::vector<Vector> bounded_mixtures(std::size_t count, std::size_t bound) {
    std::vector<Vector> out;
    if (count == 0) return out;
    for (std::size_t n = 1; n <= bound; ++n) {
        std::vector<std::size_t> parts(count, 0);
        // Enumerate compositions of n into `count` nonnegative parts.
        auto rec = [&](std::size_t i, std::size_t left, auto& self) -> void {
            if (i + 1 == count) {
                parts[i] = left;
                Vector v(count);
                for (std::size_t k = 0; k < count; ++k) v[k] = Rational(static_cast<long>(parts[k]), static_cast<long>(n));
                for (auto& x : v) x.canonicalize();
                out.push_back(std::move(v));
                return;
            }
            for (std::size_t p = 0; p <= left; ++p) {
                parts[i] = p;
                self(i + 1, left - p, self);
            }
        };
        rec(0, n, rec);
    }
    std::sort(out.begin(), out.end(), lex_less);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

ObjectiveVerdict check_objective_axioms(const PreferenceData& prefs, const std::vector<std::size_t>& outcomes,
                                        std::size_t mixture_bound, std::stop_token stop) {
    const Universe& u = *prefs.universe;
    if (outcomes.empty()) throw InputError("the outcome set O is empty");
    for (auto o : outcomes) {
        if (o >= u.primitives.size()) throw InputError("outcome is not a declared primitive");
    }
    ConeModel cone = preference_cone(prefs);
    auto member = [&](const Vector& d) { return cone_member(d, cone, stop).member; };

    std::vector<std::size_t> live;
    for (std::size_t w = 0; w < u.worlds.size(); ++w) {
        if (!null_world(w, prefs, stop)) live.push_back(w);
    }

    ObjectiveVerdict v;
    v.mixture_bound = mixture_bound;

    // A4: o1 >=_w a >=_w o0 for every act a in C or O and every non-null atom w.
    std::vector<Vector> acts = u.vectors;
    for (auto o : outcomes) acts.push_back(u.primitive_vector(o));
    auto dominates_at = [&](const Vector& hi, const Vector& lo, std::size_t w) {
        return member(restrict_to(u, hi - lo, {w}));
    };
    auto is_best = [&](std::size_t o) {
        Vector fo = u.primitive_vector(o);
        for (auto w : live) {
            for (const auto& a : acts) {
                if (!dominates_at(fo, a, w)) return false;
            }
        }
        return true;
    };
    auto is_worst = [&](std::size_t o) {
        Vector fo = u.primitive_vector(o);
        for (auto w : live) {
            for (const auto& a : acts) {
                if (!dominates_at(a, fo, w)) return false;
            }
        }
        return true;
    };
    for (auto o : outcomes) {
        if (is_best(o)) {
            v.best = o;
            break;
        }
    }
    for (auto o : outcomes) {
        if (is_worst(o)) {
            v.worst = o;
            break;
        }
    }
    v.a4 = v.best.has_value() && v.worst.has_value();

    // A5+: on mixtures over O, the global order agrees with the order at every non-null atom.
    auto lift = [&](const Vector& weights) {
        Vector f = zeros(u.dim());
        for (std::size_t w = 0; w < u.worlds.size(); ++w) {
            for (std::size_t k = 0; k < outcomes.size(); ++k) f[u.coord(w, outcomes[k])] += weights[k];
        }
        return f;
    };
    std::vector<Vector> mixes = bounded_mixtures(outcomes.size(), std::max<std::size_t>(mixture_bound, 1));
    std::vector<Vector> lifted;
    for (const auto& m : mixes) lifted.push_back(lift(m));
    for (std::size_t i = 0; i < mixes.size() && v.a5; ++i) {
        for (std::size_t j = 0; j < mixes.size() && v.a5; ++j) {
            if (i == j) continue;
            Vector diff = lifted[i] - lifted[j];
            bool global = member(diff);
            for (auto w : live) {
                if (global != member(restrict_to(u, diff, {w}))) {
                    v.a5 = false;
                    v.a5_witness = ObjectiveVerdict::A5Witness{mixes[i], mixes[j], w};
                    break;
                }
            }
        }
    }

    // A6: completeness on O.
    for (std::size_t i = 0; i < outcomes.size() && v.a6; ++i) {
        for (std::size_t j = i + 1; j < outcomes.size(); ++j) {
            Vector diff = u.primitive_vector(outcomes[i]) - u.primitive_vector(outcomes[j]);
            if (!member(diff) && !member(negate(diff))) {
                v.a6 = false;
                v.a6_witness = std::pair{outcomes[i], outcomes[j]};
                break;
            }
        }
    }
    return v;
}

}  // namespace cdt
