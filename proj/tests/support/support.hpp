#pragma once

// Test-side helpers and oracles. Oracles here deliberately avoid the library's LP and
// double-description code so they can referee it.

#include <algorithm>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "cdt/axioms.hpp"
#include "cdt/choice.hpp"
#include "cdt/logic.hpp"
#include "cdt/rational.hpp"

namespace cdt::testing {

/// mpq_class(p, d) does not reduce; every test-built rational goes through here.
inline Rational q(long p, long d = 1) {
    Rational r(p, d);
    r.canonicalize();
    return r;
}

inline Vector vec(std::initializer_list<long> xs) {
    Vector v;
    for (long x : xs) v.emplace_back(x);
    return v;
}

struct Instance {
    std::vector<std::string> tests;
    std::shared_ptr<const Universe> universe;
};

inline Instance build(const std::vector<std::string>& tests, const std::vector<std::string>& axioms,
                      const std::vector<std::string>& primitives, const std::map<std::string, std::string>& choices) {
    std::vector<TestFormula> ax;
    for (const auto& a : axioms) ax.push_back(parse_test(a, tests));
    std::map<std::string, ChoiceProgram> progs;
    for (const auto& [name, text] : choices) progs.emplace(name, parse_choice(text, primitives, tests));
    auto basis = std::make_shared<const Basis>(Basis::standard(tests));
    return {tests, std::make_shared<const Universe>(make_universe(basis, Theory(ax), primitives, progs))};
}

inline PreferenceData prefs_of(const Instance& inst, const std::vector<std::pair<std::string, std::string>>& pairs) {
    std::vector<Pair> ps;
    for (const auto& [a, b] : pairs) ps.push_back({inst.universe->index_of(a), inst.universe->index_of(b)});
    return PreferenceData(inst.universe, ps);
}

/// The universe u with extra named choices added.
inline std::shared_ptr<const Universe> extend(const Universe& u, const std::map<std::string, ChoiceProgram>& extra) {
    std::map<std::string, ChoiceProgram> all;
    for (std::size_t i = 0; i < u.size(); ++i) all.emplace(u.names[i], u.programs[i]);
    for (const auto& [k, v] : extra) all.emplace(k, v);
    return std::make_shared<const Universe>(make_universe(u.basis, u.theory, u.primitives, all));
}

inline PreferenceData closed(const PreferenceData& p) { return closure(p).relation; }

/// Solves the square-or-tall system columns * x = d by Gaussian elimination.
/// Returns false when inconsistent. Columns are assumed linearly independent.
inline bool solve_independent(const std::vector<Vector>& columns, const Vector& d, Vector& x) {
    const std::size_t m = d.size();
    const std::size_t n = columns.size();
    std::vector<Vector> a(m, Vector(n + 1));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) a[i][j] = columns[j][i];
        a[i][n] = d[i];
    }
    std::size_t row = 0;
    std::vector<std::size_t> piv;
    for (std::size_t c = 0; c < n && row < m; ++c) {
        std::size_t p = row;
        while (p < m && a[p][c] == 0) ++p;
        if (p == m) return false;
        std::swap(a[p], a[row]);
        for (std::size_t i = 0; i < m; ++i) {
            if (i == row || a[i][c] == 0) continue;
            Rational f = a[i][c] / a[row][c];
            for (std::size_t k = c; k <= n; ++k) a[i][k] -= f * a[row][k];
        }
        piv.push_back(c);
        ++row;
    }
    for (std::size_t i = row; i < m; ++i) {
        if (a[i][n] != 0) return false;
    }
    x.assign(n, 0);
    for (std::size_t i = 0; i < piv.size(); ++i) x[piv[i]] = a[i][n] / a[i][piv[i]];
    return true;
}

inline std::size_t rank_of(std::vector<Vector> rows) {
    std::size_t r = 0;
    if (rows.empty()) return 0;
    const std::size_t n = rows[0].size();
    for (std::size_t c = 0; c < n && r < rows.size(); ++c) {
        std::size_t p = r;
        while (p < rows.size() && rows[p][c] == 0) ++p;
        if (p == rows.size()) continue;
        std::swap(rows[p], rows[r]);
        for (std::size_t i = r + 1; i < rows.size(); ++i) {
            if (rows[i][c] == 0) continue;
            Rational f = rows[i][c] / rows[r][c];
            for (std::size_t k = c; k < n; ++k) rows[i][k] -= f * rows[r][k];
        }
        ++r;
    }
    return r;
}

/// Caratheodory oracle: d is in cone(gens) iff it is a nonnegative combination of some
/// linearly independent subset. Exponential in |gens|; for small instances only.
inline bool caratheodory_member(const std::vector<Vector>& gens, const Vector& d) {
    bool zero = std::all_of(d.begin(), d.end(), [](const Rational& x) { return x == 0; });
    if (zero) return true;
    const std::size_t n = gens.size();
    for (unsigned long mask = 1; mask < (1UL << n); ++mask) {
        std::vector<Vector> cols;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (1UL << i)) cols.push_back(gens[i]);
        }
        if (rank_of(cols) != cols.size()) continue;
        Vector x;
        if (!solve_independent(cols, d, x)) continue;
        if (std::all_of(x.begin(), x.end(), [](const Rational& v) { return v >= 0; })) return true;
    }
    return false;
}

/// Pairs (c,d) of C with f_c - f_d in cone(D+), decided by the Caratheodory oracle.
inline std::vector<Pair> oracle_closure(const PreferenceData& prefs) {
    const Universe& u = *prefs.universe;
    std::vector<Vector> gens;
    for (const auto& [a, b] : prefs.weak_pairs) {
        Vector g = u.vectors[a] - u.vectors[b];
        if (is_zero(g)) continue;
        if (std::find(gens.begin(), gens.end(), g) == gens.end()) gens.push_back(g);
    }
    std::vector<Pair> out;
    for (std::size_t c = 0; c < u.size(); ++c) {
        for (std::size_t d = 0; d < u.size(); ++d) {
            if (caratheodory_member(gens, u.vectors[c] - u.vectors[d])) out.push_back({c, d});
        }
    }
    return out;
}

inline bool reflexive_transitive(const std::vector<Pair>& pairs, std::size_t n) {
    std::vector<std::vector<bool>> r(n, std::vector<bool>(n));
    for (const auto& [a, b] : pairs) r[a][b] = true;
    for (std::size_t a = 0; a < n; ++a) {
        if (!r[a][a]) return false;
        for (std::size_t b = 0; b < n; ++b) {
            for (std::size_t c = 0; c < n; ++c) {
                if (r[a][b] && r[b][c] && !r[a][c]) return false;
            }
        }
    }
    return true;
}

/// Random program text over the given primitives and tests.
inline std::string random_program(std::mt19937& rng, const std::vector<std::string>& prims,
                                  const std::vector<std::string>& tests, int depth, bool allow_mix) {
    auto pick = [&](const std::vector<std::string>& xs) {
        return xs[std::uniform_int_distribution<std::size_t>(0, xs.size() - 1)(rng)];
    };
    int kind = std::uniform_int_distribution<int>(0, 9)(rng);
    if (depth <= 0 || kind < 3) return pick(prims);
    if (allow_mix && kind == 9) {
        int n = std::uniform_int_distribution<int>(2, 4)(rng);
        int m = std::uniform_int_distribution<int>(1, n - 1)(rng);
        return "mix { " + std::to_string(m) + "/" + std::to_string(n) + ": " +
               random_program(rng, prims, tests, depth - 1, allow_mix) + " ; " + std::to_string(n - m) + "/" +
               std::to_string(n) + ": " + random_program(rng, prims, tests, depth - 1, allow_mix) + " }";
    }
    if (tests.empty()) return pick(prims);
    std::string t = pick(tests);
    int shape = std::uniform_int_distribution<int>(0, 3)(rng);
    if (shape == 1) t = "!" + t;
    if (shape == 2 && tests.size() > 1) t = "(" + t + " & " + pick(tests) + ")";
    if (shape == 3 && tests.size() > 1) t = "(" + t + " | !" + pick(tests) + ")";
    return "if " + t + " then (" + random_program(rng, prims, tests, depth - 1, allow_mix) + ") else (" +
           random_program(rng, prims, tests, depth - 1, allow_mix) + ")";
}

struct RandomSpec {
    std::size_t max_choices = 5;
    std::size_t max_tests = 2;
    bool allow_mix = false;
    /// Probability (in percent) of declaring each ordered pair.
    int density = 30;
};

/// Random instance with names c0..c{k-1} and primitives p0..p{m-1}.
inline Instance random_instance(std::mt19937& rng, const RandomSpec& spec) {
    std::size_t nt = std::uniform_int_distribution<std::size_t>(0, spec.max_tests)(rng);
    std::size_t np = std::uniform_int_distribution<std::size_t>(2, 3)(rng);
    std::size_t nc = std::uniform_int_distribution<std::size_t>(2, spec.max_choices)(rng);
    std::vector<std::string> tests, prims;
    for (std::size_t i = 0; i < nt; ++i) tests.push_back("t" + std::to_string(i));
    for (std::size_t i = 0; i < np; ++i) prims.push_back("p" + std::to_string(i));
    std::map<std::string, std::string> choices;
    for (std::size_t i = 0; i < nc; ++i) {
        choices["c" + std::to_string(i)] = random_program(rng, prims, tests, 2, spec.allow_mix);
    }
    return build(tests, {}, prims, choices);
}

inline std::vector<Pair> random_pairs(std::mt19937& rng, std::size_t n, int density) {
    std::vector<Pair> out;
    std::uniform_int_distribution<int> pct(0, 99);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            if (pct(rng) < density) out.push_back({a, b});
        }
    }
    return out;
}

}  // namespace cdt::testing
