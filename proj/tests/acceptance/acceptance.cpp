// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <iomanip>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cdt/error.hpp"
#include "cdt/represent.hpp"
#include "cdt/updating.hpp"
#include "commands.hpp"
#include "problem.hpp"
#include "serialize.hpp"
#include "support.hpp"

using namespace cdt;
using namespace cdt::testing;
using nlohmann::json;

namespace {

const std::string kData = CDT_DATA_DIR;

std::string data(const std::string& name) { return kData + "/" + name; }

/// Collects failed expectations for one criterion.
class Log {
public:
    void expect(bool ok, const std::string& what) {
        if (!ok && failures_.size() < 10) failures_.push_back(what);
        if (!ok) ++count_;
    }
    bool ok() const { return count_ == 0; }
    const std::vector<std::string>& failures() const { return failures_; }
    std::size_t count() const { return count_; }
    std::vector<std::string> notes;

private:
    std::vector<std::string> failures_;
    std::size_t count_ = 0;
};

struct Run {
    int code;
    json report;
};

Run cdt_run(std::vector<std::string> args) {
    args.insert(args.begin(), "cdt");
    std::ostringstream out, err;
    int code = cdt::cli::run_cli(args, out, err);
    json j;
    try {
        j = json::parse(out.str());
    } catch (const json::exception&) {
    }
    return {code, j};
}

std::string temp_file(const std::string& name, const std::string& contents) {
    auto path = std::filesystem::temp_directory_path() / ("cdt_acceptance_" + name);
    std::ofstream(path) << contents;
    return path.string();
}

Rational rat(const json& j) { return parse_rational(j.get<std::string>()); }

cli::Problem load(const std::string& file) { return cli::load_problem(cli::read_json_file(data(file))); }

/// Two-state encoding of the four-act chain: a -> o1, b -> o0, p(t) = pt.
Representation chain_encoding(const Rational& pt) {
    Representation r;
    r.states = {"t", "not_t"};
    r.outcomes = {"o1", "o0"};
    r.primitives = {"a", "b"};
    r.test_interp = {{"t", {0}}};
    r.choice_interp = {{{{0, q(1)}}, {{0, q(1)}}}, {{{1, q(1)}}, {{1, q(1)}}}};
    r.probabilities = {{{0, pt}, {1, Rational(1) - pt}}};
    r.utilities = {{q(1), q(0)}};
    r.pairs = {{0, 0}};
    return r;
}

void criterion1(Log& log) {
    log.expect(cdt_run({"check", data("chain.json")}).code == 0, "chain check exits 0");
    Run rep = cdt_run({"represent", data("chain.json"), "--single-utility"});
    log.expect(rep.code == 0, "single-utility synthesis exits 0");
    std::string path = temp_file("chain_single.json", rep.report.dump());
    Run v = cdt_run({"verify", data("chain.json"), path});
    log.expect(v.code == 0 && v.report["ok"] == true, "synthesized single utility verifies");
    std::filesystem::remove(path);

    Run good = cdt_run({"verify", data("chain.json"), data("representations/chain_rep_p3_5.json")});
    log.expect(good.code == 0 && good.report["ok"] == true, "p(t) = 3/5 verifies");
    Run bad = cdt_run({"verify", data("chain.json"), data("representations/chain_rep_p2_5.json")});
    log.expect(bad.code == 1 && bad.report["ok"] == false, "p(t) = 2/5 is rejected");

    // The encoding verifies exactly when 1/2 < p(t) < 1; at p(t) = 1 the strict a > tab is lost.
    cli::Problem p = load("chain.json");
    for (long k = 0; k <= 20; ++k) {
        Rational pt = q(k, 20);
        bool ok = verify_representation(chain_encoding(pt), p.prefs).ok;
        log.expect(ok == (pt > q(1, 2) && pt < 1), "threshold at p(t) = " + to_string(pt));
    }
}

void criterion2(Log& log) {
    cli::Problem p = load("incomparable.json");
    const Universe& u = *p.universe;
    A1Verdict a1 = check_A1(p.prefs);
    log.expect(!a1.holds && a1.witness == Pair{u.index_of("a"), u.index_of("b")}, "A1 fails at (a, b)");

    StateDependentRep sdr = represent_state_dependent(p.prefs);
    log.expect(sdr.utilities.size() >= 2, "at least two utilities");
    std::size_t a = u.index_of("a"), b = u.index_of("b");
    bool ab = false, ba = false;
    for (const auto& util : sdr.utilities) {
        Rational ua = dot(util, u.vectors[a]), ub = dot(util, u.vectors[b]);
        ab |= ua > ub;
        ba |= ub > ua;
    }
    log.expect(ab && ba, "utilities rank a and b in both orders");

    Run r = cdt_run({"represent", data("incomparable.json"), "--single-utility"});
    log.expect(r.code == 1, "--single-utility exits 1");
    log.expect(r.report["error"]["axiom"] == "A1" && r.report["error"]["witness"] == json::array({"a", "b"}),
               "failure names A1 with witness (a, b)");
}

void criterion3(Log& log) {
    Run r = cdt_run({"check", data("nine_acts.json"), "--brute-force", "1"});
    log.expect(r.code == 1, "nine-act check exits 1");
    const json& w = r.report["cancellation"]["witness"];
    log.expect(w["pair"] == json::array({"a13", "a31"}), "witness pair (a13, a31)");
    std::map<std::pair<std::string, std::string>, Rational> coeff;
    for (const auto& c : w["coefficients"]) coeff[{c["pair"][0], c["pair"][1]}] = rat(c["coefficient"]);
    log.expect(coeff.size() == 2 && coeff[{"a12", "a21"}] == 1 && coeff[{"a23", "a32"}] == 1,
               "coefficients 1 on (a12, a21) and (a23, a32)");

    // The identity behind the witness, read straight off the tables.
    cli::Problem p = load("nine_acts.json");
    const Universe& u = *p.universe;
    auto f = [&](const char* n) { return u.vectors[u.index_of(n)]; };
    log.expect(f("a13") - f("a31") == (f("a12") - f("a21")) + (f("a23") - f("a32")), "table identity");

    const json& bf = r.report["brute_force"];
    log.expect(bf["holds"] == false, "brute force finds a violation at L = 1");
    log.expect(bf["witness"]["lhs"].size() == 3 && bf["witness"]["rhs"].size() == 3, "sequences of length 3");
    BruteForceVerdict v = brute_force_cancellation(p.prefs, 1);
    log.expect(!v.holds && v.witness && verify_certificate(p.prefs, *v.witness), "certificate checks");
    if (v.witness) {
        std::vector<std::size_t> l = v.witness->lhs, rr = v.witness->rhs;
        log.expect(l.size() == 3, "certificate length 3");
        Vector sl(u.dim()), sr(u.dim());
        for (auto i : l) sl = sl + u.vectors[i];
        for (auto i : rr) sr = sr + u.vectors[i];
        log.expect(sl == sr, "sequences have equal world sums");
    }
}

/// Counts assignments of (S, RT, L0_90, L0_100, D0_10, D0_0) where the two frame conditions differ.
Rational framing_oracle(bool sophisticated) {
    int differ = 0, total = 0;
    for (int bits = 0; bits < 64; ++bits) {
        bool S = bits & 32, RT = bits & 16, L90 = bits & 8, L100 = bits & 4, D10 = bits & 2, D0 = bits & 1;
        if (sophisticated && (L90 != D10 || L100 != D0)) continue;
        bool lives = (!S || L90) && (!RT || L100);
        bool deaths = (!S || D10) && (!RT || D0);
        ++total;
        differ += lives != deaths;
    }
    return q(differ, total);
}

void criterion4(Log& log) {
    cli::Problem naive = load("framing_naive.json");
    const Universe& u = *naive.universe;
    auto idx = [&](const char* n) { return u.index_of(n); };
    log.expect(naive.prefs.strict(idx("f1S"), idx("f1R")), "f1S strictly preferred to f1R");
    log.expect(naive.prefs.strict(idx("f2R"), idx("f2S")), "f2R strictly preferred to f2S");
    Run rn = cdt_run({"check", data("framing_naive.json"), "--brute-force", "1"});
    log.expect(rn.code == 0 && rn.report["holds"] == true, "naive theory passes check");

    log.expect(cdt_run({"equiv", data("framing_naive.json"), "f1S", "f2S"}).code == 1, "naive frames differ");
    for (auto [x, y] : {std::pair{"f1S", "f2S"}, std::pair{"f1R", "f2R"}}) {
        log.expect(cdt_run({"equiv", data("framing_sophisticated.json"), x, y}).code == 0,
                   std::string(x) + " and " + y + " are equivalent under AX");
    }
    log.expect(cdt_run({"check", data("framing_sophisticated.json")}).code == 1, "sophisticated check exits 1");

    const std::string lives = "(S => L0_90) & (RT => L0_100)", deaths = "(S => D0_10) & (RT => D0_0)";
    Run fn = cdt_run({"framing", data("framing_naive.json"), lives, deaths});
    Run fs = cdt_run({"framing", data("framing_sophisticated.json"), lives, deaths});
    Rational mn = rat(fn.report["measures"][0]["value"]), ms = rat(fs.report["measures"][0]["value"]);
    log.expect(mn > 0 && mn == framing_oracle(false), "naive framing measure matches the truth-table count");
    log.expect(ms == 0 && ms == framing_oracle(true), "sophisticated framing measure is 0");
    log.notes.push_back("naive framing measure " + to_string(mn));
}

void criterion5(Log& log) {
    Run r = cdt_run({"represent", data("single_utility.json"), "--objective"});
    log.expect(r.code == 1, "--objective exits 1");
    const json& w = r.report["error"]["witness"];
    log.expect(w["outcome"] == "o", "witness names o");
    if (w.contains("low") && w.contains("high")) {
        Rational lo = rat(w["low"]["c"]), hi = rat(w["high"]["c"]);
        log.expect(lo < q(1, 2) && q(1, 2) < hi, "implied weights straddle 1/2");
        log.expect(w["low"]["ray"] != w["high"]["ray"], "two distinct rays");
        log.notes.push_back("c_o in {" + to_string(lo) + ", " + to_string(hi) + "}");
    } else {
        log.expect(false, "witness carries two rays");
    }
}

void criterion6(Log& log) {
    Run r = cdt_run({"represent", data("google.json"), "--objective"});
    log.expect(r.code == 0, "--objective exits 0");
    if (r.code != 0) return;
    Representation rep = cli::representation_from_json(r.report);
    log.expect(rep.probabilities.size() == 1, "one measure");
    std::set<std::string> images;
    std::size_t a = std::find(rep.primitives.begin(), rep.primitives.end(), "a") - rep.primitives.begin();
    if (rep.probabilities.size() == 1) {
        log.expect(rep.probabilities[0].size() == 2, "two support states");
        for (const auto& [s, w] : rep.probabilities[0]) {
            log.expect(w == q(1, 2), "probability 1/2");
            const Sparse& row = rep.choice_interp.at(a).at(s);
            log.expect(row.size() == 1 && row[0].second == 1, "a is a point mass");
            if (!row.empty()) images.insert(rep.outcomes.at(row[0].first));
        }
    }
    log.expect(images == std::set<std::string>{"o0", "o1"}, "a maps to o1 on one state and o0 on the other");
    std::string path = temp_file("google_rep.json", r.report.dump());
    Run v = cdt_run({"verify", data("google.json"), path});
    log.expect(v.code == 0 && v.report["ok"] == true, "verify passes");
    std::filesystem::remove(path);
}

/// Multiplicity needed to replay a cone certificate with integer counts.
std::size_t certificate_multiplicity(const Vector& coefficients) {
    mpz_class den = 1;
    for (const auto& c : coefficients) {
        if (sgn(c) != 0) den = lcm(den, mpz_class(c.get_den()));
    }
    mpz_class most = den;
    for (const auto& c : coefficients) {
        mpz_class m = mpz_class(c.get_num()) * (den / mpz_class(c.get_den()));
        if (m > most) most = m;
    }
    return most.fits_ulong_p() ? most.get_ui() : std::numeric_limits<std::size_t>::max();
}

void criterion7(Log& log) {
    std::mt19937 rng(20240601);
    const int instances = 600;
    std::size_t replayed = 0, beyond_bound = 0, violations = 0, mixed = 0;
    // Declared pairs are raw, raw plus reflexive pairs, or already closed, in rotation.
    for (int iter = 0; iter < instances; ++iter) {
        bool mix = iter % 2 == 1;
        mixed += mix;
        auto inst = random_instance(rng, {5, 2, mix, 30});
        const Universe& u = *inst.universe;
        const std::size_t n = u.size();
        const std::string tag = " (instance " + std::to_string(iter) + ")";
        std::vector<Pair> pairs = random_pairs(rng, n, 30);
        if (iter % 3 == 1) {
            for (std::size_t i = 0; i < n; ++i) pairs.push_back({i, i});
        }
        PreferenceData raw(inst.universe, pairs);
        if (iter % 3 == 2) raw = closure(raw).relation;

        // Plain cancellation holds exactly for reflexive transitive relations,
        // and every closure is one.
        log.expect(check_plain_cancellation(raw).holds == reflexive_transitive(raw.weak_pairs, n),
                   "plain cancellation vs preorder" + tag);
        ClosureResult cl = closure(raw);
        log.expect(reflexive_transitive(cl.relation.weak_pairs, n), "closure is a preorder" + tag);
        log.expect(cl.relation.weak_pairs == oracle_closure(raw), "closure matches the Caratheodory oracle" + tag);
        const PreferenceData& p = cl.relation;

        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        std::size_t a = pick(rng), b = pick(rng), c = pick(rng);

        // Mixture independence: (a,b) in the closure iff the r-mixtures with a common c are.
        long den = std::uniform_int_distribution<long>(2, 4)(rng);
        long num = std::uniform_int_distribution<long>(1, den - 1)(rng);
        Rational r = q(num, den), rest = Rational(1) - r;
        auto ext = extend(u, {{"zA", ChoiceProgram::mixture({{r, u.programs[a]}, {rest, u.programs[c]}})},
                              {"zB", ChoiceProgram::mixture({{r, u.programs[b]}, {rest, u.programs[c]}})}});
        ClosureResult mixed_closure = closure(PreferenceData(ext, p.weak_pairs));
        log.expect(mixed_closure.relation.has(ext->index_of("zA"), ext->index_of("zB")) == p.has(a, b),
                   "mixture independence" + tag);

        // Choices with identical tables are mutually preferred in any closure.
        ChoiceProgram copy = inst.tests.empty()
                                 ? ChoiceProgram::mixture({{q(1, 2), u.programs[a]}, {q(1, 2), u.programs[a]}})
                                 : ChoiceProgram::conditional(parse_test(inst.tests[0], inst.tests), u.programs[a],
                                                              u.programs[a]);
        auto ext2 = extend(u, {{"zCopy", copy}});
        ClosureResult cc = closure(PreferenceData(ext2, raw.weak_pairs));
        std::size_t z = ext2->index_of("zCopy");
        log.expect(cc.relation.has(a, z) && cc.relation.has(z, a), "copy forced indifferent" + tag);
        for (std::size_t x = 0; x < n; ++x) {
            for (std::size_t y = 0; y < n; ++y) {
                if (u.vectors[x] == u.vectors[y]) log.expect(p.has(x, y), "equal tables indifferent" + tag);
            }
        }

        // Cone decision against literal certificates.
        CancellationVerdict cone = check_cancellation(raw, u.language());
        try {
            BruteForceVerdict small = brute_force_cancellation(raw, 2);
            if (!small.holds) {
                log.expect(!cone.holds, "brute-force violation implies cone violation" + tag);
                log.expect(small.witness && verify_certificate(raw, *small.witness), "certificate is literal" + tag);
            }
            if (cone.holds) log.expect(small.holds, "cone holds implies no certificate" + tag);
        } catch (const LimitExceeded&) {
            ++beyond_bound;
        }
        if (!cone.holds) {
            ++violations;
            std::size_t need = certificate_multiplicity(cone.coefficients);
            if (need <= BruteForceLimits{}.max_multiplicity) {
                try {
                    BruteForceVerdict v = brute_force_cancellation(raw, need);
                    log.expect(!v.holds, "brute force replays the cone certificate" + tag);
                    ++replayed;
                } catch (const LimitExceeded&) {
                    ++beyond_bound;
                }
            } else {
                ++beyond_bound;
            }
        }
    }
    log.notes.push_back(std::to_string(instances) + " instances (" + std::to_string(mixed) + " with mixtures), " +
                        std::to_string(violations) + " cone violations, " + std::to_string(replayed) +
                        " replayed by brute force, " + std::to_string(beyond_bound) + " beyond the certificate bound");
}

void criterion8(Log& log) {
    std::mt19937 rng(77);
    std::uniform_int_distribution<long> entry(-2, 2);
    std::size_t members = 0;
    for (int iter = 0; iter < 1000; ++iter) {
        std::size_t dim = std::uniform_int_distribution<std::size_t>(1, 6)(rng);
        std::size_t ngen = std::uniform_int_distribution<std::size_t>(0, 8)(rng);
        ConeModel cone;
        cone.dim = dim;
        for (std::size_t g = 0; g < ngen; ++g) {
            Vector v(dim);
            for (auto& x : v) x = entry(rng);
            cone.generators.push_back(v);
        }
        Vector d(dim);
        for (auto& x : d) x = entry(rng);
        const std::string tag = " (query " + std::to_string(iter) + ")";

        Membership lp = cone_member(d, cone);
        bool dual = dual_member(d, dual_generators(cone));
        bool oracle = caratheodory_member(cone.generators, d);
        log.expect(lp.member == dual, "LP and dual rays agree" + tag);
        log.expect(lp.member == oracle, "LP and Caratheodory agree" + tag);
        if (lp.member) {
            ++members;
            Vector sum(dim);
            bool nonneg = true;
            for (std::size_t g = 0; g < ngen; ++g) {
                nonneg = nonneg && lp.coefficients[g] >= 0;
                sum = sum + lp.coefficients[g] * cone.generators[g];
            }
            log.expect(nonneg && sum == d, "LP certificate reproduces the query" + tag);
        }
    }
    log.notes.push_back("1000 queries, " + std::to_string(members) + " members");
}

const std::vector<std::string> kCorpus{"chain.json",         "incomparable.json",          "nine_acts.json",
                                       "framing_naive.json", "framing_sophisticated.json", "single_utility.json",
                                       "google.json"};

bool passes_check(const cli::Problem& p) { return check_cancellation(p.prefs, p.universe->language()).holds; }

void criterion9(Log& log) {
    std::size_t passing = 0;
    for (const auto& file : kCorpus) {
        cli::Problem p = load(file);
        if (!passes_check(p)) continue;
        ++passing;
        const Universe& u = *p.universe;
        StateDependentRep sdr = represent_state_dependent(p.prefs);
        for (auto shape : {BootstrapShape::MultiUtility, BootstrapShape::MultiProbability}) {
            Representation rep = bootstrap_seu(sdr, p.prefs, uniform_base(u), shape);
            log.expect(verify_representation(rep, p.prefs).ok, file + ": bootstrap re-verifies");
            Representation back = cli::representation_from_json(json::parse(cli::representation_to_json(rep).dump()));
            log.expect(verify_representation(back, p.prefs).ok, file + ": JSON round trip re-verifies");
        }
        if (!check_A1(p.prefs).holds) continue;
        Representation single =
            bootstrap_seu(represent_single(p.prefs), p.prefs, uniform_base(u), BootstrapShape::MultiUtility);
        bool base = verify_representation(single, p.prefs).ok;
        log.expect(base, file + ": single utility verifies");
        for (auto [scale, shift] : {std::pair{q(1), q(0)}, std::pair{q(3), q(-2)}, std::pair{q(1, 7), q(5, 2)}}) {
            Representation r = single;
            for (auto& x : r.utilities[0]) x = scale * x + shift;
            log.expect(verify_representation(r, p.prefs).ok == base, file + ": affine rescaling keeps the verdict");
        }
    }
    log.notes.push_back(std::to_string(passing) + " corpus instances pass check");
}

void criterion10(Log& log) {
    std::size_t test_checks = 0, pair_checks = 0;
    for (const auto& file : kCorpus) {
        cli::Problem p = load(file);
        if (!passes_check(p)) continue;
        const Universe& u = *p.universe;
        for (const auto& t : p.tests) {
            for (const auto& text : {t, "!" + t}) {
                UpdateCheck c = verify_update_test(p.prefs, parse_test(text, p.tests));
                log.expect(c.agree, file + ": conditioning on " + text);
                ++test_checks;
            }
        }
        for (std::size_t a = 0; a < u.size(); ++a) {
            for (std::size_t b = 0; b < u.size(); ++b) {
                UpdateCheck c = verify_update_pair(p.prefs, {a, b});
                log.expect(c.agree, file + ": refining by " + u.names[a] + " >= " + u.names[b]);
                ++pair_checks;
            }
        }
    }
    log.notes.push_back(std::to_string(test_checks) + " test updates, " + std::to_string(pair_checks) +
                        " pair updates");
}

struct Criterion {
    int id;
    double budget_seconds;
    std::function<void(Log&)> body;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, 1, criterion1},  {2, 1, criterion2},    {3, 5, criterion3},  {4, 5, criterion4},
        {5, 1, criterion5},  {6, 1, criterion6},    {7, 120, criterion7}, {8, 60, criterion8},
        {9, 60, criterion9}, {10, 60, criterion10},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Log log;
        auto start = std::chrono::steady_clock::now();
        try {
            c.body(log);
        } catch (const std::exception& e) {
            log.expect(false, std::string("unexpected exception: ") + e.what());
        }
        double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        log.expect(seconds < c.budget_seconds, "runtime within " + std::to_string(c.budget_seconds) + " s");
        std::cout << "criterion " << c.id << ": " << (log.ok() ? "PASS" : "FAIL") << " (" << std::fixed
                  << std::setprecision(3) << seconds << " s)\n";
        for (const auto& n : log.notes) std::cout << "  " << n << '\n';
        for (const auto& f : log.failures()) std::cout << "  failed: " << f << '\n';
        if (log.count() > log.failures().size()) {
            std::cout << "  ... " << log.count() - log.failures().size() << " more\n";
        }
        failed += !log.ok();
    }
    return failed == 0 ? 0 : 1;
}
