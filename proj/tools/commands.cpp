#include "commands.hpp"

#include <algorithm>
#include <sstream>

#include <CLI11.hpp>

#include "cdt/error.hpp"
#include "cdt/represent.hpp"
#include "cdt/updating.hpp"
#include "problem.hpp"
#include "serialize.hpp"

namespace cdt::cli {

namespace {

struct Options {
    std::size_t limit_tests = kDefaultBasisLimit;
    std::string seed;
    std::string file;
    std::string rep_file;
    std::string choice;
    std::string left;
    std::string right;
    std::size_t brute_force = 0;
    std::size_t mixture_bound = 2;
    bool single_utility = false;
    bool multi_prob = false;
    bool objective = false;
    std::string base = "uniform";
    std::string given_test;
    std::vector<std::string> prefer;
    /// Set once the problem loads, so failure reports can name choices.
    std::shared_ptr<const Universe> universe;
};

void emit(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

Problem load(Options& o) {
    Problem p = load_problem(read_json_file(o.file), o.limit_tests);
    o.universe = p.universe;
    return p;
}

ChoiceProgram resolve_choice(const Problem& p, const std::string& text) {
    const Universe& u = *p.universe;
    auto it = std::find(u.names.begin(), u.names.end(), text);
    if (it != u.names.end()) return u.programs[static_cast<std::size_t>(it - u.names.begin())];
    return parse_choice(text, u.primitives, p.tests);
}

Vector parse_base(const Universe& u, const std::string& text) {
    if (text == "uniform") return uniform_base(u);
    Vector base;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) base.push_back(parse_rational(item));
    if (base.size() != u.worlds.size()) {
        throw InputError("--base lists " + std::to_string(base.size()) + " weights for " +
                         std::to_string(u.worlds.size()) + " consistent worlds");
    }
    return base;
}

json world_labels(const Universe& u, const std::vector<std::size_t>& idx) {
    json out = json::array();
    for (auto w : idx) out.push_back(u.worlds[w].label());
    return out;
}

int cmd_worlds(Options& o, std::ostream& out, std::ostream& err) {
    Problem p = load(o);
    const Universe& u = *p.universe;
    json basis = json::array();
    for (const auto& t : u.basis->tests()) basis.push_back(t.key());
    json worlds = json::array();
    for (const auto& w : u.worlds) worlds.push_back(w.label());
    if (u.worlds.empty()) err << "warning: the theory is unsatisfiable; no consistent worlds\n";
    emit(out, {{"basis", basis}, {"worlds", worlds}, {"count", u.worlds.size()}});
    return 0;
}

json table_json(const ChoiceTable& t) {
    json rows = json::array();
    for (const auto& r : t.rows) {
        json row = json::array();
        for (const auto& x : r) row.push_back(to_json(x));
        rows.push_back(row);
    }
    return rows;
}

int cmd_compile(Options& o, std::ostream& out, std::ostream&) {
    Problem p = load(o);
    const Universe& u = *p.universe;
    json worlds = json::array();
    for (const auto& w : u.worlds) worlds.push_back(w.label());
    json choices = json::object();
    if (!o.choice.empty()) {
        ChoiceProgram c = resolve_choice(p, o.choice);
        choices[o.choice] = {{"program", c.to_string()}, {"table", table_json(compile(c, u.worlds, u.primitives))}};
    } else {
        for (std::size_t i = 0; i < u.size(); ++i) {
            choices[u.names[i]] = {{"program", u.programs[i].to_string()},
                                   {"table", table_json(compile(u.programs[i], u.worlds, u.primitives))}};
        }
    }
    emit(out, {{"worlds", worlds}, {"primitives", u.primitives}, {"choices", choices}});
    return 0;
}

int cmd_equiv(Options& o, std::ostream& out, std::ostream&) {
    Problem p = load(o);
    const Universe& u = *p.universe;
    ChoiceProgram a = resolve_choice(p, o.left);
    ChoiceProgram b = resolve_choice(p, o.right);
    bool eq = equivalent(a, b, u.worlds, u.primitives);
    emit(out, {{"left", a.to_string()}, {"right", b.to_string()}, {"equivalent", eq}});
    return eq ? 0 : 1;
}

int cmd_check(Options& o, std::ostream& out, std::ostream& err) {
    Problem p = load(o);
    const Universe& u = *p.universe;
    json report;
    bool ok = true;
    report["language"] = u.language() == Language::A ? "A" : "A+";
    report["A1"] = a1_json(u, check_A1(p.prefs));
    CancellationVerdict c = check_cancellation(p.prefs, u.language());
    ok = ok && c.holds;
    report["cancellation"] = cancellation_json(p.prefs, c);
    report["A3"] = "structural";
    if (o.brute_force > 0) {
        try {
            BruteForceVerdict bf = brute_force_cancellation(p.prefs, o.brute_force);
            ok = ok && bf.holds;
            report["brute_force"] = brute_force_json(p.prefs, bf);
        } catch (const LimitExceeded& e) {
            err << "warning: brute-force search skipped: " << e.what() << '\n';
            report["brute_force"] = {{"skipped", e.what()}, {"bound", o.brute_force}};
        }
    }
    if (p.has_outcomes) {
        ObjectiveVerdict v = check_objective_axioms(p.prefs, p.outcomes, o.mixture_bound);
        ok = ok && v.a4 && v.a5 && v.a6;
        report["objective"] = objective_json(p.prefs, p.outcomes, v);
    }
    report["holds"] = ok;
    emit(out, report);
    return ok ? 0 : 1;
}

int cmd_represent(Options& o, std::ostream& out, std::ostream&) {
    Problem p = load(o);
    const Universe& u = *p.universe;
    if (o.objective) {
        if (!p.has_outcomes) throw InputError("--objective needs an 'outcomes' list in the problem file");
        ObjectiveResult r = represent_objective(p.prefs, p.outcomes, o.mixture_bound);
        json j = representation_to_json(r.rep);
        json cal = json::object();
        for (std::size_t k = 0; k < p.outcomes.size(); ++k) cal[u.primitives[p.outcomes[k]]] = to_json(r.calibration[k]);
        j["calibration"] = cal;
        j["objective_axioms"] = objective_json(p.prefs, p.outcomes, r.axioms);
        emit(out, j);
        return 0;
    }
    Vector base = parse_base(u, o.base);
    StateDependentRep sdr = o.single_utility ? represent_single(p.prefs) : represent_state_dependent(p.prefs);
    BootstrapShape shape = o.multi_prob ? BootstrapShape::MultiProbability : BootstrapShape::MultiUtility;
    emit(out, representation_to_json(bootstrap_seu(sdr, p.prefs, base, shape)));
    return 0;
}

int cmd_verify(Options& o, std::ostream& out, std::ostream&) {
    Problem p = load(o);
    Representation rep = representation_from_json(read_json_file(o.rep_file));
    VerifyResult r = verify_representation(rep, p.prefs);
    json j{{"ok", r.ok}};
    if (r.discrepancy) {
        j["discrepancy"] = pair_json(*p.universe, *r.discrepancy);
        j["in_closure"] = r.in_closure;
    }
    emit(out, j);
    return r.ok ? 0 : 1;
}

int cmd_update(Options& o, std::ostream& out, std::ostream&) {
    Problem p = load(o);
    const Universe& u = *p.universe;
    if (o.given_test.empty() == o.prefer.empty()) throw InputError("update needs exactly one of --given-test or --prefer");
    json j;
    UpdateCheck check;
    if (!o.given_test.empty()) {
        TestFormula t = parse_test(o.given_test, p.tests);
        check = verify_update_test(p.prefs, t);
        j["given_test"] = t.key();
        j["relation"] = pairs_json(u, check.syntactic);
        StateDependentRep sdr = represent_state_dependent(p.prefs);
        Representation rep = bootstrap_seu(sdr, p.prefs, uniform_base(u), BootstrapShape::MultiProbability);
        try {
            j["conditioned"] = conditioned_json(rep, condition_on_test(rep, t, u));
        } catch (const ConditioningUndefined& e) {
            j["conditioned"] = {{"undefined", e.what()}};
        }
    } else {
        Pair pair{u.index_of(o.prefer[0]), u.index_of(o.prefer[1])};
        check = verify_update_pair(p.prefs, pair);
        j["prefer"] = pair_json(u, pair);
        j["refined"] = closure_json(u, refine(p.prefs, pair));
    }
    j["two_path"] = update_check_json(u, check);
    emit(out, j);
    return check.agree ? 0 : 1;
}

int cmd_framing(Options& o, std::ostream& out, std::ostream&) {
    Problem p = load(o);
    const Universe& u = *p.universe;
    TestFormula t1 = parse_test(o.left, p.tests);
    TestFormula t2 = parse_test(o.right, p.tests);
    std::vector<std::size_t> w1 = worlds_entailing(u, t1);
    std::vector<std::size_t> w2 = worlds_entailing(u, t2);
    std::vector<std::size_t> diff;
    std::set_symmetric_difference(w1.begin(), w1.end(), w2.begin(), w2.end(), std::back_inserter(diff));
    // States are the consistent worlds and P = {base}, so pi(t) is the set of worlds entailing t.
    Vector base = parse_base(u, o.base);
    Rational mass = 0;
    for (auto w : diff) mass += base[w];
    json measures = json::array();
    measures.push_back({{"p", 0}, {"value", to_json(mass)}});
    emit(out, {{"t1", t1.key()},
               {"t2", t2.key()},
               {"symmetric_difference", world_labels(u, diff)},
               {"measures", measures}});
    return 0;
}

json failure_json(const AxiomFailure& e, const Universe* u) {
    json j{{"axiom", e.axiom()}, {"reason", e.what()}};
    if (e.witness() && u) j["witness"] = pair_json(*u, *e.witness());
    return j;
}

json failure_json(const CalibrationError& e, const Universe& u) {
    auto cell = [&](const CalibrationError::Cell& c) {
        return json{{"ray", c.ray}, {"world", u.worlds[c.world].label()}, {"c", to_json(c.c)}};
    };
    return {{"axiom", "calibration"},
            {"reason", e.what()},
            {"witness", {{"outcome", u.primitives[e.outcome()]}, {"low", cell(e.low())}, {"high", cell(e.high())}}}};
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Constructive decision theory toolkit", "cdt"};
    app.require_subcommand(1);
    app.add_option("--limit-tests", o.limit_tests, "Largest number of basis tests to enumerate worlds over")
        ->check(CLI::PositiveNumber);
    app.add_option("--seed", o.seed, "Reserved; no command uses randomness");

    auto* worlds = app.add_subcommand("worlds", "List consistent worlds");
    worlds->add_option("file", o.file, "Problem file")->required();

    auto* comp = app.add_subcommand("compile", "Print choice tables");
    comp->add_option("file", o.file, "Problem file")->required();
    comp->add_option("choice", o.choice, "Choice name or program (default: every named choice)");

    auto* equiv = app.add_subcommand("equiv", "Test equivalence of two choices under the theory");
    equiv->add_option("file", o.file, "Problem file")->required();
    equiv->add_option("a", o.left, "Choice name or program")->required();
    equiv->add_option("b", o.right, "Choice name or program")->required();

    auto* check = app.add_subcommand("check", "Check the axioms");
    check->add_option("file", o.file, "Problem file")->required();
    check->add_option("--brute-force", o.brute_force, "Also search literal certificates with multiplicities up to L")
        ->check(CLI::PositiveNumber);
    check->add_option("--mixture-bound", o.mixture_bound, "Largest mixture denominator for A5+")
        ->check(CLI::PositiveNumber);

    auto* rep = app.add_subcommand("represent", "Synthesize a representation");
    rep->add_option("file", o.file, "Problem file")->required();
    auto* su = rep->add_flag("--single-utility", o.single_utility, "One utility; requires A1");
    auto* mp = rep->add_flag("--multi-prob", o.multi_prob, "One measure per dual ray");
    auto* ob = rep->add_flag("--objective", o.objective, "Objective outcomes O with calibrated utility");
    su->excludes(mp)->excludes(ob);
    mp->excludes(ob);
    rep->add_option("--base", o.base, "Base measure: uniform or comma-separated weights per consistent world");
    rep->add_option("--mixture-bound", o.mixture_bound, "Largest mixture denominator for A5+")
        ->check(CLI::PositiveNumber);

    auto* ver = app.add_subcommand("verify", "Verify a representation against the problem");
    ver->add_option("file", o.file, "Problem file")->required();
    ver->add_option("representation", o.rep_file, "Representation JSON")->required();

    auto* upd = app.add_subcommand("update", "Update by a test or a new preference");
    upd->add_option("file", o.file, "Problem file")->required();
    auto* gt = upd->add_option("--given-test", o.given_test, "Condition on a test");
    auto* pr = upd->add_option("--prefer", o.prefer, "Add the weak preference A >= B")->expected(2);
    gt->excludes(pr);

    auto* fr = app.add_subcommand("framing", "Framing-bias measure of two tests");
    fr->add_option("file", o.file, "Problem file")->required();
    fr->add_option("t1", o.left, "First test")->required();
    fr->add_option("t2", o.right, "Second test")->required();
    fr->add_option("--base", o.base, "Base measure: uniform or comma-separated weights per consistent world");

    std::vector<std::string> rev(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
    std::reverse(rev.begin(), rev.end());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    if (app.count("--seed") > 0) {
        err << "error: --seed is reserved; no command uses randomness\n";
        return 2;
    }

    try {
        if (worlds->parsed()) return cmd_worlds(o, out, err);
        if (comp->parsed()) return cmd_compile(o, out, err);
        if (equiv->parsed()) return cmd_equiv(o, out, err);
        if (check->parsed()) return cmd_check(o, out, err);
        if (rep->parsed()) return cmd_represent(o, out, err);
        if (ver->parsed()) return cmd_verify(o, out, err);
        if (upd->parsed()) return cmd_update(o, out, err);
        if (fr->parsed()) return cmd_framing(o, out, err);
    } catch (const CalibrationError& e) {
        emit(out, {{"error", failure_json(e, *o.universe)}});
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const AxiomFailure& e) {
        emit(out, {{"error", failure_json(e, o.universe.get())}});
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const PreconditionError& e) {
        emit(out, {{"error", {{"reason", e.what()}}}});
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const LimitExceeded& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}

}  // namespace cdt::cli
