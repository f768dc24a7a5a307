#include "problem.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <regex>
#include <set>

#include "cdt/error.hpp"

namespace cdt::cli {

namespace {

using nlohmann::json;

std::vector<std::string> string_list(const json& doc, const char* key, bool required) {
    if (!doc.contains(key)) {
        if (required) throw InputError(std::string("missing field '") + key + "'");
        return {};
    }
    const json& v = doc.at(key);
    if (!v.is_array()) throw InputError(std::string("field '") + key + "' must be an array of strings");
    std::vector<std::string> out;
    for (const auto& e : v) {
        if (!e.is_string()) throw InputError(std::string("field '") + key + "' must be an array of strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

void require_identifiers(const std::vector<std::string>& names, const char* what) {
    static const std::regex ident("[A-Za-z_][A-Za-z0-9_]*");
    std::set<std::string> seen;
    for (const auto& n : names) {
        if (!std::regex_match(n, ident) || is_keyword(n)) {
            throw InputError(std::string(what) + " name '" + n + "' is not a valid identifier");
        }
        if (!seen.insert(n).second) throw InputError(std::string("duplicate ") + what + " name '" + n + "'");
    }
}

}  // namespace

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError("'" + path + "' is not valid JSON: " + e.what());
    }
}

Problem load_problem(const json& doc, std::size_t world_limit) {
    if (!doc.is_object()) throw InputError("problem file must be a JSON object");
    static const std::set<std::string> known{"tests",      "axioms",  "mode",      "primitives",
                                             "outcomes",   "choices", "weak_prefs"};
    for (const auto& [key, value] : doc.items()) {
        if (!known.count(key)) throw InputError("unknown field '" + key + "'");
    }
    std::vector<std::string> tests = string_list(doc, "tests", false);
    std::vector<std::string> primitives = string_list(doc, "primitives", true);
    require_identifiers(tests, "test");
    require_identifiers(primitives, "primitive");
    for (const auto& p : primitives) {
        if (std::find(tests.begin(), tests.end(), p) != tests.end()) {
            throw InputError("'" + p + "' is declared both as a test and as a primitive");
        }
    }

    std::vector<TestFormula> axioms;
    for (const auto& text : string_list(doc, "axioms", false)) axioms.push_back(parse_test(text, tests));

    std::shared_ptr<const Basis> basis;
    const json mode = doc.value("mode", json("standard"));
    if (mode.is_string() && mode.get<std::string>() == "standard") {
        basis = std::make_shared<const Basis>(Basis::standard(tests));
    } else if (mode.is_object() && mode.size() == 1 && mode.contains("nonstandard")) {
        std::vector<TestFormula> star;
        for (const auto& text : string_list(mode, "nonstandard", true)) star.push_back(parse_test(text, tests));
        basis = std::make_shared<const Basis>(Mode::Nonstandard, std::move(star));
    } else {
        throw InputError("mode must be \"standard\" or {\"nonstandard\": [tests]}");
    }

    if (!doc.contains("choices") || !doc.at("choices").is_object()) {
        throw InputError("field 'choices' must be an object mapping names to programs");
    }
    std::map<std::string, ChoiceProgram> choices;
    for (const auto& [name, text] : doc.at("choices").items()) {
        if (!text.is_string()) throw InputError("choice '" + name + "' must be a program string");
        try {
            choices.emplace(name, parse_choice(text.get<std::string>(), primitives, tests));
        } catch (const ParseError& e) {
            throw ParseError("choice '" + name + "': " + e.what(), e.offset());
        } catch (const InputError& e) {
            throw InputError("choice '" + name + "': " + e.what());
        }
    }

    auto universe = std::make_shared<const Universe>(
        make_universe(basis, Theory(axioms), primitives, choices, world_limit));

    std::vector<Pair> pairs;
    if (doc.contains("weak_prefs")) {
        const json& wp = doc.at("weak_prefs");
        if (!wp.is_array()) throw InputError("field 'weak_prefs' must be an array of [name, name] pairs");
        for (const auto& p : wp) {
            if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string()) {
                throw InputError("field 'weak_prefs' must be an array of [name, name] pairs");
            }
            pairs.push_back({universe->index_of(p[0].get<std::string>()), universe->index_of(p[1].get<std::string>())});
        }
    }

    Problem out{tests, universe, PreferenceData(universe, std::move(pairs)), doc.contains("outcomes"), {}};
    for (const auto& o : string_list(doc, "outcomes", false)) {
        auto it = std::find(primitives.begin(), primitives.end(), o);
        if (it == primitives.end()) throw InputError("outcome '" + o + "' is not a declared primitive");
        std::size_t idx = static_cast<std::size_t>(it - primitives.begin());
        if (std::find(out.outcomes.begin(), out.outcomes.end(), idx) != out.outcomes.end()) {
            throw InputError("duplicate outcome '" + o + "'");
        }
        out.outcomes.push_back(idx);
    }
    return out;
}

}  // namespace cdt::cli
