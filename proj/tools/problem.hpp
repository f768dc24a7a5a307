#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "cdt/axioms.hpp"

namespace cdt::cli {

/// A loaded problem file: compiled universe, declared preferences and the optional outcome set O.
struct Problem {
    std::vector<std::string> tests;
    std::shared_ptr<const Universe> universe;
    PreferenceData prefs;
    bool has_outcomes = false;
    /// Primitive indices of O.
    std::vector<std::size_t> outcomes;
};

/// Validates and compiles a problem document. Throws InputError on schema or name problems.
Problem load_problem(const nlohmann::json& doc, std::size_t world_limit = kDefaultBasisLimit);

/// Reads and parses a JSON file. Throws InputError when unreadable or not JSON.
nlohmann::json read_json_file(const std::string& path);

}  // namespace cdt::cli
