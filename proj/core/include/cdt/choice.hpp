#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cdt/logic.hpp"
#include "cdt/rational.hpp"

namespace cdt {

/// Syntactic choice: a primitive, `if t then a else b`, or a finite rational mixture.
class ChoiceProgram {
public:
    enum class Kind { Primitive, Conditional, Mixture };
    using Weighted = std::pair<Rational, ChoiceProgram>;

    static ChoiceProgram primitive(std::string name);
    static ChoiceProgram conditional(TestFormula test, ChoiceProgram then_branch, ChoiceProgram else_branch);
    /// Weights must lie in (0,1] and sum to exactly 1; throws InputError otherwise.
    static ChoiceProgram mixture(std::vector<Weighted> parts);

    Kind kind() const;
    const std::string& name() const;
    const TestFormula& test() const;
    const ChoiceProgram& then_branch() const;
    const ChoiceProgram& else_branch() const;
    const std::vector<Weighted>& parts() const;

    /// True when no mixture node occurs (the program lies in A rather than A+).
    bool is_pure() const;
    std::string to_string() const;

private:
    struct Node;
    explicit ChoiceProgram(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// Reserved words of the choice grammar: if, then, else, mix.
bool is_keyword(std::string_view word);

/// Parses a choice program. Primitive names must be in `primitives`, test names in `tests`.
ChoiceProgram parse_choice(std::string_view text, const std::vector<std::string>& primitives,
                           const std::vector<std::string>& tests);

enum class Language { A, APlus };

/// Per-world distribution over primitives. rows[w][i] is the weight of primitive i at world w.
struct ChoiceTable {
    std::vector<Vector> rows;

    /// Row-major flattening: index = world * |A0| + primitive.
    Vector flatten() const;
    friend bool operator==(const ChoiceTable& a, const ChoiceTable& b) { return a.rows == b.rows; }
};

/// Distribution selected by `c` at a single world.
Vector compile_at(const ChoiceProgram& c, const World& w, const std::vector<std::string>& primitives);

ChoiceTable compile(const ChoiceProgram& c, const std::vector<World>& worlds,
                    const std::vector<std::string>& primitives);

/// AX-equivalence: identical tables on every consistent world.
bool equivalent(const ChoiceProgram& a, const ChoiceProgram& b, const std::vector<World>& worlds,
                const std::vector<std::string>& primitives);

}  // namespace cdt
