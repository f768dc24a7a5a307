#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cdt {

/// Propositional test over primitive tests, using only negation and conjunction.
/// Disjunction, implication and biconditional are desugared by the parser.
/// Immutable; copies share structure.
class TestFormula {
public:
    enum class Kind { Primitive, Negation, Conjunction };

    static TestFormula primitive(std::string name);
    static TestFormula negation(TestFormula operand);
    static TestFormula conjunction(TestFormula left, TestFormula right);

    Kind kind() const;
    /// Name of the referenced primitive test. Only valid for Kind::Primitive.
    const std::string& name() const;
    /// Operand of a negation, or left conjunct.
    const TestFormula& left() const;
    /// Right conjunct. Only valid for Kind::Conjunction.
    const TestFormula& right() const;

    /// Canonical, fully parenthesized rendering; two formulas are structurally
    /// equal iff their keys are equal.
    const std::string& key() const;

    /// Names of all primitive tests referenced, in first-occurrence order.
    std::vector<std::string> primitives() const;

    friend bool operator==(const TestFormula& a, const TestFormula& b) { return a.key() == b.key(); }

private:
    struct Node;
    explicit TestFormula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// Parses `text` per the test grammar. Every identifier must appear in `declared`.
/// Throws ParseError (with offset) on syntax errors and InputError on undeclared names.
TestFormula parse_test(std::string_view text, const std::vector<std::string>& declared);

/// Ordered, duplicate-free list of axioms.
class Theory {
public:
    Theory() = default;
    explicit Theory(const std::vector<TestFormula>& axioms);

    const std::vector<TestFormula>& axioms() const { return axioms_; }
    bool empty() const { return axioms_.empty(); }

private:
    std::vector<TestFormula> axioms_;
};

enum class Mode { Standard, Nonstandard };

/// The tests a world assigns truth values to: the primitive tests in standard
/// mode, the designated finite set T* in nonstandard mode.
class Basis {
public:
    Basis(Mode mode, std::vector<TestFormula> tests);

    /// Standard basis over primitive test names.
    static Basis standard(const std::vector<std::string>& names);

    Mode mode() const { return mode_; }
    const std::vector<TestFormula>& tests() const { return tests_; }
    std::size_t size() const { return tests_.size(); }
    std::optional<std::size_t> index_of(const TestFormula& t) const;
    std::optional<std::size_t> index_of_primitive(const std::string& name) const;

private:
    Mode mode_;
    std::vector<TestFormula> tests_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// Truth assignment over a basis. In standard mode this is exactly an atom.
class World {
public:
    World(std::shared_ptr<const Basis> basis, std::vector<bool> assignment);

    const Basis& basis() const { return *basis_; }
    const std::shared_ptr<const Basis>& basis_ptr() const { return basis_; }
    Mode mode() const { return basis_->mode(); }
    const std::vector<bool>& assignment() const { return assignment_; }
    bool value(std::size_t i) const { return assignment_[i]; }

    /// Assignment rendered as '0'/'1' characters in basis order.
    std::string label() const;

    friend bool operator==(const World& a, const World& b) {
        return a.assignment_ == b.assignment_ && a.basis_ == b.basis_;
    }

private:
    std::shared_ptr<const Basis> basis_;
    std::vector<bool> assignment_;
};

/// Standard mode: recursive evaluation over the atom's primitive values.
/// Nonstandard mode: `t` must itself be a member of T*; its value is read off the assignment.
/// Throws InputError when `t` (or a primitive it uses) is outside the basis.
bool eval_test(const TestFormula& t, const World& w);

/// True iff `t` holds at `w`.
bool entails(const World& w, const TestFormula& t);

inline constexpr std::size_t kDefaultBasisLimit = 16;

/// All worlds over `basis` that satisfy every axiom, in lexicographic order of
/// the basis (false before true, first test most significant). An empty result
/// means the theory is inconsistent and is not an error.
std::vector<World> enumerate_worlds(const std::shared_ptr<const Basis>& basis, const Theory& theory,
                                    std::size_t limit = kDefaultBasisLimit);

}  // namespace cdt
