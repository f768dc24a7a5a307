#include "cdt/logic.hpp"

#include <set>

#include "cdt/error.hpp"
#include "lexer.hpp"

namespace cdt {

struct TestFormula::Node {
    Kind kind;
    std::string name;
    std::optional<TestFormula> left;
    std::optional<TestFormula> right;
    std::string key;
};

TestFormula TestFormula::primitive(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Primitive;
    n->key = name;
    n->name = std::move(name);
    return TestFormula(std::move(n));
}

TestFormula TestFormula::negation(TestFormula operand) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Negation;
    n->key = "!" + operand.key();
    n->left = std::move(operand);
    return TestFormula(std::move(n));
}

TestFormula TestFormula::conjunction(TestFormula left, TestFormula right) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Conjunction;
    n->key = "(" + left.key() + " & " + right.key() + ")";
    n->left = std::move(left);
    n->right = std::move(right);
    return TestFormula(std::move(n));
}

TestFormula::Kind TestFormula::kind() const { return node_->kind; }
const std::string& TestFormula::name() const { return node_->name; }
const TestFormula& TestFormula::left() const { return *node_->left; }
const TestFormula& TestFormula::right() const { return *node_->right; }
const std::string& TestFormula::key() const { return node_->key; }

std::vector<std::string> TestFormula::primitives() const {
    std::vector<std::string> out;
    std::set<std::string> seen;
    auto walk = [&](const TestFormula& t, auto& self) -> void {
        switch (t.kind()) {
            case Kind::Primitive:
                if (seen.insert(t.name()).second) out.push_back(t.name());
                break;
            case Kind::Negation: self(t.left(), self); break;
            case Kind::Conjunction:
                self(t.left(), self);
                self(t.right(), self);
                break;
        }
    };
    walk(*this, walk);
    return out;
}

TestFormula parse_test(std::string_view text, const std::vector<std::string>& declared) {
    detail::TokenCursor cursor(detail::tokenize(text), declared);
    TestFormula t = cursor.parse_test();
    if (!cursor.at(detail::Tok::End)) cursor.fail("expected end of test");
    return t;
}

Theory::Theory(const std::vector<TestFormula>& axioms) {
    std::set<std::string> seen;
    for (const auto& ax : axioms) {
        if (seen.insert(ax.key()).second) axioms_.push_back(ax);
    }
}

Basis::Basis(Mode mode, std::vector<TestFormula> tests) : mode_(mode) {
    for (auto& t : tests) {
        if (mode == Mode::Standard && t.kind() != TestFormula::Kind::Primitive) {
            throw InputError("standard basis may only contain primitive tests, got '" + t.key() + "'");
        }
        if (index_.emplace(t.key(), tests_.size()).second) tests_.push_back(std::move(t));
    }
}

Basis Basis::standard(const std::vector<std::string>& names) {
    std::vector<TestFormula> tests;
    tests.reserve(names.size());
    for (const auto& n : names) tests.push_back(TestFormula::primitive(n));
    return Basis(Mode::Standard, std::move(tests));
}

std::optional<std::size_t> Basis::index_of(const TestFormula& t) const {
    auto it = index_.find(t.key());
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> Basis::index_of_primitive(const std::string& name) const {
    return index_of(TestFormula::primitive(name));
}

World::World(std::shared_ptr<const Basis> basis, std::vector<bool> assignment)
    : basis_(std::move(basis)), assignment_(std::move(assignment)) {
    if (assignment_.size() != basis_->size()) throw InputError("world assignment is not total on its basis");
}

std::string World::label() const {
    std::string s;
    s.reserve(assignment_.size());
    for (bool b : assignment_) s.push_back(b ? '1' : '0');
    return s;
}

bool eval_test(const TestFormula& t, const World& w) {
    const Basis& basis = w.basis();
    if (basis.mode() == Mode::Nonstandard) {
        auto idx = basis.index_of(t);
        if (!idx) throw InputError("test '" + t.key() + "' is not in the nonstandard basis T*");
        return w.value(*idx);
    }
    switch (t.kind()) {
        case TestFormula::Kind::Primitive: {
            auto idx = basis.index_of(t);
            if (!idx) throw InputError("test '" + t.name() + "' is not in the world basis");
            return w.value(*idx);
        }
        case TestFormula::Kind::Negation: return !eval_test(t.left(), w);
        case TestFormula::Kind::Conjunction: return eval_test(t.left(), w) && eval_test(t.right(), w);
    }
    return false;
}

bool entails(const World& w, const TestFormula& t) { return eval_test(t, w); }

std::vector<World> enumerate_worlds(const std::shared_ptr<const Basis>& basis, const Theory& theory,
                                    std::size_t limit) {
    const std::size_t n = basis->size();
    if (n > limit) {
        throw InputError("basis has " + std::to_string(n) + " tests, over the limit of " + std::to_string(limit));
    }
    if (n == 0 && !theory.empty()) throw InputError("nonempty theory over an empty basis");
    if (basis->mode() == Mode::Nonstandard) {
        for (const auto& ax : theory.axioms()) {
            if (!basis->index_of(ax)) throw InputError("axiom '" + ax.key() + "' is not a member of T*");
        }
    }
    std::vector<World> out;
    const std::size_t count = std::size_t{1} << n;
    for (std::size_t code = 0; code < count; ++code) {
        std::vector<bool> assignment(n);
        for (std::size_t j = 0; j < n; ++j) assignment[j] = ((code >> (n - 1 - j)) & 1U) != 0;
        World w(basis, std::move(assignment));
        bool consistent = true;
        for (const auto& ax : theory.axioms()) {
            if (!eval_test(ax, w)) {
                consistent = false;
                break;
            }
        }
        if (consistent) out.push_back(std::move(w));
    }
    return out;
}

}  // namespace cdt
