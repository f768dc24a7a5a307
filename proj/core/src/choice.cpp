#include "cdt/choice.hpp"

#include <algorithm>
#include <optional>

#include "cdt/error.hpp"
#include "lexer.hpp"

namespace cdt {

struct ChoiceProgram::Node {
    Kind kind;
    std::string name;
    std::optional<TestFormula> test;
    std::optional<ChoiceProgram> then_branch;
    std::optional<ChoiceProgram> else_branch;
    std::vector<Weighted> parts;
};

ChoiceProgram ChoiceProgram::primitive(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Primitive;
    n->name = std::move(name);
    return ChoiceProgram(std::move(n));
}

ChoiceProgram ChoiceProgram::conditional(TestFormula test, ChoiceProgram then_branch, ChoiceProgram else_branch) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Conditional;
    n->test = std::move(test);
    n->then_branch = std::move(then_branch);
    n->else_branch = std::move(else_branch);
    return ChoiceProgram(std::move(n));
}

ChoiceProgram ChoiceProgram::mixture(std::vector<Weighted> parts) {
    if (parts.empty()) throw InputError("empty mixture");
    Rational total = 0;
    for (const auto& [w, p] : parts) {
        if (sgn(w) <= 0 || w > 1) throw InputError("mixture weight " + cdt::to_string(w) + " outside (0,1]");
        total += w;
    }
    if (total != 1) throw InputError("mixture weights sum to " + cdt::to_string(total) + ", expected 1");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Mixture;
    n->parts = std::move(parts);
    return ChoiceProgram(std::move(n));
}

ChoiceProgram::Kind ChoiceProgram::kind() const { return node_->kind; }
const std::string& ChoiceProgram::name() const { return node_->name; }
const TestFormula& ChoiceProgram::test() const { return *node_->test; }
const ChoiceProgram& ChoiceProgram::then_branch() const { return *node_->then_branch; }
const ChoiceProgram& ChoiceProgram::else_branch() const { return *node_->else_branch; }
const std::vector<ChoiceProgram::Weighted>& ChoiceProgram::parts() const { return node_->parts; }

bool ChoiceProgram::is_pure() const {
    switch (kind()) {
        case Kind::Primitive: return true;
        case Kind::Conditional: return then_branch().is_pure() && else_branch().is_pure();
        case Kind::Mixture: return false;
    }
    return false;
}

std::string ChoiceProgram::to_string() const {
    switch (kind()) {
        case Kind::Primitive: return name();
        case Kind::Conditional:
            return "(if " + test().key() + " then " + then_branch().to_string() + " else " +
                   else_branch().to_string() + ")";
        case Kind::Mixture: {
            std::string s = "mix { ";
            for (std::size_t i = 0; i < parts().size(); ++i) {
                if (i > 0) s += " ; ";
                s += cdt::to_string(parts()[i].first) + ": " + parts()[i].second.to_string();
            }
            return s + " }";
        }
    }
    return {};
}

namespace {

class ChoiceParser {
public:
    ChoiceParser(std::string_view text, const std::vector<std::string>& primitives,
                 const std::vector<std::string>& tests)
        : cur_(detail::tokenize(text), tests), primitives_(primitives) {}

    ChoiceProgram parse() {
        ChoiceProgram c = choice();
        if (!cur_.at(detail::Tok::End)) cur_.fail("expected end of choice");
        return c;
    }

private:
    ChoiceProgram choice() {
        if (cur_.at_keyword("mix")) return mixture();
        return cond();
    }

    ChoiceProgram mixture() {
        std::size_t start = cur_.next().offset;
        cur_.expect(detail::Tok::LBrace, "'{'");
        std::vector<ChoiceProgram::Weighted> parts;
        do {
            Rational w = weight();
            cur_.expect(detail::Tok::Colon, "':'");
            parts.emplace_back(std::move(w), choice());
        } while (cur_.at(detail::Tok::Semicolon) && (cur_.next(), true));
        cur_.expect(detail::Tok::RBrace, "'}'");
        try {
            return ChoiceProgram::mixture(std::move(parts));
        } catch (const InputError& e) {
            throw InputError(std::string(e.what()) + " (mixture at offset " + std::to_string(start) + ")");
        }
    }

    Rational weight() {
        const auto& num = cur_.expect(detail::Tok::Number, "a rational weight");
        std::string text = num.text;
        if (cur_.at(detail::Tok::Slash)) {
            cur_.next();
            text += "/" + cur_.expect(detail::Tok::Number, "a denominator").text;
        }
        try {
            return parse_rational(text);
        } catch (const InputError& e) {
            throw ParseError(e.what(), num.offset);
        }
    }

    ChoiceProgram cond() {
        if (cur_.at_keyword("if")) {
            cur_.next();
            TestFormula t = cur_.parse_test();
            cur_.expect_keyword("then");
            ChoiceProgram a = choice();
            cur_.expect_keyword("else");
            ChoiceProgram b = choice();
            return ChoiceProgram::conditional(std::move(t), std::move(a), std::move(b));
        }
        if (cur_.at(detail::Tok::LParen)) {
            cur_.next();
            ChoiceProgram inner = choice();
            cur_.expect(detail::Tok::RParen, "')'");
            return inner;
        }
        if (cur_.at(detail::Tok::Ident)) {
            const auto& id = cur_.next();
            if (std::find(primitives_.begin(), primitives_.end(), id.text) == primitives_.end()) {
                throw InputError("undeclared primitive choice '" + id.text + "' at offset " +
                                 std::to_string(id.offset));
            }
            return ChoiceProgram::primitive(id.text);
        }
        cur_.fail("expected a choice");
    }

    detail::TokenCursor cur_;
    const std::vector<std::string>& primitives_;
};

}  // namespace

bool is_keyword(std::string_view word) { return detail::is_keyword(word); }

ChoiceProgram parse_choice(std::string_view text, const std::vector<std::string>& primitives,
                           const std::vector<std::string>& tests) {
    return ChoiceParser(text, primitives, tests).parse();
}

Vector ChoiceTable::flatten() const {
    Vector out;
    for (const auto& row : rows) out.insert(out.end(), row.begin(), row.end());
    return out;
}

namespace {

void accumulate(const ChoiceProgram& c, const World& w, const std::vector<std::string>& primitives,
                const Rational& scale, Vector& row) {
    switch (c.kind()) {
        case ChoiceProgram::Kind::Primitive: {
            auto it = std::find(primitives.begin(), primitives.end(), c.name());
            if (it == primitives.end()) throw InputError("unknown primitive choice '" + c.name() + "'");
            row[static_cast<std::size_t>(it - primitives.begin())] += scale;
            return;
        }
        case ChoiceProgram::Kind::Conditional:
            accumulate(eval_test(c.test(), w) ? c.then_branch() : c.else_branch(), w, primitives, scale, row);
            return;
        case ChoiceProgram::Kind::Mixture:
            for (const auto& [weight, part] : c.parts()) accumulate(part, w, primitives, scale * weight, row);
            return;
    }
}

}  // namespace

Vector compile_at(const ChoiceProgram& c, const World& w, const std::vector<std::string>& primitives) {
    Vector row = zeros(primitives.size());
    accumulate(c, w, primitives, Rational(1), row);
    return row;
}

ChoiceTable compile(const ChoiceProgram& c, const std::vector<World>& worlds,
                    const std::vector<std::string>& primitives) {
    ChoiceTable t;
    t.rows.reserve(worlds.size());
    for (const auto& w : worlds) t.rows.push_back(compile_at(c, w, primitives));
    return t;
}

bool equivalent(const ChoiceProgram& a, const ChoiceProgram& b, const std::vector<World>& worlds,
                const std::vector<std::string>& primitives) {
    for (const auto& w : worlds) {
        if (compile_at(a, w, primitives) != compile_at(b, w, primitives)) return false;
    }
    return true;
}

}  // namespace cdt
