#include "lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "cdt/error.hpp"

namespace cdt::detail {

namespace {

constexpr std::array<std::string_view, 4> kKeywords{"if", "then", "else", "mix"};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }

std::string describe(const Token& t) {
    if (t.kind == Tok::End) return "end of input";
    return "'" + t.text + "'";
}

}  // namespace

bool is_keyword(std::string_view word) {
    return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c)) != 0) {
            ++i;
            continue;
        }
        std::size_t start = i;
        if (ident_start(c)) {
            while (i < text.size() && ident_char(text[i])) ++i;
            std::string word(text.substr(start, i - start));
            out.push_back({is_keyword(word) ? Tok::Keyword : Tok::Ident, std::move(word), start});
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) != 0) {
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])) != 0) ++i;
            out.push_back({Tok::Number, std::string(text.substr(start, i - start)), start});
            continue;
        }
        auto single = [&](Tok kind) {
            out.push_back({kind, std::string(1, c), start});
            ++i;
        };
        switch (c) {
            case '!': single(Tok::Not); break;
            case '&': single(Tok::And); break;
            case '|': single(Tok::Or); break;
            case '(': single(Tok::LParen); break;
            case ')': single(Tok::RParen); break;
            case '{': single(Tok::LBrace); break;
            case '}': single(Tok::RBrace); break;
            case ':': single(Tok::Colon); break;
            case ';': single(Tok::Semicolon); break;
            case '/': single(Tok::Slash); break;
            case '=':
                if (text.substr(i, 2) == "=>") {
                    out.push_back({Tok::Implies, "=>", start});
                    i += 2;
                    break;
                }
                throw ParseError("unexpected character '='", start);
            case '<':
                if (text.substr(i, 3) == "<=>") {
                    out.push_back({Tok::Iff, "<=>", start});
                    i += 3;
                    break;
                }
                throw ParseError("unexpected character '<'", start);
            default:
                throw ParseError(std::string("unexpected character '") + c + "'", start);
        }
    }
    out.push_back({Tok::End, "", text.size()});
    return out;
}

void TokenCursor::fail(std::string_view message) const {
    throw ParseError(std::string(message) + ", found " + describe(peek()), peek().offset);
}

const Token& TokenCursor::expect(Tok kind, std::string_view what) {
    if (!at(kind)) fail("expected " + std::string(what));
    return next();
}

void TokenCursor::expect_keyword(std::string_view kw) {
    if (!at_keyword(kw)) fail("expected '" + std::string(kw) + "'");
    next();
}

TestFormula TokenCursor::parse_test() { return parse_iff(); }

// a <=> b  is  (a => b) & (b => a); chains associate to the left.
TestFormula TokenCursor::parse_iff() {
    TestFormula lhs = parse_implies();
    while (at(Tok::Iff)) {
        next();
        TestFormula rhs = parse_implies();
        auto imp = [](const TestFormula& a, const TestFormula& b) {
            return TestFormula::negation(TestFormula::conjunction(a, TestFormula::negation(b)));
        };
        lhs = TestFormula::conjunction(imp(lhs, rhs), imp(rhs, lhs));
    }
    return lhs;
}

// a => b  is  !(a & !b); right-associative.
TestFormula TokenCursor::parse_implies() {
    TestFormula lhs = parse_or();
    if (!at(Tok::Implies)) return lhs;
    next();
    TestFormula rhs = parse_implies();
    return TestFormula::negation(TestFormula::conjunction(lhs, TestFormula::negation(rhs)));
}

// a | b  is  !(!a & !b)
TestFormula TokenCursor::parse_or() {
    TestFormula lhs = parse_and();
    while (at(Tok::Or)) {
        next();
        TestFormula rhs = parse_and();
        lhs = TestFormula::negation(
            TestFormula::conjunction(TestFormula::negation(lhs), TestFormula::negation(rhs)));
    }
    return lhs;
}

TestFormula TokenCursor::parse_and() {
    TestFormula lhs = parse_unary();
    while (at(Tok::And)) {
        next();
        lhs = TestFormula::conjunction(lhs, parse_unary());
    }
    return lhs;
}

TestFormula TokenCursor::parse_unary() {
    if (at(Tok::Not)) {
        next();
        return TestFormula::negation(parse_unary());
    }
    if (at(Tok::LParen)) {
        next();
        TestFormula inner = parse_test();
        expect(Tok::RParen, "')'");
        return inner;
    }
    if (at(Tok::Ident)) {
        const Token& id = next();
        if (std::find(declared_.begin(), declared_.end(), id.text) == declared_.end()) {
            throw InputError("undeclared test '" + id.text + "' at offset " + std::to_string(id.offset));
        }
        return TestFormula::primitive(id.text);
    }
    fail("expected a test");
}

}  // namespace cdt::detail
