#pragma once

// Tokenizer and test-expression parser shared by the test and choice grammars.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "cdt/logic.hpp"

namespace cdt::detail {

enum class Tok {
    Ident,
    Keyword,  // if, then, else, mix
    Number,
    Not,      // !
    And,      // &
    Or,       // |
    Implies,  // =>
    Iff,      // <=>
    LParen,
    RParen,
    LBrace,
    RBrace,
    Colon,
    Semicolon,
    Slash,
    End,
};

struct Token {
    Tok kind;
    std::string text;
    std::size_t offset;
};

std::vector<Token> tokenize(std::string_view text);

/// Cursor over a token stream with the recursive-descent test parser.
class TokenCursor {
public:
    TokenCursor(std::vector<Token> tokens, const std::vector<std::string>& declared_tests)
        : tokens_(std::move(tokens)), declared_(declared_tests) {}

    const Token& peek() const { return tokens_[pos_]; }
    const Token& next() { return tokens_[pos_++]; }
    bool at(Tok kind) const { return peek().kind == kind; }
    bool at_keyword(std::string_view kw) const { return at(Tok::Keyword) && peek().text == kw; }
    const Token& expect(Tok kind, std::string_view what);
    void expect_keyword(std::string_view kw);
    [[noreturn]] void fail(std::string_view message) const;

    TestFormula parse_test();

private:
    TestFormula parse_iff();
    TestFormula parse_implies();
    TestFormula parse_or();
    TestFormula parse_and();
    TestFormula parse_unary();

    std::vector<Token> tokens_;
    const std::vector<std::string>& declared_;
    std::size_t pos_ = 0;
};

bool is_keyword(std::string_view word);

}  // namespace cdt::detail
