#include <cctype>
#include <optional>
#include <string>
#include <vector>

#include "flatfix/imp.hpp"

namespace flatfix::imp {

namespace {

enum class Tok { Ident, Integer, Keyword, Symbol, End };

struct Token {
    Tok type;
    std::string text;
    Int value = 0;
    int line = 1;
    int column = 1;
};

const char* const kKeywords[] = {"skip", "if",    "then", "else", "end", "while",
                                 "do",   "done", "true", "false", "not", "and"};

bool is_keyword(const std::string& s) {
    for (const char* k : kKeywords) {
        if (s == k) return true;
    }
    return false;
}

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) { tokenize(); }

    const std::vector<Token>& tokens() const { return tokens_; }

private:
    void tokenize() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '\n') {
                ++line_;
                col_ = 1;
                ++pos_;
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++col_;
                ++pos_;
                continue;
            }
            if (std::isalpha(static_cast<unsigned char>(c))) {
                lex_word();
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(c))) {
                lex_integer();
                continue;
            }
            lex_symbol();
        }
        tokens_.push_back({Tok::End, "<end of input>", 0, line_, col_});
    }

    void lex_word() {
        int line = line_, col = col_;
        std::string word;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            word.push_back(text_[pos_++]);
            ++col_;
        }
        tokens_.push_back({is_keyword(word) ? Tok::Keyword : Tok::Ident, std::move(word), 0, line, col});
    }

    void lex_integer() {
        int line = line_, col = col_;
        std::string digits;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            digits.push_back(text_[pos_++]);
            ++col_;
        }
        Int v;
        try {
            v = std::stoll(digits);
        } catch (const std::out_of_range&) {
            throw SyntaxError(line, col, "integer literal out of range");
        }
        tokens_.push_back({Tok::Integer, std::move(digits), v, line, col});
    }

    void lex_symbol() {
        int line = line_, col = col_;
        char c = text_[pos_];
        auto two = [&](char a, char b) {
            return c == a && pos_ + 1 < text_.size() && text_[pos_ + 1] == b;
        };
        if (two(':', '=')) {
            tokens_.push_back({Tok::Symbol, ":=", 0, line, col});
            pos_ += 2;
            col_ += 2;
            return;
        }
        if (two('<', '=')) {
            tokens_.push_back({Tok::Symbol, "<=", 0, line, col});
            pos_ += 2;
            col_ += 2;
            return;
        }
        switch (c) {
            case '+': case '-': case '*': case '=': case ';': case '(': case ')': {
                tokens_.push_back({Tok::Symbol, std::string(1, c), 0, line, col});
                ++pos_;
                ++col_;
                return;
            }
            default:
                throw SyntaxError(line, col, std::string("unexpected character '") + c + "'");
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    std::vector<Token> tokens_;
};

class Parser {
public:
    explicit Parser(std::string_view text) : lexer_(text) {}

    ComPtr parse_program() {
        ComPtr c = parse_com();
        expect_end();
        return c;
    }

private:
    const Token& peek() const { return lexer_.tokens()[pos_]; }
    const Token& advance() { return lexer_.tokens()[pos_++]; }

    [[noreturn]] void fail(const Token& t, const std::string& msg) {
        throw SyntaxError(t.line, t.column, msg + ", got '" + t.text + "'");
    }

    bool at_symbol(const char* s) const { return peek().type == Tok::Symbol && peek().text == s; }
    bool at_keyword(const char* s) const { return peek().type == Tok::Keyword && peek().text == s; }

    void expect_symbol(const char* s) {
        if (!at_symbol(s)) fail(peek(), std::string("expected '") + s + "'");
        ++pos_;
    }

    void expect_keyword(const char* s) {
        if (!at_keyword(s)) fail(peek(), std::string("expected '") + s + "'");
        ++pos_;
    }

    void expect_end() {
        if (peek().type != Tok::End) fail(peek(), "expected end of input");
    }

    // com ::= basic (';' com)?   -- Seq is right-associative
    ComPtr parse_com() {
        ComPtr first = parse_basic_com();
        if (at_symbol(";")) {
            ++pos_;
            return Com::seq(std::move(first), parse_com());
        }
        return first;
    }

    ComPtr parse_basic_com() {
        if (at_keyword("skip")) {
            ++pos_;
            return Com::skip();
        }
        if (at_keyword("if")) {
            ++pos_;
            BExpPtr cond = parse_bexp();
            expect_keyword("then");
            ComPtr then_branch = parse_com();
            expect_keyword("else");
            ComPtr else_branch = parse_com();
            expect_keyword("end");
            return Com::if_then_else(std::move(cond), std::move(then_branch), std::move(else_branch));
        }
        if (at_keyword("while")) {
            ++pos_;
            BExpPtr cond = parse_bexp();
            expect_keyword("do");
            ComPtr body = parse_com();
            expect_keyword("done");
            return Com::while_do(std::move(cond), std::move(body));
        }
        if (peek().type == Tok::Ident) {
            std::string name = advance().text;
            expect_symbol(":=");
            return Com::assign(std::move(name), parse_aexp());
        }
        fail(peek(), "expected a command");
    }

    // bexp ::= batom ('and' batom)*    -- 'and' chains are left-associative
    BExpPtr parse_bexp() {
        BExpPtr b = parse_batom();
        while (at_keyword("and")) {
            ++pos_;
            b = BExp::conj(std::move(b), parse_batom());
        }
        return b;
    }

    // batom ::= 'true' | 'false' | 'not' batom
    //         | aexp ('='|'<=') aexp | '(' bexp ')'
    BExpPtr parse_batom() {
        if (at_keyword("true")) {
            ++pos_;
            return BExp::lit(true);
        }
        if (at_keyword("false")) {
            ++pos_;
            return BExp::lit(false);
        }
        if (at_keyword("not")) {
            ++pos_;
            return BExp::negation(parse_batom());
        }
        // A '(' here is ambiguous: '(x + 1) = 2' starts a comparison while
        // '(x = 1)' wraps a bexp. Try the comparison route first; when the
        // atom started with '(' we may backtrack and reparse it as a
        // parenthesized bexp.
        const std::size_t saved = pos_;
        const bool starts_with_paren = at_symbol("(");
        try {
            AExpPtr l = parse_aexp();
            if (at_symbol("=")) {
                ++pos_;
                return BExp::eq(std::move(l), parse_aexp());
            }
            if (at_symbol("<=")) {
                ++pos_;
                return BExp::le(std::move(l), parse_aexp());
            }
            if (!starts_with_paren) fail(peek(), "expected '=' or '<='");
            pos_ = saved;
        } catch (const SyntaxError&) {
            if (!starts_with_paren) throw;
            pos_ = saved;
        }
        expect_symbol("(");
        BExpPtr b = parse_bexp();
        expect_symbol(")");
        return b;
    }

    // aexp ::= term (('+'|'-') term)*
    AExpPtr parse_aexp() {
        AExpPtr e = parse_term();
        while (at_symbol("+") || at_symbol("-")) {
            const bool plus = peek().text == "+";
            ++pos_;
            AExpPtr r = parse_term();
            e = plus ? AExp::plus(std::move(e), std::move(r)) : AExp::minus(std::move(e), std::move(r));
        }
        return e;
    }

    // term ::= factor ('*' factor)*
    AExpPtr parse_term() {
        AExpPtr e = parse_factor();
        while (at_symbol("*")) {
            ++pos_;
            e = AExp::times(std::move(e), parse_factor());
        }
        return e;
    }

    // factor ::= '-'? integer | ident | '(' aexp ')'
    // The unary minus exists so negative literals round-trip; it binds only
    // to an immediately following integer.
    AExpPtr parse_factor() {
        if (at_symbol("-")) {
            const Token& minus = peek();
            ++pos_;
            if (peek().type != Tok::Integer) fail(minus, "expected an integer after unary '-'");
            Int v = advance().value;
            return AExp::lit(-v);
        }
        if (peek().type == Tok::Integer) {
            return AExp::lit(advance().value);
        }
        if (peek().type == Tok::Ident) {
            return AExp::var(advance().text);
        }
        if (at_symbol("(")) {
            ++pos_;
            AExpPtr e = parse_aexp();
            expect_symbol(")");
            return e;
        }
        fail(peek(), "expected an arithmetic expression");
    }

    Lexer lexer_;
    std::size_t pos_ = 0;
};

}  // namespace

ComPtr parse(std::string_view text) { return Parser(text).parse_program(); }

}  // namespace flatfix::imp
