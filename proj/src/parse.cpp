#include "gaugeforge/parse.hpp"

#include <cctype>
#include <charconv>
#include <optional>

namespace gaugeforge {

namespace {

std::string describe_position(std::size_t offset, std::string_view text) {
    std::string msg = "at byte " + std::to_string(offset);
    if (offset < text.size())
        msg += " ('" + std::string(1, text[offset]) + "')";
    else
        msg += " (end of input)";
    return msg;
}

std::optional<UnaryFn> lookup_fn(std::string_view name) {
    if (name == "sin") return UnaryFn::Sin;
    if (name == "cos") return UnaryFn::Cos;
    if (name == "tan") return UnaryFn::Tan;
    if (name == "exp") return UnaryFn::Exp;
    if (name == "ln") return UnaryFn::Ln;
    if (name == "sinh") return UnaryFn::Sinh;
    if (name == "cosh") return UnaryFn::Cosh;
    if (name == "tanh") return UnaryFn::Tanh;
    if (name == "sqrt") return UnaryFn::Sqrt;
    return std::nullopt;
}

class Parser {
  public:
    explicit Parser(std::string_view text) : text_(text) {}

    Expr run() {
        skip_ws();
        if (pos_ >= text_.size()) fail("an expression");
        Expr e = parse_expr();
        skip_ws();
        if (pos_ < text_.size()) fail("end of input or an operator");
        return e;
    }

  private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& expected) { throw ParseError(pos_, expected, text_); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    Expr parse_expr() {
        ExprList terms;
        terms.push_back(parse_term());
        while (true) {
            if (eat('+')) {
                terms.push_back(parse_term());
            } else if (eat('-')) {
                terms.push_back(Expr::negation(parse_term()));
            } else {
                break;
            }
        }
        return Expr::sum(std::move(terms));
    }

    Expr parse_term() {
        Expr lhs = parse_factor();
        while (true) {
            if (eat('*')) {
                lhs = Expr::product({std::move(lhs), parse_factor()});
            } else if (eat('/')) {
                lhs = Expr::quotient(std::move(lhs), parse_factor());
            } else {
                break;
            }
        }
        return lhs;
    }

    Expr parse_factor() {
        if (eat('-')) return Expr::negation(parse_factor());
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_primary();
        if (eat('^')) return Expr::power(std::move(base), parse_factor());
        return base;
    }

    Expr parse_primary() {
        char c = peek();
        if (c == '(') {
            ++pos_;
            Expr inner = parse_expr();
            if (!eat(')')) fail("')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
        fail("a number, identifier, or '('");
    }

    Expr parse_number() {
        skip_ws();
        std::size_t start = pos_;
        bool has_dot = false, has_exp = false;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (std::isdigit(static_cast<unsigned char>(c))) {
                ++pos_;
            } else if (c == '.' && !has_dot && !has_exp) {
                has_dot = true;
                ++pos_;
            } else if ((c == 'e' || c == 'E') && !has_exp && pos_ > start) {
                // exponent marker must be followed by digits (optionally signed)
                std::size_t look = pos_ + 1;
                if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
                if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
                    has_exp = true;
                    pos_ = look + 1;
                } else {
                    break;  // 'e' starts an identifier, not an exponent
                }
            } else {
                break;
            }
        }
        std::string_view tok = text_.substr(start, pos_ - start);
        if (tok.empty() || tok == ".") {
            pos_ = start;
            fail("a numeric literal");
        }
        if (!has_dot && !has_exp) {
            long long n;
            auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), n);
            if (ec == std::errc() && p == tok.data() + tok.size())
                return Expr::constant(Numeric::integer(n));
            // fall through on overflow
        }
        double v;
        auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || p != tok.data() + tok.size()) {
            pos_ = start;
            fail("a numeric literal");
        }
        return Expr::constant(Numeric(v));
    }

    Expr parse_identifier() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string name(text_.substr(start, pos_ - start));
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == '(') {
            auto fn = lookup_fn(name);
            if (!fn) {
                pos_ = start;
                fail("a known function name (sin, cos, tan, exp, ln, sinh, cosh, tanh, sqrt)");
            }
            ++pos_;
            Expr arg = parse_expr();
            if (!eat(')')) fail("')'");
            return Expr::call(*fn, std::move(arg));
        }
        return Expr::variable(std::move(name));
    }
};

}  // namespace

ParseError::ParseError(std::size_t offset, std::string expected, std::string_view text)
    : std::runtime_error("syntax error " + describe_position(offset, text) + ": expected " + expected),
      offset_(offset),
      expected_(std::move(expected)) {}

Expr parse(std::string_view text) {
    if (text.empty()) throw ParseError(0, "a non-empty expression", text);
    return Parser(text).run();
}

}  // namespace gaugeforge
