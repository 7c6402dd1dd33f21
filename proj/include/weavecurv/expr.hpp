#pragma once

#include <cctype>
#include <string>

#include "rational_function.hpp"

namespace weavecurv {

// Arithmetic expression language over the context variables.
//
//   expr   := term (("+" | "-") term)*
//   term   := factor (("*" | "/") factor)*
//   factor := ("-")* base ("^" integer)?
//   base   := integer | identifier | "(" expr ")"
//
// Exponentiation binds tighter than unary minus, which binds tighter
// than "*" and "/", which bind tighter than "+" and "-"; binary
// operators associate to the left.  Integers are arbitrary-precision;
// there are no floating-point literals.  Evaluation is direct into a
// rational function.
namespace exprdetail {

class Parser {
public:
    Parser(const std::string& text, const CtxPtr& ctx) : text_(text), ctx_(ctx) {}

    RationalFunction run() {
        RationalFunction r = parse_expr();
        skip_ws();
        if (pos_ != text_.size()) throw SyntaxError("unexpected trailing input", pos_);
        return r;
    }

private:
    RationalFunction parse_expr() {
        RationalFunction r = parse_term();
        while (true) {
            skip_ws();
            if (peek() == '+') { ++pos_; r += parse_term(); }
            else if (peek() == '-') { ++pos_; r -= parse_term(); }
            else return r;
        }
    }

    RationalFunction parse_term() {
        RationalFunction r = parse_factor();
        while (true) {
            skip_ws();
            if (peek() == '*') {
                ++pos_;
                r *= parse_factor();
            } else if (peek() == '/') {
                std::size_t at = pos_;
                ++pos_;
                RationalFunction d = parse_factor();
                if (d.is_zero()) throw ZeroDenominator();
                (void)at;
                r /= d;
            } else {
                return r;
            }
        }
    }

    RationalFunction parse_factor() {
        skip_ws();
        bool neg = false;
        while (peek() == '-') { neg = !neg; ++pos_; skip_ws(); }
        RationalFunction b = parse_base();
        skip_ws();
        if (peek() == '^') {
            ++pos_;
            skip_ws();
            std::size_t at = pos_;
            mpz_class e = parse_integer();
            if (e < 0 || e > 4096) throw SyntaxError("exponent out of range", at);
            unsigned k = static_cast<unsigned>(e.get_ui());
            // num and den are raised separately; den is a unit times a
            // power, so no spurious cancellation questions arise
            b = RationalFunction(b.num().pow(k), b.den().pow(k));
        }
        return neg ? -b : b;
    }

    RationalFunction parse_base() {
        skip_ws();
        char c = peek();
        if (c == '(') {
            ++pos_;
            RationalFunction r = parse_expr();
            skip_ws();
            if (peek() != ')') throw SyntaxError("expected ')'", pos_);
            ++pos_;
            return r;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            mpz_class v = parse_integer();
            return RationalFunction(Poly::constant(ctx_, mpq_class(v)));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            std::string name = text_.substr(start, pos_ - start);
            auto idx = ctx_->index_of(name);
            if (!idx) throw UnknownIdentifier(name);
            return RationalFunction::variable(ctx_, *idx);
        }
        throw SyntaxError(c == '\0' ? "unexpected end of input" : "unexpected character", pos_);
    }

    mpz_class parse_integer() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        if (pos_ == start) throw SyntaxError("expected integer", pos_);
        return mpz_class(text_.substr(start, pos_ - start), 10);
    }

    void skip_ws() {
        while (pos_ < text_.size() &&
               std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    const std::string& text_;
    CtxPtr ctx_;
    std::size_t pos_ = 0;
};

} // namespace exprdetail

inline RationalFunction parse_expression(const std::string& text, const CtxPtr& ctx) {
    return exprdetail::Parser(text, ctx).run();
}

// Renders a polynomial so that parse_expression reads it back exactly.
inline std::string poly_to_string(const Poly& p) {
    if (p.is_zero()) return "0";
    std::string out;
    // leading term first
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        const auto& [e, c] = *it;
        mpq_class a = c;
        if (out.empty()) {
            if (a < 0) { out += "-"; a = -a; }
        } else {
            out += a < 0 ? " - " : " + ";
            if (a < 0) a = -a;
        }
        std::string mono;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += p.ctx()->name(i);
            if (e[i] > 1) mono += "^" + std::to_string(e[i]);
        }
        if (mono.empty()) {
            out += a.get_str();
        } else if (a == 1) {
            out += mono;
        } else {
            out += a.get_str() + "*" + mono;
        }
    }
    return out;
}

inline std::string rf_to_string(const RationalFunction& f) {
    if (f.is_zero()) return "0";
    Poly one = Poly::constant(f.ctx(), mpq_class(1));
    if (f.den() == one) return poly_to_string(f.num());
    return "(" + poly_to_string(f.num()) + ")/(" + poly_to_string(f.den()) + ")";
}

} // namespace weavecurv
