#include "frontend/parse.hpp"

#include <cctype>

namespace frontend {

using namespace ncalg;

namespace {

class Cursor {
public:
    explicit Cursor(const std::string& s) : s_(s) {}

    void skip_ws() {
        while (pos_ < s_.size()) {
            char c = s_[pos_];
            if (c == '%') {  // comment to end of line
                while (pos_ < s_.size() && s_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }
    bool eof() { skip_ws(); return pos_ >= s_.size(); }
    char peek() { skip_ws(); return pos_ < s_.size() ? s_[pos_] : '\0'; }
    bool starts(const std::string& t) {
        skip_ws();
        return s_.compare(pos_, t.size(), t) == 0;
    }
    bool accept(const std::string& t) {
        if (!starts(t)) return false;
        for (std::size_t i = 0; i < t.size(); ++i) advance();
        return true;
    }
    void expect(const std::string& t) {
        if (!accept(t)) error("syntax error: expected '" + t + "'");
    }
    std::int64_t integer() {
        skip_ws();
        bool neg = false;
        if (pos_ < s_.size() && s_[pos_] == '-') neg = true, advance();
        if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) error("syntax error: expected integer");
        std::int64_t v = 0;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            v = v * 10 + (s_[pos_] - '0');
            if (v > (std::int64_t(1) << 50)) error("syntax error: integer too large");
            advance();
        }
        return neg ? -v : v;
    }
    bool at_digit() { return std::isdigit(static_cast<unsigned char>(peek())); }
    [[noreturn]] void error(const std::string& what) const { throw ParseError(what, line_, col_); }

private:
    void advance() {
        if (s_[pos_] == '\n') ++line_, col_ = 1;
        else ++col_;
        ++pos_;
    }
    const std::string& s_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
};

Expr power(Expr x, std::int64_t n, Cursor& c) {
    if (n < 0) {
        // scalars invert (pi^-1 comes out of the text emitter); other factors do not
        if (x.size() != 1 || !x.term_list().front().word.empty()) c.error("syntax error: negative power of a non-k factor");
        const Coefficient a = x.term_list().front().coef;
        const Rational n2 = a.val.re * a.val.re + a.val.im * a.val.im;
        x = Expr::scalar(Coefficient(Gauss(a.val.re / n2, -a.val.im / n2), -a.pi_pow));
        n = -n;
    }
    Expr r = Expr::one();
    for (std::int64_t j = 0; j < n; ++j) r = r * x;
    return r;
}

bool is_single_plain_k(const Expr& x) {
    if (x.size() != 1) return false;
    auto t = x.term_list().front();
    if (!(t.coef == Coefficient(1)) || t.word.f.size() != 1) return false;
    auto* a = std::get_if<Atom>(&t.word.f[0]);
    return a && a->base == Base::K && !a->has_deltas();
}

Expr kpower(const Expr& x, std::int64_t n) {
    int base = std::get<Atom>(x.term_list().front().word.f[0]).kexp;
    return Kp(static_cast<int>(base * n));
}

// ---- text grammar ----

class TextParser {
public:
    explicit TextParser(const std::string& s) : c_(s) {}

    Expr run() {
        Expr r = expr();
        if (!c_.eof()) c_.error("syntax error: unexpected '" + std::string(1, c_.peek()) + "'");
        return r;
    }

private:
    Expr expr() {
        Expr r;
        bool neg = false;
        if (c_.accept("-")) neg = true;
        else c_.accept("+");
        Expr t = term();
        r += neg ? -t : t;
        while (true) {
            if (c_.accept("+")) r += term();
            else if (c_.accept("-")) r -= term();
            else break;
        }
        return r;
    }

    bool factor_start() {
        char ch = c_.peek();
        return std::isdigit(static_cast<unsigned char>(ch)) || ch == '(' || ch == 'i' || ch == 'p' || ch == 'e' ||
               ch == 'k' || ch == 's' || ch == 'D' || ch == 'd' || ch == 'F' || ch == 'b';
    }

    Expr term() {
        Expr r = factor();
        while (true) {
            if (c_.accept("*")) r = r * factor();
            else if (factor_start()) r = r * factor();
            else break;
        }
        return r;
    }

    Expr factor() {
        Expr x = primary();
        if (c_.accept("^")) {
            std::int64_t n = c_.integer();
            x = is_single_plain_k(x) ? kpower(x, n) : power(x, n, c_);
        }
        return x;
    }

    Expr paren() {
        c_.expect("(");
        Expr r = expr();
        c_.expect(")");
        return r;
    }

    Expr primary() {
        if (c_.at_digit()) {
            std::int64_t n = c_.integer();
            std::int64_t d = 1;
            if (c_.accept("/")) d = c_.integer();
            if (d == 0) c_.error("syntax error: zero denominator");
            return Expr::scalar(Coefficient(Rational(n, d)));
        }
        if (c_.starts("(")) return paren();
        if (c_.accept("pi")) return Expr::scalar(Coefficient::pi(1));
        if (c_.accept("i")) return I();
        if (c_.accept("Dm[")) {
            int m = static_cast<int>(c_.integer());
            if (m < 0) c_.error("syntax error: negative Dm index");
            c_.expect("]");
            return make_dm(m, paren());
        }
        if (c_.starts("D(")) {
            c_.expect("D");
            return apply_twist(2, paren());
        }
        if (c_.accept("d1")) return apply_delta(1, paren());
        if (c_.accept("d2")) return apply_delta(2, paren());
        if (c_.starts("s^") || c_.starts("s(")) {
            c_.expect("s");
            int s = 1;
            if (c_.accept("^")) s = static_cast<int>(c_.integer());
            return apply_twist(s, paren());
        }
        if (c_.accept("F[")) {
            int side = static_cast<int>(c_.integer());
            c_.expect("]");
            return Expr::atom(Atom::lead(side));
        }
        if (c_.starts("b0[") || c_.starts("b0l[")) {
            bool lam = !c_.accept("b0l[");
            if (lam) c_.expect("b0[");
            B0Node b;
            b.lam_m1 = lam;
            b.side = static_cast<int>(c_.integer());
            c_.expect(",");
            b.power = static_cast<int>(c_.integer());
            c_.expect(",");
            b.fpow = static_cast<int>(c_.integer());
            c_.expect("]");
            if (b.power < 0 || b.fpow < 0) c_.error("syntax error: negative block exponent");
            return Expr(Word({b}));
        }
        if (c_.accept("e")) return E(0);
        if (c_.accept("k")) return Kp(1);
        if (c_.eof()) c_.error("syntax error: unexpected end of input");
        c_.error("unknown atom starting with '" + std::string(1, c_.peek()) + "'");
    }

    Cursor c_;
};

// ---- display notation ----

class LatexParser {
public:
    explicit LatexParser(const std::string& s) : c_(s) {}

    Expr run() {
        Expr r = expr();
        c_.accept(".");
        if (!c_.eof()) c_.error("syntax error: unexpected '" + std::string(1, c_.peek()) + "'");
        return r;
    }

private:
    void skip_spacing() {
        while (c_.accept("\\,") || c_.accept("\\;") || c_.accept("\\!") || c_.accept("\\ ")) {
        }
    }

    Expr expr() {
        Expr r;
        skip_spacing();
        bool neg = false;
        if (c_.accept("-")) neg = true;
        else c_.accept("+");
        Expr t = term();
        r += neg ? -t : t;
        while (true) {
            skip_spacing();
            if (c_.accept("+")) r += term();
            else if (c_.accept("-")) r -= term();
            else break;
        }
        return r;
    }

    bool closing() {
        skip_spacing();
        return c_.eof() || c_.starts("+") || c_.starts("-") || c_.starts(")") || c_.starts("\\right") ||
               c_.starts("\\Big)") || c_.starts("\\Big )") || c_.starts("}") || c_.starts(".");
    }

    Expr term() {
        Expr r = Expr::one();
        do {
            r = r * factor();
        } while (!closing());
        return r;
    }

    Expr group() {
        skip_spacing();
        if (c_.accept("\\left(")) {
            Expr r = expr();
            c_.expect("\\right)");
            return r;
        }
        if (c_.accept("\\Big(") || (c_.starts("\\Big") && c_.accept("\\Big") && (c_.expect("("), true))) {
            Expr r = expr();
            if (!c_.accept("\\Big)")) {
                c_.expect("\\Big");
                c_.expect(")");
            }
            return r;
        }
        if (c_.accept("(")) {
            Expr r = expr();
            c_.expect(")");
            return r;
        }
        if (c_.accept("{")) {
            Expr r = expr();
            c_.expect("}");
            return r;
        }
        c_.error("syntax error: expected a parenthesized group");
    }

    std::int64_t braced_int() {
        if (c_.accept("{")) {
            std::int64_t n = c_.integer();
            c_.expect("}");
            return n;
        }
        return c_.integer();
    }

    Expr postfix(Expr x) {
        if (c_.accept("^")) {
            std::int64_t n = braced_int();
            x = is_single_plain_k(x) ? kpower(x, n) : power(x, n, c_);
        }
        return x;
    }

    Expr factor() {
        skip_spacing();
        if (c_.at_digit()) return Expr::scalar(Coefficient(Rational(c_.integer())));
        if (c_.accept("\\frac")) {
            Expr num = group();
            Expr den = group();
            if (is_single_plain_k(den)) return num * kpower(den, -1);
            if (den.size() != 1 || !den.term_list().front().word.empty())
                c_.error("syntax error: unsupported denominator");
            auto d = den.term_list().front().coef;
            if (!d.val.im.is_zero() || d.pi_pow != 0) c_.error("syntax error: unsupported denominator");
            return Coefficient(Rational(1) / d.val.re) * num;
        }
        if (c_.accept("\\pi")) return postfix(Expr::scalar(Coefficient::pi(1)));
        if (c_.accept("\\tau")) return group();
        if (c_.accept("\\sigma")) {
            int s = 1;
            if (c_.accept("^")) s = static_cast<int>(braced_int());
            return postfix(apply_twist(s, group()));
        }
        if (c_.accept("\\Delta")) return postfix(apply_twist(2, group()));
        if (c_.starts("\\delta")) {
            int n1 = 0, n2 = 0;
            while (c_.accept("\\delta")) {
                c_.expect("_");
                int i = static_cast<int>(c_.integer());
                if (i != 1 && i != 2) c_.error("unknown atom: \\delta_" + std::to_string(i));
                int p = 1;
                if (c_.accept("^")) p = static_cast<int>(braced_int());
                (i == 1 ? n1 : n2) += p;
            }
            Expr x = group();
            for (int j = 0; j < n1; ++j) x = apply_delta(1, x);
            for (int j = 0; j < n2; ++j) x = apply_delta(2, x);
            return postfix(x);
        }
        if (c_.accept("D_")) {
            int m = static_cast<int>(braced_int());
            if (m < 0) c_.error("syntax error: negative D index");
            return make_dm(m, group());
        }
        if (c_.starts("\\left(") || c_.starts("(") || c_.starts("\\Big")) return postfix(group());
        if (c_.accept("e")) return postfix(E(0));
        if (c_.accept("k")) return postfix(Kp(1));
        if (c_.accept("i")) return I();
        if (c_.eof()) c_.error("syntax error: unexpected end of input");
        c_.error("unknown atom starting with '" + std::string(1, c_.peek()) + "'");
    }

    Cursor c_;
};

}  // namespace

Expr parse_expr(const std::string& src) { return TextParser(src).run(); }
Expr parse_latex(const std::string& src) { return LatexParser(src).run(); }

}  // namespace frontend
