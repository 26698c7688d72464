#include "symcalc/symbol.hpp"
#include "ncalg/leading.hpp"

#include <functional>
#include <stdexcept>
#include <tuple>

namespace symcalc {

using namespace ncalg;

void Symbol::add(const Mono& m, const Expr& e) {
    if (e.is_zero()) return;
    auto it = coeffs_.find(m);
    if (it == coeffs_.end()) {
        coeffs_.emplace(m, e);
        return;
    }
    it->second += e;
    if (it->second.is_zero()) coeffs_.erase(it);
}

Symbol Symbol::homogeneous(int k) const {
    Symbol r;
    for (const auto& [m, e] : coeffs_)
        if (m.degree() == k) r.coeffs_.emplace(m, e);
    return r;
}

std::size_t Symbol::term_count() const {
    std::size_t n = 0;
    for (const auto& [m, e] : coeffs_) n += e.size();
    return n;
}

Symbol& Symbol::operator+=(const Symbol& o) {
    for (const auto& [m, e] : o.coeffs_) add(m, e);
    return *this;
}

Symbol& Symbol::operator-=(const Symbol& o) {
    for (const auto& [m, e] : o.coeffs_) add(m, -e);
    return *this;
}

Symbol operator*(const Symbol& a, const Symbol& b) {
    Symbol r;
    for (const auto& [ma, ea] : a.coeffs_)
        for (const auto& [mb, eb] : b.coeffs_) r.add(Mono{ma.a + mb.a, ma.b + mb.b, ma.c + mb.c}, ea * eb);
    return r;
}

Symbol operator*(const Coefficient& c, const Symbol& a) {
    Symbol r;
    for (const auto& [m, e] : a.coeffs_) r.add(m, c * e);
    return r;
}

Symbol xi_derivative(int i, const Symbol& p) {
    Symbol r;
    for (const auto& [m, e] : p.coeffs()) {
        const int pw = i == 1 ? m.a : m.b;
        if (pw > 0) {
            Mono mm = m;
            (i == 1 ? mm.a : mm.b) -= 1;
            r.add(mm, Coefficient(pw) * e);
        }
        Mono up = m;
        (i == 1 ? up.a : up.b) += 1;
        Expr acc;
        for (const auto& t : e.term_list()) {
            const auto& f = t.word.f;
            for (std::size_t q = 0; q < f.size(); ++q) {
                auto* b = std::get_if<B0Node>(&f[q]);
                if (!b) continue;
                Word w = t.word;
                auto& nb = std::get<B0Node>(w.f[q]);
                nb.power += 1;
                nb.fpow += 1;
                acc.add_term(w, Coefficient(-2 * b->power) * t.coef);
            }
        }
        r.add(up, acc);
    }
    return r;
}

namespace {

// δᵢ of a word that may contain resolvent blocks; returns pieces keyed by the
// extra monomial they carry (0: none, 1: ξ₁², 2: ξ₂²).
void delta_block_word(int i, const Word& w, const Coefficient& c, Expr out[3]) {
    const auto& f = w.f;
    for (std::size_t q = 0; q < f.size(); ++q) {
        Word pre(std::vector<Factor>(f.begin(), f.begin() + q));
        Word post(std::vector<Factor>(f.begin() + q + 1, f.end()));
        if (auto* b = std::get_if<B0Node>(&f[q])) {
            const Word& F = leading_factor(b->side);
            Expr dF = delta_word(i, F);
            // derivative hitting F^j
            for (int j = 0; j < b->fpow; ++j) {
                Word left = pre;
                for (int s = 0; s < j; ++s) left = concat(left, F);
                B0Node core = *b;
                core.fpow = 0;
                Word right;
                for (int s = j + 1; s < b->fpow; ++s) right = concat(right, F);
                right = concat(right, Word({core}));
                right = concat(right, post);
                for (const auto& t : dF.term_list()) out[0].add_term(concat(concat(left, t.word), right), c * t.coef);
            }
            // derivative hitting b₀^p: Σ b₀^{a+1} (−δF|ξ|²) b₀^{p−a}
            for (int a = 0; a < b->power; ++a) {
                B0Node l = *b;
                l.power = a + 1;
                B0Node r = *b;
                r.power = b->power - a;
                r.fpow = 0;
                for (const auto& t : dF.term_list()) {
                    Word nw = concat(concat(concat(pre, Word({l})), t.word), concat(Word({r}), post));
                    out[1].add_term(nw, -(c * t.coef));
                    out[2].add_term(nw, -(c * t.coef));
                }
            }
            continue;
        }
        Expr mid = delta_word(i, Word({f[q]}));
        for (const auto& t : mid.term_list()) out[0].add_term(concat(concat(pre, t.word), post), c * t.coef);
    }
}

}  // namespace

Symbol symbol_delta(int i, const Symbol& p) {
    Symbol r;
    for (const auto& [m, e] : p.coeffs()) {
        Expr parts[3];
        for (const auto& t : e.term_list()) delta_block_word(i, t.word, t.coef, parts);
        r.add(m, parts[0]);
        r.add(Mono{m.a + 2, m.b, m.c}, parts[1]);
        r.add(Mono{m.a, m.b + 2, m.c}, parts[2]);
    }
    return r;
}

namespace {

std::int64_t factorial(int n) {
    std::int64_t r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

}  // namespace

Symbol compose(const Symbol& p, const Symbol& q, int max_order_drop) {
    if (max_order_drop < 0) throw std::invalid_argument("max_order_drop must be non-negative");
    Symbol r;
    Symbol dp1 = p;
    Symbol dq1 = q;
    for (int i1 = 0; i1 <= max_order_drop; ++i1) {
        Symbol dp = dp1, dq = dq1;
        for (int i2 = 0; i1 + i2 <= max_order_drop; ++i2) {
            if (dp.is_zero() || dq.is_zero()) break;
            Coefficient w(Rational(1, factorial(i1) * factorial(i2)));
            r += w * (dp * dq);
            dp = xi_derivative(2, dp);
            dq = symbol_delta(2, dq);
        }
        dp1 = xi_derivative(1, dp1);
        dq1 = symbol_delta(1, dq1);
        if (dp1.is_zero() || dq1.is_zero()) break;
    }
    return r;
}

Symbol mult_symbol(const Expr& a) { return Symbol::constant(a); }
Symbol del_symbol() { return Symbol::xi(1) + Coefficient::imag_unit() * Symbol::xi(2); }
Symbol delbar_symbol() { return Symbol::xi(1) - Coefficient::imag_unit() * Symbol::xi(2); }

namespace {

Symbol xi_sq(const Expr& F) { return Symbol(Mono{2, 0, 0}, F) + Symbol(Mono{0, 2, 0}, F); }

}  // namespace

OperatorSymbol symbol_L_minus() {
    Expr se = sigma_e();
    Expr F = se * Kp(2);
    OperatorSymbol s;
    s.p2 = xi_sq(se * se * Kp(2));
    Expr d1F = d(1, F), d2F = d(2, F);
    s.p1 = Symbol(Mono{1, 0, 0}, se * (d1F - I() * d2F)) + Symbol(Mono{0, 1, 0}, se * (d2F + I() * d1F));
    s.p2.declared_order = 2;
    return s;
}

namespace {

OperatorSymbol l_plus_with_prefactor(const Expr& pre, const Expr& F) {
    Expr se = sigma_e(), k = Kp(1);
    OperatorSymbol s;
    s.p2 = xi_sq(F);
    Expr c1 = R(2) * se * d(1, k) + d(1, se) * k + I() * d(2, se) * k;
    Expr c2 = R(2) * se * d(2, k) + d(2, se) * k - I() * d(1, se) * k;
    s.p1 = Symbol(Mono{1, 0, 0}, pre * c1) + Symbol(Mono{0, 1, 0}, pre * c2);
    Expr c0 = d(1, se) * d(1, k) + se * dd(1, 1, k) + d(2, se) * d(2, k) + se * dd(2, 2, k) +
              I() * (d(2, se) * d(1, k) - d(1, se) * d(2, k));
    s.p0 = Symbol::constant(pre * c0);
    return s;
}

}  // namespace

OperatorSymbol symbol_L_plus() {
    Expr pre = Kp(-1) * sigma_e() * Kp(2);
    return l_plus_with_prefactor(pre, pre * sigma_e() * Kp(1));
}

OperatorSymbol symbol_L_plus_display() {
    Expr De = delta_e();
    return l_plus_with_prefactor(De * Kp(1), De * Kp(2) * De);
}

Expr alt_leading_L_plus() { return Kp(-2) * E() * Kp(2) * E() * Kp(2); }
Expr alt_leading_L_minus() { return Kp(-1) * E() * Kp(3); }

OperatorSymbol symbol_flat_laplacian() {
    OperatorSymbol s;
    s.p2 = xi_sq(Expr::one());
    return s;
}

namespace {

int opaque_side(int side) { return register_leading(Word({Atom::lead(side)})); }

}  // namespace

OperatorSymbol symbol_L_minus_opaque() {
    OperatorSymbol s = symbol_L_minus();
    s.p2 = xi_sq(Expr(Word({Atom::lead(kLMinus)})));
    (void)opaque_side(kLMinus);
    return s;
}

OperatorSymbol symbol_L_plus_opaque() {
    OperatorSymbol s = symbol_L_plus_display();
    s.p2 = xi_sq(Expr(Word({Atom::lead(kLPlus)})));
    (void)opaque_side(kLPlus);
    return s;
}

Word leading_word(const Symbol& p2) {
    const auto& c = p2.coeffs();
    auto fail = [] { throw std::invalid_argument("unsupported leading symbol"); };
    if (c.size() != 2) fail();
    auto i1 = c.find(Mono{2, 0, 0});
    auto i2 = c.find(Mono{0, 2, 0});
    if (i1 == c.end() || i2 == c.end() || !(i1->second == i2->second)) fail();
    const Expr& F = i1->second;
    if (F.size() != 1) fail();
    auto t = F.term_list().front();
    if (!(t.coef == Coefficient(1))) fail();
    return t.word;
}

Parametrix parametrix_detailed(const OperatorSymbol& p, int n_max, bool lambda_minus_one) {
    if (n_max < 0) throw std::invalid_argument("n_max must be non-negative");
    Word F = leading_word(p.p2);
    Parametrix out;
    out.side = register_leading(F);
    Symbol b0 = Symbol::constant(Expr(Word({B0Node{out.side, 1, 0, lambda_minus_one}})));
    out.b.push_back(b0);
    out.stripped.push_back(Symbol{});
    const Symbol* pk[3] = {&p.p0, &p.p1, &p.p2};

    // ∂^α b_j cached per j: key (i1, i2).
    std::vector<std::map<std::pair<int, int>, Symbol>> dcache;
    std::function<const Symbol&(int, int, int)> dpart = [&](int j, int i1, int i2) -> const Symbol& {
        auto& m = dcache[j];
        auto key = std::make_pair(i1, i2);
        auto it = m.find(key);
        if (it != m.end()) return it->second;
        Symbol s;
        if (i1 > 0) s = xi_derivative(1, dpart(j, i1 - 1, i2));
        else if (i2 > 0) s = xi_derivative(2, dpart(j, 0, i2 - 1));
        else s = out.b[j];
        return m.emplace(key, std::move(s)).first->second;
    };
    std::map<std::tuple<int, int, int>, Symbol> pcache;
    auto ppart = [&](int k, int i1, int i2) -> const Symbol& {
        auto key = std::make_tuple(k, i1, i2);
        auto it = pcache.find(key);
        if (it != pcache.end()) return it->second;
        Symbol s = *pk[k];
        for (int a = 0; a < i1; ++a) s = symbol_delta(1, s);
        for (int a = 0; a < i2; ++a) s = symbol_delta(2, s);
        return pcache.emplace(key, std::move(s)).first->second;
    };

    for (int n = 1; n <= n_max; ++n) {
        dcache.resize(n);
        Symbol S;
        for (int j = 0; j < n; ++j)
            for (int k = 0; k <= 2; ++k) {
                const int ord = n - 2 - j + k;
                if (ord < 0) continue;
                for (int i1 = 0; i1 <= ord; ++i1) {
                    const int i2 = ord - i1;
                    const Symbol& q = ppart(k, i1, i2);
                    if (q.is_zero()) continue;
                    Coefficient w(Rational(1, factorial(i1) * factorial(i2)));
                    S += w * (dpart(j, i1, i2) * q);
                }
            }
        for (const auto& [m, e] : S.coeffs())
            for (const auto& t : e.term_list()) {
                int bp = 0;
                for (const auto& x : t.word.f)
                    if (auto* b = std::get_if<B0Node>(&x)) bp += b->power;
                if (m.degree() - 2 * bp != -n) throw std::logic_error("homogeneity violated in parametrix");
            }
        Symbol bn = Coefficient(-1) * (S * b0);
        out.stripped.push_back(S);
        out.b.push_back(bn);
        dcache.resize(n + 1);
    }
    return out;
}

std::vector<Symbol> parametrix(const OperatorSymbol& p, int n_max, bool lambda_minus_one) {
    return parametrix_detailed(p, n_max, lambda_minus_one).b;
}

}  // namespace symcalc
