#include "ncalg/expr.hpp"
#include "ncalg/leading.hpp"

#include <stdexcept>

namespace ncalg {

void Expr::add_term(const Word& w, const Coefficient& c) {
    if (c.is_zero()) return;
    add_normalized(normalize_word(w), c);
}

void Expr::add_normalized(const Word& w, const Coefficient& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(Key{w, c.pi_pow}, c.val);
    if (!inserted) {
        it->second += c.val;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

std::vector<Term> Expr::term_list() const {
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& [k, v] : terms_) out.push_back({k.first, Coefficient(v, k.second)});
    return out;
}

Expr& Expr::operator+=(const Expr& o) {
    for (const auto& [k, v] : o.terms_) add_normalized(k.first, Coefficient(v, k.second));
    return *this;
}

Expr& Expr::operator-=(const Expr& o) {
    for (const auto& [k, v] : o.terms_) add_normalized(k.first, Coefficient(-v, k.second));
    return *this;
}

Expr Expr::operator-() const {
    Expr r;
    for (const auto& [k, v] : terms_) r.terms_.emplace(k, -v);
    return r;
}

Expr operator*(const Expr& a, const Expr& b) {
    Expr r;
    for (const auto& [ka, va] : a.terms_)
        for (const auto& [kb, vb] : b.terms_)
            r.add_term(concat(ka.first, kb.first), Coefficient(va * vb, ka.second + kb.second));
    return r;
}

Expr operator*(const Coefficient& c, const Expr& a) {
    Expr r;
    if (c.is_zero()) return r;
    for (const auto& [k, v] : a.terms_) r.terms_.emplace(Expr::Key{k.first, k.second + c.pi_pow}, c.val * v);
    return r;
}

bool operator==(const Expr& a, const Expr& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    auto ia = a.terms_.begin();
    auto ib = b.terms_.begin();
    for (; ia != a.terms_.end(); ++ia, ++ib) {
        if (compare(ia->first.first, ib->first.first) != 0 || ia->first.second != ib->first.second) return false;
        if (ia->second != ib->second) return false;
    }
    return true;
}

Expr Expr::map_terms(const std::function<Expr(const Word&, const Coefficient&)>& f) const {
    Expr r;
    for (const auto& [k, v] : terms_) r += f(k.first, Coefficient(v, k.second));
    return r;
}

Expr mul(const Expr& a, const Expr& b) { return a * b; }

Expr normalize(const Expr& a) {
    Expr r;
    for (const auto& [k, v] : a.terms()) r.add_term(k.first, Coefficient(v, k.second));
    return r;
}

namespace {

Expr word_expr(std::vector<Factor> f) { return Expr(Word(std::move(f))); }

Expr delta_atom(int i, const Atom& a) {
    if (a.base == Base::K && !a.has_deltas()) {
        const int n = a.kexp;
        Expr r;
        if (n == 0) return r;
        Atom dk = Atom::k(1);
        (i == 1 ? dk.d1 : dk.d2) = 1;
        if (n > 0) {
            for (int p = 0; p < n; ++p)
                r.add_term(Word({Atom::k(p), dk, Atom::k(n - 1 - p)}), Coefficient(1));
        } else {
            const int m = -n;
            for (int p = 0; p < m; ++p)
                r.add_term(Word({Atom::k(-(p + 1)), dk, Atom::k(-(m - p))}), Coefficient(-1));
        }
        return r;
    }
    if (a.base == Base::K && a.kexp != 1) throw std::logic_error("differentiated k-power must have exponent 1");
    Atom b = a;
    if (i == 1) ++b.d1; else ++b.d2;
    return word_expr({b});
}

Expr twist_atom(int s, const Atom& a) {
    if (s == 0) return word_expr({a});
    if (!a.has_deltas()) {
        if (a.base == Base::K) return word_expr({a});
        if (a.base == Base::E) {
            Atom b = a;
            b.twist += s;
            return word_expr({b});
        }
    }
    // σˢ(x) = k^{-s} x k^{s} for letters that do not carry the twist themselves.
    return word_expr({Atom::k(-s), a, Atom::k(s)});
}

Expr apply_factor(const Factor& x, const std::function<Expr(const Atom&)>& on_atom,
                  const std::function<Expr(const DmNode&)>& on_dm, const char* what) {
    if (auto* a = std::get_if<Atom>(&x)) return on_atom(*a);
    if (auto* d = std::get_if<DmNode>(&x)) return on_dm(*d);
    throw std::logic_error(std::string(what) + " of a resolvent block requires symbol context");
}

}  // namespace

Expr delta_word(int i, const Word& w) {
    if (i != 1 && i != 2) throw std::invalid_argument("derivation index must be 1 or 2");
    Expr r;
    const auto& f = w.f;
    for (std::size_t p = 0; p < f.size(); ++p) {
        Expr mid = apply_factor(
            f[p], [i](const Atom& a) { return delta_atom(i, a); },
            [](const DmNode&) -> Expr { throw std::logic_error("derivative of a modular node is not modeled"); },
            "derivative");
        if (mid.is_zero()) continue;
        Word pre(std::vector<Factor>(f.begin(), f.begin() + p));
        Word post(std::vector<Factor>(f.begin() + p + 1, f.end()));
        for (const auto& [k, v] : mid.terms())
            r.add_term(concat(concat(pre, k.first), post), Coefficient(v, k.second));
    }
    return r;
}

Expr twist_word(int s, const Word& w) {
    Expr r = Expr::one();
    for (const auto& x : w.f) {
        r = r * apply_factor(
                    x, [s](const Atom& a) { return twist_atom(s, a); },
                    [s](const DmNode& d) { return make_dm(d.m, twist_word(s, *d.arg)); }, "twist");
    }
    return r;
}

Expr apply_delta(int i, const Expr& a) {
    return a.map_terms([i](const Word& w, const Coefficient& c) { return c * delta_word(i, w); });
}

Expr apply_twist(int s, const Expr& a) {
    if (s == 0) return a;
    return a.map_terms([s](const Word& w, const Coefficient& c) { return c * twist_word(s, w); });
}

Expr make_dm(int m, const Expr& a) {
    if (m < 0) throw std::invalid_argument("D_m needs m >= 0");
    Expr r;
    for (const auto& [k, v] : a.terms()) {
        if (k.first.empty()) {
            r.add_normalized(Word{}, Coefficient(Gauss(Rational(1, m + 1)) * v, k.second));
            continue;
        }
        DmNode d{m, std::make_shared<const Word>(normalize_word(k.first))};
        r.add_normalized(Word({d}), Coefficient(v, k.second));
    }
    return r;
}

Expr E(int twist) { return Expr::atom(Atom::e(twist)); }
Expr Kp(int n) { return n == 0 ? Expr::one() : Expr::atom(Atom::k(n)); }
Expr sigma_e() { return E(1); }
Expr delta_e() { return E(2); }
Expr d(int i, const Expr& a) { return apply_delta(i, a); }
Expr dd(int i, int j, const Expr& a) { return apply_delta(i, apply_delta(j, a)); }
Expr I() { return Expr::scalar(Coefficient::imag_unit()); }
Expr R(std::int64_t n, std::int64_t dd) { return Expr::scalar(Coefficient(Rational(n, dd))); }

}  // namespace ncalg
