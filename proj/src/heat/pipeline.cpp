#include "heat/pipeline.hpp"
#include "ncalg/io.hpp"
#include "ncalg/leading.hpp"

#include <stdexcept>

namespace heat {

using namespace ncalg;
using symcalc::Mono;
using symcalc::Symbol;

std::size_t RadialIntegrand::term_count() const {
    std::size_t n = 0;
    for (const auto& [p, e] : by_rpow) n += e.size();
    return n;
}

void RadialIntegrand::add(int rpow, const Expr& e) {
    if (e.is_zero()) return;
    auto& slot = by_rpow[rpow];
    slot += e;
    if (slot.is_zero()) by_rpow.erase(rpow);
}

namespace {

std::int64_t dfact(int n) {
    std::int64_t r = 1;
    for (int i = n; i > 1; i -= 2) r *= i;
    return r;
}

int block_power_sum(const Word& w) {
    int s = 0;
    for (const auto& f : w.f)
        if (auto* b = std::get_if<B0Node>(&f)) s += b->power;
    return s;
}

std::vector<std::size_t> block_positions(const Word& w) {
    std::vector<std::size_t> pos;
    for (std::size_t i = 0; i < w.f.size(); ++i)
        if (std::holds_alternative<B0Node>(w.f[i])) pos.push_back(i);
    return pos;
}

Word slice(const Word& w, std::size_t from, std::size_t to) {
    return Word(std::vector<Factor>(w.f.begin() + from, w.f.begin() + to));
}

[[noreturn]] void fail(const std::string& what, const Word& w) {
    throw std::runtime_error(what + ": " + to_text(w));
}

bool is_plain_e(const Factor& f) {
    auto* a = std::get_if<Atom>(&f);
    return a && a->base == Base::E && !a->has_deltas();
}

bool is_plain_k(const Factor& f) {
    auto* a = std::get_if<Atom>(&f);
    return a && a->base == Base::K && !a->has_deltas();
}

// Writes the leftmost block b₀^P F^J as [P,0] F^J so that the projection
// letter sits right of the block, pulling it through a leading k-power if needed.
Word spell_leading(const Word& w, int side) {
    auto b = std::get<B0Node>(w.f.front());
    B0Node core = b;
    core.fpow = 0;
    Word rest = slice(w, 1, w.f.size());
    for (int j = 0; j < b.fpow; ++j) rest = concat(leading_factor(side), rest);
    Word proj = side_projection(side);
    if (!proj.empty()) {
        const auto& pa = std::get<Atom>(proj.f.front());
        bool ok = !rest.f.empty() && std::holds_alternative<Atom>(rest.f.front()) &&
                  std::get<Atom>(rest.f.front()) == pa;
        if (!ok && rest.f.size() >= 2 && is_plain_k(rest.f[0]) && is_plain_e(rest.f[1])) {
            // k^a σ^s(e) = σ^{s−a}(e) k^a
            int a = std::get<Atom>(rest.f[0]).kexp;
            Atom e = std::get<Atom>(rest.f[1]);
            if (e.twist - a == pa.twist) {
                e.twist -= a;
                std::swap(rest.f[0], rest.f[1]);
                rest.f[0] = e;
                ok = true;
            }
        }
        if (!ok) fail("non-normalizable term", w);
    }
    Word out = concat(Word({core}), rest);
    return out;
}

}  // namespace

Word side_projection(int side) {
    if (side == kLMinus) return Word({Atom::e(1)});
    if (side == kLPlus) return Word({Atom::e(2)});
    if (side == kFlat) return Word{};
    throw std::invalid_argument("no pipeline for side " + std::to_string(side));
}

Coefficient angular_moment(int a, int b) {
    if (a % 2 || b % 2) return Coefficient(0);
    Rational r(2 * dfact(a - 1) * dfact(b - 1), dfact(a + b));
    return Coefficient(Gauss(r), 1);
}

RadialIntegrand angular_integrate(const Symbol& b2, int side) {
    RadialIntegrand out;
    out.side = side;
    for (const auto& [m, e] : b2.coeffs()) {
        if (m.c != 0) throw std::invalid_argument("angular_integrate expects λ = −1");
        if (m.a % 2 || m.b % 2) continue;
        out.add(m.a + m.b, angular_moment(m.a, m.b) * e);
    }
    return out;
}

RadialIntegrand leftmost_b0_normalize(const RadialIntegrand& t) {
    RadialIntegrand out;
    out.side = t.side;
    out.rotations = t.rotations;
    for (const auto& [n, e] : t.by_rpow) {
        Expr acc;
        for (const auto& term : e.term_list()) {
            Word w = term.word;
            if (w.f.empty() || !std::holds_alternative<B0Node>(w.f.front())) fail("non-normalizable term", w);
            auto pos = block_positions(w);
            // bring the trailing b₀ (from b₂ = −S·b₀) round to the front
            if (pos.size() >= 2 && pos.back() == w.f.size() - 1) {
                Word r({w.f.back()});
                w = normalize_word(concat(r, slice(w, 0, w.f.size() - 1)));
                ++out.rotations;
                pos = block_positions(w);
            }
            if (pos.size() == 1) {
                auto b = std::get<B0Node>(w.f.front());
                if (b.power < 2) fail("non-normalizable term", w);
                std::get<B0Node>(w.f.front()).power -= 1;
                B0Node tail = b;
                tail.power = 1;
                tail.fpow = 0;
                w.f.push_back(tail);
                ++out.rotations;
            } else if (pos.size() != 2) {
                fail("non-normalizable term", w);
            }
            w = spell_leading(w, t.side);
            acc.add_normalized(w, term.coef);
        }
        out.add(n, acc);
    }
    return out;
}

RadialIntegrand ibp_reduce(const RadialIntegrand& t) {
    RadialIntegrand out;
    out.side = t.side;
    out.rotations = t.rotations;
    std::vector<std::tuple<int, Word, Coefficient>> work;
    for (const auto& [n, e] : t.by_rpow)
        for (const auto& term : e.term_list()) {
            if (n + 1 - 2 * block_power_sum(term.word) > -3) fail("nonvanishing boundary term", term.word);
            work.emplace_back(n, term.word, term.coef);
        }
    while (!work.empty()) {
        auto [n, w, c] = work.back();
        work.pop_back();
        auto pos = block_positions(w);
        if (pos.size() != 2 || pos[0] != 0) fail("pattern mismatch", w);
        auto lb = std::get<B0Node>(w.f[0]);
        auto ib = std::get<B0Node>(w.f[pos[1]]);
        if (ib.power == 1 && ib.fpow == 0) {
            out.add(n, Expr(w, c));
            continue;
        }
        if (ib.power < 2 || ib.fpow < 1 || lb.fpow != 0) fail("pattern mismatch", w);
        // boundary term rⁿ b₀^P ρ F^{L−1} b₀^{Q−1} Y at 0 and ∞
        if (n <= 0 || n >= 2 * (lb.power + ib.power - 1)) fail("nonvanishing boundary term", w);
        Word base = w;
        auto& nb = std::get<B0Node>(base.f[pos[1]]);
        nb.power -= 1;
        nb.fpow -= 1;
        Coefficient cc = c * Coefficient(Rational(1, 2 * (ib.power - 1)));
        work.emplace_back(n - 2, base, cc * Coefficient(n));
        Word hi = base;
        auto& hb = std::get<B0Node>(hi.f[0]);
        hb.power += 1;
        hb.fpow += 1;
        work.emplace_back(n, spell_leading(hi, t.side), cc * Coefficient(-2 * lb.power));
    }
    return out;
}

Expr rearrange(const RadialIntegrand& t) {
    Expr out;
    Word proj = side_projection(t.side);
    for (const auto& [n, e] : t.by_rpow) {
        for (const auto& term : e.term_list()) {
            const Word& w = term.word;
            auto pos = block_positions(w);
            if (n % 2 || pos.size() != 2 || pos[0] != 0) fail("pattern mismatch", w);
            const int m = n / 2;
            auto lb = std::get<B0Node>(w.f[0]);
            auto ib = std::get<B0Node>(w.f[pos[1]]);
            if (lb.power != m + 1 || lb.fpow != 0 || ib.power != 1 || ib.fpow != 0) fail("pattern mismatch", w);
            Word Y = slice(w, pos[1] + 1, w.f.size());
            Coefficient half = term.coef * Coefficient(Rational(1, 2));
            if (proj.empty()) {
                // ∫ uᵐ (u+1)^{−m−2} du = 1/(m+1)
                Word rho = slice(w, 1, pos[1]);
                out.add_term(concat(rho, Y), half * Coefficient(Rational(1, m + 1)));
                continue;
            }
            if (pos[1] < 2 || !(slice(w, 1, 2) == proj)) fail("pattern mismatch", w);
            Word rho = slice(w, 2, pos[1]);
            Word arg = concat(concat(concat(Word({Atom::k(-(2 * m + 2))}), proj), rho), proj);
            Expr dm = make_dm(m, Expr(arg));
            Expr piece = Expr(proj) * dm;
            if (t.side == kLPlus) piece = piece * Expr(proj);
            out += half * (piece * Expr(Y));
        }
    }
    return out;
}

Word min_rotation(const Word& w) {
    Word best = w;
    for (std::size_t s = 1; s < w.f.size(); ++s) {
        Word r(std::vector<Factor>(w.f.begin() + s, w.f.end()));
        r.f.insert(r.f.end(), w.f.begin(), w.f.begin() + s);
        if (r < best) best = r;
    }
    return best;
}

namespace {

Word rotate(const Word& w, std::size_t s) {
    Word r(std::vector<Factor>(w.f.begin() + s, w.f.end()));
    r.f.insert(r.f.end(), w.f.begin(), w.f.begin() + s);
    return r;
}

// Merge across the ends first (k⁻³Xk⁷ → k⁴X under τ), then take the least rotation.
Word cyclic_form(Word w) {
    w = normalize_word(w);
    for (bool shrunk = true; shrunk;) {
        shrunk = false;
        for (std::size_t s = 1; s < w.f.size() && !shrunk; ++s) {
            Word r = normalize_word(rotate(w, s));
            if (r.size() < w.size()) w = r, shrunk = true;
        }
    }
    Word best = w;
    for (std::size_t s = 1; s < w.f.size(); ++s) {
        Word r = normalize_word(rotate(w, s));
        if (r < best) best = r;
    }
    return best;
}

}  // namespace

Expr cyclic_canonicalize(const Expr& a) {
    Expr out;
    for (const auto& t : a.term_list()) out.add_normalized(cyclic_form(t.word), t.coef);
    return out;
}

symcalc::OperatorSymbol pipeline_symbol(int side) {
    switch (side) {
        case kLMinus: return symcalc::symbol_L_minus();
        case kLPlus: return symcalc::symbol_L_plus_display();
        case kFlat: return symcalc::symbol_flat_laplacian();
    }
    throw std::invalid_argument("no pipeline for side " + std::to_string(side));
}

PipelineTrace run_a2(int side) {
    PipelineTrace tr;
    tr.par = symcalc::parametrix_detailed(pipeline_symbol(side), 2);
    if (tr.par.side != side) throw std::logic_error("leading factor registered under an unexpected side");
    tr.b2_raw = tr.par.b[2].term_count();
    tr.b2_stripped = tr.par.stripped[2].term_count();
    tr.angular_stripped = angular_integrate(tr.par.stripped[2], side).term_count();
    tr.angular = angular_integrate(tr.par.b[2], side);
    tr.normalized = leftmost_b0_normalize(tr.angular);
    tr.reduced = ibp_reduce(tr.normalized);
    tr.rearranged = rearrange(tr.reduced);
    // a₂ = (1/2πi)∫_γ e^{−λ} ∫ b₂(ξ, λ) dξ dλ with γ oriented so that
    // e^{−t△} = (1/2πi)∫_γ e^{−tλ}(△ − λ)⁻¹ dλ holds; homogeneity then gives
    // a₂ = +∫ b₂(ξ, −1) dξ (the −∫ form corresponds to the opposite orientation).
    tr.canonical = cyclic_canonicalize(Coefficient(kContourSign) * tr.rearranged);
    return tr;
}

Expr a2_trace(int side) { return run_a2(side).canonical; }

Expr index_expression() { return cyclic_canonicalize(a2_trace(kLPlus) - a2_trace(kLMinus)); }

namespace {

Expr flat_word(const Word& w) {
    Expr acc = Expr::one();
    for (const auto& f : w.f) {
        if (auto* a = std::get_if<Atom>(&f)) {
            if (a->base == Base::K) {
                if (a->has_deltas()) return Expr{};
                continue;
            }
            if (a->base == Base::Lead) throw std::logic_error("flat_reduce: leading letters must be expanded first");
            Atom b = *a;
            b.twist = 0;
            acc = acc * Expr::atom(b);
        } else if (auto* d = std::get_if<DmNode>(&f)) {
            acc = Coefficient(Rational(1, d->m + 1)) * (acc * flat_word(*d->arg));
        } else {
            throw std::logic_error("flat_reduce: resolvent block in trace expression");
        }
        if (acc.is_zero()) return acc;
    }
    return acc;
}

}  // namespace

Expr flat_reduce(const Expr& a) {
    Expr ex = expand_leads(a);
    Expr out;
    for (const auto& t : ex.term_list()) out += t.coef * flat_word(t.word);
    return cyclic_canonicalize(out);
}

namespace {

Expr X(int a, int b) {
    Atom ea = Atom::e(0), eb = Atom::e(0);
    (a == 1 ? ea.d1 : ea.d2) = 1;
    (b == 1 ? eb.d1 : eb.d2) = 1;
    return Expr(Word({Atom::e(0), ea, eb}));
}

int dir(const Atom& a) { return a.d1 ? 1 : 2; }

}  // namespace

Expr flat_trace_normal_form(const Expr& a) {
    Expr out;
    for (const auto& t : cyclic_canonicalize(a).term_list()) {
        const auto& f = t.word.f;
        std::vector<std::size_t> der;
        int order = 0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            auto* at = std::get_if<Atom>(&f[i]);
            if (!at || at->base != Base::E || at->twist != 0) fail("flat normal form: unsupported letter", t.word);
            if (at->has_deltas()) {
                der.push_back(i);
                order += at->order();
            }
        }
        if (order != 2) fail("flat normal form: order is not 2", t.word);
        const bool has_e = der.size() < f.size();
        if (der.size() == 1) {
            // τ(δ_aδ_b(e)) = 0, τ(e δ_aδ_b(e)) = −X_ab − X_ba
            if (!has_e) continue;
            const auto& at = std::get<Atom>(f[der[0]]);
            int a1 = at.d1 ? 1 : 2, b1 = at.d2 ? 2 : 1;
            out -= t.coef * (X(a1, b1) + X(b1, a1));
            continue;
        }
        const int i = der[0], j = der[1];
        const int a1 = dir(std::get<Atom>(f[i])), b1 = dir(std::get<Atom>(f[j]));
        const bool g1 = j - i > 1;
        const bool g2 = static_cast<int>(f.size()) - j - 1 + i > 0;
        if (g1 && g2) continue;
        if (!g1 && !g2) out += t.coef * (X(a1, b1) + X(b1, a1));
        else if (g1) out += t.coef * X(b1, a1);
        else out += t.coef * X(a1, b1);
    }
    return cyclic_canonicalize(out);
}

Expr connes_chern_expr() {
    Coefficient c(Gauss(Rational(0), Rational(2)), 1);
    return cyclic_canonicalize(c * (X(1, 2) - X(2, 1)));
}

CountReport term_counts(int side) {
    CountReport r;
    auto op = side == kLMinus ? symcalc::symbol_L_minus_opaque() : symcalc::symbol_L_plus_opaque();
    auto po = symcalc::parametrix_detailed(op, 2);
    r.b2_stripped_opaque = po.stripped[2].term_count();
    r.b2_raw_opaque = po.b[2].term_count();
    r.angular_opaque = angular_integrate(po.stripped[2], po.side).term_count();
    auto pf = symcalc::parametrix_detailed(pipeline_symbol(side), 2);
    r.b2_stripped_full = pf.stripped[2].term_count();
    r.b2_raw_full = pf.b[2].term_count();
    r.angular_full = angular_integrate(pf.stripped[2], side).term_count();
    return r;
}

namespace {

bool opaque(const Factor& f) { return !is_plain_e(f) && !is_plain_k(f); }

Word canon_linear(const Word& w);

Factor canon_factor(const Factor& f, int& pulled_k) {
    pulled_k = 0;
    auto* d = std::get_if<DmNode>(&f);
    if (!d) return f;
    Word arg = canon_linear(*d->arg);
    // Dₘ(X kᵇ) = Dₘ(X) kᵇ
    if (!arg.f.empty() && is_plain_k(arg.f.back())) {
        pulled_k = std::get<Atom>(arg.f.back()).kexp;
        arg.f.pop_back();
    }
    return DmNode{d->m, std::make_shared<const Word>(arg)};
}

// Pushes plain k-powers to the right past plain twisted e: kᵃσˢ(e) = σ^{s−a}(e)kᵃ.
Word push_k(const std::vector<Factor>& fs) {
    Word out;
    int a = 0;
    for (const auto& f : fs) {
        if (is_plain_k(f)) {
            a += std::get<Atom>(f).kexp;
        } else if (is_plain_e(f)) {
            Atom e = std::get<Atom>(f);
            e.twist -= a;
            out.f.push_back(e);
        } else {
            if (a) out.f.push_back(Atom::k(a));
            a = 0;
            int pk = 0;
            out.f.push_back(canon_factor(f, pk));
            a = pk;
        }
    }
    if (a) out.f.push_back(Atom::k(a));
    return normalize_word(out);
}

Word canon_linear(const Word& w) {
    Word cur = w, prev;
    do {
        prev = cur;
        cur = push_k(cur.f);
    } while (!(cur == prev));
    return cur;
}

Word canon_cyclic(const Word& w0) {
    Word w = canon_linear(w0);
    for (int iter = 0; iter < 64; ++iter) {
        std::size_t first = w.f.size();
        for (std::size_t i = 0; i < w.f.size(); ++i)
            if (opaque(w.f[i])) {
                first = i;
                break;
            }
        if (first == w.f.size()) return min_rotation(w);
        Word r(std::vector<Factor>(w.f.begin() + first, w.f.end()));
        r.f.insert(r.f.end(), w.f.begin(), w.f.begin() + first);
        // trailing k wraps to the front, where it meets the first opaque letter
        Word next = canon_linear(r);
        if (next == w) break;
        w = next;
    }
    Word best;
    bool have = false;
    for (std::size_t s = 0; s < w.f.size(); ++s) {
        if (!opaque(w.f[s])) continue;
        Word r(std::vector<Factor>(w.f.begin() + s, w.f.end()));
        r.f.insert(r.f.end(), w.f.begin(), w.f.begin() + s);
        if (!have || r < best) best = r, have = true;
    }
    return best;
}

}  // namespace

Expr strong_canonicalize(const Expr& a) {
    Expr ex = expand_leads(a);
    Expr out;
    for (const auto& t : ex.term_list()) out.add_term(canon_cyclic(t.word), t.coef);
    return out;
}

}  // namespace heat
