#include "ncalg/word.hpp"

#include <algorithm>

namespace ncalg {

std::strong_ordering compare(const DmNode& a, const DmNode& b) {
    if (auto c = a.m <=> b.m; c != 0) return c;
    if (a.arg.get() == b.arg.get()) return std::strong_ordering::equal;
    return compare(*a.arg, *b.arg);
}

std::strong_ordering compare(const Factor& a, const Factor& b) {
    if (auto c = a.index() <=> b.index(); c != 0) return c;
    switch (a.index()) {
        case 0: return std::get<Atom>(a) <=> std::get<Atom>(b);
        case 1: return compare(std::get<DmNode>(a), std::get<DmNode>(b));
        default: return std::get<B0Node>(a) <=> std::get<B0Node>(b);
    }
}

std::strong_ordering compare(const Word& a, const Word& b) {
    const std::size_t n = std::min(a.f.size(), b.f.size());
    for (std::size_t i = 0; i < n; ++i)
        if (auto c = compare(a.f[i], b.f[i]); c != 0) return c;
    return a.f.size() <=> b.f.size();
}

namespace {

bool plain_k(const Factor& x) {
    auto* a = std::get_if<Atom>(&x);
    return a && a->base == Base::K && !a->has_deltas();
}

bool plain_e(const Factor& x) {
    auto* a = std::get_if<Atom>(&x);
    return a && a->base == Base::E && !a->has_deltas();
}

}  // namespace

Word normalize_word(const Word& w) {
    std::vector<Factor> st;
    st.reserve(w.f.size());
    for (const Factor& x0 : w.f) {
        Factor x = x0;
        if (auto* a = std::get_if<Atom>(&x)) {
            if (a->base == Base::K && !a->has_deltas()) {
                a->twist = 0;
                if (a->kexp == 0) continue;
            }
            if (a->base != Base::E) a->twist = 0;
        } else if (auto* dm = std::get_if<DmNode>(&x)) {
            Word arg = normalize_word(*dm->arg);
            if (!(arg == *dm->arg)) dm->arg = std::make_shared<const Word>(std::move(arg));
        }
        if (!st.empty()) {
            Factor& top = st.back();
            if (plain_k(top) && plain_k(x)) {
                auto& t = std::get<Atom>(top);
                t.kexp += std::get<Atom>(x).kexp;
                if (t.kexp == 0) st.pop_back();
                continue;
            }
            if (plain_e(top) && plain_e(x) && std::get<Atom>(top).twist == std::get<Atom>(x).twist)
                continue;
            auto* bt = std::get_if<B0Node>(&top);
            auto* bx = std::get_if<B0Node>(&x);
            if (bt && bx && bt->side == bx->side && bt->lam_m1 == bx->lam_m1) {
                bt->power += bx->power;
                bt->fpow += bx->fpow;
                continue;
            }
        }
        st.push_back(std::move(x));
    }
    return Word(std::move(st));
}

Word concat(const Word& a, const Word& b) {
    std::vector<Factor> f;
    f.reserve(a.f.size() + b.f.size());
    f.insert(f.end(), a.f.begin(), a.f.end());
    f.insert(f.end(), b.f.begin(), b.f.end());
    return Word(std::move(f));
}

int delta_order(const Word& w) {
    int n = 0;
    for (const auto& x : w.f) {
        if (auto* a = std::get_if<Atom>(&x)) n += a->order();
        else if (auto* d = std::get_if<DmNode>(&x)) n += delta_order(*d->arg);
    }
    return n;
}

bool has_b0(const Word& w) {
    return std::any_of(w.f.begin(), w.f.end(), [](const Factor& x) { return std::holds_alternative<B0Node>(x); });
}

bool has_dm(const Word& w) {
    return std::any_of(w.f.begin(), w.f.end(), [](const Factor& x) { return std::holds_alternative<DmNode>(x); });
}

}  // namespace ncalg
