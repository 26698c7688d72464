#include "ncalg/leading.hpp"

#include <mutex>
#include <stdexcept>
#include <vector>

namespace ncalg {

namespace {

struct Registry {
    std::mutex mu;
    std::vector<Word> factors;
    Registry() {
        factors.push_back(Word({Atom::e(1), Atom::k(2)}));
        factors.push_back(Word({Atom::e(2), Atom::k(2), Atom::e(2)}));
        factors.push_back(Word{});
    }
};

Registry& reg() {
    static Registry r;
    return r;
}

}  // namespace

const Word& leading_factor(int side) {
    auto& r = reg();
    std::lock_guard lk(r.mu);
    if (side < 0 || side >= (int)r.factors.size()) throw std::out_of_range("unknown resolvent side");
    return r.factors[side];
}

int register_leading(const Word& F) {
    auto& r = reg();
    Word n = normalize_word(F);
    std::lock_guard lk(r.mu);
    for (std::size_t i = 0; i < r.factors.size(); ++i)
        if (r.factors[i] == n) return (int)i;
    r.factors.push_back(n);
    return (int)r.factors.size() - 1;
}

std::string side_name(int side) {
    switch (side) {
        case kLMinus: return "Lminus";
        case kLPlus: return "Lplus";
        case kFlat: return "flat";
        default: return "side" + std::to_string(side);
    }
}

int side_from_name(const std::string& s) {
    if (s == "Lminus" || s == "L-" || s == "minus") return kLMinus;
    if (s == "Lplus" || s == "L+" || s == "plus") return kLPlus;
    if (s == "flat") return kFlat;
    throw std::invalid_argument("unknown side '" + s + "'");
}

Expr expand_leads(const Expr& a) {
    return a.map_terms([](const Word& w, const Coefficient& c) {
        Expr r = Expr::scalar(c);
        for (const auto& x : w.f) {
            Expr piece;
            if (auto* at = std::get_if<Atom>(&x); at && at->base == Base::Lead) {
                piece = Expr(leading_factor(at->side));
                for (int j = 0; j < at->d1; ++j) piece = apply_delta(1, piece);
                for (int j = 0; j < at->d2; ++j) piece = apply_delta(2, piece);
            } else if (auto* dm = std::get_if<DmNode>(&x)) {
                piece = make_dm(dm->m, expand_leads(Expr(*dm->arg)));
            } else {
                piece = Expr(Word({x}));
            }
            r = r * piece;
        }
        return r;
    });
}

Word spell_block(const B0Node& b) {
    B0Node core = b;
    core.fpow = 0;
    Word w({core});
    const Word& F = leading_factor(b.side);
    for (int j = 0; j < b.fpow; ++j) w = concat(w, F);
    return w;
}

}  // namespace ncalg
