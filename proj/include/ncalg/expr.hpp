#pragma once

#include "ncalg/rational.hpp"
#include "ncalg/word.hpp"

#include <functional>
#include <map>
#include <utility>
#include <vector>

namespace ncalg {

struct Term {
    Word word;
    Coefficient coef;
};

// Finite linear combination of words; coefficients with different π powers
// are kept apart.
class Expr {
public:
    using Key = std::pair<Word, int>;  // word, pi power
    struct KeyLess {
        bool operator()(const Key& a, const Key& b) const {
            auto c = compare(a.first, b.first);
            if (c != 0) return c < 0;
            return a.second < b.second;
        }
    };
    using Map = std::map<Key, Gauss, KeyLess>;

    Expr() = default;
    Expr(const Word& w, const Coefficient& c = Coefficient(1)) { add_term(w, c); }
    static Expr scalar(const Coefficient& c) { return Expr(Word{}, c); }
    static Expr atom(const Atom& a) { return Expr(Word({Factor{a}})); }
    static Expr one() { return scalar(Coefficient(1)); }

    // Adds c·w; w is normalized first.
    void add_term(const Word& w, const Coefficient& c);
    // Adds c·w with w already normalized.
    void add_normalized(const Word& w, const Coefficient& c);

    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    const Map& terms() const { return terms_; }
    std::vector<Term> term_list() const;

    Expr& operator+=(const Expr& o);
    Expr& operator-=(const Expr& o);
    Expr operator-() const;
    friend Expr operator+(Expr a, const Expr& b) { a += b; return a; }
    friend Expr operator-(Expr a, const Expr& b) { a -= b; return a; }
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator*(const Coefficient& c, const Expr& a);
    friend bool operator==(const Expr& a, const Expr& b);

    // Applies f to every term and sums the results.
    Expr map_terms(const std::function<Expr(const Word&, const Coefficient&)>& f) const;

private:
    Map terms_;
};

Expr mul(const Expr& a, const Expr& b);
Expr apply_delta(int i, const Expr& a);
Expr apply_twist(int s, const Expr& a);
Expr normalize(const Expr& a);

// Single-word helpers.
Expr delta_word(int i, const Word& w);
Expr twist_word(int s, const Word& w);

// D_m(a), distributed over the terms of a.
Expr make_dm(int m, const Expr& a);

// Conveniences for building expressions.
Expr E(int twist = 0);
Expr Kp(int n);
Expr sigma_e();
Expr delta_e();
Expr d(int i, const Expr& a);
Expr dd(int i, int j, const Expr& a);
Expr I();
Expr R(std::int64_t n, std::int64_t d = 1);

}  // namespace ncalg
