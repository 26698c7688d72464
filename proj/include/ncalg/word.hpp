#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace ncalg {

// E: the idempotent e; K: powers of the conformal factor k;
// Lead: the opaque leading factor of a resolvent (see leading.hpp), only
// used when counting terms in the convention where δ(σ(e)k²) stays unexpanded.
enum class Base : std::uint8_t { E = 0, K = 1, Lead = 2 };

// δ₁^d1 δ₂^d2 ( σ^twist ( base ) ). Deltas act outermost.
struct Atom {
    Base base = Base::E;
    int kexp = 0;   // K only
    int twist = 0;  // E only
    int side = 0;   // Lead only
    std::uint8_t d1 = 0, d2 = 0;

    bool has_deltas() const { return d1 != 0 || d2 != 0; }
    int order() const { return d1 + d2; }

    static Atom e(int twist = 0) { Atom a; a.base = Base::E; a.twist = twist; return a; }
    static Atom k(int n) { Atom a; a.base = Base::K; a.kexp = n; return a; }
    static Atom lead(int side) { Atom a; a.base = Base::Lead; a.side = side; return a; }

    auto operator<=>(const Atom&) const = default;
};

struct Word;

// D_m(arg); the argument is a single normalized word with unit coefficient.
struct DmNode {
    int m = 0;
    std::shared_ptr<const Word> arg;
};

// Commuting resolvent block b₀^power · F^fpow, F the leading factor of `side`.
struct B0Node {
    int side = 0;
    int power = 1;
    int fpow = 0;
    bool lam_m1 = true;

    auto operator<=>(const B0Node&) const = default;
};

using Factor = std::variant<Atom, DmNode, B0Node>;

struct Word {
    std::vector<Factor> f;

    Word() = default;
    explicit Word(std::vector<Factor> fs) : f(std::move(fs)) {}

    bool empty() const { return f.empty(); }
    std::size_t size() const { return f.size(); }
};

std::strong_ordering compare(const Word& a, const Word& b);
std::strong_ordering compare(const DmNode& a, const DmNode& b);
std::strong_ordering compare(const Factor& a, const Factor& b);

inline bool operator==(const Word& a, const Word& b) { return compare(a, b) == 0; }
inline bool operator<(const Word& a, const Word& b) { return compare(a, b) < 0; }
inline bool operator==(const DmNode& a, const DmNode& b) { return compare(a, b) == 0; }
inline bool operator<(const DmNode& a, const DmNode& b) { return compare(a, b) < 0; }

// Applies the local confluent rules: k-merge, idempotent collapse of plain
// twisted e, unit removal, merge of adjacent resolvent blocks.
Word normalize_word(const Word& w);
Word concat(const Word& a, const Word& b);

// Total derivative order carried by atoms (D_m arguments included).
int delta_order(const Word& w);
bool has_b0(const Word& w);
bool has_dm(const Word& w);

}  // namespace ncalg
