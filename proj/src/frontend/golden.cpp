#include "frontend/golden.hpp"

#include "frontend/parse.hpp"
#include "heat/pipeline.hpp"
#include "ncalg/io.hpp"
#include "ncalg/leading.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#ifndef NCINDEX_SOURCE_GOLDEN_DIR
#define NCINDEX_SOURCE_GOLDEN_DIR "tests/golden"
#endif

namespace frontend {

using ncalg::Coefficient;
using ncalg::Expr;
using ncalg::Rational;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read golden file " + path);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string stem(int side) {
    if (side == ncalg::kLMinus) return "a2_Lminus";
    if (side == ncalg::kLPlus) return "a2_Lplus";
    throw std::invalid_argument("no golden display for side " + ncalg::side_name(side));
}

}  // namespace

std::string default_golden_dir() {
    if (const char* env = std::getenv("NCINDEX_GOLDEN_DIR"); env && *env) return env;
    return NCINDEX_SOURCE_GOLDEN_DIR;
}

Expr load_golden_tex(const std::string& dir, int side) { return parse_latex(slurp(dir + "/" + stem(side) + ".tex")); }

Expr load_golden_json(const std::string& dir, int side) {
    auto j = nlohmann::json::parse(slurp(dir + "/" + stem(side) + ".json"));
    return ncalg::expr_from_json(j.at("terms"));
}

Expr display_normalization(const Expr& a2) {
    // (1/(−2π))·τ(a₂)
    return Coefficient(ncalg::Gauss(Rational(-1, 2)), -1) * a2;
}

GoldenDiff diff_against_golden(const Expr& ours_a2, const Expr& golden_display) {
    const Expr a = heat::strong_canonicalize(display_normalization(ours_a2));
    const Expr b = heat::strong_canonicalize(golden_display);
    GoldenDiff d;
    d.ours = a.size();
    d.golden = b.size();
    std::map<ncalg::Word, Coefficient> mb;
    for (const auto& t : b.term_list()) mb.emplace(t.word, t.coef);
    for (const auto& t : a.term_list()) {
        auto it = mb.find(t.word);
        if (it == mb.end()) {
            ++d.only_ours;
            continue;
        }
        ++d.common;
        if (it->second == t.coef) ++d.equal;
        mb.erase(it);
    }
    d.only_golden = mb.size();
    d.difference = a - b;
    return d;
}

}  // namespace frontend
