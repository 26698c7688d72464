#include "../properties.hpp"

#include <doctest.h>

namespace {
void check(const properties::Result& r) {
    INFO(r.name << ": first failure " << r.first_failure);
    CHECK(r.cases >= 1000);
    CHECK(r.failures == 0);
}
}  // namespace

TEST_CASE("property: Leibniz") { check(properties::leibniz(1000, 101)); }
TEST_CASE("property: associativity") { check(properties::associativity(1000, 102)); }
TEST_CASE("property: trace cyclicity") { check(properties::trace_cyclicity(1000, 103)); }
TEST_CASE("property: idempotent collapse") { check(properties::idempotent_collapse(1000, 104)); }
TEST_CASE("property: parser round trip") { check(properties::parser_round_trip(1000, 105)); }

TEST_CASE("emit is injective on canonical forms") {
    std::mt19937_64 g(106);
    std::map<std::string, ncalg::Expr> seen;
    int clashes = 0;
    for (int c = 0; c < 3000; ++c) {
        const auto x = heat::cyclic_canonicalize(testing_support::random_expr(g, 2, 4));
        auto [it, fresh] = seen.emplace(ncalg::to_latex(x), x);
        if (!fresh && !(it->second == x)) ++clashes;
    }
    CHECK(clashes == 0);
}

TEST_CASE("fuzzed parser input never crashes") {
    std::mt19937_64 g(107);
    const std::string alphabet = "ekDsd12m[]()^-+*/ i pi\\{}_";
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1), len(0, 24);
    for (int c = 0; c < 3000; ++c) {
        std::string s;
        for (std::size_t j = len(g); j > 0; --j) s += alphabet[pick(g)];
        try {
            (void)frontend::parse_expr(s);
        } catch (const frontend::ParseError&) {
        } catch (const std::invalid_argument&) {
        }
        try {
            (void)frontend::parse_latex(s);
        } catch (const frontend::ParseError&) {
        } catch (const std::invalid_argument&) {
        }
    }
    CHECK(true);
}

TEST_CASE("results do not depend on the thread count") {
    const auto b = testing_support::small_binding(108, 2);
    std::mt19937_64 g(109);
    for (int c = 0; c < 20; ++c) {
        const auto x = testing_support::random_expr(g, 6, 4);
        CHECK((nctorus::eval_expr(x, b) - nctorus::eval_expr_serial(x, b)).norm() == 0.0);
    }
}
