#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "fixtures.hpp"
#include "ncpopt/newton_chip.hpp"
#include "ncpopt/parse.hpp"

using namespace ncpopt;

TEST_CASE("chip of a single square") {
    auto f = parse_polynomial("x1^2", 1);
    auto b = newton_chip(f);
    REQUIRE(b.size() == 1);
    CHECK(b[0] == Word{1});
}

TEST_CASE("chip prunes words whose square cannot occur") {
    auto f = parse_polynomial("x2*x1^2*x2 + x2^2", 2);  // (x1*x2)*(x1*x2) + x2^2 expanded
    auto b = newton_chip(f);
    REQUIRE(b.size() == 2);
    CHECK(b[0] == Word{2});
    CHECK(b[1] == Word{1, 2});
}

TEST_CASE("chip of the sparse-gap quartic is the published 5-word border") {
    auto b = newton_chip(fixtures::chain_sohs_gap());
    // the border, written with each word as star(u): u in {x1, x1x2, x2, x3, x3x2}
    std::vector<Word> expect = {Word{1}, Word{2}, Word{3}, Word{2, 1}, Word{2, 3}};
    CHECK(b == expect);
}

TEST_CASE("chip rejects odd or non-symmetric input") {
    CHECK_THROWS(newton_chip(parse_polynomial("x1^3 + x1", 1)));
    CHECK_THROWS(newton_chip(parse_polynomial("x1*x2", 2)));
    CHECK(newton_chip(NcPolynomial(2)).empty());
}

TEST_CASE("chip basis adjoins the unit word") {
    auto f = parse_polynomial("x1^2", 1);
    auto b = newton_chip_basis(f);
    REQUIRE(b.size() == 2);
    CHECK(b[0] == Word::unit());
    CHECK(b[1] == Word{1});
}

TEST_CASE("chip of star(h)h keeps the admissible suffixes of h") {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> deg(1, 3), let(1, 3), coef(1, 5), nterms(1, 4);
    for (int t = 0; t < 40; ++t) {
        NcPolynomial h(3);
        int k = nterms(rng);
        for (int i = 0; i < k; ++i) {
            std::string s;
            int L = deg(rng);
            for (int j = 0; j < L; ++j) s += static_cast<char>(let(rng));
            h.add_term(Word{s}, coef(rng));  // positive coefficients: no cancellation
        }
        auto f = h.star() * h;
        auto chips = newton_chip(f);
        std::set<Word> chip_set(chips.begin(), chips.end());
        int lo = (*f.min_degree() + 1) / 2, hi = *f.degree() / 2;
        // the words of h itself survive the pruning, so the decomposition
        // f = star(h) h lives inside the returned border
        for (const auto& [w, c] : h.terms()) {
            REQUIRE(w.degree() >= lo);
            REQUIRE(w.degree() <= hi);
            CHECK(chip_set.count(w) == 1);
        }
        // and the border never leaves the raw suffix superset
        std::set<Word> suffixes;
        for (const auto& [w, c] : f.terms())
            for (int len = lo; len <= std::min(hi, w.degree()); ++len) suffixes.insert(w.suffix(len));
        for (const auto& w : chips) CHECK(suffixes.count(w) == 1);
    }
}
