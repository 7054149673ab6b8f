#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ncpopt/parse.hpp"
#include "ncpopt/polynomial.hpp"

using namespace ncpopt;

namespace {
NcPolynomial random_poly(std::mt19937& rng, int nvars, int maxdeg, bool positive = false) {
    std::uniform_int_distribution<int> nterms(1, 6), deg(0, maxdeg), let(1, nvars), coef(1, 4);
    std::bernoulli_distribution sign(0.5);
    NcPolynomial f(nvars);
    int k = nterms(rng);
    for (int t = 0; t < k; ++t) {
        std::string s;
        int L = deg(rng);
        for (int i = 0; i < L; ++i) s += static_cast<char>(let(rng));
        double c = coef(rng);
        if (!positive && sign(rng)) c = -c;
        f.add_term(Word{s}, c);
    }
    return f;
}
}  // namespace

TEST_CASE("noncommutative product") {
    auto x1 = NcPolynomial::variable(2, 1);
    auto x2 = NcPolynomial::variable(2, 2);
    CHECK((x1 * x2).terms().count(Word{1, 2}) == 1);
    CHECK((x1 * x2) != (x2 * x1));

    auto h = x1 + x2;
    auto sq = h.star() * h;
    CHECK(sq.coeff(Word{1, 1}) == 1.0);
    CHECK(sq.coeff(Word{1, 2}) == 1.0);
    CHECK(sq.coeff(Word{2, 1}) == 1.0);
    CHECK(sq.coeff(Word{2, 2}) == 1.0);
    CHECK(sq.term_count() == 4);

    auto one = NcPolynomial::constant(2, 1.0);
    CHECK(x1 * one == x1);
}

TEST_CASE("star fixes symmetric polynomials and flips commutators") {
    auto f = parse_polynomial("x1^2 + 2*x2", 2);
    CHECK(f.star() == f);
    CHECK(f.is_symmetric());

    auto c = parse_polynomial("x1*x2 - x2*x1", 2);
    CHECK(c.star() == -c);
    CHECK_FALSE(c.is_symmetric());

    CHECK(parse_polynomial("x1*x2*x3", 3).star() == parse_polynomial("x3*x2*x1", 3));
}

TEST_CASE("star is an antihomomorphism on random inputs") {
    std::mt19937 rng(11);
    for (int t = 0; t < 50; ++t) {
        auto f = random_poly(rng, 3, 4);
        auto g = random_poly(rng, 3, 4);
        CHECK((f * g).star() == g.star() * f.star());
        CHECK(f.star().star() == f);
    }
}

TEST_CASE("degree sentinel for the zero polynomial") {
    NcPolynomial z(3);
    CHECK(z.is_zero());
    CHECK(!z.degree().has_value());
    CHECK(!z.cyclic_degree().has_value());
    auto f = parse_polynomial("x1*x2 - x2*x1 + x3 - x3", 3);
    CHECK(f.degree() == 2);
}

TEST_CASE("cyclic degree") {
    // commutators are cyclically equivalent to zero
    auto c = parse_polynomial("x1*x2 - x2*x1", 2);
    CHECK(!c.cyclic_degree().has_value());

    CHECK(parse_polynomial("x1^2*x2^2", 2).cyclic_degree() == 4);

    auto f = parse_polynomial("x1*x2*x1*x2 + x2*x1*x2*x1", 2);
    CHECK(f.cyclic_degree() == 4);
    auto p = f.cyclic_projection();
    CHECK(p.term_count() == 1);
    CHECK(p.coeff(Word{1, 2, 1, 2}) == 2.0);
}

TEST_CASE("symmetrized part") {
    auto f = parse_polynomial("x1*x2", 2);
    auto s = f.symmetrized();
    CHECK(s.is_symmetric());
    CHECK(s.coeff(Word{1, 2}) == 0.5);
    CHECK(s.coeff(Word{2, 1}) == 0.5);
}

TEST_CASE("drop tolerance merges coefficients exactly by default") {
    NcPolynomial f(1);
    f.add_term(Word{1}, 1.0);
    f.add_term(Word{1}, -1.0);
    CHECK(f.is_zero());
    NcPolynomial g(1, 1e-9);
    g.add_term(Word{1}, 1e-10);
    CHECK(g.is_zero());
}
