#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "fixtures.hpp"
#include "ncpopt/block_sdp.hpp"
#include "ncpopt/relaxation.hpp"

using namespace ncpopt;

TEST_CASE("word basis sizes follow the closed form") {
    CHECK(WordBasis({1, 2, 3}, 2).size() == 13);
    CHECK(word_count(3, 2) == 13);
    CHECK(WordBasis({5}, 4).size() == 5);  // n = 1 degenerate clique
    CHECK(word_count(1, 4) == 5);
    CHECK(WordBasis({1, 2, 3, 4}, 2).size() == 21);
    CHECK(word_count(4, 4) == 341);
    WordBasis b({1, 2}, 3);
    for (size_t i = 1; i < b.words.size(); ++i) CHECK(b.words[i - 1] < b.words[i]);
}

TEST_CASE("moment table keys") {
    MomentVariableTable eig(MomentKeyMode::Eig);
    CHECK(eig.get_or_insert(Word{1, 2}) == eig.get_or_insert(Word{2, 1}));
    CHECK(eig.get_or_insert(Word{1, 2, 1}) != eig.get_or_insert(Word{1, 1, 2}));
    CHECK(eig.get_or_insert(Word::unit()) == MomentVariableTable::kUnit);

    MomentVariableTable tr(MomentKeyMode::Trace);
    CHECK(tr.get_or_insert(Word{1, 2, 1}) == tr.get_or_insert(Word{1, 1, 2}));
    CHECK(tr.get_or_insert(Word{1, 2}) == tr.get_or_insert(Word{2, 1}));
}

TEST_CASE("gram objective examples") {
    auto f = parse_polynomial("x1^2", 1);
    auto [G, res] = gram_objective(f, {Word::unit(), Word{1}});
    CHECK(res.is_zero());
    CHECK(G(0, 0) == 0.0);
    CHECK(G(0, 1) == 0.0);
    CHECK(G(1, 1) == 1.0);

    auto one = NcPolynomial::constant(1, 1.0);
    auto [G1, res1] = gram_objective(one, {Word::unit()});
    CHECK(res1.is_zero());
    CHECK(G1(0, 0) == 1.0);

    CHECK_THROWS_AS(gram_objective(parse_polynomial("x1^4", 1), {Word::unit(), Word{1}}),
                    RelaxError);
}

TEST_CASE("gram of the sparse-gap quartic reproduces the published matrix") {
    auto f = fixtures::chain_sohs_gap();
    auto basis = newton_chip(f);  // {x1, x2, x3, x2*x1, x2*x3} graded-lex
    REQUIRE(basis.size() == 5);
    auto [G, res] = gram_objective(f, basis);
    CHECK(res.is_zero());
    // published Gram at alpha = 0 over the row border [x1, x1x2, x2, x3, x3x2],
    // permuted to this basis order (each border word starred)
    Eigen::MatrixXd expect(5, 5);
    expect << 1, -1, 0, -1, 0,
              -1, 3, -1, 0, 9,
              0, -1, 6, 0, -27,
              -1, 0, 0, 2, 0,
              0, 9, -27, 0, 142;
    CHECK((G - expect).norm() == 0.0);
}

TEST_CASE("gram round trips on random symmetric polynomials") {
    std::mt19937 rng(19);
    std::uniform_int_distribution<int> deg(0, 4), let(1, 2), coef(-3, 3);
    WordBasis basis({1, 2}, 2);
    for (int t = 0; t < 30; ++t) {
        NcPolynomial h(2);
        for (int i = 0; i < 5; ++i) {
            std::string s;
            int L = deg(rng);
            for (int j = 0; j < L; ++j) s += static_cast<char>(let(rng));
            h.add_term(Word{s}, coef(rng));
        }
        auto f = h.symmetrized();
        auto [G, res] = gram_objective(f, basis.words);
        CHECK(res.is_zero());
        CHECK((G - G.transpose()).norm() == 0.0);
    }
}

TEST_CASE("localizing entries") {
    MomentVariableTable table;
    auto g = parse_polynomial("1 - x1^2", 1);
    auto form = localizing_entry(g, Word::unit(), Word::unit(), table);
    CHECK(form.constant == 1.0);
    REQUIRE(form.coeffs.size() == 1);
    CHECK(form.coeffs.begin()->second == -1.0);
    CHECK(table.key(form.coeffs.begin()->first) == Word{1, 1});

    auto g2 = parse_polynomial("x1 - 0.333333333333333315", 1);
    auto f2 = localizing_entry(g2, Word{1}, Word{1}, table);
    CHECK(f2.constant == 0.0);
    REQUIRE(f2.coeffs.size() == 2);
    CHECK(f2.coeffs.at(table.lookup(Word{1, 1, 1})) == 1.0);
    CHECK(f2.coeffs.at(table.lookup(Word{1, 1})) == -0.333333333333333315);

    auto c = NcPolynomial::constant(2, 2.5);
    auto f3 = localizing_entry(c, Word{1}, Word{2}, table);
    CHECK(f3.constant == 0.0);
    CHECK(f3.coeffs.at(table.lookup(Word{1, 2})) == 2.5);
}

TEST_CASE("single-clique sparse build is entry-for-entry the dense build") {
    std::mt19937 rng(41);
    std::uniform_int_distribution<int> nv(1, 3), deg(0, 2), coef(-3, 3);
    for (int t = 0; t < 10; ++t) {
        int n = nv(rng);
        std::uniform_int_distribution<int> let(1, n);
        NcPolynomial h(n);
        for (int i = 0; i < 4; ++i) {
            std::string s;
            int L = deg(rng);
            for (int j = 0; j < L; ++j) s += static_cast<char>(let(rng));
            h.add_term(Word{s}, coef(rng));
        }
        auto f = h.symmetrized();
        NcPolynomial ball = NcPolynomial::constant(n, n);
        for (int i = 1; i <= n; ++i) ball.add_term(Word{std::string(2, char(i))}, -1.0);
        std::vector<NcPolynomial> S{ball};

        VarSet all;
        for (int i = 1; i <= n; ++i) all.insert(i);
        auto pat = assemble_pattern(f, S, {all}, PatternMode::Given);
        auto sparse = build_eig(f, S, pat, 2, false);
        auto dense = build_eig(f, S, pat, 2, true, false);
        REQUIRE(sparse.blocks.size() == dense.blocks.size());
        for (size_t b = 0; b < sparse.blocks.size(); ++b) {
            CHECK(sparse.blocks[b].entries == dense.blocks[b].entries);
            CHECK(sparse.blocks[b].basis.words == dense.blocks[b].basis.words);
        }
        CHECK(sparse.objective.constant == dense.objective.constant);
        CHECK(sparse.objective.coeffs == dense.objective.coeffs);
    }
}

TEST_CASE("hankel blocks share overlap variables across cliques") {
    auto f = parse_polynomial("x1*x2 + x2*x1 + x2*x3 + x3*x2", 3);
    auto pat = assemble_pattern(f, {}, {{1, 2}, {2, 3}}, PatternMode::Given);
    auto relax = build_eig(f, {}, pat, 1, false);
    REQUIRE(relax.blocks.size() == 2);
    auto find_var = [&](const RelaxBlock& blk, const Word& u, const Word& v) {
        for (const auto& e : blk.entries)
            if (blk.basis.words[e.row] == u && blk.basis.words[e.col] == v) return e.var;
        return -99;
    };
    int va = find_var(relax.blocks[0], Word{2}, Word{2});
    int vb = find_var(relax.blocks[1], Word{2}, Word{2});
    CHECK(va == vb);
    CHECK(va >= 0);
}

TEST_CASE("assembled blocks are structurally symmetric") {
    auto f = fixtures::cubic4();
    auto S = fixtures::cubic4_balls();
    auto pat = assemble_pattern(f, S, {{1, 2, 3}, {2, 3, 4}}, PatternMode::Given);
    auto relax = build_eig(f, S, pat, 2, false);
    REQUIRE(relax.blocks.size() == 4);  // 2 hankel + 2 localizing
    for (const auto& blk : relax.blocks)
        for (const auto& e : blk.entries) CHECK(e.row <= e.col);
    Eigen::VectorXd y = Eigen::VectorXd::Random(relax.variable_count());
    for (const auto& blk : relax.blocks) {
        Eigen::MatrixXd M = blk.value(y);
        CHECK((M - M.transpose()).norm() == 0.0);
    }
    CHECK(relax.blocks[0].size() == 13);  // sigma(3,2)
    CHECK(relax.blocks[2].size() == 4);   // localizing at order 1
}

TEST_CASE("order gating") {
    auto f = parse_polynomial("x1^4", 1);
    CHECK_THROWS_AS(build_eig(f, {}, dense_pattern(f, {}), 1, true), RelaxError);
    CHECK_NOTHROW(build_eig(f, {}, dense_pattern(f, {}), 2, true));

    auto x = parse_polynomial("x1", 1);
    auto g = parse_polynomial("1 - x1^2", 1);
    CHECK_THROWS_AS(build_eig(x, {g}, dense_pattern(x, {g}), 0, true), RelaxError);
    CHECK_NOTHROW(build_eig(x, {g}, dense_pattern(x, {g}), 1, true));
}

TEST_CASE("trace build identifies cyclic classes and signals odd cdeg") {
    auto odd = parse_polynomial("x1*x2*x1 + x1^2*x2 + x2*x1^2", 2);  // symmetric, cdeg 3
    CHECK_THROWS_AS(build_trace(odd, {}, dense_pattern(odd, {}), 2, true), UnboundedBelowError);

    auto f = parse_polynomial("x1*x2*x1*x2 + x2*x1*x2*x1", 2);
    auto relax = build_trace(f, {}, dense_pattern(f, {}), 2, true);
    CHECK(relax.objective.constant == 0.0);
    REQUIRE(relax.objective.coeffs.size() == 1);
    CHECK(relax.table.key(relax.objective.coeffs.begin()->first) == Word{1, 2, 1, 2});
    CHECK(relax.objective.coeffs.begin()->second == 2.0);

    // the symmetric part of a commutator square projects to a plain form:
    // cdeg of x1x2x2x1 (palindrome class) stays 4 with no cancellation
    auto g = parse_polynomial("x1*x2^2*x1 + x2*x1^2*x2", 2);
    auto r2 = build_trace(g, {}, dense_pattern(g, {}), 2, true);
    REQUIRE(r2.objective.coeffs.size() == 1);  // both terms share one cyclic class
    CHECK(r2.objective.coeffs.begin()->second == 2.0);
}

TEST_CASE("trace table is coarser than eig table on the same build") {
    auto f = fixtures::chain_sohs_gap();
    auto eig = build_eig(f, {}, dense_pattern(f, {}), 2, true, false);
    auto tr = build_trace(f, {}, dense_pattern(f, {}), 2, true);
    CHECK(tr.variable_count() < eig.variable_count());
}

TEST_CASE("newton chip basis used only for unconstrained dense eig") {
    auto f = fixtures::chain_sohs_gap();
    auto chip = build_eig(f, {}, dense_pattern(f, {}), 2, true);
    CHECK(chip.blocks[0].basis.size() == 6);  // unit word + the 5 border words
    auto full = build_eig(f, {}, dense_pattern(f, {}), 2, true, false);
    CHECK(full.blocks[0].basis.size() == 13);  // sigma(3,2)
    auto sparse = build_eig(f, {}, detect_pattern(f, {}), 2, false);
    for (const auto& blk : sparse.blocks) CHECK(blk.basis.size() == 7);  // sigma(2,2)
}

TEST_CASE("to_block_sdp flips the objective and collects constants") {
    auto f = parse_polynomial("x1^2 - 1", 1);
    auto relax = build_eig(f, {}, dense_pattern(f, {}), 1, true);
    auto sdp = to_block_sdp(relax);
    CHECK(relax.objective.constant == -1.0);
    REQUIRE(sdp.m == relax.variable_count());
    int var = relax.table.lookup(Word{1, 1});
    CHECK(sdp.b[var] == -1.0);
    // the hankel block F0 carries the pinned unit entry
    CHECK(sdp.blocks[0].f0.size() == 1);
    CHECK(sdp.blocks[0].f0[0].value == 1.0);
}
