#pragma once

#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "ncpopt/moment.hpp"
#include "ncpopt/pattern.hpp"
#include "ncpopt/polynomial.hpp"

namespace ncpopt::bench {

/// Chained singular objective: sum over the window anchors J = {1, 3, 4,
/// ..., n-3} of (x_i + 10 x_{i+1})^2 + 5 (x_{i+2} - x_{i+3})^2 +
/// (x_{i+1} - 2 x_{i+2})^4 + 10 (x_i - x_{i+3})^4. Each square expands as
/// star(h) h; the inner polynomials are symmetric so the two coincide.
inline NcPolynomial chained_singular(int n) {
    if (n < 4 || n % 4 != 0) throw std::invalid_argument("chained_singular: n must be a multiple of 4");
    auto x = [&](int i) { return NcPolynomial::variable(n, i); };
    auto sq = [](const NcPolynomial& h) { return h.star() * h; };
    NcPolynomial f(n);
    std::vector<int> anchors{1};
    for (int i = 3; i <= n - 3; ++i) anchors.push_back(i);
    for (int i : anchors) {
        f += sq(x(i) + 10.0 * x(i + 1));
        f += 5.0 * sq(x(i + 2) - x(i + 3));
        f += sq(sq(x(i + 1) - 2.0 * x(i + 2)));
        f += 10.0 * sq(sq(x(i) - x(i + 3)));
    }
    return f;
}

/// Paper-standard clique cover for the chained singular family: all
/// windows {k,...,k+3}, k = 1..n-3 (a superset cover of the csp cliques
/// in consecutive, RIP-satisfying order).
inline std::vector<VarSet> chained_singular_cliques(int n) {
    std::vector<VarSet> cl;
    for (int k = 1; k <= n - 3; ++k) cl.push_back({k, k + 1, k + 2, k + 3});
    return cl;
}

/// Generalized Rosenbrock objective,
/// sum_{i=1}^{n-1} (100 (x_{i+1} - x_i^2)^2 + (1 - x_{i+1})^2),
/// minimal eigenvalue 0 at the all-identity tuple.
inline NcPolynomial generalized_rosenbrock(int n) {
    if (n < 2) throw std::invalid_argument("generalized_rosenbrock: n must be at least 2");
    auto x = [&](int i) { return NcPolynomial::variable(n, i); };
    auto sq = [](const NcPolynomial& h) { return h.star() * h; };
    NcPolynomial f(n);
    for (int i = 1; i < n; ++i) {
        f += 100.0 * sq(x(i + 1) - x(i) * x(i));
        f += sq(NcPolynomial::constant(n, 1.0) - x(i + 1));
    }
    return f;
}

inline std::vector<VarSet> generalized_rosenbrock_cliques(int n) {
    std::vector<VarSet> cl;
    for (int k = 1; k < n; ++k) cl.push_back({k, k + 1});
    return cl;
}

/// Constraint families: the polydisc with shifted letters,
/// {1-x_i^2} u {x_i - 1/3}, and the sliding window balls
/// {1 - x_k^2 - x_{k+1}^2 - x_{k+2}^2}.
inline std::vector<NcPolynomial> constraint_family(const std::string& name, int n) {
    std::vector<NcPolynomial> S;
    auto x2 = [&](int i) {
        Word w = Word::letter(i);
        return NcPolynomial::monomial(n, w * w, 1.0);
    };
    if (name == "polydisc") {
        for (int i = 1; i <= n; ++i) S.push_back(NcPolynomial::constant(n, 1.0) - x2(i));
        for (int i = 1; i <= n; ++i)
            S.push_back(NcPolynomial::variable(n, i) - NcPolynomial::constant(n, 1.0 / 3.0));
        return S;
    }
    if (name == "polyball") {
        for (int k = 1; k <= n - 2; ++k) {
            NcPolynomial g = NcPolynomial::constant(n, 1.0);
            g -= x2(k);
            g -= x2(k + 1);
            g -= x2(k + 2);
            S.push_back(g);
        }
        return S;
    }
    throw std::invalid_argument("unknown constraint family: " + name);
}

/// Random cubic objective with window cliques {k,k+1,k+2}: every word of
/// degree <= 3 in a window's variables gets an integer coefficient
/// uniform in [-7, 7] (zero drops the term). Deterministic per seed.
inline NcPolynomial random_cubic(int n, unsigned seed) {
    if (n < 3) throw std::invalid_argument("random_cubic: n must be at least 3");
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> coef(-7, 7);
    NcPolynomial f(n);
    for (int k = 1; k <= n - 2; ++k) {
        WordBasis basis(VarSet{k, k + 1, k + 2}, 3);
        for (const auto& w : basis.words) {
            // words living entirely in the previous window were already drawn
            if (k > 1 && !w.is_unit() && w.max_letter() < k + 2) continue;
            int c = coef(rng);
            if (c != 0 && !(k > 1 && w.is_unit())) f.add_term(w, c);
        }
    }
    return f;
}

inline std::vector<VarSet> random_cubic_cliques(int n) {
    std::vector<VarSet> cl;
    for (int k = 1; k <= n - 2; ++k) cl.push_back({k, k + 1, k + 2});
    return cl;
}

}  // namespace ncpopt::bench
