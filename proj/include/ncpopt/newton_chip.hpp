#pragma once

#include <set>
#include <stdexcept>
#include <vector>

#include "ncpopt/polynomial.hpp"

namespace ncpopt {

namespace detail {

/// Core of the Newton chip reduction. Candidates are the suffixes of the
/// support words with degree in [lo, hi]. A candidate w is then discarded
/// when w*w has zero coefficient and no other candidate pair (u,v) can
/// produce the word u*v = w*w; in the free algebra the only pair with
/// u = w is (w,w), so such a w cannot occur in any SOHS decomposition.
/// Iterated until stable.
inline std::set<Word> chip_set(const NcPolynomial& f, int lo, int hi) {
    std::set<Word> cands;
    for (const auto& [w, c] : f.terms()) {
        for (int len = lo; len <= std::min(hi, w.degree()); ++len) cands.insert(w.suffix(len));
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto it = cands.begin(); it != cands.end();) {
            const Word& w = *it;
            Word ww = w.star() * w;
            if (f.coeff(ww) != 0.0) {
                ++it;
                continue;
            }
            bool covered = false;
            int len = ww.degree();
            for (int a = lo; a <= std::min(hi, len - lo) && !covered; ++a) {
                int b = len - a;
                if (b < lo || b > hi) continue;
                Word u = ww.prefix(a).star();
                Word v = ww.suffix(b);
                if (u == w && v == w) continue;
                if (cands.count(u) && cands.count(v)) covered = true;
            }
            if (covered) {
                ++it;
            } else {
                it = cands.erase(it);
                changed = true;
            }
        }
    }
    return cands;
}

}  // namespace detail

/// Border words admissible in an SOHS decomposition of f: suffixes of the
/// support with degree between ceil(mindeg/2) and deg/2, pruned by the
/// w*w occurrence test. Guaranteed superset of the words appearing in any
/// SOHS decomposition of f. Requires f symmetric of even degree.
inline std::vector<Word> newton_chip(const NcPolynomial& f) {
    if (!f.is_symmetric()) throw std::invalid_argument("newton_chip: polynomial is not symmetric");
    auto deg = f.degree();
    if (!deg) return {};
    if (*deg % 2 != 0) throw std::invalid_argument("newton_chip: odd degree");
    int d = *deg / 2;
    int lo = (*f.min_degree() + 1) / 2;
    auto set = detail::chip_set(f, lo, d);
    return {set.begin(), set.end()};
}

/// Border basis for the moment matrix of an unconstrained eigenvalue
/// problem: the chip set of f - lambda for generic lambda, i.e. with the
/// unit word adjoined to the support and the lower degree bound at 0.
inline std::vector<Word> newton_chip_basis(const NcPolynomial& f) {
    if (!f.is_symmetric()) throw std::invalid_argument("newton_chip: polynomial is not symmetric");
    auto deg = f.degree();
    if (!deg || *deg == 0) return {Word::unit()};
    if (*deg % 2 != 0) throw std::invalid_argument("newton_chip: odd degree");
    NcPolynomial shifted = f;
    if (f.coeff(Word::unit()) == 0.0) shifted.add_term(Word::unit(), 1.0);
    auto set = detail::chip_set(shifted, 0, *deg / 2);
    return {set.begin(), set.end()};
}

}  // namespace ncpopt
