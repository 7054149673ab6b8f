#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ncpopt/moment.hpp"
#include "ncpopt/pattern.hpp"
#include "ncpopt/polynomial.hpp"
#include "ncpopt/newton_chip.hpp"

namespace ncpopt {

struct RelaxError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when a trace objective has odd cyclic degree, i.e. the trace
/// minimum is -infinity and no relaxation order can bound it.
struct UnboundedBelowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// constant + sum_i coeffs[i] * y_i over moment variables.
struct LinearForm {
    double constant = 0.0;
    std::map<int, double> coeffs;

    void add(int var, double c) {
        if (var == MomentVariableTable::kUnit) {
            constant += c;
            return;
        }
        auto [it, inserted] = coeffs.try_emplace(var, c);
        if (!inserted) it->second += c;
        if (it->second == 0.0) coeffs.erase(it);
    }
    double value(const Eigen::VectorXd& y) const {
        double v = constant;
        for (const auto& [i, c] : coeffs) v += c * y[i];
        return v;
    }
};

struct BlockEntry {
    int row, col;  // row <= col
    int var;       // moment-variable id, or MomentVariableTable::kUnit
    double coeff;

    friend bool operator==(const BlockEntry& a, const BlockEntry& b) {
        return a.row == b.row && a.col == b.col && a.var == b.var && a.coeff == b.coeff;
    }
};

struct RelaxBlock {
    std::string label;
    WordBasis basis;
    int clique = 0;      // 1-based
    int constraint = 0;  // 0 for Hankel blocks
    std::vector<BlockEntry> entries;

    int size() const { return static_cast<int>(basis.size()); }

    Eigen::MatrixXd value(const Eigen::VectorXd& y) const {
        Eigen::MatrixXd M = Eigen::MatrixXd::Zero(size(), size());
        for (const auto& e : entries) {
            double v = e.var == MomentVariableTable::kUnit ? e.coeff : e.coeff * y[e.var];
            M(e.row, e.col) += v;
            if (e.row != e.col) M(e.col, e.row) += v;
        }
        return M;
    }
};

enum class RelaxKind { EigDense, EigSparse, TraceDense, TraceSparse };

/// A moment-side SDP: one Hankel block per clique, one localizing block per
/// assigned (constraint, clique) pair, entries indexed by shared moment
/// variables, the unit word eliminated into constants, and the objective
/// sum_k <M_s(L, I_k), G_{f_k}> as a linear form.
struct MomentRelaxation {
    RelaxKind kind = RelaxKind::EigDense;
    int order = 0;
    int nvars = 0;
    int flat_delta = 1;  // flatness step: max(1, max_j ceil(deg g_j / 2))
    SparsityPattern pattern;
    MomentVariableTable table;
    std::vector<RelaxBlock> blocks;
    LinearForm objective;

    bool is_sparse() const { return kind == RelaxKind::EigSparse || kind == RelaxKind::TraceSparse; }
    int variable_count() const { return table.size(); }
    long entry_budget() const {
        long n = 0;
        for (const auto& b : blocks) n += static_cast<long>(b.size()) * b.size();
        return n;
    }
};

namespace detail {

/// Finds u, v in the basis with star(u) v = w, preferring balanced splits.
inline std::optional<std::pair<Word, Word>> split_in_basis(const Word& w,
                                                           const std::set<Word>& basis) {
    int len = w.degree();
    int a0 = (len + 1) / 2;
    for (int off = 0; off <= len; ++off) {
        for (int a : {a0 - off, a0 + off}) {
            if (a < 0 || a > len) continue;
            Word u = w.prefix(a).star();
            Word v = w.suffix(len - a);
            if (basis.count(u) && basis.count(v)) return std::make_pair(u, v);
            if (off == 0) break;
        }
    }
    return std::nullopt;
}

inline void append_hankel_block(MomentRelaxation& relax, const WordBasis& basis, int clique) {
    RelaxBlock blk;
    blk.label = "H(I" + std::to_string(clique) + ")";
    blk.basis = basis;
    blk.clique = clique;
    int n = blk.size();
    for (int i = 0; i < n; ++i) {
        Word ui = basis.words[i].star();
        for (int j = i; j < n; ++j) {
            int var = relax.table.get_or_insert(ui * basis.words[j]);
            blk.entries.push_back({i, j, var, 1.0});
        }
    }
    relax.blocks.push_back(std::move(blk));
}

inline void append_localizing_block(MomentRelaxation& relax, const NcPolynomial& g, int j_index,
                                    const WordBasis& basis, int clique) {
    RelaxBlock blk;
    blk.label = "L(g" + std::to_string(j_index) + ",I" + std::to_string(clique) + ")";
    blk.basis = basis;
    blk.clique = clique;
    blk.constraint = j_index;
    int n = blk.size();
    for (int i = 0; i < n; ++i) {
        Word ui = basis.words[i].star();
        for (int j = i; j < n; ++j) {
            std::map<int, double> row;  // merge repeated keys within one entry
            for (const auto& [m, c] : g.terms()) {
                int var = relax.table.get_or_insert(ui * m * basis.words[j]);
                row[var] += c;
            }
            for (const auto& [var, c] : row)
                if (c != 0.0) blk.entries.push_back({i, j, var, c});
        }
    }
    relax.blocks.push_back(std::move(blk));
}

inline MomentRelaxation build(const NcPolynomial& f_in, const std::vector<NcPolynomial>& S,
                              const SparsityPattern& pattern_in, int order, bool dense,
                              MomentKeyMode mode, bool use_newton_chip) {
    if (!f_in.is_symmetric()) throw RelaxError("objective must be symmetric");
    for (size_t j = 0; j < S.size(); ++j)
        if (!S[j].is_symmetric())
            throw RelaxError("constraint " + std::to_string(j + 1) + " must be symmetric");

    // For trace problems the objective only matters modulo cyclic
    // equivalence; project first so the order requirement sees cdeg.
    NcPolynomial f = mode == MomentKeyMode::Trace ? f_in.cyclic_projection() : f_in;
    if (mode == MomentKeyMode::Trace) {
        auto cd = f.cyclic_degree();
        if (cd && *cd % 2 != 0)
            throw UnboundedBelowError("odd cyclic degree: trace minimum is unbounded below");
    }

    int df = f.degree() ? (*f.degree() + 1) / 2 : 0;
    int d = df;
    std::vector<int> dj(S.size());
    for (size_t j = 0; j < S.size(); ++j) {
        dj[j] = S[j].degree() ? (*S[j].degree() + 1) / 2 : 0;
        d = std::max(d, dj[j]);
    }
    if (order < d)
        throw RelaxError("order too small: need at least " + std::to_string(d));

    SparsityPattern pattern = dense ? dense_pattern(f, S) : pattern_in;
    // re-split the (projected) objective over the pattern's cliques
    pattern.objective_split.assign(pattern.cliques.size(), NcPolynomial(f.nvars(), f.drop_tol()));
    for (const auto& [w, c] : f.terms()) {
        int k = pattern.first_covering_clique(w.support());
        if (k == 0)
            throw PatternError(PatternError::Kind::UncoveredMonomial,
                               "monomial " + w.str() + " is covered by no clique");
        pattern.objective_split[k - 1].add_term(w, c);
    }

    MomentRelaxation relax;
    relax.kind = mode == MomentKeyMode::Eig ? (dense ? RelaxKind::EigDense : RelaxKind::EigSparse)
                                            : (dense ? RelaxKind::TraceDense : RelaxKind::TraceSparse);
    relax.order = order;
    relax.nvars = f.nvars();
    relax.flat_delta = 1;
    for (int v : dj) relax.flat_delta = std::max(relax.flat_delta, v);
    relax.table = MomentVariableTable(mode);

    bool chip = use_newton_chip && dense && S.empty() && mode == MomentKeyMode::Eig && !f.is_zero();

    // Hankel blocks first, in clique order, then localizing blocks.
    std::vector<WordBasis> clique_bases;
    for (size_t k = 0; k < pattern.cliques.size(); ++k) {
        WordBasis basis;
        if (chip) {
            basis.clique = pattern.cliques[k];
            basis.order = order;
            basis.words = newton_chip_basis(f);
        } else {
            basis = WordBasis(pattern.cliques[k], order);
        }
        clique_bases.push_back(basis);
        append_hankel_block(relax, basis, static_cast<int>(k + 1));
    }
    for (size_t j = 0; j < S.size(); ++j) {
        int k = pattern.clique_of_constraint(static_cast<int>(j + 1));
        WordBasis basis(pattern.cliques[k - 1], order - dj[j]);
        append_localizing_block(relax, S[j], static_cast<int>(j + 1), basis, k);
    }

    // Objective: sum_k <M_s(L,I_k), G_{f_k}> collapses to L(f_k) summed,
    // but each monomial must be representable as star(u) v in its clique
    // basis or the Gram pairing does not exist at this order.
    for (size_t k = 0; k < pattern.cliques.size(); ++k) {
        const auto& fk = pattern.objective_split[k];
        std::set<Word> basis_set(clique_bases[k].words.begin(), clique_bases[k].words.end());
        for (const auto& [w, c] : fk.terms()) {
            if (!split_in_basis(w, basis_set))
                throw RelaxError("monomial " + w.str() + " not representable at order " +
                                 std::to_string(order));
            relax.objective.add(relax.table.get_or_insert(w), c);
        }
    }
    relax.pattern = std::move(pattern);
    return relax;
}

}  // namespace detail

/// Moment relaxation for eigenvalue minimization at the given order. With
/// dense=true a single-clique pattern replaces the given one; unconstrained
/// dense problems index the Hankel block by the Newton chip basis of f.
inline MomentRelaxation build_eig(const NcPolynomial& f, const std::vector<NcPolynomial>& S,
                                  const SparsityPattern& pattern, int order, bool dense,
                                  bool use_newton_chip = true) {
    return detail::build(f, S, pattern, order, dense, MomentKeyMode::Eig, use_newton_chip);
}

/// Moment relaxation for trace minimization: same block structure, but
/// moment variables keyed by cyclic equivalence classes.
inline MomentRelaxation build_trace(const NcPolynomial& f, const std::vector<NcPolynomial>& S,
                                    const SparsityPattern& pattern, int order, bool dense) {
    return detail::build(f, S, pattern, order, dense, MomentKeyMode::Trace, false);
}

/// A symmetric Gram matrix of f over the basis: f = W* G W exactly, where
/// W is the column vector of basis words. Returns the matrix and the
/// reconstruction residual polynomial (zero when exact).
inline std::pair<Eigen::MatrixXd, NcPolynomial> gram_objective(const NcPolynomial& f,
                                                               const std::vector<Word>& basis) {
    if (!f.is_symmetric()) throw RelaxError("gram_objective: polynomial must be symmetric");
    std::set<Word> basis_set(basis.begin(), basis.end());
    std::map<Word, int> index;
    for (size_t i = 0; i < basis.size(); ++i) index[basis[i]] = static_cast<int>(i);
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(basis.size(), basis.size());
    for (const auto& [w, c] : f.terms()) {
        Word ws = w.star();
        if (ws < w) continue;  // handled together with its star partner
        auto split = detail::split_in_basis(w, basis_set);
        if (!split)
            throw RelaxError("gram_objective: monomial " + w.str() + " not representable");
        int ui = index[split->first], vi = index[split->second];
        if (w == ws && ui != vi) {
            G(ui, vi) += c / 2;
            G(vi, ui) += c / 2;
        } else if (ui == vi) {
            G(ui, vi) += c;
        } else {
            G(ui, vi) += c;
            G(vi, ui) += c;
        }
    }
    // exact reconstruction check
    NcPolynomial res = f;
    for (size_t i = 0; i < basis.size(); ++i)
        for (size_t j = 0; j < basis.size(); ++j)
            if (G(i, j) != 0.0) res.add_term(basis[i].star() * basis[j], -G(i, j));
    return {G, res};
}

/// The localizing-matrix entry L(u* g v) as a linear form in the moment
/// variables. Inserts missing keys into the table.
inline LinearForm localizing_entry(const NcPolynomial& g, const Word& u, const Word& v,
                                   MomentVariableTable& table) {
    LinearForm form;
    Word us = u.star();
    for (const auto& [m, c] : g.terms()) form.add(table.get_or_insert(us * m * v), c);
    return form;
}

}  // namespace ncpopt
