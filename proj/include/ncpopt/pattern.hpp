#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ncpopt/csp.hpp"
#include "ncpopt/polynomial.hpp"

namespace ncpopt {

struct PatternError : std::runtime_error {
    enum class Kind { UncoveredConstraint, UncoveredMonomial };
    PatternError(Kind kind, const std::string& what) : std::runtime_error(what), kind(kind) {}
    Kind kind;
};

/// Correlative sparsity pattern: ordered cliques I_1..I_p, the constraint
/// partition J_1..J_p (as a per-constraint clique index) and the objective
/// split f_1 + ... + f_p. The RIP status of the stored order is recorded
/// rather than enforced, so deliberately non-nested clique covers (used as
/// counterexample fixtures) can still be assembled.
struct SparsityPattern {
    std::vector<VarSet> cliques;
    std::map<int, int> constraint_assignment;  // constraint j (1-based) -> clique k (1-based)
    std::vector<NcPolynomial> objective_split;
    RipCheck rip;

    size_t clique_count() const { return cliques.size(); }

    int clique_of_constraint(int j) const { return constraint_assignment.at(j); }

    /// 1-based index of the first clique containing s, or 0 if none.
    int first_covering_clique(const VarSet& s) const {
        for (size_t k = 0; k < cliques.size(); ++k)
            if (std::includes(cliques[k].begin(), cliques[k].end(), s.begin(), s.end()))
                return static_cast<int>(k + 1);
        return 0;
    }
};

enum class PatternMode { Detect, Given };

/// Builds the pattern for (f, S): in Detect mode the cliques come from the
/// chordal extension of the csp graph; in Given mode the caller's clique
/// order is kept verbatim. Constraints and objective monomials go to the
/// first covering clique in stored order.
inline SparsityPattern assemble_pattern(const NcPolynomial& f, const std::vector<NcPolynomial>& S,
                                        std::vector<VarSet> cliques, PatternMode mode) {
    SparsityPattern pat;
    if (mode == PatternMode::Detect) {
        pat.cliques = chordal_cliques(csp_graph(f, S));
        if (pat.cliques.empty()) {  // constant problems still need one clique
            VarSet all;
            for (int i = 1; i <= f.nvars(); ++i) all.insert(i);
            if (all.empty()) all.insert(1);
            pat.cliques.push_back(all);
        }
    } else {
        if (cliques.empty()) throw std::invalid_argument("assemble_pattern: no cliques given");
        pat.cliques = std::move(cliques);
    }
    pat.rip = check_rip(pat.cliques);

    for (size_t j = 0; j < S.size(); ++j) {
        int k = pat.first_covering_clique(S[j].support());
        if (k == 0)
            throw PatternError(PatternError::Kind::UncoveredConstraint,
                               "constraint " + std::to_string(j + 1) + " is covered by no clique");
        pat.constraint_assignment[static_cast<int>(j + 1)] = k;
    }

    pat.objective_split.assign(pat.cliques.size(), NcPolynomial(f.nvars(), f.drop_tol()));
    for (const auto& [w, c] : f.terms()) {
        int k = pat.first_covering_clique(w.support());
        if (k == 0)
            throw PatternError(PatternError::Kind::UncoveredMonomial,
                               "monomial " + w.str() + " is covered by no clique");
        pat.objective_split[k - 1].add_term(w, c);
    }
    return pat;
}

inline SparsityPattern detect_pattern(const NcPolynomial& f, const std::vector<NcPolynomial>& S) {
    return assemble_pattern(f, S, {}, PatternMode::Detect);
}

inline SparsityPattern dense_pattern(const NcPolynomial& f, const std::vector<NcPolynomial>& S) {
    VarSet all;
    for (int i = 1; i <= f.nvars(); ++i) all.insert(i);
    if (all.empty()) all.insert(1);
    return assemble_pattern(f, S, {all}, PatternMode::Given);
}

/// Appends one ball constraint N - sum_{j in I_k} X_j^2 per clique,
/// assigned to its clique. Under the boundedness assumption these describe
/// the same semialgebraic set and make every per-clique module archimedean.
inline void add_ball_constraints(std::vector<NcPolynomial>& S, double N, SparsityPattern& pat,
                                 int nvars) {
    if (N <= 0) throw std::invalid_argument("ball constant must be positive");
    for (size_t k = 0; k < pat.cliques.size(); ++k) {
        NcPolynomial ball = NcPolynomial::constant(nvars, N);
        for (int j : pat.cliques[k]) {
            Word xj = Word::letter(j);
            ball.add_term(xj * xj, -1.0);
        }
        S.push_back(ball);
        pat.constraint_assignment[static_cast<int>(S.size())] = static_cast<int>(k + 1);
    }
}

inline nlohmann::json pattern_to_json(const SparsityPattern& pat) {
    nlohmann::json j;
    j["cliques"] = nlohmann::json::array();
    for (const auto& c : pat.cliques) j["cliques"].push_back(std::vector<int>(c.begin(), c.end()));
    j["assignment"] = nlohmann::json::object();
    for (const auto& [cons, k] : pat.constraint_assignment) j["assignment"][std::to_string(cons)] = k;
    j["rip"] = pat.rip.ok;
    if (pat.rip.violating_index) j["rip_violation_at"] = *pat.rip.violating_index;
    return j;
}

inline std::vector<VarSet> cliques_from_json(const nlohmann::json& j) {
    std::vector<VarSet> cliques;
    for (const auto& c : j.at("cliques")) cliques.emplace_back(c.begin(), c.end());
    return cliques;
}

}  // namespace ncpopt
