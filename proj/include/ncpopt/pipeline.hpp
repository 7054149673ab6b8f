#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ncpopt/block_sdp.hpp"
#include "ncpopt/ipm.hpp"
#include "ncpopt/parse.hpp"
#include "ncpopt/pattern.hpp"
#include "ncpopt/relaxation.hpp"

namespace ncpopt {

/// One eigenvalue- or trace-minimization instance plus solve options.
struct Problem {
    NcPolynomial objective{0};
    std::vector<NcPolynomial> constraints;
    int order = 0;
    bool sparse = true;
    std::optional<double> ball;              // append per-clique ball constraints
    std::optional<std::vector<VarSet>> cliques;  // Given-mode cliques
    SolverOptions solver;
    bool use_newton_chip = true;
};

struct SolveReport {
    MomentRelaxation relaxation;
    SdpSolution solution;
    double bound = 0.0;       // moment-side optimum estimate
    double sohs_bound = 0.0;  // certificate-side value (<= bound at optimality)
    int m_sdp = 0;            // scalar SDP variables
    long n_sdp = 0;           // total block entries (sum of size^2)
    std::vector<int> block_sizes;
    double wall_ms = 0.0;
    std::vector<NcPolynomial> constraints;  // after ball augmentation
};

namespace detail {

inline SolveReport run_moment_problem(const Problem& prob, MomentKeyMode mode) {
    auto t0 = std::chrono::steady_clock::now();
    NcPolynomial f = prob.objective;
    if (!f.is_symmetric()) f = f.symmetrized();

    std::vector<NcPolynomial> S = prob.constraints;
    SparsityPattern pat;
    if (prob.cliques)
        pat = assemble_pattern(f, S, *prob.cliques, PatternMode::Given);
    else if (prob.sparse)
        pat = detect_pattern(f, S);
    else
        pat = dense_pattern(f, S);
    if (prob.ball) {
        add_ball_constraints(S, *prob.ball, pat, f.nvars());
    }

    SolveReport rep;
    rep.relaxation = mode == MomentKeyMode::Eig
                         ? build_eig(f, S, pat, prob.order, !prob.sparse, prob.use_newton_chip)
                         : build_trace(f, S, pat, prob.order, !prob.sparse);
    rep.constraints = S;
    auto sdp = to_block_sdp(rep.relaxation);
    rep.m_sdp = sdp.m;
    for (const auto& b : sdp.blocks) {
        rep.block_sizes.push_back(b.size);
        rep.n_sdp += static_cast<long>(b.size) * b.size;
    }
    rep.solution = solve_sdp(sdp, prob.solver);
    // moment value = constant + c.y ; certificate value from the X side
    rep.bound = rep.relaxation.objective.constant - rep.solution.dual_objective;
    rep.sohs_bound = rep.relaxation.objective.constant - rep.solution.primal_objective;
    rep.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

}  // namespace detail

inline SolveReport solve_eig_min(const Problem& prob) {
    return detail::run_moment_problem(prob, MomentKeyMode::Eig);
}

inline SolveReport solve_trace_min(const Problem& prob) {
    return detail::run_moment_problem(prob, MomentKeyMode::Trace);
}

/// Problem JSON: {"nvars": n, "objective": "<poly>", "constraints": [...],
/// "order": s, "sparse": true, "ball": N, "cliques": [[...], ...]}.
inline Problem problem_from_json(const nlohmann::json& j) {
    Problem p;
    int nvars = j.at("nvars").get<int>();
    p.objective = parse_polynomial(j.at("objective").get<std::string>(), nvars);
    if (j.contains("constraints"))
        for (const auto& c : j.at("constraints"))
            p.constraints.push_back(parse_polynomial(c.get<std::string>(), nvars));
    p.order = j.at("order").get<int>();
    if (j.contains("sparse")) p.sparse = j.at("sparse").get<bool>();
    if (j.contains("ball")) p.ball = j.at("ball").get<double>();
    if (j.contains("cliques")) p.cliques = cliques_from_json(j);
    return p;
}

inline nlohmann::json report_to_json(const SolveReport& rep) {
    nlohmann::json j;
    j["bound"] = rep.bound;
    j["sohs_bound"] = rep.sohs_bound;
    j["status"] = to_string(rep.solution.status);
    j["iterations"] = rep.solution.iterations;
    j["m_sdp"] = rep.m_sdp;
    j["n_sdp"] = rep.n_sdp;
    j["block_sizes"] = rep.block_sizes;
    j["order"] = rep.relaxation.order;
    j["sparse"] = rep.relaxation.is_sparse();
    j["pattern"] = pattern_to_json(rep.relaxation.pattern);
    j["residuals"] = {{"primal", rep.solution.pinfeas},
                      {"dual", rep.solution.dinfeas},
                      {"gap", rep.solution.relgap}};
    j["wall_ms"] = rep.wall_ms;
    return j;
}

}  // namespace ncpopt
