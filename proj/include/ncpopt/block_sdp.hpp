#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "ncpopt/relaxation.hpp"

namespace ncpopt {

struct SdpEntry {
    int row, col;  // row <= col
    double value;

    friend bool operator==(const SdpEntry& a, const SdpEntry& b) {
        return a.row == b.row && a.col == b.col && a.value == b.value;
    }
};

/// One block of the constraint F0 + sum_i y_i F_i >= 0. Entries are kept
/// as upper triangles of symmetric matrices. `diagonal` marks blocks whose
/// matrices are all diagonal (exported with negative size in SDPA files).
struct SdpBlock {
    int size = 0;
    bool diagonal = false;
    std::vector<SdpEntry> f0;
    std::vector<std::pair<int, std::vector<SdpEntry>>> fs;  // sorted by variable id

    Eigen::MatrixXd dense_f0() const {
        Eigen::MatrixXd M = Eigen::MatrixXd::Zero(size, size);
        for (const auto& e : f0) {
            M(e.row, e.col) += e.value;
            if (e.row != e.col) M(e.col, e.row) += e.value;
        }
        return M;
    }
};

/// Block-diagonal SDP in the form
///   maximize  b^T y  subject to  F0 + sum_i y_i F_i >= 0 (per block).
struct BlockSdp {
    int m = 0;  // scalar variables
    Eigen::VectorXd b;
    std::vector<SdpBlock> blocks;

    Eigen::MatrixXd block_value(int blk, const Eigen::VectorXd& y) const {
        Eigen::MatrixXd M = blocks[blk].dense_f0();
        for (const auto& [var, entries] : blocks[blk].fs)
            for (const auto& e : entries) {
                M(e.row, e.col) += y[var] * e.value;
                if (e.row != e.col) M(e.col, e.row) += y[var] * e.value;
            }
        return M;
    }
};

enum class SolveStatus { Optimal, PrimalInfeasible, DualInfeasible, SlowProgress, IterLimit };

inline const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "Optimal";
        case SolveStatus::PrimalInfeasible: return "PrimalInfeasible";
        case SolveStatus::DualInfeasible: return "DualInfeasible";
        case SolveStatus::SlowProgress: return "SlowProgress";
        case SolveStatus::IterLimit: return "IterLimit";
    }
    return "?";
}

struct SolverOptions {
    double feas_tol = 1e-8;
    double gap_tol = 1e-8;
    int max_iter = 200;
    long schur_limit = 5000;  // refuse larger Schur systems (export instead)
};

struct IterateRecord {
    double pobj, dobj, pinfeas, dinfeas, mu;
    double duality_slack;  // |<Rd,X>| + |y.rp|, bounds any weak-duality violation
};

/// Solution of a BlockSdp. `y` maximizes b^T y; `Z` holds the slack blocks
/// F0 + sum y_i F_i (the moment matrices of a relaxation) and `X` holds the
/// primal blocks of the internal standard pair (the SOHS Gram side).
/// "Primal infeasible" means the internal primal min <F0,X> is infeasible,
/// i.e. the maximization is unbounded above.
struct SdpSolution {
    SolveStatus status = SolveStatus::IterLimit;
    Eigen::VectorXd y;
    std::vector<Eigen::MatrixXd> Z;  // slack blocks
    std::vector<Eigen::MatrixXd> X;  // dual certificate blocks
    double primal_objective = 0.0;   // <F0, X>, upper bound side
    double dual_objective = 0.0;     // b^T y
    int iterations = 0;
    double pinfeas = 0.0, dinfeas = 0.0, relgap = 0.0;
    std::vector<IterateRecord> history;
};

/// Repackages a moment relaxation as max (-objective) in BlockSdp form.
/// The relaxation's minimum equals objective.constant - (SDP optimum).
inline BlockSdp to_block_sdp(const MomentRelaxation& relax) {
    BlockSdp sdp;
    sdp.m = relax.variable_count();
    sdp.b = Eigen::VectorXd::Zero(sdp.m);
    for (const auto& [var, c] : relax.objective.coeffs) sdp.b[var] = -c;
    for (const auto& rb : relax.blocks) {
        SdpBlock blk;
        blk.size = rb.size();
        std::map<int, std::map<std::pair<int, int>, double>> per_var;
        for (const auto& e : rb.entries) {
            if (e.var == MomentVariableTable::kUnit)
                blk.f0.push_back({e.row, e.col, e.coeff});
            else
                per_var[e.var][{e.row, e.col}] += e.coeff;
        }
        for (const auto& [var, cells] : per_var) {
            std::vector<SdpEntry> entries;
            entries.reserve(cells.size());
            for (const auto& [rc, v] : cells)
                if (v != 0.0) entries.push_back({rc.first, rc.second, v});
            if (!entries.empty()) blk.fs.emplace_back(var, std::move(entries));
        }
        bool diag = blk.size > 1;
        for (const auto& e : blk.f0) diag = diag && e.row == e.col;
        for (const auto& [var, es] : blk.fs)
            for (const auto& e : es) diag = diag && e.row == e.col;
        blk.diagonal = diag && blk.size > 1;
        sdp.blocks.push_back(std::move(blk));
    }
    return sdp;
}

}  // namespace ncpopt
