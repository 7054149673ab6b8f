#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "ncpopt/block_sdp.hpp"

namespace ncpopt {

struct SolverFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace ipm_detail {

// Directed sparse entry: contributes value at (row, col) only. Symmetric
// input entries are stored twice (once per orientation) so trace products
// reduce to a plain double loop.
struct DirEntry {
    int row, col;
    double value;
};

struct VarData {
    int var;
    std::vector<DirEntry> dir;  // directed entries of F_var within a block
    double norm1 = 0.0;
};

struct BlockData {
    int size = 0;
    Eigen::MatrixXd F0;
    std::vector<VarData> vars;
};

inline std::vector<DirEntry> directed(const std::vector<SdpEntry>& upper) {
    std::vector<DirEntry> out;
    out.reserve(upper.size() * 2);
    for (const auto& e : upper) {
        out.push_back({e.row, e.col, e.value});
        if (e.row != e.col) out.push_back({e.col, e.row, e.value});
    }
    return out;
}

inline double dot_sparse(const std::vector<DirEntry>& es, const Eigen::MatrixXd& M) {
    double s = 0.0;
    for (const auto& e : es) s += e.value * M(e.row, e.col);
    return s;
}

// tr(F_i P F_j Q) for directed entry lists of F_i, F_j.
inline double trace_prod(const std::vector<DirEntry>& Ei, const std::vector<DirEntry>& Ej,
                         const Eigen::MatrixXd& P, const Eigen::MatrixXd& Q) {
    double s = 0.0;
    for (const auto& e : Ei)
        for (const auto& f : Ej) s += e.value * f.value * P(e.col, f.row) * Q(f.col, e.row);
    return s;
}

// Largest step a with M + a*D psd-feasible (boundary of the cone).
inline double step_to_boundary(const Eigen::MatrixXd& M, const Eigen::MatrixXd& D) {
    Eigen::LLT<Eigen::MatrixXd> llt(M);
    if (llt.info() != Eigen::Success) return 0.0;
    Eigen::MatrixXd L = llt.matrixL();
    Eigen::MatrixXd W = L.triangularView<Eigen::Lower>().solve(D);
    W = L.triangularView<Eigen::Lower>().solve(W.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (W + W.transpose()),
                                                      Eigen::EigenvaluesOnly);
    double lmin = es.eigenvalues().minCoeff();
    if (lmin >= -1e-14) return 1e30;
    return -1.0 / lmin;
}

}  // namespace ipm_detail

/// Primal-dual interior-point solver: Mehrotra predictor-corrector with the
/// HKM direction and a dense Cholesky of the (symmetrized) Schur
/// complement. Internally solves the standard pair
///   (P) min <F0,X> s.t. <F_i,X> = -b_i, X >= 0
///   (D) max b^T y  s.t. Z = F0 + sum y_i F_i >= 0.
/// Deterministic: no randomness, fixed iteration order.
inline SdpSolution solve_sdp(const BlockSdp& sdp, const SolverOptions& opts = {}) {
    using namespace ipm_detail;
    const int m = sdp.m;
    if (m > opts.schur_limit)
        throw SolverFailure("Schur dimension " + std::to_string(m) + " exceeds limit " +
                            std::to_string(opts.schur_limit) + "; export the problem instead");
    const int nb = static_cast<int>(sdp.blocks.size());
    if (nb == 0 || m == 0) throw SolverFailure("empty problem");

    // diagonal data scaling: unit Frobenius norm per constraint matrix,
    // objective normalized to unit sup-norm; undone on the way out
    std::vector<double> fro2(m, 0.0);
    for (const auto& blk : sdp.blocks)
        for (const auto& [var, entries] : blk.fs)
            for (const auto& e : entries) fro2[var] += (e.row == e.col ? 1.0 : 2.0) * e.value * e.value;
    std::vector<double> var_scale(m);
    for (int i = 0; i < m; ++i) var_scale[i] = 1.0 / std::sqrt(std::max(fro2[i], 1e-300));
    double obj_scale = 0.0;
    for (int i = 0; i < m; ++i) obj_scale = std::max(obj_scale, std::abs(sdp.b[i]) * var_scale[i]);
    obj_scale = std::max(obj_scale, 1e-300);

    std::vector<BlockData> blocks(nb);
    double max_fnorm = 0.0, f0_norm = 0.0;
    int ntot = 0;
    for (int b = 0; b < nb; ++b) {
        blocks[b].size = sdp.blocks[b].size;
        ntot += blocks[b].size;
        blocks[b].F0 = sdp.blocks[b].dense_f0();
        f0_norm = std::max(f0_norm, blocks[b].F0.norm());
        for (const auto& [var, entries] : sdp.blocks[b].fs) {
            VarData vd;
            vd.var = var;
            vd.dir = directed(entries);
            for (auto& e : vd.dir) e.value *= var_scale[var];
            for (const auto& e : vd.dir) vd.norm1 += std::abs(e.value);
            blocks[b].vars.push_back(std::move(vd));
        }
    }
    Eigen::VectorXd bscaled(m);
    for (int i = 0; i < m; ++i) bscaled[i] = sdp.b[i] * var_scale[i] / obj_scale;
    std::vector<double> fi_norm(m, 1.0);
    max_fnorm = 1.0;

    // identity-scaled start sized from the problem data
    double xi = std::max({10.0, std::sqrt(double(ntot))});
    for (int i = 0; i < m; ++i)
        xi = std::max(xi, double(ntot) * (1.0 + std::abs(bscaled[i])) / (1.0 + fi_norm[i]));
    double eta = std::max({10.0, std::sqrt(double(ntot)), f0_norm, max_fnorm});

    std::vector<Eigen::MatrixXd> X(nb), Z(nb), Zinv(nb), Rd(nb), dXa(nb), dZa(nb), dX(nb), dZ(nb);
    for (int b = 0; b < nb; ++b) {
        X[b] = xi * Eigen::MatrixXd::Identity(blocks[b].size, blocks[b].size);
        Z[b] = eta * Eigen::MatrixXd::Identity(blocks[b].size, blocks[b].size);
    }
    Eigen::VectorXd y = Eigen::VectorXd::Zero(m);

    SdpSolution sol;
    sol.y = y;
    double best_merit = 1e300;
    double b_norm = 1.0 + bscaled.norm();
    double c_norm = 1.0 + f0_norm;

    auto record_best = [&](double pinf, double dinf, double gap) {
        double merit = pinf + dinf + gap;
        if (merit < best_merit) {
            best_merit = merit;
            sol.y = y;
            sol.X = X;
            sol.Z = Z;
            sol.pinfeas = pinf;
            sol.dinfeas = dinf;
            sol.relgap = gap;
        }
    };

    Eigen::VectorXd rp(m), rhs(m), dy(m), dya(m);
    Eigen::MatrixXd M(m, m);      // symmetrized Schur complement (factorized)
    Eigen::MatrixXd Mfull(m, m);  // exact HKM Schur complement, for refinement
    double prev_mu = 1e300;
    int stall = 0;

    for (int iter = 0; iter < opts.max_iter; ++iter) {
        // residuals
        double pobj = 0.0, dobj = bscaled.dot(y);
        rp.setZero();
        double dinf = 0.0, rd_x = 0.0;
        for (int b = 0; b < nb; ++b) {
            pobj += blocks[b].F0.cwiseProduct(X[b]).sum();
            Rd[b] = blocks[b].F0 - Z[b];
            for (const auto& vd : blocks[b].vars) {
                double fx = dot_sparse(vd.dir, X[b]);
                rp[vd.var] += fx;
                for (const auto& e : vd.dir) Rd[b](e.row, e.col) += y[vd.var] * e.value;
            }
            dinf = std::max(dinf, Rd[b].norm());
            rd_x += std::abs(Rd[b].cwiseProduct(X[b]).sum());
        }
        rp += bscaled;  // rp_i = b_i + <F_i, X>
        double pinf = rp.norm() / b_norm;
        double dinf_rel = dinf / c_norm;
        double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
        double mu = 0.0;
        for (int b = 0; b < nb; ++b) mu += X[b].cwiseProduct(Z[b]).sum();
        mu /= ntot;

        sol.history.push_back({pobj, dobj, pinf, dinf_rel, mu, rd_x + std::abs(y.dot(rp))});
        record_best(pinf, dinf_rel, gap);
        sol.iterations = iter;

        if (pinf <= opts.feas_tol && dinf_rel <= opts.feas_tol && gap <= opts.gap_tol) {
            sol.status = SolveStatus::Optimal;
            sol.y = y;
            sol.X = X;
            sol.Z = Z;
            sol.pinfeas = pinf;
            sol.dinfeas = dinf_rel;
            sol.relgap = gap;
            break;
        }
        // divergence-based infeasibility heuristics
        if (y.lpNorm<Eigen::Infinity>() > 1e11 && dinf_rel < 1e-6 && dobj > 0) {
            sol.status = SolveStatus::PrimalInfeasible;
            break;
        }
        double trx = 0.0;
        for (int b = 0; b < nb; ++b) trx += X[b].trace();
        if (trx > 1e13 * xi && pinf < 1e-6) {
            sol.status = SolveStatus::DualInfeasible;
            break;
        }
        if (pinf + dinf_rel + gap > 30 * best_merit && iter > 12) {
            sol.status = SolveStatus::SlowProgress;  // diverging away from the best iterate
            break;
        }
        if (mu > prev_mu * 0.9995 && iter > 5) {
            if (++stall >= 25) {
                sol.status = SolveStatus::SlowProgress;
                break;
            }
        } else {
            stall = 0;
        }
        prev_mu = std::min(prev_mu, mu);

        for (int b = 0; b < nb; ++b) {
            Eigen::LLT<Eigen::MatrixXd> llt(Z[b]);
            if (llt.info() != Eigen::Success) {
                sol.status = SolveStatus::SlowProgress;
                goto done;
            }
            Zinv[b] = llt.solve(Eigen::MatrixXd::Identity(blocks[b].size, blocks[b].size));
        }

        // Schur complement Mfull_ij = tr(F_i X F_j Zinv); the Cholesky runs
        // on its symmetric part and refinement recovers the exact solve
        Mfull.setZero();
        for (int b = 0; b < nb; ++b) {
            const auto& vars = blocks[b].vars;
            for (size_t a = 0; a < vars.size(); ++a)
                for (size_t c = 0; c <= a; ++c) {
                    double t1 = trace_prod(vars[a].dir, vars[c].dir, X[b], Zinv[b]);
                    Mfull(vars[a].var, vars[c].var) += t1;
                    if (a != c) {
                        double t2 = trace_prod(vars[a].dir, vars[c].dir, Zinv[b], X[b]);
                        Mfull(vars[c].var, vars[a].var) += t2;
                    }
                }
        }
        M = 0.5 * (Mfull + Mfull.transpose());

        Eigen::LLT<Eigen::MatrixXd> schur(M);
        if (schur.info() != Eigen::Success) {
            double ridge = 1e-12 * (1.0 + M.diagonal().maxCoeff());
            for (int tries = 0; tries < 8 && schur.info() != Eigen::Success; ++tries) {
                M.diagonal().array() += ridge;
                ridge *= 100;
                schur.compute(M);
            }
            if (schur.info() != Eigen::Success) {
                sol.status = SolveStatus::SlowProgress;
                break;
            }
        }

        auto solve_direction = [&](double sigmamu, bool corrector, Eigen::VectorXd& dy_out,
                                   std::vector<Eigen::MatrixXd>& dX_out,
                                   std::vector<Eigen::MatrixXd>& dZ_out) {
            for (int i = 0; i < m; ++i) rhs[i] = bscaled[i];
            for (int b = 0; b < nb; ++b) {
                Eigen::MatrixXd T = X[b] * Rd[b] * Zinv[b];
                if (corrector) T += dXa[b] * dZa[b] * Zinv[b];
                if (sigmamu != 0.0) T -= sigmamu * Zinv[b];
                for (const auto& vd : blocks[b].vars) rhs[vd.var] -= dot_sparse(vd.dir, T);
            }
            dy_out = schur.solve(rhs);
            for (int refine = 0; refine < 3; ++refine) {
                Eigen::VectorXd resid = rhs - Mfull * dy_out;
                if (resid.norm() <= 1e-14 * (1.0 + rhs.norm())) break;
                dy_out += schur.solve(resid);
            }
            for (int b = 0; b < nb; ++b) {
                dZ_out[b] = Rd[b];
                for (const auto& vd : blocks[b].vars)
                    for (const auto& e : vd.dir) dZ_out[b](e.row, e.col) += dy_out[vd.var] * e.value;
                Eigen::MatrixXd R = -X[b] * Z[b];
                R.diagonal().array() += sigmamu;
                if (corrector) R -= dXa[b] * dZa[b];
                dX_out[b] = (R - X[b] * dZ_out[b]) * Zinv[b];
                dX_out[b] = 0.5 * (dX_out[b] + dX_out[b].transpose()).eval();
            }
        };

        // predictor
        solve_direction(0.0, false, dya, dXa, dZa);
        double ap = 1e30, ad = 1e30;
        for (int b = 0; b < nb; ++b) {
            ap = std::min(ap, step_to_boundary(X[b], dXa[b]));
            ad = std::min(ad, step_to_boundary(Z[b], dZa[b]));
        }
        ap = std::min(1.0, 0.99 * ap);
        ad = std::min(1.0, 0.99 * ad);
        double mu_aff = 0.0;
        for (int b = 0; b < nb; ++b)
            mu_aff += (X[b] + ap * dXa[b]).cwiseProduct(Z[b] + ad * dZa[b]).sum();
        mu_aff /= ntot;
        double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3.0), 1e-10, 1.0);
        // once the gap is closed but feasibility lags, hold the barrier and
        // spend the Newton step on the residuals
        if (gap <= opts.gap_tol && (pinf > opts.feas_tol || dinf_rel > opts.feas_tol)) sigma = 1.0;

        // corrector
        solve_direction(sigma * mu, true, dy, dX, dZ);
        double gamma = mu < 1e-4 ? 0.99 : (mu < 1e-1 ? 0.98 : 0.9);
        ap = ad = 1e30;
        for (int b = 0; b < nb; ++b) {
            ap = std::min(ap, step_to_boundary(X[b], dX[b]));
            ad = std::min(ad, step_to_boundary(Z[b], dZ[b]));
        }
        ap = std::min(1.0, gamma * ap);
        ad = std::min(1.0, gamma * ad);
        if (ap < 1e-8 && ad < 1e-8) {
            if (++stall >= 5) {
                sol.status = SolveStatus::SlowProgress;
                break;
            }
        }
        for (int b = 0; b < nb; ++b) {
            X[b] += ap * dX[b];
            Z[b] += ad * dZ[b];
        }
        y += ad * dy;
        sol.iterations = iter + 1;
    }
done:
    if (sol.X.empty()) {  // defensive: record_best fires on iteration 0
        sol.y = y;
        sol.X = X;
        sol.Z = Z;
    }
    // undo the data scaling
    for (int i = 0; i < m; ++i) sol.y[i] *= var_scale[i];
    for (int b = 0; b < nb; ++b) sol.X[b] *= obj_scale;
    sol.primal_objective = 0.0;
    for (int b = 0; b < nb; ++b) sol.primal_objective += blocks[b].F0.cwiseProduct(sol.X[b]).sum();
    sol.dual_objective = sdp.b.dot(sol.y);
    return sol;
}

}  // namespace ncpopt
