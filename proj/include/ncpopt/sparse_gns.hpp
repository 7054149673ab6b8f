#pragma once

#include <json.hpp>

#include "ncpopt/gns.hpp"

namespace ncpopt {

struct ExtractOptions {
    double rank_tol = 1e-6;   // relative singular-value threshold for ranks
    double align_tol = 1e-4;  // admissible residual in the overlap alignment
    double cert_tol = 1e-5;   // admissible |L(w) - <w(A)v,v>| on covered words
};

/// Matrix-tuple minimizer recovered from a flat, irreducible moment
/// solution, together with the certification data.
struct ExtractedSolution {
    std::vector<Eigen::MatrixXd> A;  // n symmetric dim x dim matrices
    Eigen::VectorXd v;               // unit vector
    int dim = 0;
    std::vector<int> clique_ranks;
    std::map<std::pair<int, int>, int> overlap_ranks;
    std::vector<FlatnessReport> flatness;
    bool irreducible = true;
    double alignment_residual = 0.0;
    double certificate_residual = 0.0;  // max |L(w) - <w(A)v,v>|, deg w <= 2d
    double full_order_residual = 0.0;   // same check up to deg 2s (informational)

    double functional(const NcPolynomial& f) const {
        Eigen::MatrixXd F = evaluate(f, A, dim, 1e-6);
        return v.dot(F * v);
    }
};

namespace gns_detail {

struct Rep {  // a partial representation over an index set
    std::vector<int> vars;
    std::vector<Eigen::MatrixXd> ops;
    Eigen::VectorXd v;
    int dim = 0;

    const Eigen::MatrixXd& op(int var) const {
        for (size_t i = 0; i < vars.size(); ++i)
            if (vars[i] == var) return ops[i];
        throw std::out_of_range("no operator for x" + std::to_string(var));
    }
};

inline Rep from_gns(const GnsOperators& g) {
    return Rep{g.vars, g.ops, g.v, g.rank};
}

// Orthogonal intertwiner P with P^T chi_i P = B_i for two orthogonally
// equivalent irreducible tuples (Skolem-Noether: the solution space is
// one-dimensional, so the kernel vector is a scalar multiple of an
// orthogonal matrix).
inline Eigen::MatrixXd irreducible_intertwiner(const std::vector<Eigen::MatrixXd>& chi,
                                               const std::vector<Eigen::MatrixXd>& B,
                                               double tol) {
    const int r = static_cast<int>(B[0].rows());
    Eigen::MatrixXd C(static_cast<int>(chi.size()) * r * r, r * r);
    Eigen::MatrixXd I = Eigen::MatrixXd::Identity(r, r);
    for (size_t i = 0; i < chi.size(); ++i) {
        // chi T = T B  <->  (I (x) chi - B^T (x) I) vec(T) = 0
        Eigen::MatrixXd block = Eigen::MatrixXd::Zero(r * r, r * r);
        for (int a = 0; a < r; ++a)
            for (int b = 0; b < r; ++b)
                block.block(a * r, b * r, r, r) = (a == b ? chi[i] : Eigen::MatrixXd::Zero(r, r)) -
                                                  B[i](b, a) * I;
        C.block(static_cast<int>(i) * r * r, 0, r * r, r * r) = block;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(C, Eigen::ComputeThinV);
    double smax = svd.singularValues()[0];
    double skernel = svd.singularValues()[r * r - 1];
    if (skernel > 1e-4 * (1 + smax))
        throw ExtractionError(ExtractionError::Kind::Numerical,
                              "overlap operators are not orthogonally equivalent");
    Eigen::VectorXd x = svd.matrixV().col(r * r - 1);
    Eigen::MatrixXd T = Eigen::Map<Eigen::MatrixXd>(x.data(), r, r);
    double c = (T * T.transpose()).trace() / r;
    Eigen::MatrixXd P = T / std::sqrt(std::max(c, 1e-300));
    double orth = (P * P.transpose() - I).norm();
    if (orth > tol * 10 + 1e-6)
        throw ExtractionError(ExtractionError::Kind::Numerical,
                              "intertwiner failed to normalize to an orthogonal matrix");
    // fix the sign so the result is deterministic
    for (int i = 0; i < r * r; ++i) {
        double e = P(i % r, i / r);
        if (std::abs(e) > 1e-6) {
            if (e < 0) P = -P;
            break;
        }
    }
    return P;
}

struct Aligned {
    Rep rep;          // conjugated so that op(i) = I_m (x) B_i for i in O
    int multiplicity; // m
    Eigen::VectorXd lambda;  // v = sum_j lambda_j e_j (x) v_O, |lambda| = 1
    double residual = 0.0;
};

// Conjugates the representation so its restriction to the overlap
// variables becomes the ampliation I_m (x) B, and decomposes its vector
// along the overlap vector.
inline Aligned align_to_overlap(const Rep& rep, const std::vector<int>& overlap,
                                const std::vector<Eigen::MatrixXd>& B, const Eigen::VectorXd& vO,
                                const ExtractOptions& opt) {
    const int rO = static_cast<int>(B[0].rows());
    if (rep.dim % rO != 0)
        throw ExtractionError(ExtractionError::Kind::Numerical,
                              "clique dimension is not a multiple of the overlap rank");
    const int m = rep.dim / rO;

    std::vector<Eigen::MatrixXd> restricted;
    for (int i : overlap) restricted.push_back(rep.op(i));
    auto bd = block_diagonalize(restricted);
    for (int s : bd.block_sizes)
        if (s != rO)
            throw ExtractionError(ExtractionError::Kind::Numerical,
                                  "overlap block of size " + std::to_string(s) +
                                      " does not match the overlap rank " + std::to_string(rO));

    Eigen::MatrixXd Q = bd.Q;
    for (int blk = 0; blk < m; ++blk) {
        std::vector<Eigen::MatrixXd> chi;
        for (size_t i = 0; i < overlap.size(); ++i) {
            Eigen::MatrixXd R = Q.transpose() * restricted[i] * Q;
            chi.push_back(R.block(blk * rO, blk * rO, rO, rO));
        }
        Eigen::MatrixXd P = irreducible_intertwiner(chi, B, opt.align_tol);
        Q.middleCols(blk * rO, rO) = Q.middleCols(blk * rO, rO) * P;
    }

    Aligned out;
    out.multiplicity = m;
    out.rep.vars = rep.vars;
    out.rep.dim = rep.dim;
    for (const auto& op : rep.ops) out.rep.ops.push_back(Q.transpose() * op * Q);
    out.rep.v = Q.transpose() * rep.v;

    for (size_t i = 0; i < overlap.size(); ++i) {
        Eigen::MatrixXd want = Eigen::MatrixXd::Zero(rep.dim, rep.dim);
        for (int blk = 0; blk < m; ++blk) want.block(blk * rO, blk * rO, rO, rO) = B[i];
        out.residual = std::max(out.residual, (out.rep.op(overlap[i]) - want).norm());
    }

    out.lambda.resize(m);
    double vres = 0.0;
    for (int blk = 0; blk < m; ++blk) {
        Eigen::VectorXd chunk = out.rep.v.segment(blk * rO, rO);
        out.lambda[blk] = chunk.dot(vO);
        vres += (chunk - out.lambda[blk] * vO).squaredNorm();
    }
    out.residual = std::max(out.residual, std::sqrt(vres));
    double ln = out.lambda.norm();
    if (ln < 0.5)
        throw ExtractionError(ExtractionError::Kind::Numerical,
                              "clique vector barely projects onto the overlap vector");
    out.lambda /= ln;
    if (out.residual > opt.align_tol * (1.0 + std::abs(ln)))
        throw ExtractionError(ExtractionError::Kind::Numerical,
                              "alignment residual " + std::to_string(out.residual) +
                                  " exceeds tolerance");
    return out;
}

// Tensor assembly on R^mA (x) R^mB (x) R^rO. Operators of the first factor
// pair act on (mA, rO), of the second on (mB, rO), and overlap operators on
// rO alone.
inline Rep amalgamate(const Aligned& a, const Aligned& b, const std::vector<int>& overlap,
                      const std::vector<Eigen::MatrixXd>& B, const Eigen::VectorXd& vO) {
    const int rO = static_cast<int>(vO.size());
    const int mA = a.multiplicity, mB = b.multiplicity;
    const int dim = mA * mB * rO;
    auto idx = [&](int x, int y, int c) { return (x * mB + y) * rO + c; };

    Rep out;
    out.dim = dim;
    std::set<int> ovl(overlap.begin(), overlap.end());
    std::set<int> vars;
    for (int i : a.rep.vars) vars.insert(i);
    for (int i : b.rep.vars) vars.insert(i);
    for (int i : vars) {
        Eigen::MatrixXd M = Eigen::MatrixXd::Zero(dim, dim);
        if (ovl.count(i)) {
            const Eigen::MatrixXd& Bi = B[std::distance(overlap.begin(),
                                                        std::find(overlap.begin(), overlap.end(), i))];
            for (int x = 0; x < mA; ++x)
                for (int y = 0; y < mB; ++y)
                    for (int c = 0; c < rO; ++c)
                        for (int c2 = 0; c2 < rO; ++c2) M(idx(x, y, c), idx(x, y, c2)) = Bi(c, c2);
        } else if (std::find(a.rep.vars.begin(), a.rep.vars.end(), i) != a.rep.vars.end()) {
            const Eigen::MatrixXd& Ai = a.rep.op(i);  // on R^mA (x) R^rO
            for (int x = 0; x < mA; ++x)
                for (int x2 = 0; x2 < mA; ++x2)
                    for (int y = 0; y < mB; ++y)
                        for (int c = 0; c < rO; ++c)
                            for (int c2 = 0; c2 < rO; ++c2)
                                M(idx(x, y, c), idx(x2, y, c2)) = Ai(x * rO + c, x2 * rO + c2);
        } else {
            const Eigen::MatrixXd& Bi = b.rep.op(i);  // on R^mB (x) R^rO
            for (int y = 0; y < mB; ++y)
                for (int y2 = 0; y2 < mB; ++y2)
                    for (int x = 0; x < mA; ++x)
                        for (int c = 0; c < rO; ++c)
                            for (int c2 = 0; c2 < rO; ++c2)
                                M(idx(x, y, c), idx(x, y2, c2)) = Bi(y * rO + c, y2 * rO + c2);
        }
        out.vars.push_back(i);
        out.ops.push_back(std::move(M));
    }
    out.v.resize(dim);
    for (int x = 0; x < mA; ++x)
        for (int y = 0; y < mB; ++y)
            for (int c = 0; c < rO; ++c) out.v[idx(x, y, c)] = a.lambda[x] * b.lambda[y] * vO[c];
    return out;
}

// plain tensor product for disjoint cliques (amalgamation over the reals)
inline Rep tensor(const Rep& a, const Rep& b) {
    Rep out;
    out.dim = a.dim * b.dim;
    Eigen::MatrixXd Ia = Eigen::MatrixXd::Identity(a.dim, a.dim);
    Eigen::MatrixXd Ib = Eigen::MatrixXd::Identity(b.dim, b.dim);
    auto kron = [](const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) {
        Eigen::MatrixXd K(X.rows() * Y.rows(), X.cols() * Y.cols());
        for (int i = 0; i < X.rows(); ++i)
            for (int j = 0; j < X.cols(); ++j) K.block(i * Y.rows(), j * Y.cols(), Y.rows(), Y.cols()) = X(i, j) * Y;
        return K;
    };
    for (size_t i = 0; i < a.vars.size(); ++i) {
        out.vars.push_back(a.vars[i]);
        out.ops.push_back(kron(a.ops[i], Ib));
    }
    for (size_t i = 0; i < b.vars.size(); ++i) {
        out.vars.push_back(b.vars[i]);
        out.ops.push_back(kron(Ia, b.ops[i]));
    }
    out.v = kron(a.v, b.v);
    return out;
}

}  // namespace gns_detail

/// Sequential amalgamation along the stored clique order: per-clique GNS,
/// overlap GNS, alignment of both sides to the overlap ampliation, and
/// tensor assembly, repeated pairwise for more than two cliques. Throws
/// ExtractionError when flatness (H1) fails, when an overlap algebra is
/// reducible (H2), or when a numerical alignment step degrades.
inline ExtractedSolution sparse_gns(const MomentRelaxation& relax, const Eigen::VectorXd& y,
                                    const ExtractOptions& opt = {}) {
    using namespace gns_detail;
    const auto& pat = relax.pattern;
    const int s = relax.order;
    const int d = s - relax.flat_delta;
    if (d < 0)
        throw ExtractionError(ExtractionError::Kind::Unavailable,
                              "order too small for a flat corner (need order > delta)");

    ExtractedSolution out;

    // H1: flatness per clique and per nonempty pairwise overlap
    std::vector<HankelView> clique_H;
    bool flat_ok = true;
    for (size_t k = 0; k < pat.cliques.size(); ++k) {
        HankelView H(pat.cliques[k], s, relax.table, y);
        auto rep = flatness_check(H, H.corner(d), opt.rank_tol, "I" + std::to_string(k + 1));
        flat_ok = flat_ok && rep.passed;
        out.flatness.push_back(rep);
        out.clique_ranks.push_back(rep.rank_high);
        clique_H.push_back(std::move(H));
    }
    for (size_t j = 0; j < pat.cliques.size(); ++j)
        for (size_t k = j + 1; k < pat.cliques.size(); ++k) {
            VarSet ovl;
            std::set_intersection(pat.cliques[j].begin(), pat.cliques[j].end(),
                                  pat.cliques[k].begin(), pat.cliques[k].end(),
                                  std::inserter(ovl, ovl.begin()));
            if (ovl.empty()) continue;
            HankelView H(ovl, s, relax.table, y);
            auto rep = flatness_check(H, H.corner(d), opt.rank_tol,
                                      "I" + std::to_string(j + 1) + "&I" + std::to_string(k + 1));
            flat_ok = flat_ok && rep.passed;
            out.flatness.push_back(rep);
            out.overlap_ranks[{static_cast<int>(j + 1), static_cast<int>(k + 1)}] = rep.rank_high;
        }
    if (!flat_ok)
        throw ExtractionError(ExtractionError::Kind::Unavailable, "flatness (H1) fails",
                              out.flatness);

    Rep cur = from_gns(dense_gns(clique_H[0], d, opt.rank_tol));
    VarSet covered = pat.cliques[0];
    for (size_t k = 1; k < pat.cliques.size(); ++k) {
        Rep next = from_gns(dense_gns(clique_H[k], d, opt.rank_tol));
        VarSet ovl;
        std::set_intersection(covered.begin(), covered.end(), pat.cliques[k].begin(),
                              pat.cliques[k].end(), std::inserter(ovl, ovl.begin()));
        if (ovl.empty()) {
            cur = tensor(cur, next);
        } else {
            HankelView HO(ovl, s, relax.table, y);
            auto gO = dense_gns(HO, d, opt.rank_tol);
            if (!irreducibility_check(gO.ops)) {
                out.irreducible = false;
                throw ExtractionError(ExtractionError::Kind::Unavailable,
                                      "overlap algebra is reducible (H2 fails); no "
                                      "finite-dimensional amalgamation is attempted",
                                      out.flatness);
            }
            std::vector<int> ovl_list(ovl.begin(), ovl.end());
            auto a = align_to_overlap(cur, ovl_list, gO.ops, gO.v, opt);
            auto b = align_to_overlap(next, ovl_list, gO.ops, gO.v, opt);
            out.alignment_residual = std::max({out.alignment_residual, a.residual, b.residual});
            cur = amalgamate(a, b, ovl_list, gO.ops, gO.v);
        }
        covered.insert(pat.cliques[k].begin(), pat.cliques[k].end());
    }

    out.dim = cur.dim;
    out.v = cur.v;
    out.A.assign(relax.nvars, Eigen::MatrixXd::Zero(cur.dim, cur.dim));
    for (size_t i = 0; i < cur.vars.size(); ++i) out.A[cur.vars[i] - 1] = 0.5 * (cur.ops[i] + cur.ops[i].transpose());

    // certificate: L(w) = <w(A)v, v> on every covered moment key
    double cert = 0.0, full = 0.0;
    for (int id = 0; id < relax.table.size(); ++id) {
        // For trace keys this gate also decides whether the single-tuple
        // (vector-state) reading of the tracial functional applies at all;
        // genuinely mixed tracial states fail it and are not extracted.
        const Word& w = relax.table.key(id);
        if (pat.first_covering_clique(w.support()) == 0) continue;
        Eigen::MatrixXd Wv = evaluate_word(w, out.A, out.dim);
        double got = out.v.dot(Wv * out.v);
        double err = std::abs(got - y[id]);
        full = std::max(full, err);
        if (w.degree() <= 2 * d) cert = std::max(cert, err);
    }
    out.certificate_residual = cert;
    out.full_order_residual = full;
    if (cert > opt.cert_tol)
        throw ExtractionError(ExtractionError::Kind::Numerical,
                              "GNS certificate residual " + std::to_string(cert) +
                                  " exceeds tolerance",
                              out.flatness);
    return out;
}

/// Feasibility and optimality report of an extracted tuple.
struct VerifyReport {
    std::vector<double> constraint_min_eigs;
    double objective_value = 0.0;  // <f(A)v, v>
    double min_eig_f = 0.0;        // lambda_min(f(A))
    double bound_gap = 0.0;        // |objective_value - bound|
    bool feasible(double tol = 1e-6) const {
        for (double e : constraint_min_eigs)
            if (e < -tol) return false;
        return true;
    }
};

inline VerifyReport verify_extraction(const NcPolynomial& f, const std::vector<NcPolynomial>& S,
                                      const ExtractedSolution& sol, double bound) {
    VerifyReport rep;
    for (const auto& g : S)
        rep.constraint_min_eigs.push_back(min_eigenvalue(evaluate(g, sol.A, sol.dim, 1e-6)));
    Eigen::MatrixXd F = evaluate(f.is_symmetric() ? f : f.symmetrized(), sol.A, sol.dim, 1e-6);
    rep.objective_value = sol.v.dot(F * sol.v);
    rep.min_eig_f = min_eigenvalue(F);
    rep.bound_gap = std::abs(rep.objective_value - bound);
    return rep;
}

inline nlohmann::json extraction_to_json(const ExtractedSolution& sol) {
    nlohmann::json j;
    j["dim"] = sol.dim;
    j["matrices"] = nlohmann::json::array();
    for (const auto& M : sol.A) {
        std::vector<double> row_major;
        for (int r = 0; r < M.rows(); ++r)
            for (int c = 0; c < M.cols(); ++c) row_major.push_back(M(r, c));
        j["matrices"].push_back(row_major);
    }
    j["vector"] = std::vector<double>(sol.v.data(), sol.v.data() + sol.v.size());
    j["clique_ranks"] = sol.clique_ranks;
    j["flatness"] = nlohmann::json::array();
    for (const auto& f : sol.flatness)
        j["flatness"].push_back({{"label", f.label},
                                 {"rank_low", f.rank_low},
                                 {"rank_high", f.rank_high},
                                 {"passed", f.passed}});
    j["irreducible"] = sol.irreducible;
    j["alignment_residual"] = sol.alignment_residual;
    j["certificate_residual"] = sol.certificate_residual;
    return j;
}

}  // namespace ncpopt
