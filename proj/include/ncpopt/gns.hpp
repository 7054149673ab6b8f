#pragma once

#include <Eigen/Dense>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "ncpopt/evaluate.hpp"
#include "ncpopt/hankel.hpp"
#include "ncpopt/relaxation.hpp"

namespace ncpopt {

struct FlatnessReport {
    std::string label;
    int rank_low = 0;   // rank of the order-d corner
    int rank_high = 0;  // rank of the full order-(d+delta) matrix
    double tolerance = 0.0;
    bool passed = false;
};

struct ExtractionError : std::runtime_error {
    enum class Kind { Unavailable, Numerical };
    ExtractionError(Kind kind, const std::string& what, std::vector<FlatnessReport> reports = {})
        : std::runtime_error(what), kind(kind), flatness(std::move(reports)) {}
    Kind kind;
    std::vector<FlatnessReport> flatness;
};

/// Numerical ranks of the flat pair: singular values of both matrices
/// thresholded at tol times the larger matrix's top singular value.
inline FlatnessReport flatness_check(const HankelView& big, const HankelView& small,
                                     double tol = 1e-6, const std::string& label = "") {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd_big(big.matrix);
    double smax = svd_big.singularValues().size() ? svd_big.singularValues()[0] : 0.0;
    double thresh = tol * std::max(smax, 1e-300);
    auto count = [&](const Eigen::MatrixXd& M) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
        int r = 0;
        for (int i = 0; i < svd.singularValues().size(); ++i)
            if (svd.singularValues()[i] > thresh) ++r;
        return r;
    };
    FlatnessReport rep;
    rep.label = label;
    rep.tolerance = tol;
    rep.rank_high = count(big.matrix);
    rep.rank_low = count(small.matrix);
    rep.passed = rep.rank_high == rep.rank_low;
    return rep;
}

/// Left-multiplication operators of a flat moment matrix together with the
/// cyclic vector representing the unit word.
struct GnsOperators {
    std::vector<int> vars;               // 1-based variable indices, ascending
    std::vector<Eigen::MatrixXd> ops;    // one symmetric rank x rank matrix per var
    Eigen::VectorXd v;                   // unit-word vector, normalized
    int rank = 0;
    double condition = 0.0;              // of the degree-d column block
    double symmetry_residual = 0.0;      // asymmetry of the raw operators
    double reconstruction_residual = 0.0;

    const Eigen::MatrixXd& op(int var) const {
        for (size_t i = 0; i < vars.size(); ++i)
            if (vars[i] == var) return ops[i];
        throw std::out_of_range("gns: no operator for variable " + std::to_string(var));
    }

    Eigen::MatrixXd word_value(const Word& w) const {
        Eigen::MatrixXd M = Eigen::MatrixXd::Identity(rank, rank);
        for (int k = 0; k < w.degree(); ++k) M = M * op(w.letter_at(k));
        return M;
    }
};

/// GNS construction from a flat Hankel matrix at order d+delta: a rank-r
/// Gram factor gives vectors w_u with <w_u, w_v> = L(u* v); the operator of
/// X_i maps w_u to w_{X_i u} on the span of the degree-<= d columns.
/// Reconstruction L(u* v) = <v(A)w_1, u(A)w_1> holds up to truncation.
inline GnsOperators dense_gns(const HankelView& H, int d, double rank_tol = 1e-6) {
    GnsOperators out;
    out.vars.assign(H.labels.clique.begin(), H.labels.clique.end());
    const int N = H.size();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H.matrix);
    double lmax = es.eigenvalues().cwiseAbs().maxCoeff();
    double thresh = rank_tol * std::max(lmax, 1e-300);
    std::vector<int> keep;
    for (int i = N - 1; i >= 0; --i)
        if (es.eigenvalues()[i] > thresh) keep.push_back(i);
    int r = static_cast<int>(keep.size());
    if (r == 0) throw ExtractionError(ExtractionError::Kind::Numerical, "gns: zero moment matrix");
    out.rank = r;

    Eigen::MatrixXd W(r, N);  // columns are the word vectors
    for (int a = 0; a < r; ++a)
        W.row(a) = std::sqrt(es.eigenvalues()[keep[a]]) * es.eigenvectors().col(keep[a]).transpose();

    long nd = 0;
    std::map<Word, long> index;
    for (long j = 0; j < N; ++j) {
        index[H.labels.words[j]] = j;
        if (H.labels.words[j].degree() <= d) nd = j + 1;
    }
    Eigen::MatrixXd Wlow = W.leftCols(nd);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Wlow, Eigen::ComputeThinU | Eigen::ComputeThinV);
    double s1 = svd.singularValues()[0];
    double sr = svd.singularValues()[std::min<long>(r, svd.singularValues().size()) - 1];
    out.condition = sr > 0 ? s1 / sr : std::numeric_limits<double>::infinity();
    if (sr <= 10 * rank_tol * s1)
        throw ExtractionError(ExtractionError::Kind::Numerical,
                              "gns: degree-" + std::to_string(d) +
                                  " columns do not span the factor space (flatness violated)");

    Eigen::VectorXd sinv = svd.singularValues();
    for (long i = 0; i < sinv.size(); ++i) sinv[i] = sinv[i] > 0 ? 1.0 / sinv[i] : 0.0;
    Eigen::MatrixXd pinv = svd.matrixV() * sinv.asDiagonal() * svd.matrixU().transpose();
    for (int vi : out.vars) {
        Eigen::MatrixXd T(r, nd);
        for (long j = 0; j < nd; ++j) {
            auto it = index.find(Word::letter(vi) * H.labels.words[j]);
            if (it == index.end())
                throw ExtractionError(ExtractionError::Kind::Numerical,
                                      "gns: shifted word leaves the basis (delta < 1)");
            T.col(j) = W.col(it->second);
        }
        // least squares A * Wlow = T via the pseudoinverse of Wlow
        Eigen::MatrixXd A = T * pinv;
        out.symmetry_residual =
            std::max(out.symmetry_residual, (A - A.transpose()).norm() / (1.0 + A.norm()));
        out.ops.push_back(0.5 * (A + A.transpose()));
    }

    out.v = W.col(0);  // graded-lex puts the unit word first
    double nv = out.v.norm();
    if (nv < 0.1)
        throw ExtractionError(ExtractionError::Kind::Numerical, "gns: unit vector collapsed");
    out.v /= nv;

    // reconstruction residual over all entries of total degree <= 2d
    double resid = 0.0;
    std::map<std::string, Eigen::MatrixXd> cache;
    for (long j = 0; j < N; ++j) {
        if (H.labels.words[j].degree() > 2 * d) continue;
        Eigen::VectorXd col = out.word_value(H.labels.words[j]) * out.v;
        for (long i = 0; i <= j; ++i) {
            int total = H.labels.words[i].degree() + H.labels.words[j].degree();
            if (total > 2 * d) continue;
            Eigen::VectorXd row = out.word_value(H.labels.words[i]) * out.v;
            double got = row.dot(col);
            resid = std::max(resid, std::abs(got - H.matrix(i, j)));
        }
    }
    out.reconstruction_residual = resid;
    return out;
}

/// Burnside test: the unital algebra generated by the matrices has
/// dimension r^2 exactly when they admit no common invariant subspace.
/// The span is grown word by word until it stabilizes (at most length
/// 2r - 2 is needed).
inline bool irreducibility_check(const std::vector<Eigen::MatrixXd>& mats, double tol = 1e-8) {
    if (mats.empty()) return false;
    const int r = static_cast<int>(mats[0].rows());
    if (r == 1) return true;
    // orthonormal basis of the span, vectorized
    std::vector<Eigen::VectorXd> basis;
    auto add = [&](const Eigen::MatrixXd& M) {
        Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(M.data(), r * r);
        for (const auto& b : basis) x -= b.dot(x) * b;
        double n = x.norm();
        if (n <= tol * (1.0 + M.norm())) return false;
        basis.push_back(x / n);
        return true;
    };
    std::vector<Eigen::MatrixXd> frontier{Eigen::MatrixXd::Identity(r, r)};
    add(frontier[0]);
    for (int len = 1; len <= 2 * r - 2 && !frontier.empty(); ++len) {
        std::vector<Eigen::MatrixXd> next;
        for (const auto& F : frontier)
            for (const auto& G : mats) {
                Eigen::MatrixXd P = G * F;
                if (add(P)) next.push_back(P);
            }
        if (static_cast<int>(basis.size()) == r * r) return true;
        frontier = std::move(next);
    }
    return static_cast<int>(basis.size()) == r * r;
}

struct BlockDiagonalization {
    Eigen::MatrixXd Q;            // orthogonal
    std::vector<int> block_sizes;  // canonical order: by size, then trace of first generator
    double residual = 0.0;        // largest off-block entry of Q^T m Q
};

namespace gns_detail {

/// Orthonormal basis of the symmetric commutant {K = K^T : K m = m K}.
inline std::vector<Eigen::MatrixXd> symmetric_commutant(const std::vector<Eigen::MatrixXd>& mats) {
    const int r = static_cast<int>(mats[0].rows());
    const int nsym = r * (r + 1) / 2;
    std::vector<std::pair<int, int>> cells;
    for (int i = 0; i < r; ++i)
        for (int j = i; j < r; ++j) cells.emplace_back(i, j);
    Eigen::MatrixXd C(static_cast<int>(mats.size()) * r * r, nsym);
    for (int c = 0; c < nsym; ++c) {
        Eigen::MatrixXd K = Eigen::MatrixXd::Zero(r, r);
        K(cells[c].first, cells[c].second) = 1.0;
        K(cells[c].second, cells[c].first) = 1.0;
        for (size_t m = 0; m < mats.size(); ++m) {
            Eigen::MatrixXd R = K * mats[m] - mats[m] * K;
            C.block(static_cast<int>(m) * r * r, c, r * r, 1) =
                Eigen::Map<Eigen::VectorXd>(R.data(), r * r);
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(C, Eigen::ComputeThinV);
    double smax = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
    std::vector<Eigen::MatrixXd> kernel;
    for (int c = nsym - 1; c >= 0; --c) {
        if (c < svd.singularValues().size() && svd.singularValues()[c] > 1e-8 * (1 + smax)) break;
        Eigen::VectorXd x = svd.matrixV().col(c);
        Eigen::MatrixXd K = Eigen::MatrixXd::Zero(r, r);
        for (int idx = 0; idx < nsym; ++idx) {
            K(cells[idx].first, cells[idx].second) = x[idx];
            K(cells[idx].second, cells[idx].first) = x[idx];
        }
        kernel.push_back(K);
    }
    return kernel;
}

}  // namespace gns_detail

/// Simultaneous block diagonalization through the eigenspaces of a random
/// symmetric element of the commutant. Retries with fresh randomness when
/// a degenerate draw mixes blocks.
inline BlockDiagonalization block_diagonalize(const std::vector<Eigen::MatrixXd>& mats,
                                              double tol = 1e-7, unsigned seed = 20240922) {
    const int r = static_cast<int>(mats[0].rows());
    auto kernel = gns_detail::symmetric_commutant(mats);
    BlockDiagonalization out;
    if (kernel.size() <= 1) {  // trivial commutant: already irreducible
        out.Q = Eigen::MatrixXd::Identity(r, r);
        out.block_sizes = {r};
        return out;
    }
    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss;
    double scale = 0.0;
    for (const auto& m : mats) scale = std::max(scale, m.norm());
    for (int attempt = 0; attempt < 3; ++attempt) {
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(r, r);
        for (const auto& K : kernel) T += gauss(rng) * K / std::max(K.norm(), 1e-300);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
        // group eigenvalues by gaps
        std::vector<int> starts{0};
        double span = es.eigenvalues()[r - 1] - es.eigenvalues()[0] + 1.0;
        for (int i = 1; i < r; ++i)
            if (es.eigenvalues()[i] - es.eigenvalues()[i - 1] > 1e-5 * span) starts.push_back(i);
        starts.push_back(r);

        struct Blk {
            int begin, size;
            double trace0;
        };
        std::vector<Blk> blks;
        for (size_t g = 0; g + 1 < starts.size(); ++g) {
            Blk b{starts[g], starts[g + 1] - starts[g], 0.0};
            Eigen::MatrixXd Qg = es.eigenvectors().middleCols(b.begin, b.size);
            b.trace0 = (Qg.transpose() * mats[0] * Qg).trace();
            blks.push_back(b);
        }
        std::sort(blks.begin(), blks.end(), [](const Blk& a, const Blk& b) {
            if (a.size != b.size) return a.size < b.size;
            if (a.trace0 != b.trace0) return a.trace0 < b.trace0;
            return a.begin < b.begin;
        });
        Eigen::MatrixXd Q(r, r);
        std::vector<int> sizes;
        int col = 0;
        for (const auto& b : blks) {
            Q.middleCols(col, b.size) = es.eigenvectors().middleCols(b.begin, b.size);
            sizes.push_back(b.size);
            col += b.size;
        }
        // validate: every generator must be block diagonal in this basis
        double resid = 0.0;
        for (const auto& m : mats) {
            Eigen::MatrixXd Tm = Q.transpose() * m * Q;
            int at = 0;
            for (int s : sizes) {
                Tm.block(at, at, s, s).setZero();
                at += s;
            }
            resid = std::max(resid, Tm.cwiseAbs().maxCoeff());
        }
        if (resid <= tol * (1.0 + scale)) {
            out.Q = Q;
            out.block_sizes = sizes;
            out.residual = resid;
            return out;
        }
    }
    throw ExtractionError(ExtractionError::Kind::Numerical,
                          "block diagonalization failed after 3 randomized attempts");
}

}  // namespace ncpopt
