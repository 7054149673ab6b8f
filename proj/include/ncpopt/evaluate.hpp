#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "ncpopt/polynomial.hpp"

namespace ncpopt {

using MatrixTuple = std::vector<Eigen::MatrixXd>;

inline Eigen::MatrixXd evaluate_word(const Word& w, const MatrixTuple& A, int dim) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Identity(dim, dim);
    for (int k = 0; k < w.degree(); ++k) out = out * A[w.letter_at(k) - 1];
    return out;
}

/// Evaluates f at a tuple of symmetric dim x dim matrices. The matrices
/// must match nvars in count and be symmetric within sym_tol.
inline Eigen::MatrixXd evaluate(const NcPolynomial& f, const MatrixTuple& A, int dim,
                                double sym_tol = 1e-8) {
    if (static_cast<int>(A.size()) != f.nvars())
        throw std::invalid_argument("evaluate: tuple size does not match nvars");
    for (const auto& M : A) {
        if (M.rows() != dim || M.cols() != dim)
            throw std::invalid_argument("evaluate: matrix dimension mismatch");
        double scale = std::max(1.0, M.norm());
        if ((M - M.transpose()).norm() > sym_tol * scale)
            throw std::invalid_argument("evaluate: input matrix is not symmetric");
    }
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim, dim);
    for (const auto& [w, c] : f.terms()) out += c * evaluate_word(w, A, dim);
    return out;
}

/// Normalized trace (1/dim) tr M.
inline double normalized_trace(const Eigen::MatrixXd& M) { return M.trace() / M.rows(); }

inline double min_eigenvalue(const Eigen::MatrixXd& M) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (M + M.transpose()));
    return es.eigenvalues().minCoeff();
}

}  // namespace ncpopt
