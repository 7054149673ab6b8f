#pragma once

// Shared numeric fixtures for the benchmark problems exercised across the
// test suites: a 4-variable cubic over two overlapping balls together with
// its published extraction data, the 3-variable "sparse SOHS gap" quartic,
// and the fully symmetric square of x1+x2+x3.

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "ncpopt/parse.hpp"

namespace fixtures {

// cubic in x1..x3 (clique {1,2,3} part of the two-clique problem)
inline const char* kCubic4Part1 =
    "4 - x1 + 3*x2 - 3*x3 - 3*x1^2 - 7*x1*x2 + 6*x1*x3 - x2*x1 - 5*x3*x1 + 5*x3*x2 "
    "- 5*x1^3 - 3*x1^2*x3 + 4*x1*x2*x1 - 6*x1*x2*x3 + 7*x1*x3*x1 + 2*x1*x3*x2 - x1*x3^2 "
    "- x2*x1^2 + 3*x2*x1*x2 - x2*x1*x3 - 2*x2^3 - 5*x2^2*x3 - 4*x2*x3^2 - 5*x3*x1^2 "
    "+ 7*x3*x1*x2 + 6*x3*x2*x1 - 4*x3*x2^2 - x3^2*x1 - 2*x3^2*x2 + 7*x3^3";

// cubic in x2..x4 (clique {2,3,4} part)
inline const char* kCubic4Part2 =
    "-1 + 6*x2 + 5*x3 + 3*x4 - 5*x2^2 + 2*x2*x3 + 4*x2*x4 - 4*x3*x2 + x3^2 - x3*x4 "
    "+ x4*x2 - x4*x3 + 2*x4^2 - 7*x2^3 + 4*x2*x3^2 + 5*x2*x3*x4 - 7*x2*x4*x3 - 7*x2*x4^2 "
    "+ x3*x2^2 + 6*x3*x2*x3 - 6*x3*x2*x4 - 3*x3^2*x2 - 7*x3^2*x4 + 6*x3*x4*x2 "
    "- 3*x3*x4*x3 - 7*x3*x4^2 + 3*x4*x2^2 - 7*x4*x2*x3 - x4*x2*x4 - 5*x4*x3^2 "
    "+ 7*x4*x3*x4 + 6*x4^2*x2 - 4*x4^3";

// The problem polynomial is symmetric: the two printed parts are the
// "raw halves", the actual objective is their sum plus its involution
// (checked against the published value matrix at the published minimizer).
inline ncpopt::NcPolynomial cubic4_raw() {
    auto f1 = ncpopt::parse_polynomial(kCubic4Part1, 4);
    auto f2 = ncpopt::parse_polynomial(kCubic4Part2, 4);
    return f1 + f2;
}

inline ncpopt::NcPolynomial cubic4() {
    auto raw = cubic4_raw();
    return raw + raw.star();
}

inline std::vector<ncpopt::NcPolynomial> cubic4_balls() {
    return {ncpopt::parse_polynomial("1 - x1^2 - x2^2 - x3^2", 4),
            ncpopt::parse_polynomial("1 - x2^2 - x3^2 - x4^2", 4)};
}

// reference minimizer tuple published for the cubic4 problem
inline std::vector<Eigen::MatrixXd> cubic4_minimizer() {
    std::vector<Eigen::MatrixXd> A(4, Eigen::MatrixXd(4, 4));
    A[0] << 0.0059, 0.0481, 0.1638, 0.4570,
            0.0481, -0.2583, 0.5629, -0.2624,
            0.1638, 0.5629, 0.3265, -0.3734,
            0.4570, -0.2624, -0.3734, -0.2337;
    A[1] << -0.3502, 0.0080, 0.1411, 0.0865,
            0.0080, -0.4053, 0.2404, -0.1649,
            0.1411, 0.2404, -0.0959, 0.3652,
            0.0865, -0.1649, 0.3652, 0.4117;
    A[2] << -0.7669, -0.0074, -0.1313, -0.0805,
            -0.0074, -0.4715, -0.2238, 0.1535,
            -0.1313, -0.2238, 0.0848, -0.3400,
            -0.0805, 0.1535, -0.3400, -0.2126;
    A[3] << 0.3302, -0.1839, 0.1811, -0.0404,
            -0.1839, -0.1069, 0.5114, -0.0570,
            0.1811, 0.5114, 0.1311, -0.3664,
            -0.0404, -0.0570, -0.3664, 0.4440;
    return A;
}

inline Eigen::MatrixXd cubic4_value_at_minimizer() {
    Eigen::MatrixXd F(4, 4);
    F << -10.3144, 3.9233, -5.0836, -7.7828,
         3.9233, 1.8363, 4.5078, -7.5905,
         -5.0836, 4.5078, -19.5827, 13.9157,
         -7.7828, -7.5905, 13.9157, 8.3381;
    return F;
}

inline Eigen::VectorXd cubic4_eigvec() {
    Eigen::VectorXd v(4);
    v << 0.1546, -0.2507, 0.8840, -0.3631;
    return v;
}

constexpr double kCubic4SparseOrder2 = -27.536;
constexpr double kCubic4SparseOrder3 = -27.467;
constexpr double kCubic4Extraction = -27.4665;

// quartic whose dense SOHS bound is 0 but whose sparse SOHS bound is
// strictly negative (cliques {1,2} and {2,3})
inline const char* kChainSohsGap =
    "x1^2 - x1*x2 - x2*x1 + 3*x2^2 - 2*x1*x2*x1 + 2*x1*x2^2*x1 - x2*x3 - x3*x2 + 6*x3^2 "
    "+ 9*x2^2*x3 + 9*x3*x2^2 - 54*x3*x2*x3 + 142*x3*x2^2*x3";

inline ncpopt::NcPolynomial chain_sohs_gap() { return ncpopt::parse_polynomial(kChainSohsGap, 3); }

// (x1+x2+x3)^2 over the cube, with the deliberately non-nested clique
// cover {1,2},{2,3},{1,3}
inline ncpopt::NcPolynomial sum_square_triple() {
    return ncpopt::parse_polynomial("(x1+x2+x3)^2", 3);
}
inline std::vector<ncpopt::NcPolynomial> cube_constraints3() {
    return {ncpopt::parse_polynomial("1-x1^2", 3), ncpopt::parse_polynomial("1-x2^2", 3),
            ncpopt::parse_polynomial("1-x3^2", 3)};
}

}  // namespace fixtures
