#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ncpopt/ipm.hpp"

using namespace ncpopt;

namespace {

// single dense block with given F0 and F_i
BlockSdp make_sdp(const Eigen::VectorXd& b, const Eigen::MatrixXd& F0,
                  const std::vector<Eigen::MatrixXd>& Fs) {
    BlockSdp sdp;
    sdp.m = static_cast<int>(b.size());
    sdp.b = b;
    SdpBlock blk;
    blk.size = static_cast<int>(F0.rows());
    for (int i = 0; i < blk.size; ++i)
        for (int j = i; j < blk.size; ++j)
            if (F0(i, j) != 0.0) blk.f0.push_back({i, j, F0(i, j)});
    for (int v = 0; v < sdp.m; ++v) {
        std::vector<SdpEntry> es;
        for (int i = 0; i < blk.size; ++i)
            for (int j = i; j < blk.size; ++j)
                if (Fs[v](i, j) != 0.0) es.push_back({i, j, Fs[v](i, j)});
        if (!es.empty()) blk.fs.emplace_back(v, std::move(es));
    }
    sdp.blocks.push_back(std::move(blk));
    return sdp;
}

Eigen::MatrixXd random_sym(std::mt19937& rng, int n, double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    Eigen::MatrixXd M(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M(i, j) = u(rng);
    return 0.5 * (M + M.transpose());
}

}  // namespace

TEST_CASE("scalar lp as sdp") {
    // maximize y s.t. 1 - y >= 0
    Eigen::VectorXd b(1);
    b << 1.0;
    Eigen::MatrixXd F0(1, 1), F1(1, 1);
    F0 << 1.0;
    F1 << -1.0;
    auto sol = solve_sdp(make_sdp(b, F0, {F1}));
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.y[0] == Catch::Approx(1.0).margin(1e-7));
    CHECK(sol.dual_objective == Catch::Approx(1.0).margin(1e-7));
}

TEST_CASE("min eigenvalue of a fixed matrix") {
    // maximize y s.t. C - y I >= 0, optimum = lambda_min(C)
    std::mt19937 rng(31);
    for (int t = 0; t < 10; ++t) {
        int n = 2 + t % 4;
        Eigen::MatrixXd C = random_sym(rng, n, 2.0);
        Eigen::VectorXd b(1);
        b << 1.0;
        auto sol = solve_sdp(make_sdp(b, C, {-Eigen::MatrixXd::Identity(n, n)}));
        REQUIRE(sol.status == SolveStatus::Optimal);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
        CHECK(sol.y[0] == Catch::Approx(es.eigenvalues().minCoeff()).margin(1e-6));
    }
}

TEST_CASE("random problems with a constructed optimum") {
    // Fix complementary X*, Z* and y*, then derive b and F0 so that
    // (X*, y*, Z*) is the exact primal-dual optimum.
    std::mt19937 rng(57);
    std::uniform_int_distribution<int> dim(2, 5), nvar(1, 6);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int solved = 0;
    for (int t = 0; t < 50; ++t) {
        int n = dim(rng), m = nvar(rng);
        // orthogonal basis via QR of a random matrix
        Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(random_sym(rng, n))
                                .householderQ();
        int r = 1 + (t % (n - 1));  // rank of X*
        Eigen::VectorXd dx = Eigen::VectorXd::Zero(n), dz = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < r; ++i) dx[i] = 0.5 + 0.5 * std::abs(u(rng));
        for (int i = r; i < n; ++i) dz[i] = 0.5 + 0.5 * std::abs(u(rng));
        Eigen::MatrixXd Xstar = Q * dx.asDiagonal() * Q.transpose();
        Eigen::MatrixXd Zstar = Q * dz.asDiagonal() * Q.transpose();
        std::vector<Eigen::MatrixXd> Fs;
        Eigen::VectorXd ystar(m), b(m);
        for (int i = 0; i < m; ++i) {
            Fs.push_back(random_sym(rng, n));
            ystar[i] = u(rng);
        }
        // Z* = F0 + sum y*_i F_i  and  b_i = -<F_i, X*>
        Eigen::MatrixXd F0 = Zstar;
        for (int i = 0; i < m; ++i) F0 -= ystar[i] * Fs[i];
        for (int i = 0; i < m; ++i) b[i] = -Fs[i].cwiseProduct(Xstar).sum();
        double expected = b.dot(ystar);

        auto sol = solve_sdp(make_sdp(b, F0, Fs));
        // the recovered optimum is the oracle; a few instances may stop at
        // SlowProgress right at the double-precision feasibility floor
        CHECK(sol.dual_objective == Catch::Approx(expected).margin(1e-6 * (1 + std::abs(expected))));
        if (sol.status == SolveStatus::Optimal) ++solved;
    }
    CHECK(solved >= 40);
}

TEST_CASE("weak duality holds at every iterate up to residual slack") {
    std::mt19937 rng(91);
    for (int t = 0; t < 5; ++t) {
        int n = 4, m = 5;
        std::vector<Eigen::MatrixXd> Fs;
        for (int i = 0; i < m; ++i) Fs.push_back(random_sym(rng, n));
        Eigen::MatrixXd F0 = random_sym(rng, n);
        F0 += (2.0 * n) * Eigen::MatrixXd::Identity(n, n);  // make y=0 strictly feasible
        Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
        for (int i = 0; i < m; ++i) b[i] = rng() % 5 - 2.0;
        // bound the feasible set so the maximum exists: add -t*I direction
        Fs.push_back(-Eigen::MatrixXd::Identity(n, n));
        Eigen::VectorXd b2(m + 1);
        b2.head(m) = b;
        b2[m] = 1.0;
        auto sol = solve_sdp(make_sdp(b2, F0, Fs));
        for (const auto& rec : sol.history) {
            CHECK(rec.dobj - rec.pobj <=
                  rec.duality_slack + 1e-9 * (1 + std::abs(rec.pobj) + std::abs(rec.dobj)));
        }
    }
}

TEST_CASE("infeasible-direction problems are flagged") {
    // maximize y s.t. y free in a direction with no PSD limit:
    // F0 + y*F1 >= 0 with F1 >= 0 allows y -> +inf: unbounded above,
    // i.e. the internal primal is infeasible.
    Eigen::VectorXd b(1);
    b << 1.0;
    Eigen::MatrixXd F0 = Eigen::MatrixXd::Identity(2, 2);
    Eigen::MatrixXd F1 = Eigen::MatrixXd::Identity(2, 2);
    SolverOptions opts;
    opts.max_iter = 120;
    auto sol = solve_sdp(make_sdp(b, F0, {F1}), opts);
    CHECK(sol.status != SolveStatus::Optimal);
}

TEST_CASE("schur limit is enforced") {
    Eigen::VectorXd b = Eigen::VectorXd::Ones(8);
    std::vector<Eigen::MatrixXd> Fs(8, -Eigen::MatrixXd::Identity(2, 2));
    SolverOptions opts;
    opts.schur_limit = 4;
    CHECK_THROWS_AS(solve_sdp(make_sdp(b, Eigen::MatrixXd::Identity(2, 2), Fs), opts),
                    SolverFailure);
}
