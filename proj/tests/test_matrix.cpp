#include <catch2/catch.hpp>

#include <fspca/matrix.hpp>
#include <fspca/rng.hpp>
#include <fspca/synth.hpp>

#include "support/helpers.hpp"
#include "support/jacobi_oracle.hpp"

using namespace fspca;

TEST_CASE("SymMat validates its input") {
    Eigen::MatrixXd bad(2, 2);
    bad << 1.0, 2.0, 3.0, 4.0;
    REQUIRE_THROWS_AS(SymMat(bad), input_error);
    try {
        SymMat m(bad);
    } catch (const input_error& e) {
        REQUIRE(std::string(e.what()).find("(0, 1)") != std::string::npos);
    }

    Eigen::MatrixXd nan_mat = Eigen::MatrixXd::Zero(2, 2);
    nan_mat(1, 0) = nan_mat(0, 1) = std::numeric_limits<double>::quiet_NaN();
    REQUIRE_THROWS_AS(SymMat(nan_mat), input_error);

    REQUIRE_THROWS_AS(SymMat(Eigen::MatrixXd::Zero(2, 3)), input_error);

    // Tiny asymmetry within tolerance is accepted and mirrored away.
    Eigen::MatrixXd close(2, 2);
    close << 1.0, 2.0, 2.0 + 1e-14, 4.0;
    const SymMat m(close);
    REQUIRE(m(0, 1) == m(1, 0));
}

TEST_CASE("sym_eig on diagonal and identity matrices") {
    Eigen::VectorXd d3(3);
    d3 << 3, 2, 1;
    const EigPair top = sym_eig(SymMat::diagonal(d3), 2);
    REQUIRE(top.values(0) == Approx(3.0));
    REQUIRE(top.values(1) == Approx(2.0));
    REQUIRE(top.vectors.col(0).isApprox(Eigen::Vector3d(1, 0, 0), 1e-12));
    REQUIRE(top.vectors.col(1).isApprox(Eigen::Vector3d(0, 1, 0), 1e-12));

    const EigPair id = sym_eig(SymMat::identity(4), 1);
    REQUIRE(id.values(0) == Approx(1.0));
    REQUIRE(id.vectors.col(0).norm() == Approx(1.0));
    // Sign convention: the largest-magnitude entry is nonnegative.
    Eigen::Index pivot;
    id.vectors.col(0).cwiseAbs().maxCoeff(&pivot);
    REQUIRE(id.vectors(pivot, 0) >= 0.0);
}

TEST_CASE("sym_eig matches an independent Jacobi eigensolver") {
    Rng rng(61);
    for (int trial = 0; trial < 10; ++trial) {
        const SymMat a = testsupport::random_symmetric(6, rng);
        const EigPair full = sym_eig(a, 6);
        const Eigen::VectorXd reference = testsupport::jacobi_eigenvalues(a.mat());
        const double tol = 1e-8 * std::max(1.0, std::abs(reference(0)));
        for (int i = 0; i < 6; ++i)
            REQUIRE(std::abs(full.values(i) - reference(i)) <= tol);
    }
}

TEST_CASE("sym_eig residual and orthonormality contract") {
    Rng rng(62);
    for (int d : {3, 8, 17}) {
        const SymMat a = testsupport::random_symmetric(d, rng);
        const int p = std::max(1, d / 2);
        const EigPair eig = sym_eig(a, p);
        const double tol = 1e-8 * std::max(1.0, std::abs(eig.values(0)));
        for (int j = 0; j < p; ++j) {
            const Eigen::VectorXd residual =
                a.mat() * eig.vectors.col(j) - eig.values(j) * eig.vectors.col(j);
            REQUIRE(residual.norm() <= tol);
        }
        const Eigen::MatrixXd gram = eig.vectors.transpose() * eig.vectors;
        REQUIRE((gram - Eigen::MatrixXd::Identity(p, p)).norm() <= 1e-10);
        for (int j = 1; j < p; ++j) REQUIRE(eig.values(j) <= eig.values(j - 1));
    }
}

TEST_CASE("sym_eig is bit-deterministic") {
    Rng rng(63);
    const SymMat a = testsupport::random_symmetric(9, rng);
    const EigPair first = sym_eig(a, 4);
    const EigPair second = sym_eig(a, 4);
    REQUIRE((first.values.array() == second.values.array()).all());
    REQUIRE((first.vectors.array() == second.vectors.array()).all());
}

TEST_CASE("sym_eig rejects bad p") {
    REQUIRE_THROWS_AS(sym_eig(SymMat::identity(3), 0), input_error);
    REQUIRE_THROWS_AS(sym_eig(SymMat::identity(3), 4), input_error);
    REQUIRE_NOTHROW(sym_eig(SymMat::identity(3), 3));
}

TEST_CASE("pinv_psd on diagonal matrices") {
    Eigen::VectorXd v(2);
    v << 2, 0;
    const SymMat pinv = pinv_psd(SymMat::diagonal(v));
    REQUIRE(pinv(0, 0) == Approx(0.5));
    REQUIRE(pinv(1, 1) == Approx(0.0).margin(1e-15));

    v << 4, 2;
    const SymMat inv = pinv_psd(SymMat::diagonal(v));
    REQUIRE(inv(0, 0) == Approx(0.25));
    REQUIRE(inv(1, 1) == Approx(0.5));
}

TEST_CASE("pinv_psd satisfies the Moore-Penrose identities") {
    Rng rng(64);
    for (int rank = 0; rank <= 5; ++rank) {
        const SymMat b = testsupport::random_psd(5, rank, rng);
        const SymMat pinv = pinv_psd(b);
        const Eigen::MatrixXd& bm = b.mat();
        const Eigen::MatrixXd& pm = pinv.mat();
        REQUIRE((bm * pm * bm - bm).norm() <= 1e-8 * std::max(1.0, bm.norm()));
        REQUIRE((pm * bm * pm - pm).norm() <= 1e-8 * std::max(1.0, pm.norm()));
    }
}

TEST_CASE("principal_submatrix gathers the right entries") {
    Eigen::MatrixXd a2(2, 2);
    a2 << 1, 2, 2, 4;
    const SymMat m2(a2);
    const SymMat sub = principal_submatrix(m2, SupportIndices({0}, 2));
    REQUIRE(sub.dim() == 1);
    REQUIRE(sub(0, 0) == 1.0);

    const SymMat all = principal_submatrix(m2, SupportIndices({0, 1}, 2));
    REQUIRE((all.mat() - m2.mat()).norm() == 0.0);

    Rng rng(65);
    const SymMat a5 = testsupport::random_symmetric(5, rng);
    const SymMat picked = principal_submatrix(a5, SupportIndices({1, 3}, 5));
    REQUIRE(picked(0, 0) == a5(1, 1));
    REQUIRE(picked(0, 1) == a5(1, 3));
    REQUIRE(picked(1, 0) == a5(3, 1));
    REQUIRE(picked(1, 1) == a5(3, 3));
}

TEST_CASE("SupportIndices validation") {
    REQUIRE_THROWS_AS(SupportIndices({0, 0}, 3), input_error);
    REQUIRE_THROWS_AS(SupportIndices({1, 0}, 3), input_error);
    REQUIRE_THROWS_AS(SupportIndices({0, 3}, 3), input_error);
    REQUIRE_THROWS_AS(SupportIndices({-1}, 3), input_error);
    REQUIRE_THROWS_AS(principal_submatrix(SymMat::identity(4), SupportIndices({0}, 3)),
                      input_error);
}

TEST_CASE("best_rank_m truncates the spectrum") {
    Eigen::VectorXd d3(3);
    d3 << 3, 2, 1;
    const SymMat truncated = best_rank_m(SymMat::diagonal(d3), 2);
    Eigen::VectorXd expect(3);
    expect << 3, 2, 0;
    REQUIRE((truncated.mat() - Eigen::MatrixXd(expect.asDiagonal())).norm() <= 1e-12);

    Rng rng(66);
    const SymMat low = testsupport::random_psd(6, 2, rng);
    REQUIRE((best_rank_m(low, 3).mat() - low.mat()).norm() <=
            1e-8 * std::max(1.0, low.mat().norm()));
}

TEST_CASE("best_rank_m residual matches the discarded spectrum tail") {
    // Spectrum {100, 100, 4, 1, ..., 1} at d = 20: the m = 3 residual carries
    // the 17 trailing ones, so |A - A_3|_F^2 = 17.
    const SymMat a = make_covariance(scheme_preset('A', 20, 123));
    const SymMat a3 = best_rank_m(a, 3);
    REQUIRE((a.mat() - a3.mat()).squaredNorm() == Approx(17.0).epsilon(1e-6));
}

TEST_CASE("assert_psd thresholds at the stated tolerance") {
    REQUIRE(assert_psd(SymMat::identity(3), 1e-9));
    Eigen::VectorXd v(2);
    v << 1, -1;
    REQUIRE_FALSE(assert_psd(SymMat::diagonal(v), 1e-9));
    v << 1, -1e-12;
    REQUIRE(assert_psd(SymMat::diagonal(v), 1e-9));
}

TEST_CASE("trace of any orthonormal compression is at most the top eigenvalue sum") {
    Rng rng(67);
    for (int trial = 0; trial < 20; ++trial) {
        const int d = 5 + static_cast<int>(rng.uniform_index(6));
        const int m = 1 + static_cast<int>(rng.uniform_index(3));
        const SymMat a = testsupport::random_psd(d, d, rng);
        const Eigen::MatrixXd w = testsupport::random_orthonormal_block(d, m, rng);
        const Eigen::VectorXd values = sym_eigenvalues(a);
        double top = 0.0;
        for (int i = 0; i < m; ++i) top += values(i);
        REQUIRE((w.transpose() * a.mat() * w).trace() <= top + 1e-9 * std::max(1.0, top));
    }
}

TEST_CASE("principal submatrix eigenvalues interlace") {
    Rng rng(68);
    for (int trial = 0; trial < 10; ++trial) {
        const int d = 6 + static_cast<int>(rng.uniform_index(5));
        const int k = 2 + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(d - 2)));
        const SymMat a = testsupport::random_symmetric(d, rng);
        std::vector<int> idx;
        {
            Rng pick(500 + static_cast<std::uint64_t>(trial));
            SubspaceEstimate sample = random_subspace_init(d, 1, k, pick);
            idx = sample.support().indices();
        }
        const Eigen::VectorXd outer = sym_eigenvalues(a);
        const Eigen::VectorXd inner = sym_eigenvalues(principal_submatrix(a, SupportIndices(idx, d)));
        const double tol = 1e-10 * std::max(1.0, std::abs(outer(0)));
        for (int i = 0; i < k; ++i) {
            REQUIRE(outer(i) >= inner(i) - tol);
            REQUIRE(inner(i) >= outer(d - k + i) - tol);
        }
    }
}
