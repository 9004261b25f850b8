#include <Eigen/Eigenvalues>
#include <random>

#include "ddk/perturbation.hpp"
#include "doctest.h"

using namespace ddk;

TEST_CASE("block diagonalization of random antisymmetric matrices") {
    std::mt19937_64 rng(41);
    std::normal_distribution<double> dist;
    for (int n : {4, 8, 12}) {
        for (int trial = 0; trial < 5; ++trial) {
            Eigen::MatrixXd m(n, n);
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) m(i, j) = dist(rng);
            }
            Eigen::MatrixXd j = m - m.transpose().eval();
            OrthogonalBlockDecomposition dec = block_diagonalize(j);
            CHECK((dec.q.transpose() * dec.q - Eigen::MatrixXd::Identity(n, n)).norm() < 1e-12);
            Eigen::MatrixXd b = dec.q.transpose() * j * dec.q;
            for (int k = 0; k < n / 2; ++k) {
                CHECK(b(2 * k, 2 * k + 1) == doctest::Approx(dec.eps[k]).epsilon(1e-10));
                if (k > 0) CHECK(dec.eps[k] <= dec.eps[k - 1]);
            }
            // Everything off the 2x2 blocks must vanish.
            for (int k = 0; k < n / 2; ++k) {
                b(2 * k, 2 * k + 1) = 0.0;
                b(2 * k + 1, 2 * k) = 0.0;
            }
            CHECK(b.norm() < 1e-10 * std::max(1.0, j.norm()));
        }
    }
}

TEST_CASE("block diagonalization with a singular matrix") {
    // Uniform couplings at 2x2 produce a zero block.
    LatticeGeometry g(2, 2);
    GaugeField u(g);
    Eigen::MatrixXd j = coupling_matrix(g, CouplingParams{1, 1, 1, 1}, u);
    OrthogonalBlockDecomposition dec = block_diagonalize(j);
    CHECK((dec.q.transpose() * dec.q - Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-12);
    CHECK(dec.eps[0] == doctest::Approx(4.0));
    CHECK(dec.eps[1] == doctest::Approx(0.0));
    Eigen::MatrixXd b = dec.q.transpose() * j * dec.q;
    CHECK(b(0, 1) == doctest::Approx(4.0));
    CHECK(std::abs(b(2, 3)) < 1e-10);
}

TEST_CASE("classical master matrix in the translation invariant sector") {
    LatticeGeometry g(2, 2);
    GaugeField u(g);
    // Distinct couplings keep the mode energies non degenerate: eps = {10, 2}.
    Eigen::MatrixXd j = coupling_matrix(g, CouplingParams{3, 4, 1, 2}, u);
    OrthogonalBlockDecomposition dec = block_diagonalize(j);
    REQUIRE(dec.eps.size() == 2);
    CHECK(dec.eps[0] == doctest::Approx(10.0));
    CHECK(dec.eps[1] == doctest::Approx(2.0));

    ClassicalMasterMatrix cm = classical_master_matrix(dec, g);
    for (int s = 0; s < 2; ++s) {
        for (int r = 0; r < 2; ++r) {
            CHECK(cm.weights(s, r) == doctest::Approx(1.0).epsilon(1e-10));  // 4/N
        }
    }
    // Columns sum to zero: probability is conserved.
    CHECK(cm.m.colwise().sum().cwiseAbs().maxCoeff() < 1e-10);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cm.m);
    std::vector<double> expect = uniform_master_spectrum(g);
    REQUIRE(static_cast<long>(expect.size()) == cm.m.rows());
    for (long i = 0; i < cm.m.rows(); ++i) {
        CHECK(es.eigenvalues()[i] == doctest::Approx(expect[i]).epsilon(1e-9));
    }
    CHECK(single_flip_rate(g) == doctest::Approx(-2.0));
}

TEST_CASE("label stiffness s") {
    LatticeGeometry g(2, 2);
    for (int q0 = 1; q0 <= 8; ++q0) {
        std::vector<int> q(g.sites(), q0);
        CHECK(s_eigenvalue(g, q) == 0);  // uniform labels are stationary
    }
    std::vector<int> q(g.sites(), 1);
    q[g.site(2, 1)] = 2;
    CHECK(s_eigenvalue(g, q) == 4);  // one flipped site breaks two bonds
    // Every site's four incident bond signs multiply to +1, so the number of
    // broken bonds is even and the smallest nonzero eigenvalue is 4.
    CHECK(min_nonzero_s(g) == 4);

    auto [wp, wm] = large_gamma_rates(2.0, 3.0);
    CHECK(std::abs(wp + wm - cxd(-12.0, 0.0)) < 1e-12);
    CHECK(std::abs(wp * wm - cxd(4.0, 0.0)) < 1e-12);
    CHECK(wp.real() < 0.0);
    CHECK(dissipator_sector_rate(3, 0.5) == doctest::Approx(-3.0));
}
