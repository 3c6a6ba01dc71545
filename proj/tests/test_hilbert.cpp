#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "veemap/hilbert.hpp"

using namespace veemap;

TEST_SUITE("hilbert") {
    TEST_CASE("basis index map") {
        FockBasis b(2);
        CHECK(basis_index(0, 0, b) == 0);
        CHECK(basis_index(2, 1, b) == 5);
        CHECK_THROWS_AS(basis_index(1, 3, b), std::domain_error);
        CHECK_THROWS_AS(basis_index(3, 0, b), std::domain_error);
        for (int i = 0; i < b.dim(); ++i) {
            auto [j, n] = b.level(i);
            CHECK(b.index(j, n) == i);
        }
        CHECK(b.dim() == 9);
        CHECK(b.label(5) == "21");
    }

    TEST_CASE("parameter validation") {
        SystemParams p;
        CHECK_NOTHROW(p.validate());
        p.kappa = -0.1;
        CHECK_THROWS_AS(p.validate(), std::domain_error);
        p.kappa = 0;
        p.omega_phase = kTwoPi;
        CHECK_THROWS_AS(p.validate(), std::domain_error);
        p.omega_phase = 0;
        p.omega_amp = 50;
        p.omega_sum = 500.0;  // boundary of the validity rule is admitted
        CHECK_NOTHROW(p.validate());
        p.omega_sum = 499.0;
        CHECK_THROWS_AS(p.validate(), std::domain_error);
    }

    TEST_CASE("RWA matrix against the hand expansion") {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> u(0, 1);
        for (int trial = 0; trial < 20; ++trial) {
            SystemParams p;
            p.omega_amp = 3 * u(rng);
            p.omega_phase = kTwoPi * u(rng);
            p.delta = 10 * (u(rng) - 0.5);
            p.g = 0.5 + u(rng);
            p.g_phase = kTwoPi * u(rng);
            p.kappa = 0.3 * u(rng);
            p.gamma0 = 0.2 * u(rng);
            p.gamma1 = 0.2 * u(rng);
            Mat H = build_effective_hamiltonian(p, FockBasis(1)).matrix;
            Mat R = oracle::hand_hamiltonian(p.omega(), p.coupling(), p.delta, p.kappa, p.gamma0, p.gamma1);
            CHECK((H - R).cwiseAbs().maxCoeff() < 1e-14);
        }
    }

    TEST_CASE("named entries") {
        SystemParams p;
        p.omega_amp = 1;
        FockBasis b(1);
        OperatorMatrix H = build_effective_hamiltonian(p, b);
        CHECK(H.hermitian);
        CHECK(std::abs(H.matrix(b.index(2, 1), b.index(1, 0)) - cplx(1, 0)) < 1e-15);
        CHECK(std::abs(H.matrix(b.index(2, 0), b.index(0, 0)) - cplx(1, 0)) < 1e-15);
        p.kappa = 0.1;
        OperatorMatrix Hk = build_effective_hamiltonian(p, b);
        CHECK_FALSE(Hk.hermitian);
        CHECK(std::abs(Hk.matrix(b.index(0, 1), b.index(0, 1)) - cplx(0, -0.1)) < 1e-15);
    }

    TEST_CASE("hermitian without damping, anti-hermitian part diagonal with damping") {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(0, 1);
        for (int trial = 0; trial < 20; ++trial) {
            SystemParams p;
            p.omega_amp = 5 * u(rng);
            p.omega_phase = kTwoPi * u(rng);
            p.delta = 20 * (u(rng) - 0.5);
            FockBasis b(3);
            Mat H = build_effective_hamiltonian(p, b).matrix;
            CHECK((H - H.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
            p.kappa = u(rng);
            p.gamma0 = u(rng);
            p.gamma1 = u(rng);
            Mat Hd = build_effective_hamiltonian(p, b).matrix;
            Mat A = (Hd - Hd.adjoint()) / cplx(0, 2);
            for (int i = 0; i < b.dim(); ++i)
                for (int j = 0; j < b.dim(); ++j) {
                    if (i != j) {
                        CHECK(std::abs(A(i, j)) < 1e-14);
                        continue;
                    }
                    auto [lev, n] = b.level(i);
                    double expect = -p.kappa * n - (lev == 0 ? p.gamma0 : lev == 1 ? p.gamma1 : 0.0);
                    CHECK(std::abs(A(i, i) - expect) < 1e-14);
                }
        }
    }

    TEST_CASE("block structure of the two invariant subspaces") {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(0, 1);
        FockBasis b(1);
        const int dark[] = {b.index(0, 0), b.index(2, 0)};
        const int bright[] = {b.index(1, 0), b.index(0, 1), b.index(2, 1)};
        for (int trial = 0; trial < 100; ++trial) {
            SystemParams p;
            p.omega_amp = 10 * u(rng);
            p.omega_phase = kTwoPi * u(rng);
            p.delta = 20 * (u(rng) - 0.5);
            p.g_phase = kTwoPi * u(rng);
            p.kappa = u(rng);
            Mat H = build_effective_hamiltonian(p, b).matrix;
            for (int x : dark)
                for (int y : bright) {
                    CHECK(H(x, y) == cplx(0));
                    CHECK(H(y, x) == cplx(0));
                }
        }
    }

    TEST_CASE("full Hamiltonian") {
        SystemParams p;
        p.omega_amp = 1;
        p.omega_sum = 100.0;
        FockBasis b(2);
        Mat H0 = build_effective_hamiltonian(p, b).matrix;
        OperatorMatrix F = build_full_hamiltonian(p, b, 0.0);
        CHECK(F.warnings.empty());
        // <20|H|10> gains Omega* = 1
        CHECK(std::abs(F.matrix(b.index(2, 0), b.index(1, 0)) - H0(b.index(2, 0), b.index(1, 0)) - cplx(1, 0)) < 1e-15);
        // g a sigma_20 : <20|H|01> gains g
        CHECK(std::abs(F.matrix(b.index(2, 0), b.index(0, 1)) - cplx(1, 0)) < 1e-15);
        const double T = kTwoPi / *p.omega_sum;
        CHECK((build_full_hamiltonian(p, b, T).matrix - F.matrix).cwiseAbs().maxCoeff() < 1e-12);
        // period average of the counter-rotating block vanishes
        Mat avg = Mat::Zero(b.dim(), b.dim());
        const int n = 64;
        for (int i = 0; i < n; ++i) avg += build_full_hamiltonian(p, b, T * i / n).matrix - H0;
        CHECK((avg / double(n)).cwiseAbs().maxCoeff() < 1e-12);

        SystemParams z;
        z.g = 1e-300;  // couplings off
        z.delta = 2;
        z.omega_sum = 100.0;
        Mat Z = build_full_hamiltonian(z, b, 0.3).matrix;
        Mat D = build_effective_hamiltonian(z, b).matrix;
        CHECK((Z - D).cwiseAbs().maxCoeff() < 1e-250);

        SystemParams q = p;
        q.omega_sum.reset();
        CHECK_THROWS_AS(build_full_hamiltonian(q, b, 0.0), ConfigurationError);
        CHECK_FALSE(build_full_hamiltonian(p, FockBasis(1), 0.0).warnings.empty());
    }

    TEST_CASE("initial state") {
        FockBasis b(1);
        StateVector s = initial_state(1.0, 0.0, b);
        CHECK(s.amplitudes(b.index(1, 0)) == cplx(1));
        CHECK(s.norm2() == doctest::Approx(1.0));
        StateVector e = initial_state(1 / std::sqrt(2.0), 1 / std::sqrt(2.0), b);
        CHECK(std::abs(e.amplitudes(1) - e.amplitudes(0)) < 1e-15);
        CHECK_FALSE(e.renormalized);
        StateVector m = initial_state(0.6, cplx(0, 0.8), b);
        CHECK(std::abs(m.amplitudes(1) - cplx(0.6)) < 1e-15);
        CHECK(std::abs(m.amplitudes(0) - cplx(0, 0.8)) < 1e-15);
        CHECK(std::abs(m.norm2() - 1.0) < 1e-15);
        StateVector r = initial_state(3.0, 4.0, b);
        CHECK(r.renormalized);
        CHECK(std::abs(r.norm2() - 1.0) < 1e-14);
        CHECK_THROWS_AS(initial_state(0.0, 0.0, b), std::domain_error);
    }
}
