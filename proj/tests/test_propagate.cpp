#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "veemap/design.hpp"
#include "veemap/propagate.hpp"

using namespace veemap;

TEST_SUITE("propagate") {
    TEST_CASE("identity at t = 0 and non-finite input") {
        SystemParams p;
        p.omega_amp = 2;
        p.delta = 1;
        FockBasis b(1);
        OperatorMatrix H = build_effective_hamiltonian(p, b);
        StateVector s = initial_state(0.6, 0.8, b);
        CHECK((evolve_const(H, s, 0.0).amplitudes - s.amplitudes).norm() == 0.0);
        H.matrix(0, 0) = cplx(NAN, 0);
        CHECK_THROWS_AS(evolve_const(H, s, 1.0), NumericError);
    }

    TEST_CASE("matrix exponential against Taylor oracle") {
        std::mt19937_64 rng(5);
        std::normal_distribution<double> n;
        for (int trial = 0; trial < 10; ++trial) {
            Mat A(6, 6);
            for (int i = 0; i < 6; ++i)
                for (int j = 0; j < 6; ++j) A(i, j) = cplx(n(rng), n(rng));
            OperatorMatrix H;
            H.matrix = (A + A.adjoint()) / 2.0;
            H.hermitian = true;
            Vec psi = oracle::random_state(rng, 6);
            StateVector s{psi, false};
            Vec ref = oracle::taylor_evolve(H.matrix, psi, 1.0);
            CHECK((evolve_const(H, s, 1.0).amplitudes - ref).cwiseAbs().maxCoeff() < 1e-10);
            // non-Hermitian path
            H.matrix -= cplx(0, 0.3) * Mat::Identity(6, 6) * std::abs(n(rng));
            H.hermitian = false;
            ref = oracle::taylor_evolve(H.matrix, psi, 1.0);
            CHECK((evolve_const(H, s, 1.0).amplitudes - ref).cwiseAbs().maxCoeff() < 1e-10);
        }
    }

    TEST_CASE("pi pulse of the (25,1) family") {
        FamilyPoint fp = detuning_family(25, 1);
        SystemParams p;
        p.omega_amp = 1;
        p.delta = fp.delta;
        FockBasis b(1);
        StateVector out = evolve_const(build_effective_hamiltonian(p, b), initial_state(1, 0, b), 15.864);
        CHECK(std::abs(std::abs(out.amplitudes(b.index(0, 1))) - 1.0) < 1e-5);
    }

    TEST_CASE("semigroup, norm conservation and subspace closure") {
        std::mt19937_64 rng(9);
        std::uniform_real_distribution<double> u(0, 1);
        FockBasis b(1);
        for (int trial = 0; trial < 20; ++trial) {
            SystemParams p;
            p.omega_amp = 5 * u(rng);
            p.omega_phase = kTwoPi * u(rng);
            p.delta = 10 * (u(rng) - 0.5);
            OperatorMatrix H = build_effective_hamiltonian(p, b);
            StateVector s = initial_state(1, 0, b);
            double t = 10 * u(rng);
            StateVector whole = evolve_const(H, s, t);
            StateVector halves = evolve_const(H, evolve_const(H, s, t / 2), t / 2);
            CHECK((whole.amplitudes - halves.amplitudes).cwiseAbs().maxCoeff() < 1e-10);
            CHECK(std::abs(whole.norm2() - 1.0) < 1e-12);
            CHECK(std::abs(whole.amplitudes(b.index(0, 0))) < 1e-12);
            CHECK(std::abs(whole.amplitudes(b.index(2, 0))) < 1e-12);
            CHECK(std::abs(whole.amplitudes(b.index(1, 1))) < 1e-12);
        }
    }

    TEST_CASE("time-dependent integration matches the constant case without couplings") {
        SystemParams p;
        p.g = 1e-300;
        p.delta = 3;
        p.kappa = 0.2;
        p.gamma0 = 0.1;
        p.omega_sum = 200.0;
        FockBasis b(2);
        std::mt19937_64 rng(1);
        StateVector s{oracle::random_state(rng, b.dim()), false};
        StateVector a = evolve_timedep(p, s, 0.0, 2.0, 1e-10);
        StateVector c = evolve_const(build_effective_hamiltonian(p, b), s, 2.0);
        CHECK((a.amplitudes - c.amplitudes).cwiseAbs().maxCoeff() < 1e-9);
    }

    TEST_CASE("time-dependent integration against a fixed-step RK4 oracle") {
        SystemParams p;
        p.omega_amp = 5;
        p.omega_phase = 0.7;
        p.delta = 2;
        p.kappa = 0.05;
        p.omega_sum = 60.0;
        FockBasis b(3);
        Mat H0 = oracle::Mat::Zero(b.dim(), b.dim());
        H0 = build_effective_hamiltonian(p, b).matrix;
        Mat C = counter_rotating_part(p, b);
        auto rhs = [&](double t, const Vec& y) -> Vec {
            cplx e = std::polar(1.0, *p.omega_sum * t);
            return cplx(0, -1) * ((H0 + e * C + std::conj(e) * C.adjoint()) * y);
        };
        StateVector s = initial_state(0.6, 0.8, b);
        Vec ref = oracle::rk4(rhs, s.amplitudes, 0.0, 1.0, 40000);
        TimedepStats st;
        StateVector a = evolve_timedep(p, s, 0.0, 1.0, 1e-11, &st);
        CHECK((a.amplitudes - ref).cwiseAbs().maxCoeff() < 1e-8);
        CHECK(st.accepted > 0);
        // halving tol moves the answer by less than the larger tol
        StateVector h = evolve_timedep(p, s, 0.0, 1.0, 0.5e-11);
        CHECK((a.amplitudes - h.amplitudes).cwiseAbs().maxCoeff() < 1e-11);
    }

    TEST_CASE("time-dependent argument errors") {
        SystemParams p;
        FockBasis b(2);
        StateVector s = initial_state(1, 0, b);
        CHECK_THROWS_AS(evolve_timedep(p, s, 0.0, 1.0, 1e-10), ConfigurationError);
        p.omega_sum = 100.0;
        CHECK_THROWS_AS(evolve_timedep(p, s, 1.0, 1.0, 1e-10), std::domain_error);
        CHECK_THROWS_AS(evolve_timedep(p, s, 0.0, 1.0, 1e-3), std::domain_error);
    }

    TEST_CASE("counter-rotating leakage follows (2 Omega / omega_sum)^2") {
        // stage-A pulse on |10>, peak leakage beyond the RWA value
        std::vector<double> eps;
        for (double w : {500.0, 1000.0, 2000.0}) {
            SystemParams p;
            p.omega_amp = 50;
            p.omega_sum = w;
            Trajectory full = sample_trajectory(p, initial_state(1, 0, FockBasis(3)), 1.0, 1001, Mode::full);
            Trajectory rwa = sample_trajectory(p, initial_state(1, 0, FockBasis(1)), 1.0, 1001, Mode::rwa);
            double mf = 0, mr = 0;
            for (std::size_t i = 0; i < full.times.size(); ++i) {
                mf = std::max(mf, 1 - full.populations[i][1]);
                mr = std::max(mr, 1 - rwa.populations[i][1]);
            }
            double e = mf - mr, pred = std::pow(2 * 50 / w, 2);
            CHECK(e / pred > 0.5);
            CHECK(e / pred < 2.0);
            eps.push_back(e);
        }
        CHECK(eps[0] / eps[1] > 2.0);
        CHECK(eps[1] / eps[2] < 8.0);
    }

    TEST_CASE("trajectories") {
        SystemParams p;
        p.omega_amp = 1;
        p.delta = 4;
        FockBasis b(1);
        Trajectory tr = sample_trajectory(p, initial_state(1, 0, b), 10.0, 101, Mode::rwa);
        REQUIRE(tr.times.size() == 101);
        CHECK(tr.times.back() == 10.0);
        for (std::size_t i = 1; i < tr.times.size(); ++i) CHECK(tr.times[i] > tr.times[i - 1]);
        for (double n : tr.norms) CHECK(std::abs(n - 1.0) < 1e-10);
        p.kappa = 0.1;
        p.gamma0 = 0.05;
        p.gamma1 = 0.05;
        Trajectory td = sample_trajectory(p, initial_state(0.6, 0.8, b), 10.0, 101, Mode::rwa);
        for (std::size_t i = 1; i < td.norms.size(); ++i) CHECK(td.norms[i] <= td.norms[i - 1] + 1e-15);
        for (auto& row : td.populations)
            for (double x : row) CHECK(x >= 0.0);
        CHECK_THROWS_AS(sample_trajectory(p, initial_state(1, 0, b), 1.0, 1, Mode::rwa), std::domain_error);
        CHECK(sample_trajectory(p, initial_state(1, 0, b), 0.0, 5, Mode::rwa).times.size() == 1);
    }

    TEST_CASE("run_protocol") {
        ProtocolPlan plan = design_protocol(25, 1, 100);
        SystemParams p;
        FockBasis b(1);
        StateVector s = initial_state(1 / std::sqrt(2.0), 1 / std::sqrt(2.0), b);
        StateVector out = run_protocol(plan, p, s, Mode::rwa);
        CHECK(std::abs(out.norm2() - 1.0) < 1e-10);
        ProtocolPlan zero = plan;
        zero.t1 = zero.t_pi = 0;
        CHECK((run_protocol(zero, p, s, Mode::rwa).amplitudes - s.amplitudes).norm() == 0.0);
        CHECK_THROWS_AS(run_protocol(plan, p, s, Mode::full), ConfigurationError);
        ProtocolPlan bad = plan;
        bad.t1 = -1;
        CHECK_THROWS_AS(run_protocol(bad, p, s, Mode::rwa), std::domain_error);
    }

    TEST_CASE("run_protocol in full mode converges in the photon cutoff") {
        // short stages keep this cheap
        ProtocolPlan plan;
        plan.delta = 2;
        plan.omega1 = 20;
        plan.t1 = 0.05;
        plan.t_pi = 0.5;
        plan.phi_omega = 0.3;
        plan.Phi = 1.1;
        SystemParams p;
        p.omega_sum = 400.0;
        FockBasis b(1);
        Diagnostics d;
        StateVector out = run_protocol(plan, p, initial_state(0.6, 0.8, b), Mode::full, {}, &d);
        CHECK(out.dim() >= 12);
        CHECK(std::abs(out.norm2() - 1.0) < 1e-8);
        StateVector rwa = run_protocol(plan, p, initial_state(0.6, 0.8, b), Mode::rwa);
        // counter-rotating corrections are of order (2 Omega/omega_sum)^2 = 1e-2
        double diff = std::abs(std::norm(out.amp(0, 1)) - std::norm(rwa.amp(0, 1)));
        CHECK(diff < 0.05);
    }
}
