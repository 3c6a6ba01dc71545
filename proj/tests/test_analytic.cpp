#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "veemap/analytic.hpp"
#include "veemap/design.hpp"
#include "veemap/propagate.hpp"

using namespace veemap;

namespace {

SystemParams random_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0, 1);
    SystemParams p;
    p.omega_amp = 0.1 + 3 * u(rng);
    p.omega_phase = kTwoPi * u(rng);
    p.delta = 12 * (u(rng) - 0.5);
    p.g = 0.5 + u(rng);
    p.g_phase = kTwoPi * u(rng);
    return p;
}

Vec oracle_column(const SystemParams& p, int col, double t) {
    Mat H = oracle::hand_hamiltonian(p.omega(), p.coupling(), p.delta, p.kappa, p.gamma0, p.gamma1);
    return oracle::taylor_expm(cplx(0, -t) * H).col(col);
}

}  // namespace

TEST_SUITE("analytic") {
    TEST_CASE("derived frequencies") {
        SystemParams p;
        p.omega_amp = 1;
        p.delta = -3;
        p.kappa = 0.01;
        DerivedFrequencies f = derived_frequencies(p);
        CHECK(f.nu >= f.nu_prime);
        CHECK(f.nu_prime >= std::abs(p.delta) / 2);
        CHECK(f.nu >= f.nu_prime_pi);
        CHECK(f.delta_small > 0);
        CHECK(f.eta == doctest::Approx(0.01 * 3 / 4));
        CHECK(f.eps == -1.0);
        CHECK(f.xi_plus == 0.0);
        CHECK(f.xi_minus == 1.0);
        CHECK(heaviside(0.0) == 0.5);
    }

    TEST_CASE("bright amplitudes") {
        SystemParams p;
        p.omega_amp = 1;
        AmplitudeTriple z = bright_amplitudes(p, 0.0);
        CHECK(std::abs(z.a - 1.0) < 1e-15);
        CHECK(std::abs(z.b) < 1e-15);
        CHECK(std::abs(z.c) < 1e-15);

        FamilyPoint fp = detuning_family(25, 1);
        p.delta = fp.delta;
        AmplitudeTriple pi = bright_amplitudes(p, 15.864);
        CHECK(std::abs(std::abs(pi.b) - 1.0) < 1e-5);
        CHECK(std::abs(pi.a) < 1e-3);  // t_pi printed to 3 decimals
        CHECK(std::abs(pi.c) < 1e-3);
        AmplitudeTriple exact = bright_amplitudes(p, fp.t_pi);
        CHECK(std::abs(exact.a) < 1e-10);
        CHECK(std::abs(exact.c) < 1e-10);

        std::mt19937_64 rng(21);
        std::uniform_real_distribution<double> u(0, 1);
        for (int trial = 0; trial < 20; ++trial) {
            SystemParams q = random_params(rng);
            double t = 20 * u(rng);
            Vec ref = oracle_column(q, 1, t);
            AmplitudeTriple r = bright_amplitudes(q, t);
            CHECK(std::abs(r.a - ref(1)) < 1e-10);
            CHECK(std::abs(r.b - ref(3)) < 1e-10);
            CHECK(std::abs(r.c - ref(5)) < 1e-10);
        }
        p.kappa = 0.1;
        CHECK_THROWS_AS(bright_amplitudes(p, 1.0), std::domain_error);
    }

    TEST_CASE("dark amplitudes") {
        SystemParams p;
        p.omega_amp = 1.3;
        p.delta = 2.1;
        auto [a0, b0] = dark_amplitudes(p, 0.0);
        CHECK(std::abs(a0 - 1.0) < 1e-15);
        CHECK(std::abs(b0) < 1e-15);
        const double nup = derived_frequencies(p).nu_prime;
        for (int l = 1; l <= 3; ++l) {
            auto [a, b] = dark_amplitudes(p, l * kPi / nup);
            CHECK(std::abs(std::abs(a) - 1.0) < 1e-12);
            CHECK(std::abs(b) < 1e-12);
        }
        std::mt19937_64 rng(4);
        std::uniform_real_distribution<double> u(0, 1);
        for (int trial = 0; trial < 20; ++trial) {
            SystemParams q = random_params(rng);
            q.kappa = 0.3;
            if (trial % 2) q.gamma0 = 0.2 * u(rng);
            double t = 20 * u(rng);
            Vec ref = oracle_column(q, 0, t);
            auto [a, b] = dark_amplitudes(q, t);
            CHECK(std::abs(a - ref(0)) < 1e-10);
            CHECK(std::abs(b - ref(2)) < 1e-10);
        }
    }

    TEST_CASE("sigma22 population") {
        SystemParams p;
        p.omega_amp = 0.7;
        CHECK(sigma22_population(p, 0.0) == 0.0);
        CHECK(sigma22_population(p, kPi / (2 * 0.7)) == doctest::Approx(1.0).epsilon(1e-14));
        std::mt19937_64 rng(8);
        std::uniform_real_distribution<double> u(0, 1);
        for (int trial = 0; trial < 50; ++trial) {
            SystemParams q = random_params(rng);
            double t = 30 * u(rng);
            CHECK(std::abs(sigma22_population(q, t) - std::norm(dark_amplitudes(q, t).second)) < 1e-12);
        }
    }

    TEST_CASE("perturbative damped amplitudes") {
        SystemParams p;
        p.omega_amp = 1;
        p.omega_phase = wrap_phase(1.3 + kPi);  // Phi = 1.3
        p.delta = 9.9;
        // kappa = 0 reduces to the exact amplitudes
        for (double t : {0.3, 2.0, 7.7, 15.0}) {
            AmplitudeTriple k0 = bright_amplitudes_kappa(p, t), ex = bright_amplitudes(p, t);
            CHECK(std::abs(k0.a - ex.a) < 1e-12);
            CHECK(std::abs(k0.b - ex.b) < 1e-12);
            CHECK(std::abs(k0.c - ex.c) < 1e-12);
        }
        p.kappa = 1e-3;
        const double eta = derived_frequencies(p).eta;
        const double tpi = detuning_family(25, 1).t_pi;
        Vec ref = oracle_column(p, 1, tpi);
        double err = std::abs(std::abs(bright_amplitudes_kappa(p, tpi).a) - std::abs(ref(1)));
        // eta^2 plus the residual from leading-order decay rates, kappa t (g/Delta)^2
        CHECK(err < 10 * eta * eta + p.kappa * tpi / (p.delta * p.delta));
        const double nu = derived_frequencies(p).nu;
        for (int i = 1; i <= 100; ++i) {
            double t = 3 * kPi / nu * i / 101.0;
            CHECK(std::norm(bright_amplitudes_kappa(p, t).c) > 0.0);
        }
        Diagnostics d;
        SystemParams small = p;
        small.delta = 2;
        bright_amplitudes_kappa(small, 1.0, &d);
        CHECK_FALSE(d.empty());
    }

    TEST_CASE("simplified damped amplitudes") {
        SystemParams p;
        p.omega_amp = 1;
        p.omega_phase = kPi;
        p.delta = 9.9;
        p.kappa = 2e-3;
        AmplitudeTriple z = bright_amplitudes_simplified(p, 0.0);
        CHECK(std::abs(z.a - 1.0) < 1e-15);
        CHECK(std::abs(z.b) < 1e-15);
        DerivedFrequencies f = derived_frequencies(p);
        double t0 = (kPi - std::atan(1.0 / (2 * f.eta))) / f.delta_small;
        CHECK(std::abs(bright_amplitudes_simplified(p, t0).a) < 1e-12);
        // kappa -> 0: |b| -> 1 at theta pi/(2 delta)
        p.kappa = 1e-12;
        f = derived_frequencies(p);
        CHECK(std::abs(std::abs(bright_amplitudes_simplified(p, kPi / (2 * f.delta_small)).b) - 1.0) < 1e-9);
    }

    TEST_CASE("RWA error bound") {
        SystemParams p;
        p.omega_amp = 633;
        CHECK(rwa_error_bound(p).eps1 < 1e-5);
        CHECK(rwa_error_bound(p).eps2 == 0.0);
        p.omega_amp = 3e4;
        p.omega_sum = 7.6e7;
        CHECK(rwa_error_bound(p).eps2 < 1e-6);
        SystemParams q = p;
        q.omega_amp = 6e4;
        CHECK(rwa_error_bound(q).eps2 == doctest::Approx(4 * rwa_error_bound(p).eps2));
        CHECK(rwa_error_bound(q).eps1 < rwa_error_bound(p).eps1);
        p.omega_amp = 0;
        CHECK_THROWS_AS(rwa_error_bound(p), std::domain_error);
    }

    TEST_CASE("population transfer condition on the family") {
        for (auto [k, th] : {std::pair{1, 1}, {25, 1}, {60, 1}, {63, 17}, {4, 3}}) {
            FamilyPoint fp = detuning_family(k, th);
            CHECK(std::abs(std::cos(fp.delta * fp.t_pi / 2) * std::cos(fp.nu * fp.t_pi) + 1.0) < 1e-9);
        }
    }
}
