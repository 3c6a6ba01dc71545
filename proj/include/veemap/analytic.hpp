#pragma once

#include <utility>

#include "veemap/hilbert.hpp"

namespace veemap {

struct DerivedFrequencies {
    double nu = 0;           // sqrt((D/2)^2 + |Om|^2 + |g|^2)
    double nu_prime = 0;     // sqrt((D/2)^2 + |Om|^2)
    double nu_prime_pi = 0;  // sqrt((D/2)^2 + |g|^2)
    double delta_small = 0;  // (2 nu - |D|)/4
    double eta = 0;          // kappa |D| / (4 g^2)
    double omega_plus = 0, omega_minus = 0;
    double xi_plus = 0, xi_minus = 0;
    double eps = 0;
    double Gamma = 0;  // large-detuning estimate, gamma0
};

DerivedFrequencies derived_frequencies(const SystemParams& p);

// Heaviside with H(0) = 1/2
double heaviside(double x);

// amplitudes of |10>, |01>, |21> starting from |10>
struct AmplitudeTriple {
    cplx a, b, c;
};

AmplitudeTriple bright_amplitudes(const SystemParams& p, double t);

// (<00|psi>, <20|psi>) starting from |00>; gamma0 enters through a complex nu'
std::pair<cplx, cplx> dark_amplitudes(const SystemParams& p, double t);

double sigma22_population(const SystemParams& p, double t);

// First order in eta. Expects |Om| = g with Om = -g e^{i Phi}; Phi is read from omega_phase.
AmplitudeTriple bright_amplitudes_kappa(const SystemParams& p, double t, Diagnostics* diag = nullptr);
AmplitudeTriple bright_amplitudes_simplified(const SystemParams& p, double t, Diagnostics* diag = nullptr);

struct RwaErrorBound {
    double eps1 = 0;
    double eps2 = 0;
};

RwaErrorBound rwa_error_bound(const SystemParams& p);

}  // namespace veemap
