#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "veemap/errors.hpp"
#include "veemap/plan.hpp"

namespace veemap {

struct FamilyPoint {
    double delta = 0;
    double t_pi = 0;
    double nu = 0;
};

// (D/2g)^2 = 2 z^2/(2z+1), z = k/theta, with |Om| = g during the pulse. Delta >= 0.
FamilyPoint detuning_family(int k, int theta);

struct DiophantineSolution {
    std::int64_t k, theta, l;
};

// k^2 + (theta+k)^2 = 2 l^2 over 1 <= k <= k_max, 1 <= theta <= theta_max, 1 <= l <= l_max.
// Only odd theta unless allow_even; theta = 0 is never admitted.
std::vector<DiophantineSolution> diophantine_scan(std::int64_t k_max, std::int64_t theta_max, std::int64_t l_max,
                                                  bool allow_even = false);

struct MappingSolution {
    int k = 0, theta = 1, l = 0;
    double delta = 0;
    double t_m = 0;
    double F_min = 0;
    double t_pi = 0;
    double t_pi_prime = 0;
    double spread() const { return t_m > 0 ? std::abs(t_pi - t_pi_prime) / t_m : 0.0; }
};

// Phase-flexible single-pulse fidelity min(|<01|U|10>|^2, |<00|U|00>|^2).
double single_pulse_min_fidelity(double delta, double t);

struct MappingScanAudit {
    long candidates = 0;                   // (k, theta) pairs with t_pi < t_limit
    std::vector<MappingSolution> passing;  // before detuning deduplication
};

std::vector<MappingSolution> approximate_mapping_scan(double t_limit, double F_threshold, double omega_stage = 1.0,
                                                      MappingScanAudit* audit = nullptr, int threads = 0);

struct PhaseLedger {
    double eta0_mod = 0, eta1_mod = 0;
    double theta0 = 0, theta1 = 0, phi0 = 0, phi1 = 0;
    double Theta = 0;
    int k_prime = 0;
    int m = 0;
    int l_prime = 0;
    // design quantities the ledger is built from
    double delta = 0, t1 = 0, t_pi = 0, omega1 = 0, phi_omega = 0;
};

PhaseLedger phase_ledger(int k, int theta, double omega1, Diagnostics* diag = nullptr);
// same, at an explicit (delta, t_pi) pair (used by the damped design)
PhaseLedger phase_ledger_at(double delta, double t_pi, double omega1, Diagnostics* diag = nullptr);

ProtocolPlan design_protocol(int k, int theta, double omega1, Diagnostics* diag = nullptr);
ProtocolPlan design_protocol_damped(int k, int theta, double omega1, double kappa, double gamma0, double gamma1,
                                    Diagnostics* diag = nullptr);

}  // namespace veemap
