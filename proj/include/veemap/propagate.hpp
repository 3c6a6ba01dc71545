#pragma once

#include <vector>

#include "veemap/hilbert.hpp"
#include "veemap/plan.hpp"

namespace veemap {

enum class Mode { rwa, full };

struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> populations;  // [time][basis index]
    std::vector<double> norms;
};

// e^{-iHt}
Mat propagator(const OperatorMatrix& H, double t);
StateVector evolve_const(const OperatorMatrix& H, const StateVector& psi, double t);

struct TimedepStats {
    long accepted = 0;
    long rejected = 0;
};

// Dormand-Prince 5(4); local error per unit time <= tol, step <= (2pi/omega_sum)/20.
// The basis is taken from the dimension of psi.
StateVector evolve_timedep(const SystemParams& p, const StateVector& psi, double t0, double t1, double tol,
                           TimedepStats* stats = nullptr);

Trajectory sample_trajectory(const SystemParams& p, const StateVector& psi0, double t_max, int n_points,
                             Mode mode, double tol = 1e-10);

// Stage parameters as used by run_protocol.
SystemParams stage_a_params(const ProtocolPlan& plan, const SystemParams& p);
SystemParams stage_b_params(const ProtocolPlan& plan, const SystemParams& p);

struct ProtocolOptions {
    double tol = 1e-10;
    int n_max_full = 3;        // starting cutoff for full mode
    int n_max_full_limit = 8;  // give up beyond this
    double converge = 1e-8;    // population agreement between n_max and n_max+1
};

// Unnormalized final state. RWA keeps psi0's basis; full mode returns in the converged cutoff.
StateVector run_protocol(const ProtocolPlan& plan, const SystemParams& p, const StateVector& psi0, Mode mode,
                         const ProtocolOptions& opt = {}, Diagnostics* diag = nullptr);

// Both stages sampled on one uniform grid over [0, t1 + t_pi].
Trajectory sample_protocol(const ProtocolPlan& plan, const SystemParams& p, const StateVector& psi0,
                           int n_points, Mode mode, double tol = 1e-10);

}  // namespace veemap
