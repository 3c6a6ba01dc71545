#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "veemap/hilbert.hpp"
#include "veemap/plan.hpp"
#include "veemap/propagate.hpp"

namespace veemap {

// alpha = cos(chi/2), beta = e^{i phi} sin(chi/2)
struct InputQubit {
    double chi = 0;
    double phi_rel = 0;
    cplx alpha() const { return std::cos(chi / 2.0); }
    cplx beta() const { return std::polar(std::sin(chi / 2.0), phi_rel); }
};

struct FidelityReport {
    double F_min = 1.0;
    double F_grid = 1.0;  // before refinement
    InputQubit worst_input;
    double success_prob_at_worst = 1.0;
    int n_chi = 0, n_phi = 0;
    bool refined = false;
};

// target alpha|01> + beta|00>; returns (F, p_success)
std::pair<double, double> conditional_fidelity(const StateVector& psi, const InputQubit& in);

// target N (alpha*damping|01> + beta|00>)
double compensated_fidelity(const StateVector& psi, const InputQubit& in, double damping_factor);

// U|10> and U|00> for one plan; every input follows by linearity
struct BasisOutputs {
    StateVector out10;
    StateVector out00;
    StateVector combine(const InputQubit& in) const;
};

BasisOutputs propagate_basis(const ProtocolPlan& plan, const SystemParams& p, Mode mode,
                             const ProtocolOptions& opt = {});

// Fidelity against the (possibly attenuated) target, from cached outputs. Returns (F, p_success).
std::pair<double, double> fidelity_from_outputs(const BasisOutputs& o, const InputQubit& in,
                                                double damping_factor = 1.0);

FidelityReport min_fidelity_from_outputs(const BasisOutputs& o, int n_chi = 64, int n_phi = 64,
                                         double damping_factor = 1.0, bool refine = true);

FidelityReport min_fidelity(const ProtocolPlan& plan, const SystemParams& p, int n_chi = 64, int n_phi = 64,
                            Mode mode = Mode::rwa);

// Gamma = -ln|<00|U|00>| / t_pi from the simulated plan
double effective_dark_rate(const BasisOutputs& o, const ProtocolPlan& plan);

// exp(-(kappa+gamma0+gamma1) t_pi/2 + Gamma t_pi); equals exp(-(kappa-gamma0+gamma1) t_pi/2) when Gamma = gamma0
double v_damping_factor(const SystemParams& p, double t_pi, double Gamma);
// Lambda benchmark exp(-kappa t_pi/2)
double lambda_damping_factor(const SystemParams& p, double t_pi);

FidelityReport min_compensated_fidelity(const ProtocolPlan& plan, const SystemParams& p, int n_chi = 64,
                                        int n_phi = 64, Mode mode = Mode::rwa);

enum class Metric { conditional, compensated };

struct FreeSet {
    bool delta = true, t1 = true, t_pi = true, phi_omega = true, Phi = true;
    static FreeSet parse(const std::string& csv);  // "delta,t1,t_pi,phi_omega,Phi"
    int count() const { return int(delta) + int(t1) + int(t_pi) + int(phi_omega) + int(Phi); }
};

struct TuneOptions {
    int budget = 3000;
    std::uint64_t seed = 1;
    int restarts = 3;
    Metric metric = Metric::conditional;
    Mode mode = Mode::rwa;
    int n_chi = 64, n_phi = 64;
};

struct TuneResult {
    ProtocolPlan plan;
    double F_min = 0;
    double seed_F_min = 0;
    int evaluations = 0;
};

double plan_min_fidelity(const ProtocolPlan& plan, const SystemParams& p, Metric metric, Mode mode = Mode::rwa,
                         int n_chi = 64, int n_phi = 64);

TuneResult fine_tune(const ProtocolPlan& seed, const SystemParams& p, const FreeSet& free,
                     const TuneOptions& opt = {});

}  // namespace veemap
