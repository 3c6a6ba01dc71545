#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>

#include "veemap/hilbert.hpp"
#include "veemap/plan.hpp"
#include "veemap/propagate.hpp"

namespace veemap {

// Flat key = value document with optional [section] headers, '#' comments,
// numbers, true/false and quoted or bare strings.
//
//   [system]  g kappa gamma0 gamma1 omega_sum g_phase
//   [plan]    k theta omega1 delta t1 t_pi phi_omega Phi damped
//   [run]     mode n_chi n_phi tol seed budget threads out
//
// Keys may also appear before any section header.
struct RunConfig {
    SystemParams system;

    int k = 25;
    int theta = 1;
    double omega1 = 100.0;
    // explicit plan fields; when all five are present no design step is run
    std::optional<double> delta, t1, t_pi, phi_omega, Phi;
    bool damped = false;

    Mode mode = Mode::rwa;
    int n_chi = 64;
    int n_phi = 64;
    double tol = 1e-10;
    std::uint64_t seed = 1;
    int budget = 3000;
    int threads = 0;  // 0: VEEMAP_THREADS or hardware concurrency
    std::string out;

    bool explicit_plan() const { return delta && t1 && t_pi && phi_omega && Phi; }
    // designed (damping-corrected when damped or kappa > 0) or explicit
    ProtocolPlan plan() const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// plan file: [system] and [plan] sections, round-trips through parse_config
std::string format_plan(const ProtocolPlan& plan, const SystemParams& p);

Mode parse_mode(const std::string& s);
const char* mode_name(Mode m);

}  // namespace veemap
