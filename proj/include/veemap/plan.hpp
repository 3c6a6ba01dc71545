#pragma once

namespace veemap {

// Two-stage pulse program. Stage A: Omega = omega1 e^{i phi_omega} for t1.
// Stage B: Omega = -g e^{i Phi} for t_pi.
struct ProtocolPlan {
    int k = 0;
    int theta = 1;
    double delta = 0.0;
    double t1 = 0.0;
    double t_pi = 0.0;
    double omega1 = 0.0;
    double phi_omega = 0.0;
    double Phi = 0.0;
    bool damped = false;

    double quality() const { return t_pi > 0 ? t1 / t_pi : 0.0; }
    double duration() const { return t1 + t_pi; }
    void validate() const;  // durations >= 0 and finite, theta odd
};

}  // namespace veemap
