#include "veemap/propagate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

namespace veemap {

void ProtocolPlan::validate() const {
    if (!std::isfinite(t1) || !std::isfinite(t_pi) || !std::isfinite(delta) || !std::isfinite(omega1) ||
        !std::isfinite(phi_omega) || !std::isfinite(Phi))
        throw std::domain_error("plan has non-finite fields");
    if (t1 < 0 || t_pi < 0) throw std::domain_error("plan durations must be >= 0");
    if (omega1 < 0) throw std::domain_error("plan omega1 must be >= 0");
    if (theta % 2 == 0) throw std::domain_error("theta must be odd");
}

Mat propagator(const OperatorMatrix& H, double t) {
    if (t < 0 || !std::isfinite(t)) throw std::domain_error("propagation time must be finite and >= 0");
    if (!H.matrix.allFinite()) throw NumericError("Hamiltonian has non-finite entries");
    const long d = H.matrix.rows();
    if (t == 0.0) return Mat::Identity(d, d);
    const cplx I(0.0, 1.0);
    if (H.hermitian) {
        Eigen::SelfAdjointEigenSolver<Mat> es(H.matrix);
        if (es.info() != Eigen::Success) throw NumericError("eigendecomposition failed");
        Eigen::VectorXcd ph = (-I * t * es.eigenvalues().cast<cplx>()).array().exp();
        return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
    }
    Mat A = (-I * t) * H.matrix;
    Mat U = A.exp();
    if (!U.allFinite()) throw NumericError("matrix exponential overflowed");
    return U;
}

StateVector evolve_const(const OperatorMatrix& H, const StateVector& psi, double t) {
    if (H.matrix.rows() != psi.amplitudes.size()) throw std::domain_error("dimension mismatch");
    StateVector out = psi;
    if (t == 0.0) {
        propagator(H, 0.0);  // still checks finiteness
        return out;
    }
    out.amplitudes = propagator(H, t) * psi.amplitudes;
    return out;
}

namespace {

struct TimedepRhs {
    Mat H0, C, Cd;
    double w;
    void operator()(double t, const Vec& y, Vec& dy) const {
        const cplx ph = std::polar(1.0, w * t);
        dy.noalias() = H0 * y;
        dy.noalias() += ph * (C * y);
        dy.noalias() += std::conj(ph) * (Cd * y);
        dy *= cplx(0.0, -1.0);
    }
};

}  // namespace

StateVector evolve_timedep(const SystemParams& p, const StateVector& psi, double t0, double t1, double tol,
                           TimedepStats* stats) {
    if (!p.omega_sum) throw ConfigurationError("omega_sum is required for time-dependent propagation");
    if (!(t1 > t0)) throw std::domain_error("evolve_timedep needs t1 > t0");
    if (!(tol >= 1e-12 && tol <= 1e-6)) throw std::domain_error("tol must lie in [1e-12, 1e-6]");
    const FockBasis basis = FockBasis::for_dimension(psi.dim());

    TimedepRhs f;
    f.H0 = build_effective_hamiltonian(p, basis).matrix;
    f.C = counter_rotating_part(p, basis);
    f.Cd = f.C.adjoint();
    f.w = *p.omega_sum;
    if (!f.H0.allFinite()) throw NumericError("Hamiltonian has non-finite entries");

    // Dormand-Prince tableau
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                            b6 = 11.0 / 84;
    static constexpr double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695, e4 = b4 - 393.0 / 640,
                            e5 = b5 + 92097.0 / 339200, e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;

    const double hmax = (kTwoPi / f.w) / 20.0;
    const long d = psi.dim();
    Vec y = psi.amplitudes, yn(d), err(d), tmp(d);
    Vec k1(d), k2(d), k3(d), k4(d), k5(d), k6(d), k7(d);
    double t = t0;
    double h = std::min(hmax, t1 - t0);
    f(t, y, k1);
    TimedepStats st;
    while (t < t1) {
        if (t + h > t1) h = t1 - t;
        if (h < 1e-15) {
            if (t1 - t < 1e-15) break;  // leftover from rounding
            throw StiffnessError("step size underflow in time-dependent propagation");
        }
        tmp = y + h * a21 * k1;
        f(t + c2 * h, tmp, k2);
        tmp = y + h * (a31 * k1 + a32 * k2);
        f(t + c3 * h, tmp, k3);
        tmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
        f(t + c4 * h, tmp, k4);
        tmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        f(t + c5 * h, tmp, k5);
        tmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        f(t + h, tmp, k6);
        yn = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        f(t + h, yn, k7);
        err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        double en = err.cwiseAbs().maxCoeff();
        if (!std::isfinite(en)) throw NumericError("non-finite state during integration");
        double allowed = tol * h;
        if (en <= allowed) {
            t += h;
            y.swap(yn);
            k1 = k7;
            ++st.accepted;
        } else {
            ++st.rejected;
        }
        double fac = en > 0 ? 0.9 * std::pow(allowed / en, 0.25) : 5.0;
        h = std::min(hmax, h * std::clamp(fac, 0.2, 5.0));
    }
    if (stats) *stats = st;
    StateVector out = psi;
    out.amplitudes = y;
    return out;
}

namespace {

void record(Trajectory& tr, double t, const Vec& y) {
    tr.times.push_back(t);
    std::vector<double> pop(y.size());
    for (long i = 0; i < y.size(); ++i) pop[i] = std::norm(y(i));
    tr.populations.push_back(std::move(pop));
    tr.norms.push_back(y.squaredNorm());
}

FockBasis full_basis_for(const StateVector& psi, int n_min) {
    int n = FockBasis::for_dimension(psi.dim()).n_max();
    return FockBasis(std::max(n, n_min));
}

}  // namespace

Trajectory sample_trajectory(const SystemParams& p, const StateVector& psi0, double t_max, int n_points, Mode mode,
                             double tol) {
    if (t_max < 0) throw std::domain_error("t_max must be >= 0");
    Trajectory tr;
    if (t_max == 0.0) {
        record(tr, 0.0, psi0.amplitudes);
        return tr;
    }
    if (n_points < 2) throw std::domain_error("n_points must be >= 2");
    const double dt = t_max / (n_points - 1);
    if (mode == Mode::rwa) {
        const FockBasis basis = FockBasis::for_dimension(psi0.dim());
        OperatorMatrix H = build_effective_hamiltonian(p, basis);
        Vec y = psi0.amplitudes;
        record(tr, 0.0, y);
        for (int i = 1; i < n_points; ++i) {
            double t = (i == n_points - 1) ? t_max : i * dt;
            y = propagator(H, t) * psi0.amplitudes;
            record(tr, t, y);
        }
        return tr;
    }
    StateVector s = embed(psi0, full_basis_for(psi0, 3));
    record(tr, 0.0, s.amplitudes);
    double t = 0.0;
    for (int i = 1; i < n_points; ++i) {
        double tn = (i == n_points - 1) ? t_max : i * dt;
        s = evolve_timedep(p, s, t, tn, tol);
        t = tn;
        record(tr, t, s.amplitudes);
    }
    return tr;
}

SystemParams stage_a_params(const ProtocolPlan& plan, const SystemParams& p) {
    SystemParams a = p;
    a.delta = plan.delta;
    a.omega_amp = plan.omega1;
    a.omega_phase = wrap_phase(plan.phi_omega);
    return a;
}

SystemParams stage_b_params(const ProtocolPlan& plan, const SystemParams& p) {
    SystemParams b = p;
    b.delta = plan.delta;
    b.omega_amp = p.g;
    b.omega_phase = wrap_phase(plan.Phi + kPi + p.g_phase);
    return b;
}

namespace {

StateVector run_full_at(const ProtocolPlan& plan, const SystemParams& p, const StateVector& psi0,
                        const FockBasis& basis, double tol) {
    StateVector s = embed(psi0, basis);
    if (plan.t1 > 0) s = evolve_timedep(stage_a_params(plan, p), s, 0.0, plan.t1, tol);
    if (plan.t_pi > 0) s = evolve_timedep(stage_b_params(plan, p), s, plan.t1, plan.t1 + plan.t_pi, tol);
    return s;
}

double population_gap(const StateVector& lo, const StateVector& hi) {
    double gap = 0.0;
    for (long i = 0; i < hi.dim(); ++i) {
        double a = i < lo.dim() ? std::norm(lo.amplitudes(i)) : 0.0;
        gap = std::max(gap, std::abs(a - std::norm(hi.amplitudes(i))));
    }
    return gap;
}

}  // namespace

StateVector run_protocol(const ProtocolPlan& plan, const SystemParams& p, const StateVector& psi0, Mode mode,
                         const ProtocolOptions& opt, Diagnostics* diag) {
    plan.validate();
    if (mode == Mode::rwa) {
        const FockBasis basis = FockBasis::for_dimension(psi0.dim());
        StateVector s = psi0;
        if (plan.t1 > 0) s = evolve_const(build_effective_hamiltonian(stage_a_params(plan, p), basis), s, plan.t1);
        if (plan.t_pi > 0)
            s = evolve_const(build_effective_hamiltonian(stage_b_params(plan, p), basis), s, plan.t_pi);
        return s;
    }
    if (!p.omega_sum) throw ConfigurationError("mode=full requires omega_sum");
    int n = full_basis_for(psi0, opt.n_max_full).n_max();
    StateVector lo = run_full_at(plan, p, psi0, FockBasis(n), opt.tol);
    for (; n < opt.n_max_full_limit; ++n) {
        StateVector hi = run_full_at(plan, p, psi0, FockBasis(n + 1), opt.tol);
        double gap = population_gap(lo, hi);
        if (gap <= opt.converge) return hi;
        if (diag) {
            std::ostringstream os;
            os << "photon cutoff " << n << " not converged (gap " << gap << "), raising";
            diag->warn(os.str());
        }
        lo = std::move(hi);
    }
    throw NumericError("photon cutoff did not converge up to n_max=" + std::to_string(opt.n_max_full_limit));
}

Trajectory sample_protocol(const ProtocolPlan& plan, const SystemParams& p, const StateVector& psi0, int n_points,
                           Mode mode, double tol) {
    plan.validate();
    const double T = plan.duration();
    Trajectory tr;
    if (T == 0.0) {
        record(tr, 0.0, psi0.amplitudes);
        return tr;
    }
    if (n_points < 2) throw std::domain_error("n_points must be >= 2");
    if (mode == Mode::rwa) {
        const FockBasis basis = FockBasis::for_dimension(psi0.dim());
        OperatorMatrix HA = build_effective_hamiltonian(stage_a_params(plan, p), basis);
        OperatorMatrix HB = build_effective_hamiltonian(stage_b_params(plan, p), basis);
        Vec after_a = propagator(HA, plan.t1) * psi0.amplitudes;
        for (int i = 0; i < n_points; ++i) {
            double t = (i == n_points - 1) ? T : T * i / (n_points - 1);
            Vec y = t <= plan.t1 ? Vec(propagator(HA, t) * psi0.amplitudes)
                                 : Vec(propagator(HB, t - plan.t1) * after_a);
            record(tr, t, y);
        }
        return tr;
    }
    if (!p.omega_sum) throw ConfigurationError("mode=full requires omega_sum");
    StateVector s = embed(psi0, full_basis_for(psi0, 3));
    const SystemParams pa = stage_a_params(plan, p), pb = stage_b_params(plan, p);
    record(tr, 0.0, s.amplitudes);
    double t = 0.0;
    for (int i = 1; i < n_points; ++i) {
        double tn = (i == n_points - 1) ? T : T * i / (n_points - 1);
        if (t < plan.t1) {
            double stop = std::min(tn, plan.t1);
            s = evolve_timedep(pa, s, t, stop, tol);
            t = stop;
        }
        if (tn > t) s = evolve_timedep(pb, s, t, tn, tol);
        t = tn;
        record(tr, t, s.amplitudes);
    }
    return tr;
}

}  // namespace veemap
