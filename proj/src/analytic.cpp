#include "veemap/analytic.hpp"

#include <cmath>
#include <sstream>

namespace veemap {

namespace {
const cplx I(0.0, 1.0);
}

double heaviside(double x) { return x > 0 ? 1.0 : (x < 0 ? 0.0 : 0.5); }

DerivedFrequencies derived_frequencies(const SystemParams& p) {
    DerivedFrequencies f;
    const double h = p.delta / 2.0, om2 = p.omega_amp * p.omega_amp, g2 = p.g * p.g;
    f.nu = std::sqrt(h * h + om2 + g2);
    f.nu_prime = std::sqrt(h * h + om2);
    f.nu_prime_pi = std::sqrt(h * h + g2);
    f.delta_small = (2.0 * f.nu - std::abs(p.delta)) / 4.0;
    f.eta = p.kappa * std::abs(p.delta) / (4.0 * g2);
    f.omega_plus = 2.0 * f.nu + p.delta;
    f.omega_minus = 2.0 * f.nu - p.delta;
    f.xi_plus = heaviside(p.delta);
    f.xi_minus = heaviside(-p.delta);
    f.eps = p.delta > 0 ? 1.0 : (p.delta < 0 ? -1.0 : 0.0);
    f.Gamma = p.gamma0;
    return f;
}

AmplitudeTriple bright_amplitudes(const SystemParams& p, double t) {
    if (!p.lossless()) throw std::domain_error("bright_amplitudes needs kappa = gamma0 = gamma1 = 0");
    const DerivedFrequencies f = derived_frequencies(p);
    const cplx Om = p.omega(), gc = p.coupling();
    const double s = std::norm(Om) + std::norm(gc);
    const cplx rot = std::exp(I * (p.delta * t / 2.0));
    const cplx ft = 1.0 + rot * (I * p.delta / (2.0 * f.nu) * std::sin(f.nu * t) - std::cos(f.nu * t));
    AmplitudeTriple r;
    r.a = 1.0 - std::norm(gc) / s * ft;
    r.b = -Om * std::conj(gc) / s * ft;
    r.c = -I * std::conj(gc) / f.nu * rot * std::sin(f.nu * t);
    return r;
}

std::pair<cplx, cplx> dark_amplitudes(const SystemParams& p, double t) {
    // 2x2 block [[-i g0, Om], [Om*, -D]] on (|00>, |20>). Written around the mean
    // diagonal so that gamma0 = 0 gives the real nu' rotation with the e^{iDt/2} factor.
    const cplx Om = p.omega();
    const cplx mean = (-I * p.gamma0 - p.delta) / 2.0;
    const cplx hd = (p.delta - I * p.gamma0) / 2.0;  // (H00 - H22)/2
    const cplx nup = std::sqrt(hd * hd + std::norm(Om));
    const cplx glob = std::exp(-I * mean * t);
    cplx sinc_t;  // sin(nu' t)/nu'
    if (std::abs(nup) * t < 1e-8)
        sinc_t = t;
    else
        sinc_t = std::sin(nup * t) / nup;
    const cplx c = std::cos(nup * t);
    return {glob * (c - I * hd * sinc_t), glob * (-I * std::conj(Om) * sinc_t)};
}

double sigma22_population(const SystemParams& p, double t) {
    const double om2 = std::norm(p.omega());
    const double den = p.delta * p.delta + 4.0 * om2;
    if (den == 0.0) return 0.0;
    const double nup = std::sqrt(p.delta * p.delta / 4.0 + om2);
    const double s = std::sin(nup * t);
    return 4.0 * om2 / den * s * s;
}

namespace {

void regime_guard(const SystemParams& p, const DerivedFrequencies& f, Diagnostics* diag) {
    if (!diag) return;
    if (std::abs(p.delta) < 4.0 * p.g) {
        std::ostringstream os;
        os << "|delta|=" << std::abs(p.delta) << " < 4g, perturbative amplitudes are unreliable";
        diag->warn(os.str());
    }
    if (f.eta > 0.1) {
        std::ostringstream os;
        os << "eta=" << f.eta << " > 0.1, perturbative amplitudes are unreliable";
        diag->warn(os.str());
    }
    if (std::abs(p.omega_amp - p.g) > 1e-12 * p.g) diag->warn("|Omega| != g; formula assumes the pi-pulse stage");
}

// Phi from Om = -g e^{i Phi}
double stage_b_phase(const SystemParams& p) { return p.omega_phase - kPi - p.g_phase; }

}  // namespace

AmplitudeTriple bright_amplitudes_kappa(const SystemParams& p, double t, Diagnostics* diag) {
    const DerivedFrequencies f = derived_frequencies(p);
    regime_guard(p, f, diag);
    const double k = p.kappa, nu = f.nu, eta = f.eta;
    const cplx E1 = std::exp((I * f.omega_plus - k * f.xi_plus) * t / 2.0);
    const cplx E2 = std::exp(-(I * f.omega_minus + k * f.xi_minus) * t / 2.0);
    const double damp = std::exp(-k * t / 2.0);
    const cplx ePhi = std::polar(1.0, stage_b_phase(p));
    AmplitudeTriple r;
    r.a = damp * (E1 * f.omega_minus * (1.0 - 2.0 * I * eta * f.xi_minus) / (8.0 * nu) - I * eta * f.eps +
                  E2 * f.omega_plus * (1.0 + 2.0 * I * eta * f.xi_plus) / (8.0 * nu) + 0.5);
    r.b = -ePhi * damp * (E1 * f.omega_minus / (8.0 * nu) - 0.5 + E2 * f.omega_plus / (8.0 * nu));
    r.c = std::conj(p.coupling()) / (2.0 * nu) * std::exp((I * p.delta - k) * t / 2.0) *
          (std::exp(-(I * nu + k * f.xi_minus / 2.0) * t) - std::exp((I * nu - k * f.xi_plus / 2.0) * t));
    return r;
}

AmplitudeTriple bright_amplitudes_simplified(const SystemParams& p, double t, Diagnostics* diag) {
    const DerivedFrequencies f = derived_frequencies(p);
    regime_guard(p, f, diag);
    const double d = f.delta_small;
    const cplx rot = std::exp(-I * f.eps * d * t);
    const double damp = std::exp(-p.kappa * t / 2.0);
    AmplitudeTriple r;
    r.a = rot * damp * (std::cos(d * t) + 2.0 * f.eta * std::sin(d * t));
    r.b = I * f.eps * std::polar(1.0, stage_b_phase(p)) * rot * damp * std::sin(d * t);
    r.c = 0.0;
    return r;
}

RwaErrorBound rwa_error_bound(const SystemParams& p) {
    if (!(p.omega_amp > 0)) throw std::domain_error("rwa_error_bound needs omega_amp > 0");
    RwaErrorBound b;
    b.eps1 = std::pow(2.0 * p.g / p.omega_amp, 2);
    b.eps2 = p.omega_sum ? std::pow(2.0 * p.omega_amp / *p.omega_sum, 2) : 0.0;
    return b;
}

}  // namespace veemap
