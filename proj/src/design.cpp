#include "veemap/design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "veemap/hilbert.hpp"
#include "veemap/parallel.hpp"

namespace veemap {

FamilyPoint detuning_family(int k, int theta) {
    if (k < 0) throw std::domain_error("k must be >= 0");
    if (theta < 1 || theta % 2 == 0) throw std::domain_error("theta must be odd");
    const double z = double(k) / theta;
    FamilyPoint fp;
    fp.delta = 2.0 * std::sqrt(2.0 * z * z / (2.0 * z + 1.0));
    fp.nu = std::sqrt(fp.delta * fp.delta / 4.0 + 2.0);
    fp.t_pi = (theta + k) * kPi / fp.nu;
    return fp;
}

namespace {

std::int64_t isqrt(std::int64_t v) {
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(v)));
    while (r > 0 && r * r > v) --r;
    while ((r + 1) * (r + 1) <= v) ++r;
    return r;
}

}  // namespace

std::vector<DiophantineSolution> diophantine_scan(std::int64_t k_max, std::int64_t theta_max, std::int64_t l_max,
                                                  bool allow_even) {
    if (k_max < 1 || theta_max < 1 || l_max < 1) throw std::domain_error("scan bounds must be >= 1");
    // k^2 + (theta+k)^2 must fit comfortably in int64
    const long double top = static_cast<long double>(k_max + theta_max);
    if (2.0L * top * top > static_cast<long double>(std::numeric_limits<std::int64_t>::max()) / 2)
        throw std::overflow_error("diophantine bounds overflow 64-bit arithmetic");
    std::vector<DiophantineSolution> out;
    for (std::int64_t th = 1; th <= theta_max; ++th) {
        if (th % 2 == 0 && !allow_even) continue;
        for (std::int64_t k = 1; k <= k_max; ++k) {
            const std::int64_t s = k * k + (th + k) * (th + k);
            if (s % 2) continue;
            const std::int64_t l2 = s / 2;
            const std::int64_t l = isqrt(l2);
            if (l * l == l2 && l <= l_max) out.push_back({k, th, l});
        }
    }
    return out;
}

double single_pulse_min_fidelity(double delta, double t) {
    // |b|^2 from the bright triple at |Om| = g = 1, |d|^2 from the dark pair at nu'_pi
    const double nu = std::sqrt(delta * delta / 4.0 + 2.0);
    const cplx I(0.0, 1.0);
    const cplx rot = std::exp(I * (delta * t / 2.0));
    const cplx f = 1.0 + rot * (I * delta / (2.0 * nu) * std::sin(nu * t) - std::cos(nu * t));
    const double b2 = std::norm(f) / 4.0;
    const double np = std::sqrt(delta * delta / 4.0 + 1.0);
    const double s = std::sin(np * t);
    const double d2 = 1.0 - s * s / (np * np);
    return std::min(b2, d2);
}

namespace {

// maximize single_pulse_min_fidelity on [lo, hi]: dense sampling then golden section
std::pair<double, double> best_time(double delta, double lo, double hi, double t0) {
    auto F = [&](double t) { return single_pulse_min_fidelity(delta, t); };
    double bt = t0, bf = F(t0);
    const int n = 400;
    for (int i = 0; i <= n; ++i) {
        double t = lo + (hi - lo) * i / n;
        double v = F(t);
        if (v > bf) bf = v, bt = t;
    }
    const double step = (hi - lo) / n;
    double a = std::max(lo, bt - step), b = std::min(hi, bt + step);
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = F(c), fd = F(d);
    for (int it = 0; it < 80 && b - a > 1e-12; ++it) {
        if (fc > fd) {
            b = d, d = c, fd = fc;
            c = b - r * (b - a), fc = F(c);
        } else {
            a = c, c = d, fc = fd;
            d = a + r * (b - a), fd = F(d);
        }
    }
    double tm = (a + b) / 2.0, fm = F(tm);
    if (fm > bf) bf = fm, bt = tm;
    return {bt, bf};
}

std::string delta_key(double d) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.5e", d);
    return buf;
}

}  // namespace

std::vector<MappingSolution> approximate_mapping_scan(double t_limit, double F_threshold, double omega_stage,
                                                      MappingScanAudit* audit, int threads) {
    if (!(t_limit > 0)) throw std::domain_error("t_limit must be > 0");
    if (std::abs(omega_stage - 1.0) > 1e-12)
        throw std::domain_error("approximate mapping scan is defined for |Omega| = g");
    struct Cand {
        int k, theta;
        FamilyPoint fp;
    };
    std::vector<Cand> cands;
    // t_pi >= theta*pi/nu(0) bounds theta; for fixed theta t_pi grows with k
    for (int th = 1; th * kPi / std::sqrt(2.0) < t_limit; th += 2) {
        for (int k = 0;; ++k) {
            FamilyPoint fp = detuning_family(k, th);
            if (fp.t_pi >= t_limit) break;
            cands.push_back({k, th, fp});
        }
    }
    std::vector<MappingSolution> eval(cands.size());
    parallel_for(cands.size(), threads > 0 ? threads : default_threads(), [&](std::size_t i) {
        const Cand& c = cands[i];
        MappingSolution s;
        s.k = c.k;
        s.theta = c.theta;
        s.delta = c.fp.delta;
        s.t_pi = c.fp.t_pi;
        const double np = std::sqrt(c.fp.delta * c.fp.delta / 4.0 + 1.0);
        s.l = std::max(1, static_cast<int>(std::lround(c.fp.t_pi * np / kPi)));
        s.t_pi_prime = s.l * kPi / np;
        const double lo = std::min(s.t_pi, s.t_pi_prime), hi = std::max(s.t_pi, s.t_pi_prime);
        auto [tm, fm] = best_time(s.delta, lo, hi, (s.t_pi + s.t_pi_prime) / 2.0);
        s.t_m = tm;
        s.F_min = fm;
        eval[i] = s;
    });
    std::vector<MappingSolution> passing;
    for (const auto& s : eval)
        if (s.F_min >= F_threshold && s.t_m < t_limit) passing.push_back(s);
    auto order = [](const MappingSolution& a, const MappingSolution& b) {
        if (a.t_m != b.t_m) return a.t_m < b.t_m;
        if (a.k != b.k) return a.k < b.k;
        return a.theta < b.theta;
    };
    std::sort(passing.begin(), passing.end(), order);
    std::map<std::string, MappingSolution> by_delta;
    for (const auto& s : passing) by_delta.emplace(delta_key(s.delta), s);  // first = shortest
    std::vector<MappingSolution> out;
    for (auto& [key, s] : by_delta) out.push_back(s);
    std::sort(out.begin(), out.end(), order);
    if (audit) {
        audit->candidates = static_cast<long>(cands.size());
        audit->passing = passing;
    }
    return out;
}

PhaseLedger phase_ledger_at(double delta, double t_pi, double omega1, Diagnostics* diag) {
    if (!(omega1 >= 10.0)) throw std::domain_error("omega1 must be >= 10 g");
    if (diag && omega1 < 633.0) {
        std::ostringstream os;
        os << "omega1=" << omega1 << " < 633 g: stage-A leakage bound (2g/omega1)^2 exceeds 1e-5";
        diag->warn(os.str());
    }
    PhaseLedger L;
    L.delta = delta;
    L.t_pi = t_pi;
    L.omega1 = omega1;
    const double npi = std::sqrt(delta * delta / 4.0 + 1.0);
    const double n1 = std::sqrt(delta * delta / 4.0 + omega1 * omega1);
    const double y = npi * t_pi;
    const double sy = std::sin(y), cy = std::cos(y);

    double arg = 1.0 - 2.0 * n1 * n1 / (omega1 * omega1 * npi * npi) * sy * sy;
    if (arg < -1.0 - 1e-12 || arg > 1.0 + 1e-12) throw NumericError("stage-A duration has no real solution");
    arg = std::clamp(arg, -1.0, 1.0);
    L.t1 = std::acos(arg) / (2.0 * n1);
    const double x = n1 * L.t1;

    L.eta1_mod = std::abs(sy) / npi;
    L.eta0_mod = std::sqrt(cy * cy + delta * delta / 4.0) / npi;

    L.theta0 = std::atan2(-delta * std::sin(x), 2.0 * n1 * std::cos(x));
    L.phi0 = std::atan2(delta * sy, 2.0 * npi * cy);
    if (cy != 0.0) {
        const double plain = std::atan(delta / (2.0 * npi) * std::tan(y));
        L.k_prime = static_cast<int>(std::lround((L.phi0 - plain) / kPi));
    }
    L.m = sy > 0 ? 0 : 1;
    const double half = delta / 2.0 * (L.t1 + t_pi);
    L.phi_omega = wrap_phase(half + L.m * kPi);
    L.Theta = wrap_phase(half + L.theta0 - L.phi0);
    L.theta1 = wrap_phase(1.5 * kPi - L.phi_omega);
    // Phi = Theta; g taken real
    L.phi1 = wrap_phase((sy > 0 ? 1.5 * kPi : 0.5 * kPi) - L.Theta);
    L.l_prime = static_cast<int>(std::lround((L.phi0 - L.phi1 + 1.5 * kPi - L.phi_omega - L.theta0) / kTwoPi));
    return L;
}

PhaseLedger phase_ledger(int k, int theta, double omega1, Diagnostics* diag) {
    FamilyPoint fp = detuning_family(k, theta);
    return phase_ledger_at(fp.delta, fp.t_pi, omega1, diag);
}

ProtocolPlan design_protocol(int k, int theta, double omega1, Diagnostics* diag) {
    PhaseLedger L = phase_ledger(k, theta, omega1, diag);
    ProtocolPlan p;
    p.k = k;
    p.theta = theta;
    p.delta = L.delta;
    p.t1 = L.t1;
    p.t_pi = L.t_pi;
    p.omega1 = omega1;
    p.phi_omega = L.phi_omega;
    p.Phi = L.Theta;
    return p;
}

ProtocolPlan design_protocol_damped(int k, int theta, double omega1, double kappa, double gamma0, double gamma1,
                                    Diagnostics* diag) {
    if (kappa < 0) throw std::domain_error("kappa must be >= 0");
    if (gamma0 < 0) throw std::domain_error("gamma0 must be >= 0");
    if (gamma1 < 0) throw std::domain_error("gamma1 must be >= 0");
    if (kappa == 0.0) {
        ProtocolPlan p = design_protocol(k, theta, omega1, diag);
        p.damped = true;
        return p;
    }
    const FamilyPoint fp = detuning_family(k, theta);
    const double eta = kappa * fp.delta / 4.0;
    if (diag && eta > 0.1) {
        std::ostringstream os;
        os << "eta=" << eta << " > 0.1, linearised damping corrections are unreliable";
        diag->warn(os.str());
    }
    const double dk = fp.delta * (1.0 - 2.0 * eta / (theta * kPi));
    const double nu = std::sqrt(dk * dk / 4.0 + 2.0);
    const double ds = (2.0 * nu - dk) / 4.0;
    const double tpk = theta * kPi / (2.0 * ds) + 2.0 * eta / ds;
    PhaseLedger L = phase_ledger_at(dk, tpk, omega1, diag);
    const double eps = dk > 0 ? 1.0 : (dk < 0 ? -1.0 : 0.0);
    ProtocolPlan p;
    p.k = k;
    p.theta = theta;
    p.delta = dk;
    p.t1 = L.t1;
    p.t_pi = tpk;
    p.omega1 = omega1;
    p.phi_omega = wrap_phase(L.phi_omega + eps * 2.0 * eta);
    p.Phi = wrap_phase(L.Theta + eps * 2.0 * eta);
    p.damped = true;
    return p;
}

}  // namespace veemap
