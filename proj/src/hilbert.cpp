#include "veemap/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace veemap {

double wrap_phase(double phi) {
    double r = std::fmod(phi, kTwoPi);
    if (r < 0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r;
}

void SystemParams::validate() const {
    auto fail = [](const std::string& m) { throw std::domain_error(m); };
    const double fields[] = {g, omega_amp, omega_phase, delta, kappa, gamma0, gamma1, g_phase};
    for (double v : fields)
        if (!std::isfinite(v)) fail("non-finite system parameter");
    if (!(g > 0)) fail("g must be > 0");
    if (omega_amp < 0) fail("omega_amp must be >= 0");
    if (kappa < 0) fail("kappa must be >= 0");
    if (gamma0 < 0) fail("gamma0 must be >= 0");
    if (gamma1 < 0) fail("gamma1 must be >= 0");
    if (omega_phase < 0 || omega_phase >= kTwoPi) fail("omega_phase must lie in [0, 2pi)");
    if (g_phase < 0 || g_phase >= kTwoPi) fail("g_phase must lie in [0, 2pi)");
    if (omega_sum) {
        if (!std::isfinite(*omega_sum) || *omega_sum <= 0) fail("omega_sum must be > 0");
        double scale = std::max(omega_amp, std::abs(delta));
        if (*omega_sum < 10.0 * scale)
            fail("omega_sum must be >= 10*max(omega_amp, |delta|) for the counter-rotating model");
    }
}

FockBasis::FockBasis(int n_max) : n_max_(n_max) {
    if (n_max < 0) throw std::domain_error("n_max must be >= 0");
}

FockBasis FockBasis::for_dimension(long dim) {
    if (dim < 3 || dim % 3 != 0) throw std::domain_error("state dimension is not 3*(n_max+1)");
    return FockBasis(static_cast<int>(dim / 3 - 1));
}

int FockBasis::index(int j, int n) const {
    if (j < 0 || j > 2) throw std::domain_error("atomic level must be 0, 1 or 2");
    if (n < 0 || n > n_max_) throw std::domain_error("photon number outside the cutoff");
    return 3 * n + j;
}

std::pair<int, int> FockBasis::level(int i) const {
    if (i < 0 || i >= dim()) throw std::domain_error("basis index out of range");
    return {i % 3, i / 3};
}

std::string FockBasis::label(int i) const {
    auto [j, n] = level(i);
    return std::to_string(j) + std::to_string(n);
}

int basis_index(int j, int n, const FockBasis& basis) { return basis.index(j, n); }

cplx StateVector::amp(int j, int n) const {
    long i = 3L * n + j;
    return i < amplitudes.size() ? amplitudes(i) : cplx(0.0);
}

OperatorMatrix build_effective_hamiltonian(const SystemParams& p, const FockBasis& basis) {
    p.validate();
    const int d = basis.dim();
    const cplx Om = p.omega();
    const cplx gc = p.coupling();
    const cplx I(0.0, 1.0);
    Mat H = Mat::Zero(d, d);
    for (int n = 0; n <= basis.n_max(); ++n) {
        int i0 = basis.index(0, n), i1 = basis.index(1, n), i2 = basis.index(2, n);
        H(i2, i2) += -p.delta;
        H(i0, i2) += Om;
        H(i2, i0) += std::conj(Om);
        if (n >= 1) {
            int j1 = basis.index(1, n - 1);
            double s = std::sqrt(double(n));
            H(j1, i2) += gc * s;
            H(i2, j1) += std::conj(gc) * s;
        }
        H(i0, i0) += -I * p.gamma0;
        H(i1, i1) += -I * p.gamma1;
        for (int i : {i0, i1, i2}) H(i, i) += -I * (p.kappa * n);
    }
    OperatorMatrix out;
    out.matrix = std::move(H);
    out.hermitian = p.lossless();
    return out;
}

Mat counter_rotating_part(const SystemParams& p, const FockBasis& basis) {
    const int d = basis.dim();
    const cplx Om = p.omega();
    const cplx gc = p.coupling();
    Mat C = Mat::Zero(d, d);
    for (int n = 0; n <= basis.n_max(); ++n) {
        // Omega sigma_12
        C(basis.index(1, n), basis.index(2, n)) += Om;
        // g* a^dagger sigma_02 : |2,n> -> |0,n+1>
        if (n + 1 <= basis.n_max())
            C(basis.index(0, n + 1), basis.index(2, n)) += std::conj(gc) * std::sqrt(double(n + 1));
    }
    return C;
}

OperatorMatrix build_full_hamiltonian(const SystemParams& p, const FockBasis& basis, double t) {
    if (!p.omega_sum) throw ConfigurationError("omega_sum is required for the counter-rotating Hamiltonian");
    OperatorMatrix out = build_effective_hamiltonian(p, basis);
    if (basis.n_max() < 2) {
        std::ostringstream os;
        os << "n_max=" << basis.n_max() << " truncates counter-rotating photon creation (need >= 2)";
        out.warnings.push_back(os.str());
    }
    const double w = *p.omega_sum;
    const cplx ph = std::polar(1.0, w * t);
    Mat C = counter_rotating_part(p, basis);
    out.matrix += ph * C + std::conj(ph) * C.adjoint();
    return out;
}

StateVector initial_state(cplx alpha, cplx beta, const FockBasis& basis) {
    double n2 = std::norm(alpha) + std::norm(beta);
    if (n2 == 0.0 || !std::isfinite(n2)) throw std::domain_error("initial qubit amplitudes are zero");
    StateVector s;
    s.amplitudes = Vec::Zero(basis.dim());
    if (std::abs(n2 - 1.0) > 1e-10) {
        double k = 1.0 / std::sqrt(n2);
        alpha *= k;
        beta *= k;
        s.renormalized = true;
    }
    s.amplitudes(basis.index(1, 0)) = alpha;
    s.amplitudes(basis.index(0, 0)) = beta;
    return s;
}

StateVector embed(const StateVector& psi, const FockBasis& target) {
    StateVector out;
    out.amplitudes = Vec::Zero(target.dim());
    long n = std::min<long>(psi.amplitudes.size(), target.dim());
    out.amplitudes.head(n) = psi.amplitudes.head(n);
    out.renormalized = psi.renormalized;
    return out;
}

}  // namespace veemap
