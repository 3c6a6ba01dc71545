#pragma once

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "veemap/errors.hpp"

namespace veemap {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// reduce to [0, 2pi)
double wrap_phase(double phi);

// All rates in units of g, times in units of 1/g.
struct SystemParams {
    double g = 1.0;
    double omega_amp = 0.0;
    double omega_phase = 0.0;
    double delta = 0.0;
    double kappa = 0.0;
    double gamma0 = 0.0;
    double gamma1 = 0.0;
    std::optional<double> omega_sum;
    double g_phase = 0.0;

    // throws std::domain_error naming the offending field
    void validate() const;

    cplx omega() const { return std::polar(omega_amp, omega_phase); }
    cplx coupling() const { return std::polar(g, g_phase); }
    bool lossless() const { return kappa == 0.0 && gamma0 == 0.0 && gamma1 == 0.0; }
};

class FockBasis {
public:
    explicit FockBasis(int n_max = 1);
    static FockBasis for_dimension(long dim);

    int n_max() const { return n_max_; }
    int dim() const { return 3 * (n_max_ + 1); }
    int index(int j, int n) const;
    std::pair<int, int> level(int i) const;  // inverse of index
    std::string label(int i) const;          // "jn", e.g. "21"

private:
    int n_max_;
};

int basis_index(int j, int n, const FockBasis& basis);

struct StateVector {
    Vec amplitudes;
    bool renormalized = false;

    double norm2() const { return amplitudes.squaredNorm(); }
    cplx amp(int j, int n) const;  // zero when (j, n) is beyond this vector's cutoff
    long dim() const { return amplitudes.size(); }
};

struct OperatorMatrix {
    Mat matrix;
    bool hermitian = false;
    std::vector<std::string> warnings;
};

OperatorMatrix build_effective_hamiltonian(const SystemParams& p, const FockBasis& basis);

// Counter-rotating terms at frequency omega_sum on top of the RWA matrix.
OperatorMatrix build_full_hamiltonian(const SystemParams& p, const FockBasis& basis, double t);

// The counter-rotating operator C; H(t) = H_rwa + e^{i w t} C + e^{-i w t} C^dagger.
Mat counter_rotating_part(const SystemParams& p, const FockBasis& basis);

StateVector initial_state(cplx alpha, cplx beta, const FockBasis& basis);

// copy amplitudes into a basis with a different cutoff (truncating or zero-padding)
StateVector embed(const StateVector& psi, const FockBasis& target);

}  // namespace veemap
