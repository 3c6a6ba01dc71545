#include "veemap/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "veemap/nelder_mead.hpp"

namespace veemap {

namespace {

struct Projection {
    cplx c01, c00;
    double norm2;
};

Projection project(const StateVector& psi) {
    const double n2 = psi.norm2();
    if (!(n2 > 0.0) || !std::isfinite(n2)) throw PostSelectionError("final state has zero norm, post-selection impossible");
    return {psi.amp(0, 1), psi.amp(0, 0), n2};
}

double target_fidelity(const Projection& pr, cplx alpha, cplx beta, double damping) {
    const double tn2 = std::norm(alpha) * damping * damping + std::norm(beta);
    if (!(tn2 > 0.0)) throw std::domain_error("target state has zero norm");
    const cplx ov = std::conj(alpha) * damping * pr.c01 + std::conj(beta) * pr.c00;
    return std::clamp(std::norm(ov) / (tn2 * pr.norm2), 0.0, 1.0);
}

}  // namespace

std::pair<double, double> conditional_fidelity(const StateVector& psi, const InputQubit& in) {
    Projection pr = project(psi);
    return {target_fidelity(pr, in.alpha(), in.beta(), 1.0), pr.norm2};
}

double compensated_fidelity(const StateVector& psi, const InputQubit& in, double damping_factor) {
    if (!(damping_factor > 0.0 && damping_factor <= 1.0)) throw std::domain_error("damping_factor must lie in (0, 1]");
    return target_fidelity(project(psi), in.alpha(), in.beta(), damping_factor);
}

StateVector BasisOutputs::combine(const InputQubit& in) const {
    StateVector s;
    s.amplitudes = in.alpha() * out10.amplitudes + in.beta() * out00.amplitudes;
    return s;
}

BasisOutputs propagate_basis(const ProtocolPlan& plan, const SystemParams& p, Mode mode, const ProtocolOptions& opt) {
    const FockBasis basis(1);
    BasisOutputs o;
    if (mode == Mode::rwa) {
        // one propagator serves both columns
        plan.validate();
        Mat U = Mat::Identity(basis.dim(), basis.dim());
        if (plan.t1 > 0) U = propagator(build_effective_hamiltonian(stage_a_params(plan, p), basis), plan.t1);
        if (plan.t_pi > 0)
            U = propagator(build_effective_hamiltonian(stage_b_params(plan, p), basis), plan.t_pi) * U;
        o.out10.amplitudes = U.col(basis.index(1, 0));
        o.out00.amplitudes = U.col(basis.index(0, 0));
        return o;
    }
    o.out10 = run_protocol(plan, p, initial_state(1.0, 0.0, basis), mode, opt);
    o.out00 = run_protocol(plan, p, initial_state(0.0, 1.0, basis), mode, opt);
    // common cutoff for superpositions
    long d = std::max(o.out10.dim(), o.out00.dim());
    FockBasis fb = FockBasis::for_dimension(d);
    o.out10 = embed(o.out10, fb);
    o.out00 = embed(o.out00, fb);
    return o;
}

namespace {

// All quantities F needs, reduced to a handful of scalars.
struct Reduced {
    cplx a01, a00, b01, b00;  // <01|out10>, <00|out10>, <01|out00>, <00|out00>
    double n10, n00;
    cplx cross;  // <out10|out00>

    explicit Reduced(const BasisOutputs& o)
        : a01(o.out10.amp(0, 1)), a00(o.out10.amp(0, 0)), b01(o.out00.amp(0, 1)), b00(o.out00.amp(0, 0)),
          n10(o.out10.norm2()), n00(o.out00.norm2()), cross(o.out10.amplitudes.dot(o.out00.amplitudes)) {}

    // (F, p)
    std::pair<double, double> eval(cplx al, cplx be, double c) const {
        const double p = std::norm(al) * n10 + std::norm(be) * n00 + 2.0 * std::real(std::conj(al) * be * cross);
        if (!(p > 0.0)) throw PostSelectionError("final state has zero norm, post-selection impossible");
        const cplx psi01 = al * a01 + be * b01, psi00 = al * a00 + be * b00;
        const double tn2 = std::norm(al) * c * c + std::norm(be);
        const cplx ov = std::conj(al) * c * psi01 + std::conj(be) * psi00;
        return {std::clamp(std::norm(ov) / (tn2 * p), 0.0, 1.0), p};
    }
};

}  // namespace

std::pair<double, double> fidelity_from_outputs(const BasisOutputs& o, const InputQubit& in, double damping_factor) {
    return Reduced(o).eval(in.alpha(), in.beta(), damping_factor);
}

FidelityReport min_fidelity_from_outputs(const BasisOutputs& o, int n_chi, int n_phi, double damping_factor,
                                         bool refine) {
    if (n_chi < 8 || n_phi < 8) throw std::domain_error("fidelity grid needs n_chi, n_phi >= 8");
    if (!(damping_factor > 0.0 && damping_factor <= 1.0)) throw std::domain_error("damping_factor must lie in (0, 1]");
    const Reduced r(o);
    auto F = [&](double chi, double phi) {
        InputQubit q{chi, phi};
        return r.eval(q.alpha(), q.beta(), damping_factor).first;
    };
    FidelityReport rep;
    rep.n_chi = n_chi;
    rep.n_phi = n_phi;
    double best = 2.0;
    InputQubit arg;
    for (int i = 0; i < n_chi; ++i) {
        const double chi = kPi * i / (n_chi - 1);
        for (int j = 0; j < n_phi; ++j) {
            const double phi = kTwoPi * j / n_phi;
            double v = F(chi, phi);
            if (v < best) best = v, arg = {chi, phi};
        }
    }
    rep.F_grid = best;
    rep.F_min = best;
    rep.worst_input = arg;
    if (refine) {
        SimplexOptions so;
        so.max_evals = 600;
        so.xtol = 1e-10;
        so.ftol = 0.0;
        auto obj = [&](const std::vector<double>& x) {
            double chi = std::clamp(x[0], 0.0, kPi);
            return F(chi, x[1]);
        };
        SimplexResult sr = nelder_mead(obj, {arg.chi, arg.phi_rel}, {kPi / (n_chi - 1), kTwoPi / n_phi}, so);
        rep.refined = true;
        if (sr.f < rep.F_min) {
            rep.F_min = sr.f;
            rep.worst_input = {std::clamp(sr.x[0], 0.0, kPi), wrap_phase(sr.x[1])};
        }
    }
    rep.success_prob_at_worst =
        r.eval(rep.worst_input.alpha(), rep.worst_input.beta(), damping_factor).second;
    return rep;
}

FidelityReport min_fidelity(const ProtocolPlan& plan, const SystemParams& p, int n_chi, int n_phi, Mode mode) {
    return min_fidelity_from_outputs(propagate_basis(plan, p, mode), n_chi, n_phi, 1.0);
}

double effective_dark_rate(const BasisOutputs& o, const ProtocolPlan& plan) {
    if (!(plan.t_pi > 0)) throw std::domain_error("effective dark rate needs t_pi > 0");
    const double a = std::abs(o.out00.amp(0, 0));
    if (!(a > 0)) throw NumericError("dark amplitude vanished");
    return -std::log(a) / plan.t_pi;
}

double v_damping_factor(const SystemParams& p, double t_pi, double Gamma) {
    return std::exp(-(p.kappa + p.gamma0 + p.gamma1) * t_pi / 2.0 + Gamma * t_pi);
}

double lambda_damping_factor(const SystemParams& p, double t_pi) { return std::exp(-p.kappa * t_pi / 2.0); }

namespace {

FidelityReport compensated_report(const BasisOutputs& o, const ProtocolPlan& plan, const SystemParams& p, int n_chi,
                                  int n_phi) {
    const double G = effective_dark_rate(o, plan);
    const double c = std::clamp(v_damping_factor(p, plan.t_pi, G), 1e-300, 1.0);
    return min_fidelity_from_outputs(o, n_chi, n_phi, c);
}

}  // namespace

FidelityReport min_compensated_fidelity(const ProtocolPlan& plan, const SystemParams& p, int n_chi, int n_phi,
                                        Mode mode) {
    return compensated_report(propagate_basis(plan, p, mode), plan, p, n_chi, n_phi);
}

double plan_min_fidelity(const ProtocolPlan& plan, const SystemParams& p, Metric metric, Mode mode, int n_chi,
                         int n_phi) {
    BasisOutputs o = propagate_basis(plan, p, mode);
    if (metric == Metric::compensated) return compensated_report(o, plan, p, n_chi, n_phi).F_min;
    return min_fidelity_from_outputs(o, n_chi, n_phi, 1.0).F_min;
}

FreeSet FreeSet::parse(const std::string& csv) {
    FreeSet f{false, false, false, false, false};
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok.erase(0, tok.find_first_not_of(" \t"));
        tok.erase(tok.find_last_not_of(" \t") + 1);
        if (tok == "delta") f.delta = true;
        else if (tok == "t1") f.t1 = true;
        else if (tok == "t_pi") f.t_pi = true;
        else if (tok == "phi_omega") f.phi_omega = true;
        else if (tok == "Phi") f.Phi = true;
        else if (!tok.empty()) throw std::invalid_argument("unknown free coordinate '" + tok + "'");
    }
    if (f.count() == 0) throw std::invalid_argument("no free coordinates given");
    return f;
}

TuneResult fine_tune(const ProtocolPlan& seed, const SystemParams& p, const FreeSet& free, const TuneOptions& opt) {
    if (opt.budget < 100) throw std::domain_error("fine_tune budget must be >= 100");
    seed.validate();
    // (pointer into plan, base scale)
    std::vector<std::pair<double ProtocolPlan::*, double>> coords;
    if (free.delta) coords.push_back({&ProtocolPlan::delta, 1e-2});
    if (free.t1) coords.push_back({&ProtocolPlan::t1, 0.1 * std::max(seed.t1, 1e-6)});
    if (free.t_pi) coords.push_back({&ProtocolPlan::t_pi, 1e-2});
    if (free.phi_omega) coords.push_back({&ProtocolPlan::phi_omega, 1e-2});
    if (free.Phi) coords.push_back({&ProtocolPlan::Phi, 1e-2});
    const std::size_t n = coords.size();
    if (n == 0) throw std::invalid_argument("no free coordinates");

    int evals = 0;
    auto error_of = [&](const ProtocolPlan& pl) {
        ++evals;
        if (pl.t1 < 0 || pl.t_pi <= 0) return 1.0;
        return 1.0 - plan_min_fidelity(pl, p, opt.metric, opt.mode, opt.n_chi, opt.n_phi);
    };

    TuneResult res;
    const double seed_err = error_of(seed);
    res.seed_F_min = 1.0 - seed_err;
    ProtocolPlan best = seed;
    double best_err = seed_err;

    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<int> coin(0, 1);
    const int restarts = std::max(1, opt.restarts);
    const int per = std::max(10, (opt.budget - 1) / restarts);
    double shrink = 1.0;
    for (int r = 0; r < restarts; ++r, shrink /= 3.0) {
        const ProtocolPlan origin = best;
        std::vector<double> step(n);
        for (std::size_t i = 0; i < n; ++i) step[i] = coin(rng) ? 1.0 : -1.0;
        auto build = [&](const std::vector<double>& u) {
            ProtocolPlan pl = origin;
            for (std::size_t i = 0; i < n; ++i) pl.*coords[i].first += coords[i].second * shrink * u[i];
            return pl;
        };
        SimplexOptions so;
        so.max_evals = per;
        so.xtol = 1e-7;
        so.ftol = 1e-14;
        so.adaptive = true;
        SimplexResult sr = nelder_mead([&](const std::vector<double>& u) { return error_of(build(u)); },
                                       std::vector<double>(n, 0.0), step, so);
        if (sr.f < best_err) {
            best_err = sr.f;
            best = build(sr.x);
        }
    }
    best.phi_omega = wrap_phase(best.phi_omega);
    best.Phi = wrap_phase(best.Phi);
    res.plan = best;
    res.F_min = 1.0 - best_err;
    res.evaluations = evals;
    return res;
}

}  // namespace veemap
