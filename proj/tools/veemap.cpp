// veemap: pulse design and simulation for V-type qubit-to-cavity state mapping.
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "veemap/analytic.hpp"
#include "veemap/config.hpp"
#include "veemap/csv.hpp"
#include "veemap/design.hpp"
#include "veemap/evaluate.hpp"
#include "veemap/parallel.hpp"
#include "veemap/reproduce.hpp"

using namespace veemap;

namespace {

cplx parse_amplitude(const std::string& s) {
    // "re" or "re,im"
    auto comma = s.find(',');
    try {
        if (comma == std::string::npos) return {std::stod(s), 0.0};
        return {std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1))};
    } catch (const std::exception&) {
        throw ConfigurationError("amplitude '" + s + "' is not of the form re or re,im");
    }
}

std::ostream& open_out(const std::string& path, std::ofstream& file) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw ConfigurationError("cannot write '" + path + "'");
    return file;
}

void print_plan_table(const ProtocolPlan& p) {
    std::printf("%-10s %22s\n", "field", "value");
    std::printf("%-10s %22d\n", "k", p.k);
    std::printf("%-10s %22d\n", "theta", p.theta);
    std::printf("%-10s %22.12f\n", "delta", p.delta);
    std::printf("%-10s %22.12e\n", "t1", p.t1);
    std::printf("%-10s %22.12f\n", "t_pi", p.t_pi);
    std::printf("%-10s %22.6f\n", "omega1", p.omega1);
    std::printf("%-10s %22.12f\n", "phi_omega", p.phi_omega);
    std::printf("%-10s %22.12f\n", "Phi", p.Phi);
    std::printf("%-10s %22s\n", "damped", p.damped ? "true" : "false");
}

int run(int argc, char** argv) {
    CLI::App app{"veemap: two-stage qubit-to-cavity state mapping for V-type emitters (units of g)"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "worker threads (default: VEEMAP_THREADS or hardware concurrency)");

    // design
    auto* design = app.add_subcommand("design", "design a two-stage plan");
    int k = 25, theta = 1;
    double omega1 = 100.0, kappa = 0.0, gamma0 = 0.0, gamma1 = 0.0;
    std::string design_out, config_path;
    design->add_option("--k", k, "detuning family index k")->capture_default_str();
    design->add_option("--theta", theta, "odd detuning family index theta")->capture_default_str();
    design->add_option("--omega1", omega1, "stage-A amplitude in g")->capture_default_str();
    design->add_option("--kappa", kappa, "cavity decay rate")->capture_default_str();
    design->add_option("--gamma0", gamma0, "decay rate of level 0")->capture_default_str();
    design->add_option("--gamma1", gamma1, "decay rate of level 1")->capture_default_str();
    design->add_option("--config", config_path, "config document (overrides the flags above)");
    design->add_option("--out", design_out, "also write the plan document here");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "trajectory of a plan");
    std::string plan_path, alpha_s = "1", beta_s = "0", mode_s = "rwa", sim_out;
    int points = 401;
    double tol = 1e-10;
    simulate->add_option("--plan", plan_path, "plan document")->required();
    simulate->add_option("--alpha", alpha_s, "amplitude of |10>, re or re,im")->capture_default_str();
    simulate->add_option("--beta", beta_s, "amplitude of |00>, re or re,im")->capture_default_str();
    simulate->add_option("--mode", mode_s, "rwa or full")->capture_default_str();
    simulate->add_option("--points", points, "samples over [0, t1+t_pi]")->capture_default_str();
    simulate->add_option("--tol", tol, "integrator tolerance (full mode)")->capture_default_str();
    simulate->add_option("--out", sim_out, "CSV path (default stdout)");

    // scan-approx
    auto* scan_a = app.add_subcommand("scan-approx", "single-pulse approximate mappings");
    double tmax = 200.0, fmin = 0.99999;
    std::string scan_out;
    scan_a->add_option("--tmax", tmax, "time limit in 1/g")->capture_default_str();
    scan_a->add_option("--fmin", fmin, "minimal-fidelity threshold")->capture_default_str();
    scan_a->add_option("--out", scan_out, "CSV path (default stdout)");

    // scan-diophantine
    auto* scan_d = app.add_subcommand("scan-diophantine", "search k^2+(theta+k)^2 = 2 l^2");
    long long kmax = 10000, thetamax = 999, lmax = 20000;
    bool allow_even = false;
    scan_d->add_option("--kmax", kmax)->capture_default_str();
    scan_d->add_option("--thetamax", thetamax)->capture_default_str();
    scan_d->add_option("--lmax", lmax)->capture_default_str();
    scan_d->add_flag("--allow-even", allow_even, "diagnostic: admit even theta");

    // optimize
    auto* optimize = app.add_subcommand("optimize", "fine-tune a plan by simplex search");
    std::string opt_plan, free_s = "delta,t1,t_pi,phi_omega,Phi", metric_s = "conditional", opt_out;
    int budget = 3000;
    std::uint64_t seed = 1;
    optimize->add_option("--plan", opt_plan, "seed plan document")->required();
    optimize->add_option("--free", free_s, "coordinates to vary")->capture_default_str();
    optimize->add_option("--budget", budget, "fidelity evaluations")->capture_default_str();
    optimize->add_option("--seed", seed, "restart seed")->capture_default_str();
    optimize->add_option("--metric", metric_s, "conditional or compensated")->capture_default_str();
    optimize->add_option("--out", opt_out, "write the tuned plan here");

    // reproduce
    auto* repro = app.add_subcommand("reproduce", "regenerate a named figure or table");
    std::string case_name;
    ReproduceOptions ro;
    repro->add_option("--case", case_name, "fig2..fig6, tab-sec8..tab-sec12 or all")->required();
    repro->add_option("--outdir", ro.outdir, "output directory")->capture_default_str();
    repro->add_option("--k", ro.k, "fig2/fig3 family index k")->capture_default_str();
    repro->add_option("--theta", ro.theta, "fig2/fig3 family index theta")->capture_default_str();
    repro->add_option("--omega1", ro.fig3_omega1, "fig3 stage-A amplitude")->capture_default_str();
    repro->add_option("--omega-sum", ro.fig6_omega_sum, "fig6 counter-rotating frequency")->capture_default_str();
    repro->add_flag("--long-running", ro.long_running, "allow omega_sum beyond desk scale");
    repro->add_option("--budget", ro.budget, "fine-tune evaluations per row")->capture_default_str();
    repro->add_option("--seed", ro.seed, "fine-tune seed")->capture_default_str();

    CLI11_PARSE(app, argc, argv);
    if (threads <= 0) threads = default_threads();

    if (*design) {
        SystemParams p;
        ProtocolPlan plan;
        if (!config_path.empty()) {
            RunConfig c = load_config(config_path);
            p = c.system;
            plan = c.plan();
        } else {
            RunConfig c = parse_config("k = " + std::to_string(k) + "\ntheta = " + std::to_string(theta) +
                                       "\nomega1 = " + fmt_real(omega1) + "\nkappa = " + fmt_real(kappa) +
                                       "\ngamma0 = " + fmt_real(gamma0) + "\ngamma1 = " + fmt_real(gamma1) + "\n");
            p = c.system;
            plan = c.plan();
        }
        print_plan_table(plan);
        std::printf("\n");
        const std::string doc = format_plan(plan, p);
        std::fputs(doc.c_str(), stdout);
        if (!design_out.empty()) {
            std::ofstream f(design_out);
            if (!f) throw ConfigurationError("cannot write '" + design_out + "'");
            f << doc;
        }
        return 0;
    }
    if (*simulate) {
        RunConfig c = load_config(plan_path);
        Mode mode = parse_mode(mode_s);
        ProtocolPlan plan = c.plan();
        StateVector psi0 = initial_state(parse_amplitude(alpha_s), parse_amplitude(beta_s), FockBasis(1));
        if (mode == Mode::full && !c.system.omega_sum) throw ConfigurationError("mode=full requires omega_sum in the plan");
        Trajectory tr = sample_protocol(plan, c.system, psi0, points, mode, tol);
        std::ofstream f;
        write_trajectory_csv(open_out(sim_out, f), tr);
        return 0;
    }
    if (*scan_a) {
        MappingScanAudit audit;
        auto t0 = std::chrono::steady_clock::now();
        auto sols = approximate_mapping_scan(tmax, fmin, 1.0, &audit, threads);
        double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::ofstream f;
        write_mapping_csv(open_out(scan_out, f), sols);
        std::fprintf(stderr, "%zu distinct-detuning solutions (%zu before deduplication, %ld candidates) in %.2f s\n",
                     sols.size(), audit.passing.size(), audit.candidates, dt);
        return 0;
    }
    if (*scan_d) {
        auto t0 = std::chrono::steady_clock::now();
        auto sols = diophantine_scan(kmax, thetamax, lmax, allow_even);
        double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%zu solutions\n", sols.size());
        for (const auto& s : sols)
            std::printf("k=%lld theta=%lld l=%lld\n", (long long)s.k, (long long)s.theta, (long long)s.l);
        std::printf("elapsed %.3f s\n", dt);
        return 0;
    }
    if (*optimize) {
        RunConfig c = load_config(opt_plan);
        TuneOptions to;
        to.budget = budget;
        to.seed = seed;
        if (metric_s == "conditional") to.metric = Metric::conditional;
        else if (metric_s == "compensated") to.metric = Metric::compensated;
        else throw ConfigurationError("metric must be conditional or compensated");
        to.mode = c.mode;
        to.n_chi = c.n_chi;
        to.n_phi = c.n_phi;
        TuneResult r = fine_tune(c.plan(), c.system, FreeSet::parse(free_s), to);
        print_plan_table(r.plan);
        std::printf("\nseed F_min  %.15e\ntuned F_min %.15e\nevaluations %d\n\n", r.seed_F_min, r.F_min, r.evaluations);
        const std::string doc = format_plan(r.plan, c.system);
        std::fputs(doc.c_str(), stdout);
        if (!opt_out.empty()) {
            std::ofstream f(opt_out);
            if (!f) throw ConfigurationError("cannot write '" + opt_out + "'");
            f << doc;
        }
        return 0;
    }
    if (*repro) {
        ro.threads = threads;
        std::vector<std::string> names;
        if (case_name == "all") names = reproduce_case_names();
        else names = {case_name};
        bool ok = true;
        for (const auto& n : names) {
            auto t0 = std::chrono::steady_clock::now();
            CaseResult r = reproduce(n, ro);
            double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            for (const auto& c : r.checks)
                std::printf("  %s  %s: %.6e %s %.6e\n", c.pass ? "PASS" : "FAIL", c.label.c_str(), c.value,
                            c.relation.c_str(), c.threshold);
            for (const auto& note : r.notes) std::printf("  note  %s\n", note.c_str());
            for (const auto& f : r.files) std::printf("  wrote %s\n", f.c_str());
            std::printf("%s %s (%.1f s)\n", r.pass() ? "PASS" : "FAIL", n.c_str(), dt);
            ok = ok && r.pass();
        }
        return ok ? 0 : 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ConfigurationError& e) {
        std::fprintf(stderr, "error: configuration: %s\n", e.what());
    } catch (const StiffnessError& e) {
        std::fprintf(stderr, "error: stiffness: %s\n", e.what());
    } catch (const NumericError& e) {
        std::fprintf(stderr, "error: numeric: %s\n", e.what());
    } catch (const PostSelectionError& e) {
        std::fprintf(stderr, "error: post-selection: %s\n", e.what());
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "error: domain: %s\n", e.what());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
    }
    return 2;
}
