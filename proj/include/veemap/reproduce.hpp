#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "veemap/evaluate.hpp"
#include "veemap/plan.hpp"

namespace veemap {

struct Check {
    std::string label;
    double value = 0;
    std::string relation;  // "<", "<=", ">", ">="
    double threshold = 0;
    bool pass = false;
};

Check make_check(std::string label, double value, const std::string& relation, double threshold);

struct CaseResult {
    std::string name;
    std::vector<Check> checks;
    std::vector<std::string> files;
    std::vector<std::string> notes;
    bool pass() const;
};

struct ReproduceOptions {
    std::string outdir = ".";
    int k = 1, theta = 1;          // fig2 / fig3 detuning
    double fig3_omega1 = 1000.0;
    double fig6_omega_sum = 1000.0;
    bool long_running = false;     // permits omega_sum t_pi beyond desk scale
    int threads = 0;
    std::uint64_t seed = 1;
    int budget = 3000;
};

const std::vector<std::string>& reproduce_case_names();
CaseResult reproduce(const std::string& name, const ReproduceOptions& opt);

// (time, value) of every interior local minimum of f on [t0, t1], located on an
// n-point grid and polished by golden section
std::vector<std::pair<double, double>> local_minima(const std::function<double(double)>& f, double t0, double t1,
                                                    int n);

// population of |j n> normalized by the squared norm, from |10> under constant H
std::function<double(double)> conditional_population(const SystemParams& p, int j, int n);

// one row of the damped tables: seed from design_protocol_damped, then fine_tune
struct TunedRow {
    ProtocolPlan seed, tuned;
    double seed_F = 0, tuned_F = 0;
};
TunedRow tune_row(int k, int theta, double omega1, const SystemParams& p, Metric metric, int budget,
                  std::uint64_t seed);

}  // namespace veemap
