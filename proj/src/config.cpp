#include "veemap/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "veemap/design.hpp"

namespace veemap {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct Value {
    enum Kind { number, boolean, string } kind;
    std::string text;
};

Value classify(const std::string& raw) {
    if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"') return {Value::string, raw.substr(1, raw.size() - 2)};
    if (raw == "true" || raw == "false") return {Value::boolean, raw};
    char* end = nullptr;
    std::strtod(raw.c_str(), &end);
    if (!raw.empty() && end == raw.c_str() + raw.size()) return {Value::number, raw};
    return {Value::string, raw};
}

[[noreturn]] void bad(const std::string& key, const std::string& what) {
    throw ConfigurationError("config key '" + key + "': " + what);
}

double as_real(const std::string& key, const Value& v) {
    if (v.kind != Value::number) bad(key, "expected a number, got '" + v.text + "'");
    double x = std::strtod(v.text.c_str(), nullptr);
    if (!std::isfinite(x)) bad(key, "expected a finite number");
    return x;
}

long long as_int(const std::string& key, const Value& v) {
    double x = as_real(key, v);
    if (x != std::floor(x) || std::abs(x) > 9.0e15) bad(key, "expected an integer, got '" + v.text + "'");
    return static_cast<long long>(x);
}

bool as_bool(const std::string& key, const Value& v) {
    if (v.kind != Value::boolean) bad(key, "expected true or false, got '" + v.text + "'");
    return v.text == "true";
}

std::string as_string(const std::string&, const Value& v) { return v.text; }

struct KeySpec {
    std::string section;
    std::function<void(RunConfig&, const std::string&, const Value&)> set;
};

const std::map<std::string, KeySpec>& key_table() {
    static const std::map<std::string, KeySpec> t = {
        {"g", {"system", [](RunConfig& c, auto& k, auto& v) { c.system.g = as_real(k, v); }}},
        {"kappa", {"system", [](RunConfig& c, auto& k, auto& v) { c.system.kappa = as_real(k, v); }}},
        {"gamma0", {"system", [](RunConfig& c, auto& k, auto& v) { c.system.gamma0 = as_real(k, v); }}},
        {"gamma1", {"system", [](RunConfig& c, auto& k, auto& v) { c.system.gamma1 = as_real(k, v); }}},
        {"omega_sum", {"system", [](RunConfig& c, auto& k, auto& v) { c.system.omega_sum = as_real(k, v); }}},
        {"g_phase", {"system", [](RunConfig& c, auto& k, auto& v) { c.system.g_phase = as_real(k, v); }}},
        {"k", {"plan", [](RunConfig& c, auto& k, auto& v) { c.k = static_cast<int>(as_int(k, v)); }}},
        {"theta", {"plan", [](RunConfig& c, auto& k, auto& v) { c.theta = static_cast<int>(as_int(k, v)); }}},
        {"omega1", {"plan", [](RunConfig& c, auto& k, auto& v) { c.omega1 = as_real(k, v); }}},
        {"delta", {"plan", [](RunConfig& c, auto& k, auto& v) { c.delta = as_real(k, v); }}},
        {"t1", {"plan", [](RunConfig& c, auto& k, auto& v) { c.t1 = as_real(k, v); }}},
        {"t_pi", {"plan", [](RunConfig& c, auto& k, auto& v) { c.t_pi = as_real(k, v); }}},
        {"phi_omega", {"plan", [](RunConfig& c, auto& k, auto& v) { c.phi_omega = as_real(k, v); }}},
        {"Phi", {"plan", [](RunConfig& c, auto& k, auto& v) { c.Phi = as_real(k, v); }}},
        {"damped", {"plan", [](RunConfig& c, auto& k, auto& v) { c.damped = as_bool(k, v); }}},
        {"mode", {"run", [](RunConfig& c, auto& k, auto& v) {
                      try {
                          c.mode = parse_mode(as_string(k, v));
                      } catch (const std::exception&) {
                          bad(k, "expected rwa or full, got '" + v.text + "'");
                      }
                  }}},
        {"n_chi", {"run", [](RunConfig& c, auto& k, auto& v) { c.n_chi = static_cast<int>(as_int(k, v)); }}},
        {"n_phi", {"run", [](RunConfig& c, auto& k, auto& v) { c.n_phi = static_cast<int>(as_int(k, v)); }}},
        {"tol", {"run", [](RunConfig& c, auto& k, auto& v) { c.tol = as_real(k, v); }}},
        {"seed", {"run", [](RunConfig& c, auto& k, auto& v) {
                      long long s = as_int(k, v);
                      if (s < 0) bad(k, "seed must be >= 0");
                      c.seed = static_cast<std::uint64_t>(s);
                  }}},
        {"budget", {"run", [](RunConfig& c, auto& k, auto& v) { c.budget = static_cast<int>(as_int(k, v)); }}},
        {"threads", {"run", [](RunConfig& c, auto& k, auto& v) { c.threads = static_cast<int>(as_int(k, v)); }}},
        {"out", {"run", [](RunConfig& c, auto& k, auto& v) { c.out = as_string(k, v); }}},
    };
    return t;
}

void validate(const RunConfig& c) {
    auto need = [](bool ok, const std::string& key, const std::string& msg) {
        if (!ok) bad(key, msg);
    };
    need(c.system.g > 0, "g", "g must be > 0");
    need(c.system.kappa >= 0, "kappa", "kappa must be >= 0");
    need(c.system.gamma0 >= 0, "gamma0", "gamma0 must be >= 0");
    need(c.system.gamma1 >= 0, "gamma1", "gamma1 must be >= 0");
    need(!c.system.omega_sum || *c.system.omega_sum > 0, "omega_sum", "omega_sum must be > 0");
    need(c.system.g_phase >= 0 && c.system.g_phase < kTwoPi, "g_phase", "g_phase must lie in [0, 2pi)");
    need(c.k >= 0, "k", "k must be >= 0");
    need(c.theta >= 1 && c.theta % 2 == 1, "theta", "theta must be odd");
    need(c.omega1 > 0, "omega1", "omega1 must be > 0");
    if (c.t1) need(*c.t1 >= 0, "t1", "t1 must be >= 0");
    if (c.t_pi) need(*c.t_pi >= 0, "t_pi", "t_pi must be >= 0");
    need(c.n_chi >= 8, "n_chi", "n_chi must be >= 8");
    need(c.n_phi >= 8, "n_phi", "n_phi must be >= 8");
    need(c.tol >= 1e-12 && c.tol <= 1e-6, "tol", "tol must lie in [1e-12, 1e-6]");
    need(c.budget >= 100, "budget", "budget must be >= 100");
    need(c.threads >= 0, "threads", "threads must be >= 0");
    const bool any = c.delta || c.t1 || c.t_pi || c.phi_omega || c.Phi;
    need(!any || c.explicit_plan(), "plan", "explicit plans need all of delta, t1, t_pi, phi_omega, Phi");
    if (c.mode == Mode::full) need(c.system.omega_sum.has_value(), "omega_sum", "mode=full requires omega_sum");
}

}  // namespace

Mode parse_mode(const std::string& s) {
    if (s == "rwa") return Mode::rwa;
    if (s == "full") return Mode::full;
    throw std::invalid_argument("mode must be rwa or full");
}

const char* mode_name(Mode m) { return m == Mode::rwa ? "rwa" : "full"; }

RunConfig parse_config(const std::string& text) {
    RunConfig c;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    const auto& table = key_table();
    while (std::getline(in, line)) {
        ++lineno;
        // strip comments outside quotes
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') quoted = !quoted;
            if (line[i] == '#' && !quoted) {
                line.resize(i);
                break;
            }
        }
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigurationError("line " + std::to_string(lineno) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "system" && section != "plan" && section != "run")
                throw ConfigurationError("line " + std::to_string(lineno) + ": unknown section '" + section + "'");
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigurationError("line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string raw = trim(line.substr(eq + 1));
        auto it = table.find(key);
        if (it == table.end() || (!section.empty() && it->second.section != section))
            throw ConfigurationError("unknown key '" + key + "'" + (section.empty() ? "" : " in [" + section + "]"));
        if (raw.empty()) bad(key, "missing value");
        it->second.set(c, key, classify(raw));
    }
    validate(c);
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigurationError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

ProtocolPlan RunConfig::plan() const {
    if (explicit_plan()) {
        ProtocolPlan p;
        p.k = k;
        p.theta = theta;
        p.omega1 = omega1;
        p.delta = *delta;
        p.t1 = *t1;
        p.t_pi = *t_pi;
        p.phi_omega = *phi_omega;
        p.Phi = *Phi;
        p.damped = damped;
        return p;
    }
    if (damped || system.kappa > 0)
        return design_protocol_damped(k, theta, omega1, system.kappa, system.gamma0, system.gamma1);
    return design_protocol(k, theta, omega1);
}

std::string format_plan(const ProtocolPlan& plan, const SystemParams& p) {
    char buf[2048];
    std::string s = "[system]\n";
    std::snprintf(buf, sizeof buf, "g = %.17g\nkappa = %.17g\ngamma0 = %.17g\ngamma1 = %.17g\ng_phase = %.17g\n", p.g,
                  p.kappa, p.gamma0, p.gamma1, p.g_phase);
    s += buf;
    if (p.omega_sum) {
        std::snprintf(buf, sizeof buf, "omega_sum = %.17g\n", *p.omega_sum);
        s += buf;
    }
    std::snprintf(buf, sizeof buf,
                  "\n[plan]\nk = %d\ntheta = %d\nomega1 = %.17g\ndelta = %.17g\nt1 = %.17g\nt_pi = %.17g\n"
                  "phi_omega = %.17g\nPhi = %.17g\ndamped = %s\n",
                  plan.k, plan.theta, plan.omega1, plan.delta, plan.t1, plan.t_pi, plan.phi_omega, plan.Phi,
                  plan.damped ? "true" : "false");
    s += buf;
    return s;
}

}  // namespace veemap
