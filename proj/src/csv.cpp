#include "veemap/csv.hpp"

#include <cstdio>

#include "veemap/hilbert.hpp"

namespace veemap {

std::string fmt_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15e", x);
    // guard against a comma-decimal C locale
    for (char* p = buf; *p; ++p)
        if (*p == ',') *p = '.';
    return buf;
}

void write_csv(std::ostream& os, const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << '\n';
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << fmt_real(r[i]);
        os << '\n';
    }
}

void write_trajectory_csv(std::ostream& os, const Trajectory& tr) {
    std::vector<std::string> header{"time"};
    const std::size_t d = tr.populations.empty() ? 0 : tr.populations.front().size();
    const FockBasis basis = FockBasis::for_dimension(static_cast<long>(d));
    for (std::size_t i = 0; i < d; ++i) header.push_back("pop_" + basis.label(static_cast<int>(i)));
    header.push_back("norm");
    std::vector<std::vector<double>> rows;
    for (std::size_t t = 0; t < tr.times.size(); ++t) {
        std::vector<double> r{tr.times[t]};
        r.insert(r.end(), tr.populations[t].begin(), tr.populations[t].end());
        r.push_back(tr.norms[t]);
        rows.push_back(std::move(r));
    }
    write_csv(os, header, rows);
}

void write_mapping_csv(std::ostream& os, const std::vector<MappingSolution>& sols) {
    os << "k,theta,l,delta,t_m,F_min,t_pi,t_pi_prime\n";
    for (const auto& s : sols)
        os << s.k << ',' << s.theta << ',' << s.l << ',' << fmt_real(s.delta) << ',' << fmt_real(s.t_m) << ','
           << fmt_real(s.F_min) << ',' << fmt_real(s.t_pi) << ',' << fmt_real(s.t_pi_prime) << '\n';
}

}  // namespace veemap
