#include "veemap/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace veemap {

SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                          const std::vector<double>& step, const SimplexOptions& opt) {
    const std::size_t n = x0.size();
    if (step.size() != n) throw std::invalid_argument("nelder_mead: step size mismatch");
    double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;
    if (opt.adaptive && n > 1) {
        gamma = 1.0 + 2.0 / n;
        rho = 0.75 - 1.0 / (2.0 * n);
        sigma = 1.0 - 1.0 / n;
    }
    int evals = 0;
    auto F = [&](const std::vector<double>& x) {
        ++evals;
        double v = f(x);
        return std::isnan(v) ? HUGE_VAL : v;
    };

    std::vector<std::vector<double>> pts(n + 1, x0);
    std::vector<double> fv(n + 1);
    for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += step[i];
    for (std::size_t i = 0; i <= n; ++i) fv[i] = F(pts[i]);

    std::vector<std::size_t> ord(n + 1);
    std::vector<double> cen(n), xr(n), xe(n), xc(n);
    while (evals < opt.max_evals) {
        std::iota(ord.begin(), ord.end(), 0);
        std::sort(ord.begin(), ord.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        const std::size_t best = ord[0], worst = ord[n], second = ord[n - 1];

        double diam = 0.0;
        for (std::size_t i = 1; i <= n; ++i)
            for (std::size_t d = 0; d < n; ++d) diam = std::max(diam, std::abs(pts[ord[i]][d] - pts[best][d]));
        if (diam <= opt.xtol && std::abs(fv[worst] - fv[best]) <= opt.ftol) break;
        if (diam < 1e-300) break;

        std::fill(cen.begin(), cen.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t d = 0; d < n; ++d) cen[d] += pts[ord[i]][d] / n;

        for (std::size_t d = 0; d < n; ++d) xr[d] = cen[d] + alpha * (cen[d] - pts[worst][d]);
        double fr = F(xr);
        if (fr < fv[best]) {
            for (std::size_t d = 0; d < n; ++d) xe[d] = cen[d] + gamma * (xr[d] - cen[d]);
            double fe = F(xe);
            if (fe < fr) pts[worst] = xe, fv[worst] = fe;
            else pts[worst] = xr, fv[worst] = fr;
            continue;
        }
        if (fr < fv[second]) {
            pts[worst] = xr, fv[worst] = fr;
            continue;
        }
        bool outside = fr < fv[worst];
        for (std::size_t d = 0; d < n; ++d)
            xc[d] = outside ? cen[d] + rho * (xr[d] - cen[d]) : cen[d] - rho * (cen[d] - pts[worst][d]);
        double fc = F(xc);
        if (fc < (outside ? fr : fv[worst])) {
            pts[worst] = xc, fv[worst] = fc;
            continue;
        }
        // shrink toward best
        for (std::size_t i = 1; i <= n; ++i) {
            auto& p = pts[ord[i]];
            for (std::size_t d = 0; d < n; ++d) p[d] = pts[best][d] + sigma * (p[d] - pts[best][d]);
            fv[ord[i]] = F(p);
        }
    }
    std::size_t b = std::min_element(fv.begin(), fv.end()) - fv.begin();
    return {pts[b], fv[b], evals};
}

}  // namespace veemap
