#include "nctorus/stages.hpp"

#include "nctorus/radial.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace nctorus {

NCElement random_selfadjoint(const TorusParams& p, std::uint64_t seed, double amplitude, int radius) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    NCElement h(p);
    for (int m = -radius; m <= radius; ++m)
        for (int n = -radius; n <= radius; ++n)
            if (h.in_window(m, n)) h.at(m, n) = cplx(g(rng), g(rng)) * amplitude;
    return 0.5 * (h + nc_adjoint(h));
}

namespace {

double rel_err(cplx a, cplx b) {
    const double s = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / s;
}

cplx symbol_ring(const symcalc::Symbol& s, const Binding& b, double r) {
    const int M = 64;
    std::vector<std::pair<symcalc::Mono, cplx>> tv;
    for (const auto& [m, e] : s.coeffs()) tv.emplace_back(m, tau_expr(e, b, r));
    cplx acc = 0;
    for (int j = 0; j < M; ++j) {
        const double th = 2 * std::numbers::pi * j / M, x = r * std::cos(th), y = r * std::sin(th);
        for (const auto& [m, v] : tv) acc += v * std::pow(x, m.a) * std::pow(y, m.b);
    }
    return acc * (2 * std::numbers::pi / M);
}

cplx radial_ring(const heat::RadialIntegrand& R, const Binding& b, double r) {
    cplx acc = 0;
    for (const auto& [n, e] : R.by_rpow) acc += std::pow(r, n) * tau_expr(e, b, r);
    return acc;
}

StageCheck pointwise(const std::string& name, const std::vector<double>& radii, double tol,
                     const std::function<cplx(double)>& before, const std::function<cplx(double)>& after) {
    StageCheck c;
    c.stage = name;
    for (double r : radii) {
        cplx x = before(r), y = after(r);
        double e = rel_err(x, y);
        if (e >= c.rel) {
            c.rel = e;
            c.before = x;
            c.after = y;
        }
    }
    c.ok = c.rel <= tol;
    c.note = "pointwise in |xi|, worst radius shown";
    return c;
}

}  // namespace

std::vector<StageCheck> stage_invariance(const heat::PipelineTrace& tr, const Binding& b, double tol,
                                         const std::vector<double>& radii) {
    std::vector<StageCheck> out;
    out.push_back(pointwise("angular", radii, tol, [&](double r) { return symbol_ring(tr.par.b[2], b, r); },
                            [&](double r) { return radial_ring(tr.angular, b, r); }));
    out.push_back(pointwise("normalize", radii, tol, [&](double r) { return radial_ring(tr.angular, b, r); },
                            [&](double r) { return radial_ring(tr.normalized, b, r); }));
    const RadialTrace in = radial_trace(tr.normalized, b), red = radial_trace(tr.reduced, b);
    {
        StageCheck c;
        c.stage = "ibp";
        c.before = in.value;
        c.after = red.value;
        c.rel = rel_err(in.value, red.value);
        c.ok = c.rel <= tol && in.convergent() && red.convergent();
        c.note = "radial integrals; divergent parts " + std::to_string(in.divergent) + " / " + std::to_string(red.divergent);
        out.push_back(c);
    }
    {
        StageCheck c;
        c.stage = "rearrange";
        c.before = red.value;
        c.after = tau_expr(tr.rearranged, b);
        c.rel = rel_err(c.before, c.after);
        c.ok = c.rel <= tol && red.convergent();
        c.note = "radial integral vs D_m form";
        out.push_back(c);
    }
    {
        StageCheck c;
        c.stage = "canonicalize";
        c.before = static_cast<double>(heat::kContourSign) * tau_expr(tr.rearranged, b);
        c.after = tau_expr(tr.canonical, b);
        c.rel = rel_err(c.before, c.after);
        c.ok = c.rel <= tol;
        c.note = "cyclic rotation under the trace";
        out.push_back(c);
    }
    return out;
}

}  // namespace nctorus
