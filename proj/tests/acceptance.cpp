// Runs the ten acceptance criteria at their stated tolerances and prints one PASS/FAIL line per criterion.
// Exit status: 0 when the set of failing criteria equals --known-failures (default: none), 1 otherwise.

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "graphkdv/airy_group.hpp"
#include "graphkdv/airy_resolvent.hpp"
#include "graphkdv/instability.hpp"
#include "graphkdv/profiles.hpp"
#include "graphkdv/schrodinger.hpp"
#include "oracles.hpp"

using namespace graphkdv;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> lines;

    void check(bool ok, const std::string& what) {
        pass = pass && ok;
        lines.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
    }
};

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string fmt(const char* f, double a, double b) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

GraphGrid pair_grid(int N = 2000, double L = 40.0) { return build_grid(StarGraph::uniform(1, 1), L, N); }

SchrodingerOperator delta_E(double Z, const GraphGrid& g) {
    return assemble_schrodinger(g, Z, sample_profile(g, make_profile(Z, 1.0, 1.0)),
                                Z == 0.0 ? VertexKind::kirchhoff : VertexKind::delta);
}

Outcome profile_exactness() {
    Outcome o;
    for (double Z : {-1.5, -1.0, -0.5, 0.5, 1.0, 1.5}) {
        const Profile p = make_profile(Z, 1.0, 1.0);
        const auto r = check_vertex_conditions(p);
        const double worst = std::max({r[0], r[1], r[2]});
        const double stat = stationarity_residual(p, 40.0, 2000);
        o.check(worst < 1e-12 && stat < 1e-10,
                fmt("Z=%+.2f", Z) + fmt(" vertex residual %.1e, stationarity %.1e", worst, stat));
    }
    return o;
}

Outcome poschl_teller() {
    Outcome o;
    const GraphGrid g = pair_grid();
    const SpectralReport r = spectrum_below_edge(delta_E(0.0, g), 3);
    const double exact[] = {-1.25, 0.0, 0.75};
    for (int j = 0; j < 3; ++j) {
        const double v = j < static_cast<int>(r.eigenvalues.size()) ? r.eigenvalues[j] : NAN;
        o.check(std::abs(v - exact[j]) < 5e-3, fmt("lambda_%g", j) + fmt(" = %.6f (exact %.2f)", v, exact[j]));
    }
    const RealFunction dphi = RealFunction::sample(g, [](int, double x) {
        return -0.75 * oracle::sech2(0.5 * x) * std::tanh(0.5 * x);
    });
    const RealFunction& k = r.eigenvectors.at(1);
    const double cs = std::abs(inner_product(k, dphi)) / (norm(k) * norm(dphi));
    o.check(cs > 0.999, fmt("kernel vector vs derivative of the soliton: cosine %.8f", cs));
    return o;
}

Outcome morse_table() {
    Outcome o;
    const GraphGrid g = pair_grid();
    const std::vector<double> Zs{-1.5, -1.0, -0.5, -0.25, 0.25, 0.5, 1.0, 1.5};
    const auto rows = perturbation_scan(Zs, g, [&](double Z) { return sample_profile(g, make_profile(Z, 1.0, 1.0)); });
    const double thr = 10.0 * g.h * g.h;
    for (const ScanRow& r : rows) {
        const SpectralReport s = spectrum_below_edge(delta_E(r.Z, g), 3);
        const int want = r.Z > 0 ? 2 : 1;
        const bool sign_ok = r.Z > 0 ? r.second_eigenvalue < 0 : r.second_eigenvalue > 0;
        o.check(!s.kernel_detected && s.min_abs_eigenvalue > thr && s.morse_index == want && sign_ok,
                fmt("Z=%+.2f", r.Z) + fmt(" n(E)=%g, Omega=%+.5f", s.morse_index, r.second_eigenvalue) +
                    fmt(", min|lambda|=%.4f (threshold %.0e)", s.min_abs_eigenvalue, thr));
    }
    return o;
}

Outcome mass_derivative() {
    Outcome o;
    const GraphGrid g = pair_grid();
    for (double Z : {1.0, -1.0, 0.5, -0.5}) {
        const Profile p = make_profile(Z, 1.0, 1.0);
        const RealFunction phi = sample_profile(g, p);
        const RealFunction psi = solve_resolvent_at_zero(delta_E(Z, g), phi);
        const RealFunction exact = sample_omega_derivative(g, p);
        const double err = norm(axpby(1.0, psi, -1.0, exact)) / norm(exact);
        const double ip = inner_product(psi, phi), closed = -4.5 * (1.0 + Z / 2.0);
        o.check(err < 1e-3 && std::abs(ip - closed) < 1e-3 && std::abs(oracle::psi_phi(Z) - closed) < 1e-6,
                fmt("Z=%+.1f", Z) + fmt(" rel. L2 error %.1e, <psi,phi> = %.6f", err, ip) +
                    fmt(" (closed form %.4f)", closed));
    }
    return o;
}

Outcome reduced_operator_check() {
    Outcome o;
    const GraphGrid g = pair_grid();
    for (double Z : {0.5, 1.0}) {
        const int nF = reduced_morse_index(delta_E(Z, g), sample_profile(g, make_profile(Z, 1.0, 1.0)));
        o.check(nF == 1, fmt("Z=%.1f", Z) + fmt(" n(F) = %g", nF));
    }
    return o;
}

Outcome resolvent_suite() {
    Outcome o;
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> re(0.1, 4.0), im(-30.0, 30.0), zz(-5.0, 5.0), pos(0.2, 6.0);
    double green = 0.0;
    const double e = 1e-12;
    for (int k = 0; k < 200; ++k) {
        const RootTriple r = characteristic_roots(cplx(re(rng), im(rng)), k % 2 ? 1 : -1);
        const double z = pos(rng);
        green = std::max({green, std::abs(green_plus(0.0, z, r)), std::abs(green_minus(0.0, -z, r)),
                          std::abs(green_minus(0.0, -z, r, 1)),
                          std::abs(green_plus(z + e, z, r) - green_plus(z - e, z, r)),
                          std::abs(green_minus(-z + e, -z, r) - green_minus(-z - e, -z, r)),
                          std::abs(green_plus(z + e, z, r, 2) - green_plus(z - e, z, r, 2) - 1.0),
                          std::abs(green_minus(-z + e, -z, r, 2) - green_minus(-z - e, -z, r, 2) - 1.0)});
    }
    o.check(green < 1e-10, fmt("Green boundary / continuity / jump residual %.1e", green));
    double det = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const BoundarySystem b = boundary_matrix(zz(rng), characteristic_roots(cplx(re(rng), im(rng)), k % 2 ? 1 : -1));
        det = std::max(det, std::abs(b.det_direct - b.det_closed) / std::max(1.0, std::abs(b.det_closed)));
    }
    o.check(det < 1e-12, fmt("det two-way agreement over 1000 draws %.1e", det));
    const GraphGrid g = pair_grid();
    const ComplexFunction w = to_complex(RealFunction::sample(g, [&g](int ed, double x) {
        const double c = g.graph.negative(ed) ? -4.0 : 3.0;
        return std::exp(-(x - c) * (x - c) / 2.0);
    }));
    for (double Z : {-1.0, 0.0, 1.0}) {
        const ResolventResult r = apply_resolvent(w, cplx(2.0, 0.0), Z);
        o.check(r.residual < 1e-6, fmt("Z=%+.0f", Z) + fmt(" resolvent residual %.1e", r.residual));
    }
    return o;
}

Outcome group_suite() {
    Outcome o;
    auto bumps = [](const GraphGrid& g) {
        return RealFunction::sample(g, [&g](int e, double x) {
            const bool neg = g.graph.negative(e);
            const double c = neg ? -5.0 : 5.0;
            return (neg ? 1.0 : 0.5) * std::exp(-(x - c) * (x - c));
        });
    };
    const GraphGrid g = pair_grid();
    const ComplexFunction w = to_complex(bumps(g));
    const TimestepResult ts = timestep_apply(w, 1.0, 2.5e-4, 1.0);
    o.check(ts.norm_drift < 1e-10, fmt("time-stepper norm drift on [0,1] %.1e", ts.norm_drift));
    const ComplexFunction wb = bromwich_apply(w, 0.5, 1.0);
    const ComplexFunction wt = timestep_apply(w, 0.5, 2.5e-4, 1.0).u;
    const double diff = norm(axpby(cplx(1.0), wb, cplx(-1.0), wt)) / norm(wt);
    o.check(diff < 1e-3, fmt("Bromwich vs time stepper at t=0.5: %.1e", diff));
    const InvarianceReport inv = domain_invariance_check(bumps(build_grid(StarGraph::uniform(2, 2), 20.0, 2000)), 0.5, 1.0);
    const double worst = std::max({inv.continuity_spread, inv.vertex_residuals[0], inv.vertex_residuals[1],
                                   inv.vertex_residuals[2]});
    o.check(worst < 1e-6, fmt("invariance on the n=2 star (L=20, h=0.01): worst residual %.1e", worst));
    return o;
}

/// Growing mode, evolution fit and symmetry for one graph; returns zeta (0 when absent).
double instability_case(Outcome& o, const std::string& label, const LinearizedOperator& op) {
    const GrowingMode gm = growing_modes(op);
    if (!gm.found) {
        o.check(false, label + ": no real eigenvalue pair found (" + gm.note + ")" +
                           fmt(", symmetry error %.1e", gm.symmetry_error));
        return 0.0;
    }
    const EvolutionResult ev = evolve_linearized(random_smooth_data(op, 1), std::min(200.0, 10.0 / gm.zeta), 0.05, op);
    const double fit = std::abs(ev.sigma_fit - gm.zeta) / gm.zeta;
    o.check(gm.residual < 1e-6 && std::abs(gm.paired_negative + gm.zeta) < 1e-6 * std::max(1.0, gm.zeta) &&
                gm.symmetry_error < 1e-6 && fit < 0.05,
            label + fmt(": zeta = %.7f, residual %.1e", gm.zeta, gm.residual) +
                fmt(", mirror error %.1e, symmetry error %.1e", std::abs(gm.paired_negative + gm.zeta),
                    gm.symmetry_error) +
                fmt(", growth fit off by %.2f%%", 100 * fit));
    return gm.zeta;
}

Outcome instability() {
    Outcome o;
    for (double Z : {-1.0, -0.5, 0.5, 1.0}) {
        const double z1 =
            instability_case(o, fmt("m=n=1 Z=%+.1f", Z), assemble_linearized(pair_grid(), make_profile(Z, 1.0, 1.0)));
        const GraphGrid g2 = build_grid(StarGraph::uniform(2, 2), 40.0, 2000);
        const double z2 =
            instability_case(o, fmt("n=2   Z=%+.1f", Z), assemble_linearized(g2, make_profile(Z, 1.0, 1.0)));
        if (z1 > 0.0 && z2 > 0.0)
            o.check(std::abs(z1 - z2) < 1e-6, fmt("n=2   Z=%+.1f", Z) + fmt(": |zeta_star - zeta_pair| = %.1e", std::abs(z1 - z2)));
    }
    return o;
}

Outcome general_coefficients() {
    Outcome o;
    const double Z = 1.0;
    const std::vector<double> a{0.5, 1.5};
    const double c = -1.0 + 0.25 * Z * Z;  // beta_i + alpha_i Z^2 / 4 for the unit pair
    const std::vector<double> b{c - 0.25 * Z * Z * a[0], c - 0.25 * Z * Z * a[1]};
    const StarGraph graph(2, 2, {a[0], a[1], a[0], a[1]}, {b[0], b[1], b[0], b[1]});
    bool accepted = true;
    try {
        make_balanced_profile(graph, Z, a, b);
    } catch (const InvalidArgument&) {
        accepted = false;
    }
    o.check(accepted, fmt("validator accepts alpha=(0.5,1.5), beta=(%.3f,%.3f)", b[0], b[1]));
    const BalancedResult r = balanced_instability(build_grid(graph, 40.0, 2000), Z, a, b);
    o.check(!r.kernel_detected, fmt("no kernel: min|lambda| = %.4f", r.min_abs_eigenvalue));
    o.check(r.full.found && r.full.zeta > 0.0 && r.full.residual < 1e-6,
            fmt("zeta = %.7f, residual %.1e", r.full.zeta, r.full.residual));
    return o;
}

Outcome convergence() {
    Outcome o;
    std::vector<std::vector<double>> ev(3);
    const int Ns[] = {500, 1000, 2000};
    for (int i = 0; i < 3; ++i) ev[i] = spectrum_below_edge(delta_E(1.0, pair_grid(Ns[i])), 2).eigenvalues;
    for (int j = 0; j < 2; ++j) {
        const double p = observed_order(ev[0][j], ev[1][j], ev[2][j]);
        o.check(p >= 1.8, fmt("Schrodinger eigenvalue %g", j) + fmt(" at Z=1, N=500/1000/2000: order %.2f", p));
    }
    const ConvergenceStudy z = zeta_convergence(make_profile(1.0, 1.0, 1.0), 40.0, 80);
    o.check(z.order >= 1.8, fmt("zeta at Z=1, N=80/160/320: %.8f", z.values[2]) + fmt(", order %.2f", z.order));
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    std::vector<int> known, only;
    app.add_option("--known-failures", known, "criteria expected to fail (documented in README)");
    app.add_option("--only", only, "run a subset");
    CLI11_PARSE(app, argc, argv);

    struct Criterion {
        int id;
        const char* name;
        double budget;  // seconds
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> all{
        {1, "profile exactness", 1.0, profile_exactness},
        {2, "Poschl-Teller levels", 30.0, poschl_teller},
        {3, "Morse-index table", 300.0, morse_table},
        {4, "psi and mass derivative", 1e9, mass_derivative},
        {5, "reduced operator n(F)", 1e9, reduced_operator_check},
        {6, "Green / resolvent suite", 60.0, resolvent_suite},
        {7, "group suite", 300.0, group_suite},
        {8, "instability", 600.0 * 8, instability},
        {9, "general coefficients", 1e9, general_coefficients},
        {10, "grid convergence", 1e9, convergence},
    };
    std::set<int> failed;
    for (const Criterion& c : all) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& ex) {
            o.check(false, std::string("exception: ") + ex.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.budget < 1e8) o.check(secs < c.budget, fmt("runtime %.1f s", secs) + fmt(" (budget %.0f s)", c.budget));
        if (!o.pass) failed.insert(c.id);
        std::cout << "CRITERION " << c.id << " " << (o.pass ? "PASS" : "FAIL") << ": " << c.name << " ("
                  << fmt("%.1f s", secs) << ")\n";
        for (const auto& l : o.lines) std::cout << "    " << l << "\n";
        std::cout.flush();
    }
    std::set<int> expected(known.begin(), known.end());
    if (!only.empty()) {
        std::set<int> sel(only.begin(), only.end()), keep;
        for (int k : expected)
            if (sel.count(k)) keep.insert(k);
        expected = keep;
    }
    std::cout << "failed criteria:";
    for (int f : failed) std::cout << " " << f;
    std::cout << (failed.empty() ? " none" : "") << "\n";
    if (failed != expected) {
        std::cout << "unexpected outcome: the failing set differs from --known-failures\n";
        return 1;
    }
    return 0;
}
