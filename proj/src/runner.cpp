#include "graphkdv/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <sstream>

#include "graphkdv/airy_group.hpp"
#include "graphkdv/airy_resolvent.hpp"
#include "graphkdv/instability.hpp"
#include "graphkdv/parallel.hpp"
#include "graphkdv/profiles.hpp"
#include "graphkdv/schrodinger.hpp"

namespace graphkdv {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

/// Graph, grid and stationary profile for one value of Z.
struct Setup {
    StarGraph graph;
    GraphGrid grid;
    double Z = 0.0;
    Profile base;                         // pair 0 (or the replicated profile on unbalanced graphs)
    std::optional<BalancedProfile> bp;    // balanced graphs only
    RealFunction phi;
    bool unit = false;                    // alpha = omega = 1 on every edge
};

Setup make_setup(const RunConfig& c, double Z, int N, double L) {
    Setup s;
    s.graph = StarGraph(c.m, c.n, c.edge_alpha(), c.edge_beta());
    s.graph.validate();
    s.grid = build_grid(s.graph, L, N);
    s.Z = Z;
    const auto& a = s.graph.alpha;
    const auto& b = s.graph.beta;
    if (s.graph.balanced()) {
        std::vector<double> pa, pb;
        for (int j = 0; j < c.n; ++j) {
            if (a[j] != a[c.m + j] || b[j] != b[c.m + j])
                throw ConfigError("graph.alpha", "the two edges of each pair must carry equal coefficients");
            pa.push_back(a[c.m + j]);
            pb.push_back(b[c.m + j]);
        }
        if (c.n == 1) {
            s.base = make_profile(Z, pa[0], -pb[0]);
            BalancedProfile bp;
            bp.graph = s.graph;
            bp.Z = Z;
            bp.pairs = {s.base};
            s.bp = bp;
        } else {
            s.bp = make_balanced_profile(s.graph, Z, pa, pb);
            s.base = s.bp->pairs[0];
        }
        s.phi = sample_profile(s.grid, *s.bp);
    } else {
        for (int e = 1; e < s.graph.edges(); ++e)
            if (a[e] != a[0] || b[e] != b[0])
                throw ConfigError("graph.alpha", "unbalanced graphs need equal coefficients on every edge");
        s.base = make_profile(Z, a[0], -b[0]);
        s.phi = sample_profile(s.grid, s.base);
    }
    s.unit = std::all_of(a.begin(), a.end(), [](double v) { return v == 1.0; }) &&
             std::all_of(b.begin(), b.end(), [](double v) { return v == -1.0; });
    return s;
}

VertexKind vertex_kind_for(const Setup& s) {
    if (s.Z == 0.0) return VertexKind::kirchhoff;
    return s.graph.balanced() && s.graph.n >= 2 ? VertexKind::full_delta_sum : VertexKind::delta;
}

bool two_half_lines(const Setup& s) { return s.graph.m == 1 && s.graph.n == 1; }

json finite(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

struct TaskRecord {
    json data = json::object();
    json checks = json::array();
    bool ok = true;

    void check(const std::string& name, double value, const std::string& relation, double threshold) {
        bool pass = false;
        if (relation == "<") pass = value < threshold;
        else if (relation == "<=") pass = value <= threshold;
        else if (relation == ">") pass = value > threshold;
        else if (relation == "==") pass = value == threshold;
        checks.push_back({{"name", name}, {"value", finite(value)}, {"relation", relation},
                          {"threshold", finite(threshold)}, {"passed", pass}});
        ok = ok && pass;
    }
    void expect(const std::string& name, bool pass) {
        checks.push_back({{"name", name}, {"value", pass}, {"relation", "=="}, {"threshold", true}, {"passed", pass}});
        ok = ok && pass;
    }
};

class Writer {
public:
    Writer(const RunConfig& c, bool enabled) : dir_(c.output_dir), enabled_(enabled) {
        if (enabled_) fs::create_directories(dir_);
    }

    /// One file per series: a comment header with parameters, then "x_name,y_name" and the rows.
    void series(const std::string& name, const std::string& header, const std::string& xname, const std::string& yname,
                const std::vector<double>& x, const std::vector<double>& y) {
        if (!enabled_) return;
        std::ofstream out(fs::path(dir_) / name);
        out << "# " << header << "\n" << xname << "," << yname << "\n" << std::setprecision(17);
        for (size_t i = 0; i < x.size(); ++i) out << x[i] << "," << y[i] << "\n";
        files_.push_back(name);
    }

    void edges(const std::string& stem, const std::string& header, const RealFunction& u) {
        for (int e = 0; e < u.edges(); ++e) {
            std::vector<double> x(u.grid.N + 1);
            for (int k = 0; k <= u.grid.N; ++k) x[k] = u.grid.x(e, k);
            series(stem + "_edge" + std::to_string(e) + ".csv", header + " edge=" + std::to_string(e), "x", "value",
                   x, u[e]);
        }
    }

    void text(const std::string& name, const std::string& body) {
        if (!enabled_) return;
        std::ofstream(fs::path(dir_) / name) << body;
        files_.push_back(name);
    }

    const std::vector<std::string>& files() const { return files_; }

private:
    std::string dir_;
    bool enabled_;
    std::vector<std::string> files_;
};

std::string params(const Setup& s) {
    std::ostringstream os;
    os << "Z=" << s.Z << " m=" << s.graph.m << " n=" << s.graph.n << " alpha=" << s.base.alpha
       << " beta=" << s.base.beta << " L=" << s.grid.L << " N=" << s.grid.N << " units=dimensionless";
    return os.str();
}

std::array<double, 3> profile_residuals(const Setup& s) {
    std::array<double, 3> r{};
    const std::vector<Profile> pairs = s.bp ? s.bp->pairs : std::vector<Profile>{s.base};
    for (const Profile& p : pairs) {
        const auto q = check_vertex_conditions(p);
        for (int i = 0; i < 3; ++i) r[i] = std::max(r[i], q[i]);
    }
    return r;
}

TaskRecord task_profile(const RunConfig& c, const Setup& s, Writer& w) {
    TaskRecord t;
    const auto r = profile_residuals(s);
    double stat = 0.0;
    const std::vector<Profile> pairs = s.bp ? s.bp->pairs : std::vector<Profile>{s.base};
    for (const Profile& p : pairs) stat = std::max(stat, stationarity_residual(p, s.grid.L, s.grid.N));
    t.data["kind"] = to_string(s.base.kind);
    t.data["vertex_value"] = s.base.plus(0.0);
    t.data["slope_plus"] = s.base.plus(0.0, 1);
    t.data["vertex_residuals"] = {r[0], r[1], r[2]};
    t.data["stationarity_residual"] = stat;
    t.data["vertex_spread"] = vertex_spread(s.phi);
    for (int i = 0; i < 3; ++i) t.check("vertex_condition_" + std::to_string(i + 1), r[i], "<", c.tol.vertex);
    t.check("stationarity", stat, "<", c.tol.stationarity);
    t.check("vertex_continuity", vertex_spread(s.phi), "<", c.tol.vertex);
    w.edges("profile", "quantity=phi " + params(s), s.phi);
    return t;
}

TaskRecord task_spectrum(const RunConfig& c, const Setup& s, Writer& w) {
    TaskRecord t;
    const SchrodingerOperator E = assemble_schrodinger(s.grid, s.Z, s.phi, vertex_kind_for(s));
    const SpectralReport rep = spectrum_below_edge(E, 3);
    const SymmetricPencil pencil(E.K, E.w);
    const double omega2 = pencil.eigenvalue(1);
    t.data["vertex_kind"] = to_string(E.vertex_kind);
    t.data["eigenvalues"] = rep.eigenvalues;
    t.data["above_edge"] = rep.above_edge;
    t.data["residuals"] = rep.residuals;
    t.data["morse_index"] = rep.morse_index;
    t.data["kernel_detected"] = rep.kernel_detected;
    t.data["kernel_threshold"] = rep.kernel_threshold;
    t.data["essential_edge"] = rep.essential_edge;
    t.data["min_abs_eigenvalue"] = rep.min_abs_eigenvalue;
    t.data["second_eigenvalue"] = omega2;
    t.data["symmetry_residual"] = E.symmetry_residual();
    for (size_t k = 0; k < rep.residuals.size(); ++k)
        t.check("eigen_residual_" + std::to_string(k), rep.residuals[k], "<", c.tol.eigen_residual);
    t.check("symmetry", E.symmetry_residual(), "<", 1e-12);
    if (s.Z == 0.0) {
        t.expect("kernel_detected_at_Z0", rep.kernel_detected);
    } else {
        t.check("no_kernel_min_abs_eigenvalue", rep.min_abs_eigenvalue, ">", rep.kernel_threshold);
        if (two_half_lines(s)) {
            t.check("morse_index", rep.morse_index, "==", s.Z > 0 ? 2 : 1);
            if (s.Z > 0) t.check("second_eigenvalue_negative", omega2, "<", 0.0);
            else t.check("second_eigenvalue_positive", omega2, ">", 0.0);
        }
    }
    for (size_t k = 0; k < rep.eigenvectors.size(); ++k)
        w.edges("eigenvector" + std::to_string(k), "quantity=eigenvector lambda=" + std::to_string(rep.eigenvalues[k]) +
                                                      " " + params(s), rep.eigenvectors[k]);
    if (!rep.kernel_detected) {
        double res = 0.0;
        const RealFunction psi = solve_resolvent_at_zero(E, s.phi, -1.0, &res);
        const double pp = inner_product(psi, s.phi);
        t.data["psi_phi"] = pp;
        t.data["psi_residual"] = res;
        t.check("psi_phi_negative", pp, "<", 0.0);
        if (s.unit && (two_half_lines(s) || s.graph.balanced())) {
            const RealFunction exact = sample_omega_derivative(s.grid, s.base);
            const double rel = norm(axpby(1.0, psi, -1.0, exact)) / norm(exact);
            const double oracle = s.graph.n * mass_derivative_oracle(s.Z);
            t.data["psi_relative_error"] = rel;
            t.data["psi_phi_oracle"] = oracle;
            t.check("psi_matches_omega_derivative", rel, "<", 1e-3);
            t.check("psi_phi_oracle", std::abs(pp - oracle), "<", 1e-3 * std::max(1.0, std::abs(oracle)));
        }
        const int nF = reduced_morse_index(E, s.phi);
        t.data["reduced_morse_index"] = nF;
        if (two_half_lines(s) && s.Z > 0) t.check("reduced_morse_index", nF, "==", 1);
    }
    return t;
}

TaskRecord task_modes(const RunConfig& c, const Setup& s, Writer& w, std::optional<GrowingMode>& out) {
    TaskRecord t;
    ModeOptions o;
    o.coarse_N = c.coarse_N;
    o.window = c.window;
    o.symmetry_tol = c.tol.symmetry;
    GrowingMode gm;
    if (s.graph.n >= 2) {
        std::vector<double> pa, pb;
        for (const Profile& p : s.bp->pairs) {
            pa.push_back(p.alpha);
            pb.push_back(p.beta);
        }
        const BalancedResult br = balanced_instability(s.grid, s.Z, pa, pb, o);
        gm = br.full;
        t.data["schrodinger_kernel_detected"] = br.kernel_detected;
        t.data["schrodinger_min_abs_eigenvalue"] = br.min_abs_eigenvalue;
        t.data["schrodinger_morse_index"] = br.morse_index;
        if (br.symmetric_morse_index) t.data["symmetric_morse_index"] = *br.symmetric_morse_index;
        if (s.Z != 0.0) t.expect("schrodinger_no_kernel", !br.kernel_detected);
        if (br.reduced) {
            t.data["two_half_line_zeta"] = br.reduced->zeta;
            t.data["two_half_line_difference"] = br.difference;
            t.check("matches_two_half_lines", br.difference, "<", 1e-6);
        }
    } else {
        gm = growing_modes(assemble_linearized(s.grid, s.Z, s.bp), o);
    }
    t.data["found"] = gm.found;
    t.data["zeta"] = gm.zeta;
    t.data["coarse_zeta"] = gm.coarse_zeta;
    t.data["residual"] = gm.residual;
    t.data["paired_negative"] = gm.paired_negative;
    t.data["paired_residual"] = gm.paired_residual;
    t.data["symmetry_error"] = gm.symmetry_error;
    t.data["note"] = gm.note;
    json win = json::array();
    for (size_t k = 0; k < gm.window.size(); ++k)
        win.push_back({{"re", gm.window[k].real()}, {"im", gm.window[k].imag()}, {"residual", gm.window_residuals[k]}});
    t.data["window"] = win;
    t.expect("growing_mode_found", gm.found);
    if (gm.found) {
        t.check("mode_residual", gm.residual, "<", c.tol.mode_residual);
        t.check("paired_negative_residual", gm.paired_residual, "<", c.tol.mode_residual);
        t.check("mirror_eigenvalue", std::abs(gm.zeta + gm.paired_negative) / std::max(1.0, gm.zeta), "<",
                c.tol.symmetry);
        t.check("spectrum_symmetry", gm.symmetry_error, "<", c.tol.symmetry);
        w.edges("mode", "quantity=growing_mode zeta=" + std::to_string(gm.zeta) + " " + params(s), gm.eigenfunction);
    }
    out = gm;
    return t;
}

TaskRecord task_evolve(const RunConfig& c, const Setup& s, Writer& w, const GrowingMode& gm) {
    TaskRecord t;
    const LinearizedOperator op = assemble_linearized(s.grid, s.Z, s.bp);
    const double T = c.T > 0.0 ? c.T : (gm.found ? std::min(200.0, 10.0 / gm.zeta) : 100.0);
    const EvolutionResult rnd = evolve_linearized(random_smooth_data(op, c.seed), T, c.dt, op);
    t.data["T"] = T;
    t.data["dt"] = c.dt;
    t.data["seed"] = c.seed;
    t.data["sigma_fit_random"] = rnd.sigma_fit;
    t.data["fit_start"] = rnd.fit_start;
    std::vector<double> logn(rnd.norms.size());
    std::transform(rnd.norms.begin(), rnd.norms.end(), logn.begin(), [](double v) { return std::log(v); });
    w.series("growth_random.csv", "quantity=log_norm data=random seed=" + std::to_string(c.seed) + " " + params(s), "t",
             "log_norm", rnd.times, logn);
    t.expect("growing_mode_found", gm.found);
    if (gm.found) {
        const EvolutionResult eig = evolve_linearized(gm.coefficients, T, c.dt, op);
        t.data["sigma_fit_eigenfunction"] = eig.sigma_fit;
        t.data["zeta"] = gm.zeta;
        t.check("fit_random_vs_zeta", std::abs(rnd.sigma_fit - gm.zeta) / gm.zeta, "<", c.tol.growth_fit);
        t.check("fit_eigenfunction_vs_zeta", std::abs(eig.sigma_fit - gm.zeta) / gm.zeta, "<", 0.02);
        std::vector<double> loge(eig.norms.size());
        std::transform(eig.norms.begin(), eig.norms.end(), loge.begin(), [](double v) { return std::log(v); });
        w.series("growth_eigenfunction.csv", "quantity=log_norm data=eigenfunction " + params(s), "t", "log_norm",
                 eig.times, loge);
    }
    return t;
}

/// Smooth data away from the vertex: centred at -3.5 on negative edges and 4 on positive edges.
/// Gaussians centred at distance 5 from the vertex, weight 1 on negative and 1/2 on positive edges.
/// Chosen by edge (not by the sign of x) so the vertex node carries one value on every edge.
RealFunction two_bumps(const GraphGrid& grid) {
    return RealFunction::sample(grid, [&grid](int e, double x) {
        const bool neg = grid.graph.negative(e);
        const double c = neg ? -5.0 : 5.0;
        return (neg ? 1.0 : 0.5) * std::exp(-(x - c) * (x - c));
    });
}

ComplexFunction resolvent_data(const GraphGrid& grid) { return to_complex(two_bumps(grid)); }

TaskRecord task_resolvent(const RunConfig& c, const Setup& s, Writer& w) {
    TaskRecord t;
    const ComplexFunction data = resolvent_data(s.grid);
    const cplx lambda(c.lambda_re, c.lambda_im);
    const ResolventResult rr = apply_resolvent(data, lambda, s.Z);
    t.data["lambda"] = {lambda.real(), lambda.imag()};
    t.data["residual"] = rr.residual;
    t.data["vertex_residuals"] = {rr.vertex_residuals[0], rr.vertex_residuals[1], rr.vertex_residuals[2]};
    t.check("resolvent_residual", rr.residual, "<", c.tol.resolvent);
    for (int i = 0; i < 3; ++i)
        t.check("resolvent_vertex_condition_" + std::to_string(i + 1), rr.vertex_residuals[i], "<", c.tol.resolvent);
    w.edges("resolvent_real", "quantity=Re_resolvent lambda=" + std::to_string(c.lambda_re) + " " + params(s),
            real_part(rr.v));

    const TimestepResult ts1 = timestep_apply(data, 1.0, 2.5e-4, s.Z);
    t.data["timestep_norm_drift"] = ts1.norm_drift;
    t.check("timestep_norm_drift", ts1.norm_drift, "<", c.tol.norm_drift);
    if (c.bromwich) {
        const double tg = c.group_time;
        const ComplexFunction wb = bromwich_apply(data, tg, s.Z);
        const ComplexFunction wt = timestep_apply(data, tg, 2.5e-4, s.Z).u;
        const double diff = norm(axpby(cplx(1.0), wb, cplx(-1.0), wt)) / norm(wt);
        const double drift = std::abs(norm(wb) / norm(data) - 1.0);
        t.data["group_time"] = tg;
        t.data["bromwich_vs_timestep"] = diff;
        t.data["bromwich_norm_change"] = drift;
        t.check("bromwich_vs_timestep", diff, "<", c.tol.group_agreement);
        t.check("bromwich_norm", drift, "<", 1e-4);
        w.edges("group_bromwich_real", "quantity=Re_W(t)w t=" + std::to_string(tg) + " " + params(s), real_part(wb));

        // Invariance of the vertex conditions; data supported near |x| = 5, grid at most [-20, 20].
        const GraphGrid ig = build_grid(s.graph, std::min(20.0, s.grid.L), s.grid.N);
        const InvarianceReport inv = domain_invariance_check(two_bumps(ig), tg, s.Z);
        t.data["invariance_continuity_spread"] = inv.continuity_spread;
        t.data["invariance_vertex_residuals"] = {inv.vertex_residuals[0], inv.vertex_residuals[1],
                                                 inv.vertex_residuals[2]};
        t.check("invariance_continuity", inv.continuity_spread, "<", c.tol.invariance);
        for (int i = 0; i < 3; ++i)
            t.check("invariance_condition_" + std::to_string(i + 1), inv.vertex_residuals[i], "<", c.tol.invariance);
    }
    return t;
}

TaskRecord task_audit(const RunConfig& c, const Setup& s, Writer& w) {
    (void)w;
    TaskRecord t;
    const LinearizedOperator op = assemble_linearized(s.grid, s.Z, s.bp);
    std::optional<RealFunction> psi;
    try {
        psi = solve_resolvent_at_zero(paired_schrodinger(op, s.grid), s.phi);
    } catch (const SingularOperator&) {
    }
    const AuditReport a = audit_assumptions(op, s.phi, psi);
    t.data["s1_skew_residual"] = a.s1_skew_residual;
    t.data["s2_vertex_residuals"] = {a.s2_vertex_residuals[0], a.s2_vertex_residuals[1], a.s2_vertex_residuals[2]};
    t.data["s2_stationarity"] = a.s2_stationarity;
    t.data["s3_symmetry_residual"] = a.s3_symmetry_residual;
    t.data["s4_max_ratio"] = a.s4_max_ratio;
    t.data["s4_samples"] = a.s4_samples;
    t.data["s5_morse_index"] = a.morse_index;
    t.data["s5_kernel_detected"] = a.kernel_detected;
    t.data["s5_eigenvalues"] = a.eigenvalues;
    t.data["s5_n_phi_projections"] = a.n_phi_projections;
    t.data["s6_psi_phi"] = a.s6_psi_phi ? json(*a.s6_psi_phi) : json(nullptr);
    t.data["s6_oracle"] = a.s6_oracle ? json(*a.s6_oracle) : json(nullptr);
    t.data["s7_skew_residual"] = a.s7_skew_residual;
    t.data["criterion"] = a.criterion;
    t.data["flags"] = a.flags;
    t.check("s1_skew", a.s1_skew_residual, "<", 1e-12);
    t.check("s2_vertex", *std::max_element(a.s2_vertex_residuals.begin(), a.s2_vertex_residuals.end()), "<",
            c.tol.vertex);
    t.check("s2_stationarity", a.s2_stationarity, "<", c.tol.stationarity);
    t.check("s3_symmetry", a.s3_symmetry_residual, "<", 1e-12);
    t.check("s4_orthogonality", a.s4_max_ratio, "<", c.tol.s4);
    t.check("s7_skew", a.s7_skew_residual, "<", 1e-12);
    if (s.Z == 0.0) {
        t.expect("kernel_flagged_at_Z0", a.kernel_detected && a.criterion == "inapplicable");
    } else {
        t.expect("criterion_applicable", a.criterion != "inapplicable");
        if (a.s6_psi_phi) t.check("s6_psi_phi_negative", *a.s6_psi_phi, "<", 0.0);
        if (a.s6_psi_phi && a.s6_oracle)
            t.check("s6_oracle", std::abs(*a.s6_psi_phi - *a.s6_oracle), "<", 1e-3 * std::abs(*a.s6_oracle));
        if (two_half_lines(s)) t.check("s5_morse_index", a.morse_index, "==", s.Z > 0 ? 2 : 1);
        if (a.criterion == "crit") {
            double proj = 0.0;
            for (double v : a.n_phi_projections) proj = std::max(proj, std::abs(v));
            t.check("s5_projection_nonzero", proj, ">", 1e-8);
        }
    }
    return t;
}

json sweep_row(const RunConfig& c, double Z) {
    json row = {{"Z", Z}};
    try {
        const Setup s = make_setup(c, Z, c.N, c.L);
        const SchrodingerOperator E = assemble_schrodinger(s.grid, Z, s.phi, vertex_kind_for(s));
        const SpectralReport rep = spectrum_below_edge(E, 3);
        row["second_eigenvalue"] = SymmetricPencil(E.K, E.w).eigenvalue(1);
        row["morse_index"] = rep.morse_index;
        row["kernel_detected"] = rep.kernel_detected;
        row["eigen_residual"] = rep.residuals.empty() ? 0.0 : *std::max_element(rep.residuals.begin(), rep.residuals.end());
        if (!rep.kernel_detected) row["psi_phi"] = inner_product(solve_resolvent_at_zero(E, s.phi), s.phi);
        else row["psi_phi"] = nullptr;
        if (s.graph.balanced()) {
            ModeOptions o;
            o.coarse_N = c.coarse_N;
            o.window = c.window;
            const GrowingMode gm = growing_modes(assemble_linearized(s.grid, Z, s.bp), o);
            row["zeta_found"] = gm.found;
            row["zeta"] = gm.zeta;
            row["mode_residual"] = gm.residual;
        }
    } catch (const std::exception& e) {
        row["error"] = e.what();
    }
    return row;
}

}  // namespace

json sweep(const RunConfig& c) {
    std::vector<json> rows(c.sweep.size());
    parallel_for(static_cast<int>(c.sweep.size()), [&](int i) { rows[i] = sweep_row(c, c.sweep[i]); });
    return json(rows);
}

RunOutcome run(const RunConfig& c, bool write_files, std::ostream* log) {
    RunOutcome out;
    json& rep = out.report;
    rep["config"] = {{"graph", {{"m", c.m}, {"n", c.n}, {"alpha", c.edge_alpha()}, {"beta", c.edge_beta()}}},
                     {"discretization", {{"L", c.L}, {"N", c.N}}},
                     {"vertex", {{"Z", c.Z}, {"sweep", c.sweep}}},
                     {"task", c.task}};
    try {
        c.validate();
    } catch (const ConfigError& e) {
        rep["status"] = "usage_error";
        rep["error"] = e.what();
        out.exit_code = exit_usage;
        return out;
    }
    const bool all = c.task == "all";
    auto wants = [&](const std::string& name) { return all || c.task == name; };
    const bool needs_balanced =
        c.task == "modes" || c.task == "evolve" || c.task == "resolvent" || c.task == "audit";
    if (needs_balanced && c.m != c.n) {
        rep["status"] = "usage_error";
        rep["error"] = "task." + c.task + ": requires a balanced graph (m == n)";
        out.exit_code = exit_usage;
        return out;
    }
    Setup s;
    if (c.task != "sweep") {
        try {
            s = make_setup(c, c.Z, c.N, c.L);
        } catch (const InvalidArgument& e) {
            rep["status"] = "usage_error";
            rep["error"] = std::string("vertex.Z / graph: ") + e.what();
            out.exit_code = exit_usage;
            return out;
        }
    }
    Writer w(c, write_files);
    bool ok = true;
    rep["tasks"] = json::object();
    auto run_task = [&](const std::string& name, const std::function<TaskRecord()>& fn) {
        if (log) *log << "[graphkdv] " << name << " ..." << std::endl;
        json entry;
        try {
            TaskRecord t = fn();
            entry = t.data;
            entry["checks"] = t.checks;
            entry["status"] = t.ok ? "passed" : "failed";
            ok = ok && t.ok;
        } catch (const std::exception& e) {
            entry["status"] = "error";
            entry["error"] = e.what();
            ok = false;
        }
        if (log) *log << "[graphkdv] " << name << ": " << entry["status"].get<std::string>() << std::endl;
        rep["tasks"][name] = entry;
    };

    std::optional<GrowingMode> gm;
    if (wants("profile")) run_task("profile", [&] { return task_profile(c, s, w); });
    if (wants("spectrum")) run_task("spectrum", [&] { return task_spectrum(c, s, w); });
    const bool balanced = c.m == c.n;
    if (balanced && (wants("modes") || wants("evolve")))
        run_task("modes", [&] { return task_modes(c, s, w, gm); });
    if (balanced && wants("evolve")) {
        run_task("evolve", [&] {
            if (!gm) throw NumericalError("growing-mode computation failed; nothing to compare against");
            return task_evolve(c, s, w, *gm);
        });
    }
    if (balanced && wants("resolvent")) run_task("resolvent", [&] { return task_resolvent(c, s, w); });
    if (balanced && wants("audit")) run_task("audit", [&] { return task_audit(c, s, w); });
    if (c.task == "sweep" || (all && !c.sweep.empty())) {
        if (log) *log << "[graphkdv] sweep over " << c.sweep.size() << " values of Z ..." << std::endl;
        json rows = sweep(c);
        rep["sweep"] = rows;
        std::ostringstream csv;
        csv << "# quantity=sweep m=" << c.m << " n=" << c.n << " L=" << c.L << " N=" << c.N << "\n"
            << "Z,second_eigenvalue,morse_index,psi_phi,zeta,error\n"
            << std::setprecision(17);
        bool rows_ok = true;
        json checks = json::array();
        auto add = [&](const std::string& name, bool pass) {
            checks.push_back({{"name", name}, {"passed", pass}});
            rows_ok = rows_ok && pass;
        };
        for (const json& r : rows) {
            if (r.contains("error")) continue;
            const double Z = r["Z"].get<double>();
            const std::string tag = "Z=" + r["Z"].dump();
            if (!r["psi_phi"].is_null()) add("psi_phi_negative " + tag, r["psi_phi"].get<double>() < 0.0);
            if (c.m == 1 && c.n == 1 && Z != 0.0) {
                add("morse_index " + tag, r["morse_index"].get<int>() == (Z > 0 ? 2 : 1));
                const double om = r["second_eigenvalue"].get<double>();
                add("second_eigenvalue_sign " + tag, Z > 0 ? om < 0.0 : om > 0.0);
            }
            if (r.contains("zeta_found") && Z != 0.0) add("zeta_nonzero " + tag, r["zeta_found"].get<bool>());
        }
        rep["sweep_checks"] = checks;
        for (const json& r : rows) {
            auto get = [&](const char* k) { return r.contains(k) && !r[k].is_null() ? r[k].dump() : std::string(); };
            csv << get("Z") << "," << get("second_eigenvalue") << "," << get("morse_index") << "," << get("psi_phi")
                << "," << get("zeta") << "," << (r.contains("error") ? "1" : "0") << "\n";
            rows_ok = rows_ok && !r.contains("error");
        }
        w.text("sweep.csv", csv.str());
        ok = ok && rows_ok;
    }
    rep["status"] = ok ? "passed" : "failed";
    out.exit_code = ok ? exit_ok : exit_check_failed;
    if (write_files) {
        std::ofstream(fs::path(c.output_dir) / "report.json") << rep.dump(2) << "\n";
        out.files = w.files();
        out.files.push_back("report.json");
    }
    return out;
}

}  // namespace graphkdv
