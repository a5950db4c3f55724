#include "graphkdv/instability.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "graphkdv/airy_group.hpp"

namespace graphkdv {

namespace {

using CSpMat = Eigen::SparseMatrix<cplx>;

std::vector<ProfileFn> pair_functions(const BalancedProfile& bp) {
    std::vector<ProfileFn> out;
    for (const Profile& p : bp.pairs) out.push_back([p](double x, int d) { return p(x, d); });
    return out;
}

/// Fraction of the nodal mass (values only) sitting in |x| > L/2.
double far_fraction(const HermiteGraphOperator& fe, const Eigen::VectorXcd& x) {
    double far = 0.0, all = 0.0;
    for (size_t j = 0; j < fe.pairs.size(); ++j) {
        const HermitePair& p = fe.pairs[j];
        for (int i = -p.N + 1; i < p.N; ++i) {
            const double a = std::norm(x[fe.offset[j] + p.value_dof(i)]);
            all += a;
            if (2 * std::abs(i) > p.N) far += a;
        }
    }
    return all > 0.0 ? far / all : 0.0;
}

struct DenseSpectrum {
    Eigen::VectorXcd values;
    Eigen::MatrixXcd vectors;  // generalized eigenvectors K x = lambda M x
};

DenseSpectrum dense_spectrum(const HermiteGraphOperator& fe) {
    const Eigen::MatrixXd Md(fe.M), Kd(fe.K);
    Eigen::LLT<Eigen::MatrixXd> llt(Md);
    if (llt.info() != Eigen::Success) throw NumericalError("dense eigensolve: mass matrix not positive definite");
    const Eigen::MatrixXd B = llt.matrixL().solve(Kd);
    const Eigen::MatrixXd A = llt.matrixL().solve(B.transpose()).transpose();
    Eigen::EigenSolver<Eigen::MatrixXd> es(A, true);
    if (es.info() != Eigen::Success) throw NumericalError("dense eigensolve did not converge");
    DenseSpectrum d;
    d.values = es.eigenvalues();
    const Eigen::MatrixXcd Y = es.eigenvectors();
    d.vectors.resize(Y.rows(), Y.cols());
    const auto U = llt.matrixU();
    d.vectors.real() = U.solve(Eigen::MatrixXd(Y.real()));
    d.vectors.imag() = U.solve(Eigen::MatrixXd(Y.imag()));
    return d;
}

/// Localized eigenvalues in the window, from the dense coarse solve.
std::vector<cplx> localized_window(const HermiteGraphOperator& fe, const ModeOptions& o) {
    const DenseSpectrum d = dense_spectrum(fe);
    std::vector<cplx> out;
    for (int k = 0; k < d.values.size(); ++k) {
        const cplx lam = d.values[k];
        if (std::abs(lam) > o.window) continue;
        if (far_fraction(fe, d.vectors.col(k)) > o.far_mass) continue;
        out.push_back(std::abs(lam.imag()) < o.real_tol ? cplx(lam.real(), 0.0) : lam);
    }
    std::sort(out.begin(), out.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return out;
}

double largest_real_positive(const std::vector<cplx>& w, const ModeOptions& o) {
    double best = 0.0;
    for (cplx lam : w)
        if (lam.imag() == 0.0 && lam.real() > 10.0 * o.found_tol) best = std::max(best, lam.real());
    return best;
}

struct Refined {
    cplx lambda;
    Eigen::VectorXcd x;
    double residual = std::numeric_limits<double>::infinity();
};

/// Shift-invert iteration with occasional shift updates on the fine generalized problem K x = lambda M x.
class Refiner {
public:
    explicit Refiner(const HermiteGraphOperator& fe) : fe_(fe), Kc_(fe.K.cast<cplx>()), Mc_(fe.M.cast<cplx>()) {
        mass_.compute(fe.M);
        if (mass_.info() != Eigen::Success) throw NumericalError("mass matrix factorization failed");
    }

    double residual(cplx lam, const Eigen::VectorXcd& x) const {
        const Eigen::VectorXcd r = Kc_ * x - lam * (Mc_ * x);
        Eigen::VectorXcd s(r.size());
        s.real() = mass_.solve(Eigen::VectorXd(r.real()));
        s.imag() = mass_.solve(Eigen::VectorXd(r.imag()));
        return fe_.norm(s) / fe_.norm(x);
    }

    Refined refine(cplx sigma, int max_iterations, std::uint32_t seed) const {
        std::mt19937 gen(seed);
        std::normal_distribution<double> nd;
        Eigen::VectorXcd x(fe_.size());
        for (int i = 0; i < x.size(); ++i) x[i] = cplx(nd(gen), 0.0);
        x /= fe_.norm(x);
        Eigen::SparseLU<CSpMat> lu;
        auto factor = [&](cplx s) {
            CSpMat A = Kc_ - s * Mc_;
            A.makeCompressed();
            lu.compute(A);
            return lu.info() == Eigen::Success;
        };
        if (!factor(sigma)) throw NumericalError("shift-invert factorization failed");
        Refined best;
        best.lambda = sigma;
        for (int it = 0; it < max_iterations; ++it) {
            Eigen::VectorXcd y = lu.solve(Mc_ * x);
            if (!y.allFinite()) break;
            x = y / fe_.norm(y);
            const Eigen::VectorXcd mx = Mc_ * x;
            const cplx lam = mx.dot(Kc_ * x) / mx.dot(mx);
            const double res = residual(lam, x);
            if (res < best.residual) best = {lam, x, res};
            if (res < 1e-11) break;
            if (it % 4 == 3 && res < 1e-3) {
                if (factor(lam)) sigma = lam;
                else factor(sigma);
            }
        }
        return best;
    }

private:
    const HermiteGraphOperator& fe_;
    CSpMat Kc_, Mc_;
    Eigen::SimplicialLDLT<SpMat> mass_;
};

Eigen::VectorXd real_mode(const Eigen::VectorXcd& x) {
    Eigen::Index k;
    x.cwiseAbs().maxCoeff(&k);
    const cplx phase = std::abs(x[k]) > 0 ? std::conj(x[k]) / std::abs(x[k]) : cplx(1.0);
    return (x * phase).real();
}

double min_distance(const std::vector<cplx>& set, cplx z) {
    double d = std::numeric_limits<double>::infinity();
    for (cplx s : set) d = std::min(d, std::abs(s - z));
    return d;
}

}  // namespace

LinearizedOperator assemble_linearized(const GraphGrid& grid, double Z, const std::optional<BalancedProfile>& profile) {
    const StarGraph& g = grid.graph;
    g.validate();
    require(g.balanced(), "assemble_linearized needs a balanced star graph");
    LinearizedOperator op;
    op.grid = grid;
    op.Z = Z;
    op.profile = profile;
    if (profile) {
        require(static_cast<int>(profile->pairs.size()) == g.n, "assemble_linearized: one profile per edge pair");
        require(std::abs(profile->Z - Z) < 1e-14, "assemble_linearized: profile built for a different Z");
        for (int j = 0; j < g.n; ++j) {
            const Profile& p = profile->pairs[j];
            require(std::abs(p.Z - Z) < 1e-14, "assemble_linearized: pair profile built for a different Z");
            require(std::abs(p.alpha - g.alpha[g.m + j]) < 1e-14 && std::abs(p.beta - g.beta[g.m + j]) < 1e-14,
                    "assemble_linearized: profile coefficients differ from the graph's");
            const auto r = check_vertex_conditions(p);
            require(std::max({r[0], r[1], r[2]}) < 1e-10, "assemble_linearized: profile violates the vertex conditions");
        }
        op.fe = assemble_hermite(grid, Z, pair_functions(*profile));
    } else {
        op.fe = assemble_hermite(grid, Z);
    }
    return op;
}

LinearizedOperator assemble_linearized(const GraphGrid& grid, const Profile& profile) {
    BalancedProfile bp;
    bp.graph = grid.graph;
    bp.Z = profile.Z;
    bp.pairs.assign(grid.graph.n, profile);
    return assemble_linearized(grid, profile.Z, bp);
}

LinearizedOperator LinearizedOperator::rebuilt(int N) const {
    return assemble_linearized(build_grid(grid.graph, grid.L, N), Z, profile);
}

GrowingMode growing_modes(const LinearizedOperator& op, const ModeOptions& o) {
    GrowingMode gm;
    const LinearizedOperator coarse = op.rebuilt(o.coarse_N);
    const std::vector<cplx> seeds = localized_window(coarse.fe, o);
    gm.coarse_zeta = largest_real_positive(seeds, o);

    const Refiner refiner(op.fe);
    std::uint32_t seed = 11;
    for (cplx s : seeds) {
        const Refined r = refiner.refine(s, o.max_iterations, seed++);
        cplx lam = r.lambda;
        if (s.imag() == 0.0 && std::abs(lam.imag()) < o.real_tol) lam = cplx(lam.real(), 0.0);
        gm.window.push_back(lam);
        gm.window_residuals.push_back(r.residual);
    }
    for (cplx lam : gm.window) {
        const double scale = std::max(1.0, std::abs(lam));
        gm.symmetry_error = std::max({gm.symmetry_error, min_distance(gm.window, -lam) / scale,
                                      min_distance(gm.window, std::conj(lam)) / scale});
    }
    gm.symmetric = gm.symmetry_error <= o.symmetry_tol;

    if (gm.coarse_zeta <= 0.0) {
        gm.note = "no real eigenvalue with Re > " + std::to_string(10.0 * o.found_tol) +
                  " among localized eigenvalues in the window at this resolution";
        return gm;
    }
    const Refined plus = refiner.refine(gm.coarse_zeta, o.max_iterations, 101);
    const Refined minus = refiner.refine(-gm.coarse_zeta, o.max_iterations, 202);
    gm.found = std::abs(plus.lambda.imag()) < o.real_tol && plus.lambda.real() > 10.0 * o.found_tol;
    gm.zeta = plus.lambda.real();
    gm.residual = plus.residual;
    gm.paired_negative = minus.lambda.real();
    gm.paired_residual = minus.residual;
    gm.coefficients = real_mode(plus.x);
    gm.eigenfunction = op.fe.to_function(gm.coefficients);
    double nrm = norm(gm.eigenfunction);
    double peak = 0.0;
    for (const auto& e : gm.eigenfunction.values)
        for (double v : e)
            if (std::abs(v) > std::abs(peak)) peak = v;
    if (peak < 0) nrm = -nrm;
    gm.coefficients /= nrm;
    gm.eigenfunction = op.fe.to_function(gm.coefficients);
    if (!gm.found) gm.note = "refinement left the real axis";
    return gm;
}

EvolutionResult evolve_linearized(const Eigen::VectorXd& v0, double T, double dt, const LinearizedOperator& op) {
    require(T > 0.0 && dt > 0.0, "evolve_linearized: need T > 0 and dt > 0");
    require(v0.size() == op.size(), "evolve_linearized: data size mismatch");
    const int steps = std::max(1, static_cast<int>(std::ceil(T / dt - 1e-12)));
    const double h = T / steps;
    MidpointStepper stepper(op.fe.M, op.fe.K, h);
    EvolutionResult res;
    res.steps = steps;
    Eigen::VectorXd v = v0;
    res.times.push_back(0.0);
    res.norms.push_back(op.fe.norm(v));
    for (int s = 1; s <= steps; ++s) {
        v = stepper.step(v);
        const double nv = op.fe.norm(v);
        if (!std::isfinite(nv) || nv > 1e250) throw NumericalError("evolve_linearized: overflow before the fit window");
        res.times.push_back(s * h);
        res.norms.push_back(nv);
    }
    res.fit_start = 0.5 * T;
    double st = 0, sy = 0, stt = 0, sty = 0;
    int cnt = 0;
    for (size_t i = 0; i < res.times.size(); ++i) {
        if (res.times[i] < res.fit_start) continue;
        const double t = res.times[i], y = std::log(res.norms[i]);
        st += t;
        sy += y;
        stt += t * t;
        sty += t * y;
        ++cnt;
    }
    if (cnt >= 2) res.sigma_fit = (cnt * sty - st * sy) / (cnt * stt - st * st);
    return res;
}

EvolutionResult evolve_linearized(const RealFunction& v0, double T, double dt, const LinearizedOperator& op) {
    return evolve_linearized(op.fe.from_function(v0), T, dt, op);
}

Eigen::VectorXd random_smooth_data(const LinearizedOperator& op, std::uint32_t seed, int bumps) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> centre(-10.0, 10.0), amp(-1.0, 1.0);
    const GraphGrid& grid = op.grid;
    const int m = grid.graph.m;
    RealFunction u(grid);
    for (int j = 0; j < grid.graph.n; ++j) {
        std::vector<std::pair<double, double>> b(bumps);
        for (auto& [c, a] : b) {
            c = centre(gen);
            a = amp(gen);
        }
        for (int e : {j, m + j})
            for (int k = 0; k <= grid.N; ++k) {
                const double x = grid.x(e, k);
                double s = 0.0;
                for (auto [c, a] : b) s += a * std::exp(-0.5 * (x - c) * (x - c));
                u[e][k] = s;
            }
    }
    return op.fe.from_function(u);
}

SchrodingerOperator paired_schrodinger(const LinearizedOperator& op, const GraphGrid& grid) {
    std::optional<RealFunction> phi;
    if (op.profile) phi = sample_profile(grid, *op.profile);
    VertexKind kind = grid.graph.n == 1 ? VertexKind::delta : VertexKind::full_delta_sum;
    if (op.Z == 0.0) kind = VertexKind::kirchhoff;
    return assemble_schrodinger(grid, op.Z, phi, kind);
}

AuditReport audit_assumptions(const LinearizedOperator& op, const RealFunction& phi,
                              const std::optional<RealFunction>& psi, int samples, std::uint32_t seed) {
    require(op.profile.has_value(), "audit_assumptions needs a linearized operator with a profile");
    require(phi.grid.same_as(op.grid), "audit_assumptions: phi grid mismatch");
    AuditReport a;
    const BalancedProfile& bp = *op.profile;

    const HermiteGraphOperator bare = assemble_hermite(op.grid, op.Z);
    const SpMat skew = bare.K + SpMat(bare.K.transpose());
    a.s1_skew_residual = skew.nonZeros() ? skew.coeffs().cwiseAbs().maxCoeff() : 0.0;

    for (const Profile& p : bp.pairs) {
        const auto r = check_vertex_conditions(p);
        for (int i = 0; i < 3; ++i) a.s2_vertex_residuals[i] = std::max(a.s2_vertex_residuals[i], r[i]);
        a.s2_stationarity = std::max(a.s2_stationarity, stationarity_residual(p, op.grid.L, op.grid.N));
    }

    const SchrodingerOperator E = paired_schrodinger(op, op.grid);
    a.s3_symmetry_residual = E.symmetry_residual();

    // S4: <NE u, phi> through the weak form with the exact profile as test function
    std::vector<Eigen::VectorXd> rows;
    for (size_t j = 0; j < op.fe.pairs.size(); ++j) {
        const Profile& p = bp.pairs[j];
        rows.push_back(op.fe.pairs[j].weak_form_against([p](double x, int d) { return p(x, d); }, p.plus(0.0),
                                                        p.minus(0.0, 1)));
    }
    a.s4_samples = samples;
    for (int s = 0; s < samples; ++s) {
        const Eigen::VectorXd u = random_smooth_data(op, seed + s);
        double val = 0.0;
        for (size_t j = 0; j < rows.size(); ++j) val += rows[j].dot(u.segment(op.fe.offset[j], rows[j].size()));
        a.s4_max_ratio = std::max(a.s4_max_ratio, std::abs(val) / op.fe.norm(u));
    }

    const SpectralReport rep = spectrum_below_edge(E, 3);
    a.morse_index = rep.morse_index;
    a.kernel_detected = rep.kernel_detected;
    a.eigenvalues = rep.eigenvalues;
    const RealFunction dphi = sample_profile(op.grid, bp, 1);
    for (size_t k = 0; k < rep.eigenvectors.size() && k < 2; ++k)
        a.n_phi_projections.push_back(-inner_product(dphi, rep.eigenvectors[k]));

    if (psi) {
        a.s6_psi_phi = inner_product(*psi, phi);
        bool unit = true;
        for (const Profile& p : bp.pairs) unit = unit && p.alpha == 1.0 && p.omega == 1.0;
        if (unit) a.s6_oracle = bp.graph.n * mass_derivative_oracle(op.Z);
    }

    for (const HermitePair& p : op.fe.pairs) {
        const SpMat D = p.derivative_form();
        const SpMat S = D + SpMat(D.transpose());
        if (S.nonZeros() > 0) a.s7_skew_residual = std::max(a.s7_skew_residual, S.coeffs().cwiseAbs().maxCoeff());
    }

    if (a.kernel_detected) {
        a.criterion = "inapplicable";
        a.flags.push_back("E has a kernel: S5 invertibility fails");
    } else if (a.morse_index == 2) {
        a.criterion = "crit";
        bool proj = false;
        for (double v : a.n_phi_projections) proj = proj || std::abs(v) > 1e-8;
        if (!proj) a.flags.push_back("S5: <N phi, Phi_k> vanish for both negative eigenvectors");
        if (!a.s6_psi_phi || std::abs(*a.s6_psi_phi) < 1e-8) a.flags.push_back("S6: <psi, phi> vanishes");
    } else if (a.morse_index == 1) {
        a.criterion = "crit2";
    } else {
        a.criterion = "inapplicable";
        a.flags.push_back("Morse index " + std::to_string(a.morse_index) + " outside {1, 2}");
    }
    if (a.s4_max_ratio > 1e-8) a.flags.push_back("S4: <NE u, phi> not small");
    return a;
}

BalancedResult balanced_instability(const GraphGrid& grid, double Z, const std::vector<double>& alphas,
                                    const std::vector<double>& betas, const ModeOptions& options) {
    const int n = grid.graph.n;
    require(grid.graph.balanced() && n >= 2, "balanced_instability needs a balanced graph with n >= 2");
    require(static_cast<int>(alphas.size()) == n && static_cast<int>(betas.size()) == n,
            "balanced_instability: one alpha and one beta per pair");
    std::vector<double> ea(alphas), eb(betas);
    ea.insert(ea.end(), alphas.begin(), alphas.end());
    eb.insert(eb.end(), betas.begin(), betas.end());
    const StarGraph g(n, n, ea, eb);
    const GraphGrid full_grid = build_grid(g, grid.L, grid.N);
    const BalancedProfile bp = make_balanced_profile(g, Z, alphas, betas);

    BalancedResult res;
    const LinearizedOperator op = assemble_linearized(full_grid, Z, bp);
    res.full = growing_modes(op, options);

    const SpectralReport rep = spectrum_below_edge(paired_schrodinger(op, full_grid), 3);
    res.kernel_detected = rep.kernel_detected;
    res.min_abs_eigenvalue = rep.min_abs_eigenvalue;
    res.morse_index = rep.morse_index;

    const bool equal = std::all_of(alphas.begin(), alphas.end(), [&](double a) { return a == alphas[0]; }) &&
                       std::all_of(betas.begin(), betas.end(), [&](double b) { return b == betas[0]; });
    if (equal) {
        const GraphGrid two = build_grid(StarGraph::uniform(1, 1, alphas[0], betas[0]), grid.L, grid.N);
        const LinearizedOperator op1 = assemble_linearized(two, bp.pairs[0]);
        res.reduced = growing_modes(op1, options);
        res.symmetric_morse_index = spectrum_below_edge(paired_schrodinger(op1, two), 3).morse_index;
        res.difference = std::abs(res.full.zeta - res.reduced->zeta);
    }
    return res;
}

double observed_order(double a, double b, double c) { return std::log2(std::abs(a - b) / std::abs(b - c)); }

ConvergenceStudy zeta_convergence(const Profile& profile, double L, int N0) {
    ConvergenceStudy st;
    const StarGraph g = StarGraph::uniform(1, 1, profile.alpha, profile.beta);
    ModeOptions o;
    for (int N : {N0, 2 * N0, 4 * N0}) {
        const LinearizedOperator op = assemble_linearized(build_grid(g, L, N), profile);
        st.N.push_back(N);
        st.values.push_back(largest_real_positive(localized_window(op.fe, o), o));
    }
    st.order = observed_order(st.values[0], st.values[1], st.values[2]);
    return st;
}

}  // namespace graphkdv
