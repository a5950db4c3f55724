#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "graphkdv/graph.hpp"
#include "graphkdv/hermite.hpp"
#include "graphkdv/profiles.hpp"
#include "graphkdv/schrodinger.hpp"

namespace graphkdv {

/// d/dt v = alpha v''' + beta v' + 2 (phi v)' on a balanced star graph with the delta-type vertex
/// conditions, discretized pair by pair with Hermite elements (see HermitePair). The discrete operator is
/// M^{-1} K. Without a profile it is the bare Airy generator used by the group module.
struct LinearizedOperator {
    GraphGrid grid;
    double Z = 0.0;
    std::optional<BalancedProfile> profile;
    HermiteGraphOperator fe;

    int size() const { return fe.size(); }
    /// Same operator on another resolution (same L, graph and profile).
    LinearizedOperator rebuilt(int N) const;
};

LinearizedOperator assemble_linearized(const GraphGrid& grid, double Z, const std::optional<BalancedProfile>& profile);
/// The two-half-line profile replicated on every pair of grid.graph.
LinearizedOperator assemble_linearized(const GraphGrid& grid, const Profile& profile);

struct ModeOptions {
    int coarse_N = 160;           // dense eigensolve resolution (per half-line)
    double window = 2.0;          // |lambda| <= window
    double far_mass = 0.2;        // discard eigenvectors with more mass in |x| > L/2 than this fraction
    double real_tol = 1e-8;       // |Im lambda| below this counts as real
    double found_tol = 1e-6;      // Re lambda above 10 * found_tol counts as growth
    double symmetry_tol = 1e-6;
    int max_iterations = 40;
};

struct GrowingMode {
    bool found = false;
    double zeta = 0.0;
    double residual = 0.0;          // ||M^{-1}(K x - zeta M x)||_M / ||x||_M on the fine grid
    double paired_negative = 0.0;   // refined eigenvalue near -zeta
    double paired_residual = 0.0;
    double coarse_zeta = 0.0;
    RealFunction eigenfunction;     // nodal values, unit L2 norm, positive largest entry
    Eigen::VectorXd coefficients;   // fine-grid Hermite coefficients of the same vector
    std::vector<cplx> window;       // refined localized eigenvalues with |lambda| <= window
    std::vector<double> window_residuals;
    double symmetry_error = 0.0;    // worst distance of -lambda and conj(lambda) to the window set
    bool symmetric = false;
    std::string note;
};

GrowingMode growing_modes(const LinearizedOperator& op, const ModeOptions& options = {});

struct EvolutionResult {
    std::vector<double> times;
    std::vector<double> norms;   // ||v(t)||_M
    double sigma_fit = 0.0;      // slope of log ||v|| over [fit_start, T]
    double fit_start = 0.0;
    int steps = 0;
};

/// Implicit midpoint on M dv/dt = K v; least-squares fit of log ||v|| over the second half of [0, T].
EvolutionResult evolve_linearized(const Eigen::VectorXd& v0, double T, double dt, const LinearizedOperator& op);
EvolutionResult evolve_linearized(const RealFunction& v0, double T, double dt, const LinearizedOperator& op);

/// Smooth random data: a sum of unit-width Gaussians with random centres and amplitudes, continuous at the
/// vertex, then projected onto the Hermite space.
Eigen::VectorXd random_smooth_data(const LinearizedOperator& op, std::uint32_t seed, int bumps = 8);

struct AuditReport {
    // S1: the bare generator is skew, so the linear flow is a unitary group
    double s1_skew_residual = 0.0;
    // S2: the profile satisfies the vertex conditions and is stationary
    std::array<double, 3> s2_vertex_residuals{};
    double s2_stationarity = 0.0;
    // S3: E is symmetric
    double s3_symmetry_residual = 0.0;
    // S4: max over random domain vectors of |<NE u, phi>| / ||u||
    double s4_max_ratio = 0.0;
    int s4_samples = 0;
    // S5: Morse data of E and the projections <N phi, Phi_k>
    int morse_index = 0;
    bool kernel_detected = false;
    std::vector<double> eigenvalues;
    std::vector<double> n_phi_projections;
    // S6: <psi, phi>, numeric and closed form (the latter only for alpha = omega = 1)
    std::optional<double> s6_psi_phi;
    std::optional<double> s6_oracle;
    // S7: max |D + D^T| for the discrete derivative on the domain
    double s7_skew_residual = 0.0;
    std::string criterion;  // "crit" (n(E) = 2), "crit2" (n(E) = 1) or "inapplicable"
    std::vector<std::string> flags;
};

/// phi and psi are samples on op.grid; psi may be empty (Z = 0, where E has a kernel).
AuditReport audit_assumptions(const LinearizedOperator& op, const RealFunction& phi,
                              const std::optional<RealFunction>& psi, int samples = 50, std::uint32_t seed = 7);

/// Schrodinger operator E paired with the linearized operator: delta vertex for two half-lines,
/// full delta sum for n >= 2, Kirchhoff when Z = 0.
SchrodingerOperator paired_schrodinger(const LinearizedOperator& op, const GraphGrid& grid);

struct BalancedResult {
    GrowingMode full;
    std::optional<GrowingMode> reduced;  // two half-lines, equal coefficients only
    double difference = 0.0;             // |zeta_full - zeta_reduced|
    bool kernel_detected = false;        // of the full-delta-sum Schrodinger operator
    double min_abs_eigenvalue = 0.0;
    int morse_index = 0;                 // on the whole graph
    std::optional<int> symmetric_morse_index;  // on replicated data, equal coefficients only
};

/// alphas, betas: one entry per pair. Throws InvalidArgument on constraint violations.
BalancedResult balanced_instability(const GraphGrid& grid, double Z, const std::vector<double>& alphas,
                                    const std::vector<double>& betas, const ModeOptions& options = {});

/// log2(|a - b| / |b - c|) for values on grids h, h/2, h/4.
double observed_order(double a, double b, double c);

struct ConvergenceStudy {
    std::vector<int> N;
    std::vector<double> values;
    double order = 0.0;
};
/// zeta on three successively halved grids (N, 2N, 4N) of length L, dense solves only.
ConvergenceStudy zeta_convergence(const Profile& profile, double L, int N0);

}  // namespace graphkdv
