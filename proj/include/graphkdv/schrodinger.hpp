#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "graphkdv/graph.hpp"
#include "graphkdv/sym_eigen.hpp"

namespace graphkdv {

/// kirchhoff: zero net flux. delta: flux jump Z * (sum of positive-side alpha) / n, which is
/// Z alpha for two half-lines. full_delta_sum: flux jump Z * sum of positive-side alpha (= Z n when sum alpha = n).
enum class VertexKind { kirchhoff, delta, full_delta_sum };
std::string to_string(VertexKind k);
VertexKind vertex_kind_from_string(const std::string& s);

/// -alpha_e d^2/dx^2 - beta_e - 2 phi_e on every edge, one shared vertex unknown, Dirichlet at the far ends.
/// Lumped piecewise-linear elements: K is the stiffness-plus-potential form, w the lumped mass, so the
/// discrete operator is W^{-1} K. Interior rows are the 3-point second difference.
struct SchrodingerOperator {
    GraphGrid grid;
    double Z = 0.0;
    VertexKind vertex_kind = VertexKind::kirchhoff;
    RealFunction potential;  // -beta_e - 2 phi_e
    double vertex_coupling = 0.0;  // coefficient multiplying u(0)^2 in the form
    SpMat K;
    Eigen::VectorXd w;

    int size() const { return static_cast<int>(w.size()); }
    /// Global index of interior node k (1..N-1) on edge e; nodes run from the far end toward the vertex.
    int dof(int e, int k) const { return e * (grid.N - 1) + (grid.N - 1 - k); }
    int vertex_dof() const { return grid.edges() * (grid.N - 1); }

    Eigen::VectorXd to_vector(const RealFunction& u) const;
    RealFunction to_function(const Eigen::VectorXd& x) const;
    /// W^{-1} K u
    RealFunction apply(const RealFunction& u) const;
    double essential_edge() const;
    /// max |K - K^T|
    double symmetry_residual() const;
};

/// phi = nullopt means no profile (phi = 0).
SchrodingerOperator assemble_schrodinger(const GraphGrid& grid, double Z, const std::optional<RealFunction>& phi,
                                         VertexKind kind);

struct SpectralReport {
    std::vector<double> eigenvalues;  // below essential_edge - 5h^2, ascending
    std::vector<double> above_edge;   // continuum approximants requested beyond the edge, not counted
    std::vector<RealFunction> eigenvectors;
    std::vector<double> residuals;
    int morse_index = 0;
    bool kernel_detected = false;
    double kernel_threshold = 0.0;
    double essential_edge = 1.0;
    double min_abs_eigenvalue = 0.0;
};

/// The k smallest eigenvalues (those below the edge) with eigenvectors, Morse index and kernel flag.
/// kernel_tol <= 0 selects the default 10 h^2.
SpectralReport spectrum_below_edge(const SchrodingerOperator& op, int k, double kernel_tol = -1.0);

/// Solves E psi = rhs. Throws SingularOperator when a kernel is detected.
RealFunction solve_resolvent_at_zero(const SchrodingerOperator& op, const RealFunction& rhs,
                                     double kernel_tol = -1.0, double* residual = nullptr);

/// Q E Q on the W-orthogonal complement of phi, written in a W-orthonormal basis of that complement.
struct ReducedOperator {
    Eigen::MatrixXd matrix;
    Eigen::VectorXd eigenvalues;
    int morse_index = 0;
};
/// Dense; intended for coarse grids (a few thousand unknowns at most).
ReducedOperator reduced_operator(const SchrodingerOperator& op, const RealFunction& phi, double kernel_tol = -1.0);
/// Q E Q v in function form (Q f = f - <f,phi>/|phi|^2 phi).
RealFunction apply_reduced(const SchrodingerOperator& op, const RealFunction& phi, const RealFunction& v);
/// Morse index of the reduced operator from the inertia of the bordered matrix [[K, W phi], [phi^T W, 0]];
/// works on the full sparse grid.
int reduced_morse_index(const SchrodingerOperator& op, const RealFunction& phi);

struct ScanRow {
    double Z = 0.0;
    double second_eigenvalue = 0.0;
    double first_eigenvalue = 0.0;
    int morse_index = 0;
    bool kernel_detected = false;
};
/// Second eigenvalue Omega(Z) across Zs. profile(Z) supplies the sampled phi on grid.
std::vector<ScanRow> perturbation_scan(const std::vector<double>& Zs, const GraphGrid& grid,
                                       const std::function<RealFunction(double)>& profile,
                                       VertexKind kind = VertexKind::delta);

}  // namespace graphkdv
