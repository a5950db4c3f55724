#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "graphkdv/graph.hpp"

namespace graphkdv {

/// Roots of alpha g^3 + beta g + lambda = 0 with Re g1 < 0 < Re g2, Re g3 (Re lambda > 0).
/// Among the two right roots, g2 has the larger imaginary part.
struct RootTriple {
    cplx gamma1, gamma2, gamma3;
    cplx lambda;
    double alpha = 1.0;
    double beta = 1.0;
    int beta_sign() const { return beta >= 0 ? 1 : -1; }
    std::array<cplx, 3> all() const { return {gamma1, gamma2, gamma3}; }
    /// 1 / (alpha P'(g_j)), P the monic cubic; these are the free-space Green weights.
    cplx weight(int j) const;
    /// max |alpha g^3 + beta g + lambda| over the three roots
    double residual() const;
};

/// Monic normalization alpha = 1, beta = beta_sign.
RootTriple characteristic_roots(cplx lambda, int beta_sign);
RootTriple characteristic_roots(cplx lambda, double alpha, double beta);

/// Green's function on (0, inf) with g(0) = 0, decaying at infinity, unit (1/alpha) jump of g'' at x = zeta.
/// deriv selects d^k/dx^k, k = 0..2.
cplx green_plus(double x, double zeta, const RootTriple& r, int deriv = 0);
/// Green's function on (-inf, 0) with g(0-) = g'(0-) = 0.
cplx green_minus(double x, double zeta, const RootTriple& r, int deriv = 0);

struct BoundarySystem {
    Eigen::Matrix3cd A;
    cplx det_direct;
    cplx det_closed;
};
/// Rows encode continuity, the slope jump and the curvature jump of the vertex conditions
/// for the unknowns (a0, alpha1, alpha2). Throws SingularSystem when |det| < 1e-12.
BoundarySystem boundary_matrix(double Z, const RootTriple& r);

/// F_k = int_{y_0}^{y_k} e^{mu (y_k - s)} f(s) ds on a uniform grid, Re mu <= 0.
/// Exact exponential weights against a local cubic interpolant of f (fourth order).
std::vector<cplx> exponential_cumulative(const std::vector<cplx>& f, double h, cplx mu);
/// B_k = int_{y_k}^{y_N} e^{nu (y_k - s)} f(s) ds, Re nu >= 0.
std::vector<cplx> exponential_cumulative_backward(const std::vector<cplx>& f, double h, cplx nu);

struct PairCoefficients {
    cplx a0, alpha1, alpha2;
    RootTriple roots;
};

struct ResolventResult {
    ComplexFunction v;
    std::vector<PairCoefficients> coefficients;  // one per edge pair
    double residual = 0.0;                        // interior ||(lambda - A) v - w|| / ||w||
    std::array<double, 3> vertex_residuals{};     // worst over pairs, from 4th-order one-sided traces
};

/// (lambda - A_Z)^{-1} w on a balanced star graph, pair by pair. A = alpha d^3 + beta d on every edge.
ResolventResult apply_resolvent(const ComplexFunction& w, cplx lambda, double Z, bool check = true);

/// Relative interior residual of (lambda - alpha d^3 - beta d) v - w, sixth-order central differences.
double airy_residual(const ComplexFunction& v, const ComplexFunction& w, cplx lambda);

/// Worst-over-pairs residuals of the three vertex conditions from fourth-order one-sided traces.
std::array<double, 3> vertex_condition_residuals(const ComplexFunction& v, double Z);

}  // namespace graphkdv
