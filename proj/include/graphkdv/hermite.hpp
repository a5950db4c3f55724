#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>
#include <vector>

#include "graphkdv/graph.hpp"

namespace graphkdv {

using SpMat = Eigen::SparseMatrix<double>;

/// Profile callback on a signed coordinate: deriv 0 gives phi, deriv 1 gives phi'.
using ProfileFn = std::function<double(double x, int deriv)>;

/// C^1 cubic Hermite elements on one edge pair (-L,0) u (0,L), N elements per side.
/// Unknowns: value and slope at every node strictly inside (-L, L); at the vertex the value u0 and
/// the left slope u'(0-); the right slope is u'(0-) + Z u0. Far ends carry u = u' = 0.
/// The curvature condition at the vertex is natural: it comes out of the weak form.
///
/// The weak form of d/dt u = alpha u''' + beta u' + 2 (phi u)' is M du/dt = K u; K is skew when phi = 0.
struct HermitePair {
    int N = 0;
    double L = 0.0, h = 0.0, Z = 0.0, alpha = 1.0, beta = -1.0;
    ProfileFn phi;  // empty for the bare generator
    SpMat M, K;

    int size() const { return 4 * N - 2; }
    /// Value unknown at node i, -N < i < N.
    int value_dof(int i) const { return 2 * (i + N - 1); }
    /// Slope unknown at node i (left slope at the vertex).
    int slope_dof(int i) const { return 2 * (i + N - 1) + 1; }

    /// Samples at x = -kh (minus) and x = kh (plus), k = 0..N, to coefficients. Slopes come from
    /// fourth-order differences of the samples.
    Eigen::VectorXd from_samples(const std::vector<double>& minus, const std::vector<double>& plus) const;
    /// Nodal values (deriv 0) or nodal slopes (deriv 1) back on the sample layout.
    void to_samples(const Eigen::VectorXd& c, std::vector<double>& minus, std::vector<double>& plus,
                    int deriv = 0) const;

    /// Row r with r . c = <K-form of c, v> for an exact test function v (needs v, v', v'' by deriv);
    /// v0 and dv_minus are the vertex value and the left slope of v.
    Eigen::VectorXd weak_form_against(const ProfileFn& v, double v0, double dv_minus) const;
    /// D_ab = int N_a N_b' over the pair, with the vertex slope coupling; skew when the vertex value is shared.
    SpMat derivative_form() const;
};

HermitePair assemble_hermite_pair(int N, double L, double Z, double alpha, double beta, const ProfileFn& phi);

/// Block-diagonal collection of pairs for a balanced star graph (pair j = edges j and m + j).
struct HermiteGraphOperator {
    GraphGrid grid;
    double Z = 0.0;
    std::vector<HermitePair> pairs;
    std::vector<int> offset;
    SpMat M, K;

    int size() const { return static_cast<int>(M.rows()); }
    Eigen::VectorXd from_function(const RealFunction& u) const;
    RealFunction to_function(const Eigen::VectorXd& c, int deriv = 0) const;
    Eigen::VectorXcd from_function(const ComplexFunction& u) const;
    ComplexFunction to_function(const Eigen::VectorXcd& c) const;
    /// sqrt(c^T M c)
    double norm(const Eigen::VectorXd& c) const;
    double norm(const Eigen::VectorXcd& c) const;
};

/// phi has one entry per pair; an empty vector means phi = 0 (the bare Airy generator).
HermiteGraphOperator assemble_hermite(const GraphGrid& grid, double Z, const std::vector<ProfileFn>& phi = {});

/// Fourth-order derivative of samples along the signed coordinate of an edge (sign = -1 on negative edges).
std::vector<double> sample_derivative(const std::vector<double>& u, double h, int sign);

}  // namespace graphkdv
