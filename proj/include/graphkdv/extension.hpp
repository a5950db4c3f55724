#pragma once

#include <Eigen/Dense>
#include <boost/rational.hpp>
#include <utility>
#include <vector>

#include "graphkdv/graph.hpp"

namespace graphkdv {

/// Boundary form blocks (-I beta, 0, -I alpha; 0, I alpha, 0; -I alpha, 0, 0) for each side.
struct BoundaryForm {
    Eigen::MatrixXd Bminus, Bplus;
    int n = 1;
};

/// Vertex coupling (I,0,0; Z I, I, 0; (Z^2/2) I, Z I, I) acting on (u, u', u'') traces.
struct CouplingMatrix {
    Eigen::MatrixXd L;
    double Z = 0.0;
};

BoundaryForm boundary_matrices(const std::vector<double>& alpha_minus, const std::vector<double>& alpha_plus,
                               const std::vector<double>& beta_minus, const std::vector<double>& beta_plus, int n);
Eigen::MatrixXd boundary_block(const std::vector<double>& alpha, const std::vector<double>& beta);

CouplingMatrix coupling_matrix(double Z, int n);

/// max |L^T B_+ L - B_-|
double unitarity_residual(const CouplingMatrix& L, const BoundaryForm& B);

/// Exact variant for rational coefficients; returns the max |entry| of L^T B_+ L - B_-.
using Rational = boost::rational<long long>;
Rational unitarity_residual_exact(const Rational& Z, const std::vector<Rational>& alpha_minus,
                                  const std::vector<Rational>& alpha_plus, const std::vector<Rational>& beta_minus,
                                  const std::vector<Rational>& beta_plus);

struct DeficiencyIndices {
    int n_plus = 0;
    int n_minus = 0;
    bool skew_self_adjoint_extensions_exist = false;
    int family_dimension = 0;  // 9 n^2 when balanced, else 0
};
DeficiencyIndices deficiency_indices(const StarGraph& graph);

/// Real value of -2(1-e^{i theta}) / (e^{i pi/4} - e^{i(theta - pi/4)}); +-inf at the pole.
double theta_to_Z(double theta);

struct DeficiencyElements {
    ComplexFunction psi_plus, psi_minus;
    cplx k_plus, k_minus;
    double closed_form_residual = 0.0;  // max |-Psi'' +- i Psi| from the closed form
    double discrete_residual = 0.0;     // same with a 3-point second difference, away from the vertex
    double vertex_spread = 0.0;         // max spread of the vertex values across edges
};
DeficiencyElements deficiency_elements(const GraphGrid& grid);

}  // namespace graphkdv
