#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <vector>

namespace graphkdv {

using SpMat = Eigen::SparseMatrix<double>;

/// Generalized symmetric pencil K x = lambda W x with W diagonal and positive.
/// Eigenvalue counts come from the inertia of K - sigma W (Sylvester's law).
class SymmetricPencil {
public:
    SymmetricPencil(SpMat K, Eigen::VectorXd w);

    int size() const { return static_cast<int>(w_.size()); }
    const SpMat& K() const { return K_; }
    const Eigen::VectorXd& w() const { return w_; }

    /// Number of eigenvalues strictly below sigma.
    int count_below(double sigma) const;
    /// Gershgorin lower bound on the spectrum of W^{-1} K.
    double lower_bound() const;
    /// The j-th eigenvalue (ascending, 0-based) by bisection to absolute tolerance tol.
    double eigenvalue(int j, double tol = 1e-13) const;
    /// Eigenvectors for eigenvalues[lo..hi) by block inverse iteration, W-orthonormal columns.
    Eigen::MatrixXd eigenvectors(const std::vector<double>& eigenvalues, int iterations = 4) const;
    /// ||(W^{-1}K - lambda) x||_W / ||x||_W
    double residual(double lambda, const Eigen::VectorXd& x) const;

private:
    SpMat K_;
    Eigen::VectorXd w_;
    mutable Eigen::SimplicialLDLT<SpMat> ldlt_;
    mutable bool analyzed_ = false;
    SpMat shifted(double sigma) const;
};

/// Number of negative entries of D in an LDL^T factorization of a symmetric sparse matrix.
int negative_inertia(const SpMat& A);

}  // namespace graphkdv
