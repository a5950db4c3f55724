#include "graphkdv/sym_eigen.hpp"

#include <algorithm>
#include <cmath>

#include "graphkdv/errors.hpp"

namespace graphkdv {

SymmetricPencil::SymmetricPencil(SpMat K, Eigen::VectorXd w) : K_(std::move(K)), w_(std::move(w)) {
    require(K_.rows() == K_.cols() && K_.rows() == w_.size(), "SymmetricPencil: size mismatch");
    require(w_.minCoeff() > 0.0, "SymmetricPencil: weights must be positive");
    K_.makeCompressed();
}

SpMat SymmetricPencil::shifted(double sigma) const {
    SpMat A = K_;
    for (int i = 0; i < A.rows(); ++i) A.coeffRef(i, i) -= sigma * w_[i];
    return A;
}

int SymmetricPencil::count_below(double sigma) const {
    SpMat A = shifted(sigma);
    if (!analyzed_) {
        ldlt_.analyzePattern(A);
        analyzed_ = true;
    }
    ldlt_.factorize(A);
    if (ldlt_.info() != Eigen::Success) {
        // exact zero pivot: nudge the shift
        const double eps = 1e-12 * std::max(1.0, std::abs(sigma));
        A = shifted(sigma - eps);
        ldlt_.factorize(A);
        if (ldlt_.info() != Eigen::Success) throw NumericalError("inertia count: LDL^T factorization failed");
    }
    const Eigen::VectorXd& D = ldlt_.vectorD();
    return static_cast<int>((D.array() < 0.0).count());
}

double SymmetricPencil::lower_bound() const {
    Eigen::VectorXd radius = Eigen::VectorXd::Zero(size());
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(size());
    for (int c = 0; c < K_.outerSize(); ++c)
        for (SpMat::InnerIterator it(K_, c); it; ++it) {
            if (it.row() == it.col())
                diag[it.row()] += it.value();
            else
                radius[it.row()] += std::abs(it.value());
        }
    return ((diag - radius).array() / w_.array()).minCoeff() - 1.0;
}

double SymmetricPencil::eigenvalue(int j, double tol) const {
    require(j >= 0 && j < size(), "eigenvalue index out of range");
    double lo = lower_bound();
    double hi = std::max(1.0, std::abs(lo));
    while (count_below(hi) <= j) hi *= 2.0;
    while (hi - lo > tol * std::max(1.0, std::abs(lo) + std::abs(hi)) * 0.5 && hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (count_below(mid) > j)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

Eigen::MatrixXd SymmetricPencil::eigenvectors(const std::vector<double>& ev, int iterations) const {
    const int n = size();
    const int p = static_cast<int>(ev.size());
    Eigen::MatrixXd X(n, p);
    if (p == 0) return X;
    // group numerically close eigenvalues into clusters and iterate each cluster as a block
    std::vector<std::pair<int, int>> clusters;
    for (int i = 0; i < p;) {
        int j = i + 1;
        while (j < p && std::abs(ev[j] - ev[j - 1]) < 1e-8 * std::max(1.0, std::abs(ev[j]))) ++j;
        clusters.push_back({i, j});
        i = j;
    }
    Eigen::SparseLU<SpMat> lu;
    for (auto [a, b] : clusters) {
        const int q = b - a;
        double mu = 0.0;
        for (int i = a; i < b; ++i) mu += ev[i];
        mu /= q;
        const double gap = 1e-10 * std::max(1.0, std::abs(mu));
        lu.compute(shifted(mu - gap));
        if (lu.info() != Eigen::Success) throw NumericalError("inverse iteration: factorization failed");
        Eigen::MatrixXd Y = Eigen::MatrixXd::Zero(n, q);
        for (int c = 0; c < q; ++c)
            for (int i = 0; i < n; ++i) Y(i, c) = std::sin(0.37 * (i + 1) * (c + 1) + 0.11 * c) + 0.1;
        for (int it = 0; it < iterations; ++it) {
            Eigen::MatrixXd R = w_.asDiagonal() * Y;
            Y = lu.solve(R);
            // W-orthonormalize
            Eigen::MatrixXd G = Y.transpose() * w_.asDiagonal() * Y;
            Eigen::LLT<Eigen::MatrixXd> llt(G);
            Eigen::MatrixXd Linv = llt.matrixL().solve(Eigen::MatrixXd::Identity(q, q));
            Y = Y * Linv.transpose();
        }
        if (q > 1) {
            // Rayleigh-Ritz inside the cluster
            Eigen::MatrixXd H = Y.transpose() * (K_ * Y);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (H + H.transpose()));
            Y = Y * es.eigenvectors();
        }
        for (int c = 0; c < q; ++c) {
            Eigen::VectorXd y = Y.col(c);
            // fix sign: largest-magnitude entry positive
            Eigen::Index imax;
            y.cwiseAbs().maxCoeff(&imax);
            if (y[imax] < 0) y = -y;
            X.col(a + c) = y;
        }
    }
    return X;
}

double SymmetricPencil::residual(double lambda, const Eigen::VectorXd& x) const {
    Eigen::VectorXd r = K_ * x - lambda * w_.cwiseProduct(x);
    const double num = std::sqrt((r.array().square() / w_.array()).sum());
    const double den = std::sqrt((x.array().square() * w_.array()).sum());
    return num / den;
}

int negative_inertia(const SpMat& A) {
    Eigen::SimplicialLDLT<SpMat> ldlt(A);
    if (ldlt.info() != Eigen::Success) throw NumericalError("negative_inertia: LDL^T factorization failed");
    return static_cast<int>((ldlt.vectorD().array() < 0.0).count());
}

}  // namespace graphkdv
