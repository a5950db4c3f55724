#include "graphkdv/extension.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace graphkdv {

Eigen::MatrixXd boundary_block(const std::vector<double>& alpha, const std::vector<double>& beta) {
    require(alpha.size() == beta.size() && !alpha.empty(), "boundary block: alpha/beta length mismatch");
    const int n = static_cast<int>(alpha.size());
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(3 * n, 3 * n);
    for (int i = 0; i < n; ++i) {
        require(alpha[i] > 0.0, "boundary block: alpha entries must be positive");
        B(i, i) = -beta[i];
        B(i, 2 * n + i) = -alpha[i];
        B(n + i, n + i) = alpha[i];
        B(2 * n + i, i) = -alpha[i];
    }
    return B;
}

BoundaryForm boundary_matrices(const std::vector<double>& alpha_minus, const std::vector<double>& alpha_plus,
                               const std::vector<double>& beta_minus, const std::vector<double>& beta_plus, int n) {
    auto ok = [n](const std::vector<double>& v) { return static_cast<int>(v.size()) == n; };
    require(n >= 1 && ok(alpha_minus) && ok(alpha_plus) && ok(beta_minus) && ok(beta_plus),
            "boundary_matrices: every coefficient vector must have n entries");
    return {boundary_block(alpha_minus, beta_minus), boundary_block(alpha_plus, beta_plus), n};
}

CouplingMatrix coupling_matrix(double Z, int n) {
    require(n >= 1, "coupling_matrix: n must be positive");
    Eigen::MatrixXd L = Eigen::MatrixXd::Identity(3 * n, 3 * n);
    for (int i = 0; i < n; ++i) {
        L(n + i, i) = Z;
        L(2 * n + i, i) = 0.5 * Z * Z;
        L(2 * n + i, n + i) = Z;
    }
    return {L, Z};
}

double unitarity_residual(const CouplingMatrix& L, const BoundaryForm& B) {
    require(L.L.rows() == B.Bplus.rows() && B.Bplus.rows() == B.Bminus.rows(),
            "unitarity_residual: dimension mismatch");
    return (L.L.transpose() * B.Bplus * L.L - B.Bminus).cwiseAbs().maxCoeff();
}

Rational unitarity_residual_exact(const Rational& Z, const std::vector<Rational>& am, const std::vector<Rational>& ap,
                                  const std::vector<Rational>& bm, const std::vector<Rational>& bp) {
    const size_t n = am.size();
    require(n >= 1 && ap.size() == n && bm.size() == n && bp.size() == n,
            "unitarity_residual_exact: length mismatch");
    const int d = static_cast<int>(3 * n);
    using M = std::vector<std::vector<Rational>>;
    auto zeros = [d] { return M(d, std::vector<Rational>(d, Rational(0))); };
    auto block = [&](const std::vector<Rational>& a, const std::vector<Rational>& b) {
        M B = zeros();
        for (size_t i = 0; i < n; ++i) {
            B[i][i] = -b[i];
            B[i][2 * n + i] = -a[i];
            B[n + i][n + i] = a[i];
            B[2 * n + i][i] = -a[i];
        }
        return B;
    };
    M L = zeros();
    for (int i = 0; i < d; ++i) L[i][i] = 1;
    for (size_t i = 0; i < n; ++i) {
        L[n + i][i] = Z;
        L[2 * n + i][i] = Z * Z / Rational(2);
        L[2 * n + i][n + i] = Z;
    }
    auto mul = [&](const M& A, const M& B) {
        M C = zeros();
        for (int i = 0; i < d; ++i)
            for (int k = 0; k < d; ++k)
                if (A[i][k] != Rational(0))  // mixed rational/int comparison recurses under C++20
                    for (int j = 0; j < d; ++j) C[i][j] += A[i][k] * B[k][j];
        return C;
    };
    M Lt = zeros();
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) Lt[i][j] = L[j][i];
    M R = mul(mul(Lt, block(ap, bp)), L);
    M Bm = block(am, bm);
    Rational worst(0);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) worst = std::max(worst, boost::abs(R[i][j] - Bm[i][j]));
    return worst;
}

DeficiencyIndices deficiency_indices(const StarGraph& g) {
    DeficiencyIndices d;
    d.n_plus = 2 * g.m + g.n;
    d.n_minus = g.m + 2 * g.n;
    d.skew_self_adjoint_extensions_exist = g.m == g.n;
    d.family_dimension = d.skew_self_adjoint_extensions_exist ? 9 * g.n * g.n : 0;
    return d;
}

double theta_to_Z(double theta) {
    using namespace std::complex_literals;
    const double pi = std::numbers::pi;
    const cplx num = -2.0 * (1.0 - std::exp(1i * theta));
    const cplx den = std::exp(1i * (pi / 4)) - std::exp(1i * (theta - pi / 4));
    if (std::abs(den) < 1e-15 * std::max(1.0, std::abs(num))) {
        // limit from below the pole: Z = -2 sin(theta/2) / sin(theta/2 - pi/4) with the denominator -> 0^-
        return std::sin(theta / 2) >= 0 ? std::numeric_limits<double>::infinity()
                                        : -std::numeric_limits<double>::infinity();
    }
    const cplx z = num / den;
    if (std::abs(z.imag()) > 1e-12 * std::max(1.0, std::abs(z.real())))
        throw NumericalError("theta_to_Z: quotient is not real");
    return z.real();
}

DeficiencyElements deficiency_elements(const GraphGrid& grid) {
    require(grid.graph.balanced(), "deficiency_elements needs a balanced graph");
    using namespace std::complex_literals;
    const double pi = std::numbers::pi;
    DeficiencyElements d;
    d.k_plus = std::exp(1i * (3 * pi / 4));    // k^2 = -i, Im k > 0
    d.k_minus = std::exp(-1i * (3 * pi / 4));  // k^2 = +i, Im k < 0
    auto psi = [&](cplx k, int upper, int e_sign, double x) {
        // plus element: e^{-ikx} on negative edges, e^{ikx} on positive ones; minus element swaps signs
        double s = upper * e_sign;
        return (1i / k) * std::exp(s * 1i * k * x);
    };
    d.psi_plus = ComplexFunction::sample(grid, [&](int e, double x) { return psi(d.k_plus, 1, grid.graph.sign(e), x); });
    d.psi_minus =
        ComplexFunction::sample(grid, [&](int e, double x) { return psi(d.k_minus, -1, grid.graph.sign(e), x); });
    const double h = grid.h;
    for (int e = 0; e < grid.edges(); ++e) {
        for (int which = 0; which < 2; ++which) {
            const cplx k = which == 0 ? d.k_plus : d.k_minus;
            const int upper = which == 0 ? 1 : -1;
            const cplx pm = which == 0 ? 1i : -1i;
            const auto& f = which == 0 ? d.psi_plus[e] : d.psi_minus[e];
            const double s = upper * grid.graph.sign(e);
            for (int j = 1; j < grid.N; ++j) {
                const double x = grid.x(e, j);
                const cplx val = psi(k, upper, grid.graph.sign(e), x);
                const cplx second = (s * 1i * k) * (s * 1i * k) * val;
                d.closed_form_residual = std::max(d.closed_form_residual, std::abs(-second + pm * val));
                if (j >= 5) {
                    const cplx fd = (f[j + 1] - 2.0 * f[j] + f[j - 1]) / (h * h);
                    d.discrete_residual = std::max(d.discrete_residual, std::abs(-fd + pm * f[j]));
                }
            }
        }
    }
    auto spread = [&](const ComplexFunction& u) {
        double w = 0;
        for (int e = 1; e < u.edges(); ++e) w = std::max(w, std::abs(u[e][0] - u[0][0]));
        return w;
    };
    d.vertex_spread = std::max(spread(d.psi_plus), spread(d.psi_minus));
    return d;
}

}  // namespace graphkdv
