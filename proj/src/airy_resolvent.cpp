#include "graphkdv/airy_resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace graphkdv {

namespace {

using namespace std::complex_literals;

cplx polish(cplx g, double a, double b, cplx lam) {
    for (int it = 0; it < 3; ++it) {
        const cplx f = a * g * g * g + b * g + lam;
        const cplx df = 3.0 * a * g * g + b;
        if (std::abs(df) == 0.0) break;
        g -= f / df;
    }
    return g;
}

}  // namespace

cplx RootTriple::weight(int j) const {
    const auto g = all();
    const cplx gj = g[j];
    cplx d = 1.0;
    for (int k = 0; k < 3; ++k)
        if (k != j) d *= gj - g[k];
    return 1.0 / (alpha * d);
}

double RootTriple::residual() const {
    double worst = 0.0;
    for (cplx g : all()) worst = std::max(worst, std::abs(alpha * g * g * g + beta * g + lambda));
    return worst;
}

RootTriple characteristic_roots(cplx lambda, int beta_sign) {
    require(beta_sign == 1 || beta_sign == -1, "characteristic_roots: beta_sign must be +1 or -1");
    return characteristic_roots(lambda, 1.0, static_cast<double>(beta_sign));
}

RootTriple characteristic_roots(cplx lambda, double alpha, double beta) {
    require(lambda.real() > 0.0, "characteristic_roots: Re lambda must be positive");
    require(alpha > 0.0, "characteristic_roots: alpha must be positive");
    // depressed cubic g^3 + p g + q = 0 by Cardano, then Newton polish
    const cplx p = beta / alpha;
    const cplx q = lambda / alpha;
    const cplx disc = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
    cplx u3 = -q / 2.0 + disc;
    const cplx alt = -q / 2.0 - disc;
    if (std::abs(alt) > std::abs(u3)) u3 = alt;
    std::array<cplx, 3> g;
    const cplx u = std::pow(u3, 1.0 / 3.0);
    const cplx omega = std::exp(2i * std::numbers::pi / 3.0);
    cplx uk = u;
    for (int k = 0; k < 3; ++k) {
        g[k] = std::abs(uk) > 0 ? uk - p / (3.0 * uk) : cplx(0.0);
        g[k] = polish(g[k], alpha, beta, lambda);
        uk *= omega;
    }
    std::sort(g.begin(), g.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
    if (!(g[0].real() < 0.0 && g[1].real() > 0.0 && g[2].real() > 0.0)) {
        std::ostringstream os;
        os << "characteristic_roots: root sign pattern violated for lambda = " << lambda;
        throw NumericalError(os.str());
    }
    RootTriple r;
    r.gamma1 = g[0];
    if (g[1].imag() >= g[2].imag()) {
        r.gamma2 = g[1];
        r.gamma3 = g[2];
    } else {
        r.gamma2 = g[2];
        r.gamma3 = g[1];
    }
    r.lambda = lambda;
    r.alpha = alpha;
    r.beta = beta;
    return r;
}

namespace {

/// Whole-line decaying Green's function of alpha d^3 + beta d + lambda at s = x - zeta, k-th derivative.
cplx free_green(double s, const RootTriple& r, int deriv) {
    if (s > 0.0) {
        const cplx g = r.gamma1;
        return r.weight(0) * std::pow(g, deriv) * std::exp(g * s);
    }
    cplx out = 0.0;
    for (int j = 1; j < 3; ++j) {
        const cplx g = r.all()[j];
        out -= r.weight(j) * std::pow(g, deriv) * std::exp(g * s);
    }
    return out;
}

// left limit of the free Green's function at s = 0 for s <= 0 (used for values exactly on the diagonal)
cplx free_green_left(double s, const RootTriple& r, int deriv) {
    cplx out = 0.0;
    for (int j = 1; j < 3; ++j) {
        const cplx g = r.all()[j];
        out -= r.weight(j) * std::pow(g, deriv) * std::exp(g * s);
    }
    return out;
}

}  // namespace

cplx green_plus(double x, double zeta, const RootTriple& r, int deriv) {
    require(x >= 0.0 && zeta >= 0.0, "green_plus: x and zeta must be nonnegative");
    require(deriv >= 0 && deriv <= 2, "green_plus: derivative order must be 0..2");
    const double s = x - zeta;
    const cplx base = s > 0.0 ? free_green(s, r, deriv) : free_green_left(s, r, deriv);
    // subtract the decaying homogeneous solution that restores g(0) = 0
    const cplx c = free_green_left(-zeta, r, 0);
    return base - c * std::pow(r.gamma1, deriv) * std::exp(r.gamma1 * x);
}

cplx green_minus(double x, double zeta, const RootTriple& r, int deriv) {
    require(x <= 0.0 && zeta <= 0.0, "green_minus: x and zeta must be nonpositive");
    require(deriv >= 0 && deriv <= 2, "green_minus: derivative order must be 0..2");
    const double s = x - zeta;
    const cplx base = s > 0.0 ? free_green(s, r, deriv) : free_green_left(s, r, deriv);
    // e^{g2 x}, e^{g3 x} combination matching value and slope of the free part at 0-
    const double s0 = -zeta;
    const cplx f0 = s0 > 0.0 ? free_green(s0, r, 0) : free_green_left(s0, r, 0);
    const cplx f1 = s0 > 0.0 ? free_green(s0, r, 1) : free_green_left(s0, r, 1);
    const cplx g2 = r.gamma2, g3 = r.gamma3;
    const cplx d2 = (f1 - g3 * f0) / (g2 - g3);
    const cplx d3 = (g2 * f0 - f1) / (g2 - g3);
    return base - d2 * std::pow(g2, deriv) * std::exp(g2 * x) - d3 * std::pow(g3, deriv) * std::exp(g3 * x);
}

BoundarySystem boundary_matrix(double Z, const RootTriple& r) {
    const cplx g1 = r.gamma1, g2 = r.gamma2, g3 = r.gamma3;
    BoundarySystem b;
    b.A << 1.0, -1.0, -1.0,                                                      //
        g1, -(g2 + Z), -(g3 + Z),                                                //
        g1 * g1, -(g2 * g2 + 0.5 * Z * Z + Z * g2), -(g3 * g3 + 0.5 * Z * Z + Z * g3);
    b.det_direct = b.A.determinant();
    b.det_closed = (g3 - g2) * (0.5 * Z * Z + Z * (g2 + g3 - g1) + (g1 - g2) * (g1 - g3));
    if (std::abs(b.det_direct) < 1e-12) throw SingularSystem("boundary_matrix: vertex system is singular");
    return b;
}

namespace {

/// J_p(z) = int_0^1 e^{z(1-s)} s^p ds, p = 0..3
std::array<cplx, 4> exp_moments(cplx z) {
    std::array<cplx, 4> J{};
    if (std::abs(z) < 0.5) {
        // J_p = sum_n z^n p! / (n+p+1)!
        for (int p = 0; p < 4; ++p) {
            double pf = 1.0;
            for (int i = 2; i <= p; ++i) pf *= i;
            cplx term = 1.0;  // z^n
            double denom = 1.0;
            for (int i = 2; i <= p + 1; ++i) denom *= i;  // (p+1)!
            cplx sum = 0.0;
            for (int n = 0; n < 30; ++n) {
                sum += term * (pf / denom);
                term *= z;
                denom *= (n + p + 2);
            }
            J[p] = sum;
        }
        return J;
    }
    J[0] = (std::exp(z) - 1.0) / z;
    for (int p = 1; p < 4; ++p) J[p] = -1.0 / z + (double(p) / z) * J[p - 1];
    return J;
}

/// Weights of int_0^1 e^{z(1-s)} f(s) ds for the cubic interpolating f at offsets o[0..3].
std::array<cplx, 4> stencil_weights(const std::array<double, 4>& o, const std::array<cplx, 4>& J) {
    std::array<cplx, 4> w{};
    for (int i = 0; i < 4; ++i) {
        // monomial coefficients of the Lagrange basis polynomial l_i
        std::array<double, 4> c{1.0, 0.0, 0.0, 0.0};
        double den = 1.0;
        for (int j = 0; j < 4; ++j) {
            if (j == i) continue;
            std::array<double, 4> nc{};
            for (int p = 0; p < 3; ++p) {
                nc[p + 1] += c[p];
                nc[p] -= o[j] * c[p];
            }
            c = nc;
            den *= o[i] - o[j];
        }
        cplx s = 0.0;
        for (int p = 0; p < 4; ++p) s += c[p] * J[p];
        w[i] = s / den;
    }
    return w;
}

}  // namespace

std::vector<cplx> exponential_cumulative(const std::vector<cplx>& f, double h, cplx mu) {
    const int N = static_cast<int>(f.size()) - 1;
    require(N >= 3, "exponential_cumulative: need at least 4 samples");
    const cplx z = mu * h;
    const auto J = exp_moments(z);
    const auto w_first = stencil_weights({0, 1, 2, 3}, J);
    const auto w_mid = stencil_weights({-1, 0, 1, 2}, J);
    const auto w_last = stencil_weights({-2, -1, 0, 1}, J);
    const cplx decay = std::exp(z);
    std::vector<cplx> F(N + 1, 0.0);
    for (int k = 0; k < N; ++k) {
        cplx local;
        if (k == 0)
            local = w_first[0] * f[0] + w_first[1] * f[1] + w_first[2] * f[2] + w_first[3] * f[3];
        else if (k == N - 1)
            local = w_last[0] * f[k - 2] + w_last[1] * f[k - 1] + w_last[2] * f[k] + w_last[3] * f[k + 1];
        else
            local = w_mid[0] * f[k - 1] + w_mid[1] * f[k] + w_mid[2] * f[k + 1] + w_mid[3] * f[k + 2];
        F[k + 1] = decay * F[k] + h * local;
    }
    return F;
}

std::vector<cplx> exponential_cumulative_backward(const std::vector<cplx>& f, double h, cplx nu) {
    std::vector<cplx> r(f.rbegin(), f.rend());
    auto F = exponential_cumulative(r, h, -nu);
    std::reverse(F.begin(), F.end());
    return F;
}

namespace {

struct PairSolution {
    std::vector<cplx> plus, minus;  // indexed by k, x = +kh resp. -kh
    PairCoefficients coef;
};

/// Solves (lambda + alpha d^3 + beta d) v = (q on x > 0, p on x < 0) with the vertex conditions.
PairSolution solve_pair(const std::vector<cplx>& q, const std::vector<cplx>& p, double h, const RootTriple& r,
                        double Z) {
    const int N = static_cast<int>(q.size()) - 1;
    const cplx g1 = r.gamma1, g2 = r.gamma2, g3 = r.gamma3;
    const cplx c1 = r.weight(0), c2 = -r.weight(1), c3 = -r.weight(2);

    // plus side, y_k = k h
    auto A1 = exponential_cumulative(q, h, g1);
    auto B2 = exponential_cumulative_backward(q, h, g2);
    auto B3 = exponential_cumulative_backward(q, h, g3);
    std::vector<cplx> Fp(N + 1);
    for (int k = 0; k <= N; ++k) Fp[k] = c1 * A1[k] + c2 * B2[k] + c3 * B3[k];
    auto Fp_trace = [&](int d) { return c2 * std::pow(g2, d) * B2[0] + c3 * std::pow(g3, d) * B3[0]; };

    // minus side on increasing y_i = -L + i h, p_inc[i] = p[N - i]
    std::vector<cplx> pin(p.rbegin(), p.rend());
    auto M1 = exponential_cumulative(pin, h, g1);
    auto C2 = exponential_cumulative_backward(pin, h, g2);
    auto C3 = exponential_cumulative_backward(pin, h, g3);
    std::vector<cplx> Fm(N + 1);
    for (int k = 0; k <= N; ++k) {
        const int i = N - k;
        Fm[k] = c1 * M1[i] + c2 * C2[i] + c3 * C3[i];
    }
    auto Fm_trace = [&](int d) { return c1 * std::pow(g1, d) * M1[N]; };

    // Green integrals with the half-line boundary conditions built in
    const cplx Fp0 = Fp_trace(0);
    const cplx Ip1 = Fp_trace(1) - Fp0 * g1;
    const cplx Ip2 = Fp_trace(2) - Fp0 * g1 * g1;
    const cplx f0 = Fm_trace(0), f1 = Fm_trace(1);
    const cplx d2 = (f1 - g3 * f0) / (g2 - g3);
    const cplx d3 = (g2 * f0 - f1) / (g2 - g3);
    const cplx Im2 = Fm_trace(2) - d2 * g2 * g2 - d3 * g3 * g3;

    BoundarySystem sys = boundary_matrix(Z, r);
    Eigen::Vector3cd rhs(0.0, -Ip1, -Ip2 + Im2);
    Eigen::Vector3cd sol = sys.A.partialPivLu().solve(rhs);

    PairSolution out;
    out.coef = {sol[0], sol[1], sol[2], r};
    out.plus.resize(N + 1);
    out.minus.resize(N + 1);
    for (int k = 0; k <= N; ++k) {
        const double x = k * h;
        out.plus[k] = Fp[k] + (sol[0] - Fp0) * std::exp(g1 * x);
        out.minus[k] = Fm[k] + (sol[1] - d2) * std::exp(-g2 * x) + (sol[2] - d3) * std::exp(-g3 * x);
    }
    return out;
}

// sixth-order central stencils in the index variable
constexpr double kD1[7] = {-1.0 / 60, 3.0 / 20, -3.0 / 4, 0.0, 3.0 / 4, -3.0 / 20, 1.0 / 60};
constexpr double kD3[9] = {-7.0 / 240, 3.0 / 10, -169.0 / 120, 61.0 / 30, 0.0, -61.0 / 30, 169.0 / 120, -3.0 / 10, 7.0 / 240};

}  // namespace

ResolventResult apply_resolvent(const ComplexFunction& w, cplx lambda, double Z, bool check) {
    const GraphGrid& grid = w.grid;
    const StarGraph& g = grid.graph;
    require(g.balanced(), "apply_resolvent needs a balanced star graph");
    require(lambda.real() > 0.0, "apply_resolvent: Re lambda must be positive");
    const int m = g.m;
    ResolventResult res;
    res.v = ComplexFunction(grid);
    for (int j = 0; j < g.n; ++j) {
        const int em = j, ep = m + j;
        require(g.alpha[em] == g.alpha[ep] && g.beta[em] == g.beta[ep],
                "apply_resolvent: paired edges must share alpha and beta");
        // (lambda - A)^{-1} = R (lambda + A)^{-1} R with R the reflection x -> -x inside the pair
        const RootTriple r = characteristic_roots(lambda, g.alpha[ep], g.beta[ep]);
        PairSolution s = solve_pair(w[em], w[ep], grid.h, r, Z);
        res.v[em] = s.plus;
        res.v[ep] = s.minus;
        res.coefficients.push_back(s.coef);
    }
    if (check) {
        res.residual = airy_residual(res.v, w, lambda);
        res.vertex_residuals = vertex_condition_residuals(res.v, Z);
    }
    return res;
}

double airy_residual(const ComplexFunction& v, const ComplexFunction& w, cplx lambda) {
    const GraphGrid& grid = v.grid;
    require(grid.same_as(w.grid), "airy_residual: grid mismatch");
    const double h = grid.h;
    double num = 0.0, den = 0.0;
    for (int e = 0; e < grid.edges(); ++e) {
        const double sgn = grid.graph.sign(e);
        const double a = grid.graph.alpha[e], b = grid.graph.beta[e];
        for (int k = 4; k <= grid.N - 4; ++k) {
            cplx d1 = 0.0, d3 = 0.0;
            for (int i = -3; i <= 3; ++i) d1 += kD1[i + 3] * v[e][k + i];
            for (int i = -4; i <= 4; ++i) d3 += kD3[i + 4] * v[e][k + i];
            d1 *= sgn / h;
            d3 *= sgn / (h * h * h);
            const cplx r = lambda * v[e][k] - a * d3 - b * d1 - w[e][k];
            num += std::norm(r);
            den += std::norm(w[e][k]);
        }
    }
    return den > 0 ? std::sqrt(num / den) : std::sqrt(num);
}

std::array<double, 3> vertex_condition_residuals(const ComplexFunction& v, double Z) {
    const GraphGrid& grid = v.grid;
    require(grid.graph.balanced(), "vertex_condition_residuals needs a balanced graph");
    const double h = grid.h;
    static const double c1[5] = {-25.0 / 12, 48.0 / 12, -36.0 / 12, 16.0 / 12, -3.0 / 12};
    static const double c2[6] = {45.0 / 12, -154.0 / 12, 214.0 / 12, -156.0 / 12, 61.0 / 12, -10.0 / 12};
    auto d1 = [&](const std::vector<cplx>& u, double sgn) {
        cplx s = 0.0;
        for (int i = 0; i < 5; ++i) s += c1[i] * u[i];
        return sgn * s / h;
    };
    auto d2 = [&](const std::vector<cplx>& u) {
        cplx s = 0.0;
        for (int i = 0; i < 6; ++i) s += c2[i] * u[i];
        return s / (h * h);
    };
    std::array<double, 3> worst{};
    const int m = grid.graph.m;
    for (int j = 0; j < grid.graph.n; ++j) {
        const auto& um = v[j];
        const auto& up = v[m + j];
        const cplx u0 = um[0];
        const cplx dm = d1(um, -1.0), dp = d1(up, 1.0);
        const cplx sm = d2(um), sp = d2(up);
        worst[0] = std::max(worst[0], std::abs(up[0] - um[0]));
        worst[1] = std::max(worst[1], std::abs(dp - dm - Z * u0));
        worst[2] = std::max(worst[2], std::abs(sp - sm - 0.5 * Z * Z * u0 - Z * dm));
    }
    return worst;
}

}  // namespace graphkdv
