#include "graphkdv/hermite.hpp"

#include <array>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>

namespace graphkdv {

namespace {

struct GaussRule {
    std::vector<double> s, w;  // on [0,1]
};

const GaussRule& gauss6() {
    static const GaussRule rule = [] {
        using G = boost::math::quadrature::gauss<double, 6>;
        GaussRule r;
        const auto& a = G::abscissa();
        const auto& w = G::weights();
        for (size_t i = 0; i < a.size(); ++i) {
            if (a[i] == 0.0) {
                r.s.push_back(0.5);
                r.w.push_back(0.5 * w[i]);
            } else {
                for (double sg : {-1.0, 1.0}) {
                    r.s.push_back(0.5 * (1.0 + sg * a[i]));
                    r.w.push_back(0.5 * w[i]);
                }
            }
        }
        return r;
    }();
    return rule;
}

struct Basis {
    std::array<double, 4> N, dN, d2N;
};

Basis hermite_basis(double s, double h) {
    Basis b;
    b.N = {1 - 3 * s * s + 2 * s * s * s, h * (s - 2 * s * s + s * s * s), 3 * s * s - 2 * s * s * s,
           h * (-s * s + s * s * s)};
    b.dN = {(-6 * s + 6 * s * s) / h, 1 - 4 * s + 3 * s * s, (6 * s - 6 * s * s) / h, -2 * s + 3 * s * s};
    b.d2N = {(-6 + 12 * s) / (h * h), (-4 + 6 * s) / h, (6 - 12 * s) / (h * h), (-2 + 6 * s) / h};
    return b;
}

using Comb = std::vector<std::pair<int, double>>;

/// Global combinations for the four local Hermite functions of element [e h, (e+1) h].
std::array<Comb, 4> element_dofs(const HermitePair& p, int e) {
    const int N = p.N;
    auto value = [&](int i) -> Comb {
        if (std::abs(i) == N) return {};
        return {{p.value_dof(i), 1.0}};
    };
    auto slope = [&](int i, int side) -> Comb {
        if (std::abs(i) == N) return {};
        if (i == 0 && side > 0) return {{p.slope_dof(0), 1.0}, {p.value_dof(0), p.Z}};
        return {{p.slope_dof(i), 1.0}};
    };
    const int side = e >= 0 ? 1 : -1;
    return {value(e), slope(e, side), value(e + 1), slope(e + 1, side)};
}

}  // namespace

std::vector<double> sample_derivative(const std::vector<double>& u, double h, int sign) {
    const int N = static_cast<int>(u.size()) - 1;
    require(N >= 4, "sample_derivative: need at least 5 samples");
    std::vector<double> d(N + 1);
    auto at = [&](int k, std::array<int, 5> off, std::array<double, 5> c) {
        double s = 0.0;
        for (int i = 0; i < 5; ++i) s += c[i] * u[k + off[i]];
        return s / (12.0 * h);
    };
    for (int k = 0; k <= N; ++k) {
        double v;
        if (k == 0)
            v = at(k, {0, 1, 2, 3, 4}, {-25, 48, -36, 16, -3});
        else if (k == 1)
            v = at(k, {-1, 0, 1, 2, 3}, {-3, -10, 18, -6, 1});
        else if (k == N - 1)
            v = at(k, {-3, -2, -1, 0, 1}, {-1, 6, -18, 10, 3});
        else if (k == N)
            v = at(k, {-4, -3, -2, -1, 0}, {3, -16, 36, -48, 25});
        else
            v = at(k, {-2, -1, 0, 1, 2}, {1, -8, 0, 8, -1});
        d[k] = sign * v;
    }
    return d;
}

HermitePair assemble_hermite_pair(int N, double L, double Z, double alpha, double beta, const ProfileFn& phi) {
    require(N >= 16 && L > 0.0, "assemble_hermite_pair: need N >= 16 and L > 0");
    require(alpha > 0.0, "assemble_hermite_pair: alpha must be positive");
    HermitePair p;
    p.N = N;
    p.L = L;
    p.h = L / N;
    p.Z = Z;
    p.alpha = alpha;
    p.beta = beta;
    p.phi = phi;
    const double h = p.h;
    const int n = p.size();


    const GaussRule& g = gauss6();
    std::vector<Eigen::Triplet<double>> tm, tk;
    tm.reserve(64 * 2 * N);
    tk.reserve(64 * 2 * N);
    for (int e = -N; e < N; ++e) {
        const double xa = e * h;
        const std::array<Comb, 4> dofs = element_dofs(p, e);
        double Me[4][4] = {}, Ke[4][4] = {};
        for (size_t q = 0; q < g.s.size(); ++q) {
            const double s = g.s[q], wq = g.w[q] * h;
            const double x = xa + s * h;
            const Basis b = hermite_basis(s, h);
            const double ph = phi ? phi(x, 0) : 0.0;
            const double dph = phi ? phi(x, 1) : 0.0;
            const double c = 0.5 * beta + ph;
            for (int a = 0; a < 4; ++a)
                for (int bb = 0; bb < 4; ++bb) {
                    Me[a][bb] += wq * b.N[a] * b.N[bb];
                    Ke[a][bb] += wq * (0.5 * alpha * (b.d2N[a] * b.dN[bb] - b.dN[a] * b.d2N[bb]) +
                                       c * (b.N[a] * b.dN[bb] - b.dN[a] * b.N[bb]) + dph * b.N[a] * b.N[bb]);
                }
        }
        for (int a = 0; a < 4; ++a)
            for (int bb = 0; bb < 4; ++bb)
                for (auto [ia, ca] : dofs[a])
                    for (auto [ib, cb] : dofs[bb]) {
                        tm.emplace_back(ia, ib, ca * cb * Me[a][bb]);
                        tk.emplace_back(ia, ib, ca * cb * Ke[a][bb]);
                    }
    }
    // vertex term (alpha Z / 2)(u0 v'(0-) - u'(0-) v0)
    tk.emplace_back(p.slope_dof(0), p.value_dof(0), 0.5 * alpha * Z);
    tk.emplace_back(p.value_dof(0), p.slope_dof(0), -0.5 * alpha * Z);
    p.M.resize(n, n);
    p.K.resize(n, n);
    p.M.setFromTriplets(tm.begin(), tm.end());
    p.K.setFromTriplets(tk.begin(), tk.end());
    p.M.makeCompressed();
    p.K.makeCompressed();
    return p;
}

Eigen::VectorXd HermitePair::weak_form_against(const ProfileFn& v, double v0, double dv_minus) const {
    const GaussRule& g = gauss6();
    Eigen::VectorXd r = Eigen::VectorXd::Zero(size());
    for (int e = -N; e < N; ++e) {
        const std::array<Comb, 4> dofs = element_dofs(*this, e);
        double row[4] = {};
        for (size_t q = 0; q < g.s.size(); ++q) {
            const double s = g.s[q], wq = g.w[q] * h;
            const double x = e * h + s * h;
            const Basis b = hermite_basis(s, h);
            const double ph = phi ? phi(x, 0) : 0.0;
            const double dph = phi ? phi(x, 1) : 0.0;
            const double c = 0.5 * beta + ph;
            const double va = v(x, 0), dva = v(x, 1), d2va = v(x, 2);
            for (int bb = 0; bb < 4; ++bb)
                row[bb] += wq * (0.5 * alpha * (d2va * b.dN[bb] - dva * b.d2N[bb]) +
                                 c * (va * b.dN[bb] - dva * b.N[bb]) + dph * va * b.N[bb]);
        }
        for (int bb = 0; bb < 4; ++bb)
            for (auto [ib, cb] : dofs[bb]) r[ib] += cb * row[bb];
    }
    r[value_dof(0)] += 0.5 * alpha * Z * dv_minus;
    r[slope_dof(0)] -= 0.5 * alpha * Z * v0;
    return r;
}

SpMat HermitePair::derivative_form() const {
    const GaussRule& g = gauss6();
    std::vector<Eigen::Triplet<double>> t;
    for (int e = -N; e < N; ++e) {
        const std::array<Comb, 4> dofs = element_dofs(*this, e);
        double De[4][4] = {};
        for (size_t q = 0; q < g.s.size(); ++q) {
            const Basis b = hermite_basis(g.s[q], h);
            for (int a = 0; a < 4; ++a)
                for (int bb = 0; bb < 4; ++bb) De[a][bb] += g.w[q] * h * b.N[a] * b.dN[bb];
        }
        for (int a = 0; a < 4; ++a)
            for (int bb = 0; bb < 4; ++bb)
                for (auto [ia, ca] : dofs[a])
                    for (auto [ib, cb] : dofs[bb]) t.emplace_back(ia, ib, ca * cb * De[a][bb]);
    }
    SpMat D(size(), size());
    D.setFromTriplets(t.begin(), t.end());
    return D;
}

Eigen::VectorXd HermitePair::from_samples(const std::vector<double>& minus, const std::vector<double>& plus) const {
    require(static_cast<int>(minus.size()) == N + 1 && static_cast<int>(plus.size()) == N + 1,
            "HermitePair::from_samples: sample length mismatch");
    const auto dm = sample_derivative(minus, h, -1);
    const auto dp = sample_derivative(plus, h, 1);
    Eigen::VectorXd c(size());
    for (int i = -N + 1; i < N; ++i) {
        if (i < 0) {
            c[value_dof(i)] = minus[-i];
            c[slope_dof(i)] = dm[-i];
        } else if (i > 0) {
            c[value_dof(i)] = plus[i];
            c[slope_dof(i)] = dp[i];
        } else {
            c[value_dof(0)] = 0.5 * (minus[0] + plus[0]);
            c[slope_dof(0)] = dm[0];
        }
    }
    return c;
}

void HermitePair::to_samples(const Eigen::VectorXd& c, std::vector<double>& minus, std::vector<double>& plus,
                             int deriv) const {
    require(c.size() == size(), "HermitePair::to_samples: size mismatch");
    minus.assign(N + 1, 0.0);
    plus.assign(N + 1, 0.0);
    for (int k = 1; k < N; ++k) {
        minus[k] = deriv ? c[slope_dof(-k)] : c[value_dof(-k)];
        plus[k] = deriv ? c[slope_dof(k)] : c[value_dof(k)];
    }
    if (deriv) {
        minus[0] = c[slope_dof(0)];
        plus[0] = c[slope_dof(0)] + Z * c[value_dof(0)];
    } else {
        minus[0] = plus[0] = c[value_dof(0)];
    }
}

HermiteGraphOperator assemble_hermite(const GraphGrid& grid, double Z, const std::vector<ProfileFn>& phi) {
    const StarGraph& g = grid.graph;
    g.validate();
    require(g.balanced(), "assemble_hermite needs a balanced star graph");
    require(phi.empty() || static_cast<int>(phi.size()) == g.n, "assemble_hermite: one profile per pair");
    HermiteGraphOperator op;
    op.grid = grid;
    op.Z = Z;
    int off = 0;
    std::vector<Eigen::Triplet<double>> tm, tk;
    for (int j = 0; j < g.n; ++j) {
        const int em = j, ep = g.m + j;
        require(g.alpha[em] == g.alpha[ep] && g.beta[em] == g.beta[ep],
                "assemble_hermite: paired edges must share alpha and beta");
        op.pairs.push_back(
            assemble_hermite_pair(grid.N, grid.L, Z, g.alpha[ep], g.beta[ep], phi.empty() ? ProfileFn{} : phi[j]));
        op.offset.push_back(off);
        const HermitePair& p = op.pairs.back();
        for (int c = 0; c < p.M.outerSize(); ++c)
            for (SpMat::InnerIterator it(p.M, c); it; ++it) tm.emplace_back(off + it.row(), off + it.col(), it.value());
        for (int c = 0; c < p.K.outerSize(); ++c)
            for (SpMat::InnerIterator it(p.K, c); it; ++it) tk.emplace_back(off + it.row(), off + it.col(), it.value());
        off += p.size();
    }
    op.M.resize(off, off);
    op.K.resize(off, off);
    op.M.setFromTriplets(tm.begin(), tm.end());
    op.K.setFromTriplets(tk.begin(), tk.end());
    op.M.makeCompressed();
    op.K.makeCompressed();
    return op;
}

Eigen::VectorXd HermiteGraphOperator::from_function(const RealFunction& u) const {
    require(u.grid.same_as(grid), "HermiteGraphOperator: grid mismatch");
    Eigen::VectorXd c(size());
    for (size_t j = 0; j < pairs.size(); ++j)
        c.segment(offset[j], pairs[j].size()) = pairs[j].from_samples(u[j], u[grid.graph.m + j]);
    return c;
}

RealFunction HermiteGraphOperator::to_function(const Eigen::VectorXd& c, int deriv) const {
    require(c.size() == size(), "HermiteGraphOperator: coefficient size mismatch");
    RealFunction u(grid);
    for (size_t j = 0; j < pairs.size(); ++j)
        pairs[j].to_samples(c.segment(offset[j], pairs[j].size()), u[j], u[grid.graph.m + j], deriv);
    return u;
}

Eigen::VectorXcd HermiteGraphOperator::from_function(const ComplexFunction& u) const {
    Eigen::VectorXd re = from_function(real_part(u));
    RealFunction im(u.grid);
    for (int e = 0; e < u.edges(); ++e)
        for (int k = 0; k <= grid.N; ++k) im[e][k] = u[e][k].imag();
    Eigen::VectorXd imc = from_function(im);
    Eigen::VectorXcd c(size());
    c.real() = re;
    c.imag() = imc;
    return c;
}

ComplexFunction HermiteGraphOperator::to_function(const Eigen::VectorXcd& c) const {
    RealFunction re = to_function(Eigen::VectorXd(c.real()));
    RealFunction im = to_function(Eigen::VectorXd(c.imag()));
    ComplexFunction u(grid);
    for (int e = 0; e < u.edges(); ++e)
        for (int k = 0; k <= grid.N; ++k) u[e][k] = cplx(re[e][k], im[e][k]);
    return u;
}

double HermiteGraphOperator::norm(const Eigen::VectorXd& c) const { return std::sqrt(c.dot(M * c)); }

double HermiteGraphOperator::norm(const Eigen::VectorXcd& c) const {
    Eigen::VectorXd re = c.real(), im = c.imag();
    return std::sqrt(re.dot(M * re) + im.dot(M * im));
}

}  // namespace graphkdv
