#include "graphkdv/graph.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace graphkdv {

StarGraph::StarGraph(int m_, int n_, std::vector<double> alpha_, std::vector<double> beta_)
    : m(m_), n(n_), alpha(std::move(alpha_)), beta(std::move(beta_)) {
    validate();
}

StarGraph StarGraph::uniform(int m, int n, double alpha, double beta) {
    require(m >= 1 && n >= 1, "star graph needs m >= 1 and n >= 1");
    return StarGraph(m, n, std::vector<double>(m + n, alpha), std::vector<double>(m + n, beta));
}

void StarGraph::validate() const {
    require(m >= 1 && n >= 1, "star graph needs m >= 1 and n >= 1");
    require(static_cast<int>(alpha.size()) == m + n, "alpha must have one entry per edge");
    require(static_cast<int>(beta.size()) == m + n, "beta must have one entry per edge");
    for (double a : alpha) require(a > 0.0 && std::isfinite(a), "alpha entries must be positive");
    for (double b : beta) require(std::isfinite(b), "beta entries must be finite");
}

bool GraphGrid::same_as(const GraphGrid& o) const {
    return graph.m == o.graph.m && graph.n == o.graph.n && N == o.N && L == o.L;
}

GraphGrid build_grid(const StarGraph& graph, double L, int N) {
    graph.validate();
    require(L > 0.0 && std::isfinite(L), "truncation length L must be positive");
    require(N >= 16, "N must be at least 16");
    GraphGrid g;
    g.graph = graph;
    g.L = L;
    g.N = N;
    g.h = L / N;
    return g;
}

ComplexFunction to_complex(const RealFunction& u) {
    ComplexFunction c(u.grid);
    for (int e = 0; e < u.edges(); ++e)
        for (size_t k = 0; k < u[e].size(); ++k) c[e][k] = u[e][k];
    return c;
}

RealFunction real_part(const ComplexFunction& u) {
    RealFunction r(u.grid);
    for (int e = 0; e < u.edges(); ++e)
        for (size_t k = 0; k < u[e].size(); ++k) r[e][k] = u[e][k].real();
    return r;
}

namespace {
template <class T, class F>
auto trapezoid(const GraphFunction<T>& u, const GraphFunction<T>& v, F prod) {
    require(u.grid.same_as(v.grid), "inner product: grid mismatch");
    using R = decltype(prod(T{}, T{}));
    R s{};
    const int N = u.grid.N;
    for (int e = 0; e < u.edges(); ++e) {
        R se{};
        for (int k = 1; k < N; ++k) se += prod(u[e][k], v[e][k]);
        se += 0.5 * (prod(u[e][0], v[e][0]) + prod(u[e][N], v[e][N]));
        s += se;
    }
    return s * u.grid.h;
}
}  // namespace

cplx inner_product(const ComplexFunction& u, const ComplexFunction& v) {
    return trapezoid(u, v, [](cplx a, cplx b) { return a * std::conj(b); });
}

double inner_product(const RealFunction& u, const RealFunction& v) {
    return trapezoid(u, v, [](double a, double b) { return a * b; });
}

double norm(const RealFunction& u) { return std::sqrt(std::max(0.0, inner_product(u, u))); }
double norm(const ComplexFunction& u) { return std::sqrt(std::max(0.0, inner_product(u, u).real())); }

RealFunction axpby(double a, const RealFunction& u, double b, const RealFunction& v) {
    require(u.grid.same_as(v.grid), "axpby: grid mismatch");
    RealFunction r(u.grid);
    for (int e = 0; e < u.edges(); ++e)
        for (size_t k = 0; k < u[e].size(); ++k) r[e][k] = a * u[e][k] + b * v[e][k];
    return r;
}

ComplexFunction axpby(cplx a, const ComplexFunction& u, cplx b, const ComplexFunction& v) {
    require(u.grid.same_as(v.grid), "axpby: grid mismatch");
    ComplexFunction r(u.grid);
    for (int e = 0; e < u.edges(); ++e)
        for (size_t k = 0; k < u[e].size(); ++k) r[e][k] = a * u[e][k] + b * v[e][k];
    return r;
}

TraceSet vertex_traces(const RealFunction& u, int order, int accuracy) {
    require(order == 1 || order == 2, "vertex_traces: order must be 1 or 2");
    require(accuracy == 2 || accuracy == 4, "vertex_traces: accuracy must be 2 or 4");
    const int need = accuracy == 2 ? 5 : 7;
    require(u.grid.N + 1 >= need, "vertex_traces: too few points for the one-sided stencil");
    const double h = u.grid.h;
    // derivative along s = |x| from the vertex outward
    auto d1 = [&](const std::vector<double>& f) {
        if (accuracy == 2) return (-3 * f[0] + 4 * f[1] - f[2]) / (2 * h);
        return (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12 * h);
    };
    auto d2 = [&](const std::vector<double>& f) {
        if (accuracy == 2) return (2 * f[0] - 5 * f[1] + 4 * f[2] - f[3]) / (h * h);
        return (45 * f[0] - 154 * f[1] + 214 * f[2] - 156 * f[3] + 61 * f[4] - 10 * f[5]) / (12 * h * h);
    };
    TraceSet t;
    const auto& G = u.grid.graph;
    for (int e = 0; e < G.edges(); ++e) {
        const auto& f = u[e];
        double s = G.sign(e);
        if (G.negative(e)) {
            t.u0minus.push_back(f[0]);
            t.d1minus.push_back(s * d1(f));
            if (order == 2) t.d2minus.push_back(d2(f));
        } else {
            t.u0plus.push_back(f[0]);
            t.d1plus.push_back(s * d1(f));
            if (order == 2) t.d2plus.push_back(d2(f));
        }
    }
    return t;
}

RealFunction embed_symmetric(const std::vector<double>& f, const std::vector<double>& g,
                             const GraphGrid& grid) {
    require(grid.graph.balanced(), "embed_symmetric needs a balanced graph");
    require(static_cast<int>(f.size()) == grid.N + 1 && static_cast<int>(g.size()) == grid.N + 1,
            "embed_symmetric: sample vectors must have N+1 entries");
    RealFunction u(grid);
    for (int e = 0; e < grid.edges(); ++e) u[e] = grid.graph.negative(e) ? f : g;
    return u;
}

double vertex_spread(const RealFunction& u) {
    double lo = u[0][0], hi = u[0][0];
    for (int e = 1; e < u.edges(); ++e) {
        lo = std::min(lo, u[e][0]);
        hi = std::max(hi, u[e][0]);
    }
    return hi - lo;
}

}  // namespace graphkdv
