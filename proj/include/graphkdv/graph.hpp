#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "graphkdv/errors.hpp"

namespace graphkdv {

using cplx = std::complex<double>;

/// Star graph: m half-lines (-inf,0) and n half-lines (0,+inf) joined at one vertex.
/// Edges are numbered 0..m-1 (negative side) then m..m+n-1 (positive side).
struct StarGraph {
    int m = 1;
    int n = 1;
    std::vector<double> alpha;  // one per edge
    std::vector<double> beta;   // one per edge

    StarGraph() = default;
    StarGraph(int m_, int n_, std::vector<double> alpha_, std::vector<double> beta_);
    /// Equal coefficients on every edge.
    static StarGraph uniform(int m, int n, double alpha = 1.0, double beta = -1.0);

    int edges() const { return m + n; }
    bool balanced() const { return m == n; }
    bool negative(int e) const { return e < m; }
    /// Orientation of edge e: -1 for (-inf,0), +1 for (0,inf).
    int sign(int e) const { return e < m ? -1 : 1; }
    void validate() const;
};

struct GraphGrid {
    StarGraph graph;
    double L = 40.0;
    int N = 2000;
    double h = 0.02;

    int edges() const { return graph.edges(); }
    /// Physical coordinate of sample k on edge e (k = 0 is the vertex, k = N the far end).
    double x(int e, int k) const { return graph.sign(e) * k * h; }
    bool same_as(const GraphGrid& o) const;
};

GraphGrid build_grid(const StarGraph& graph, double L, int N);

/// Samples u_e(x_k), k = 0..N, on every edge. The k = 0 entry is the one-sided vertex value.
template <class T>
struct GraphFunction {
    GraphGrid grid;
    std::vector<std::vector<T>> values;

    GraphFunction() = default;
    explicit GraphFunction(const GraphGrid& g)
        : grid(g), values(g.edges(), std::vector<T>(g.N + 1, T(0))) {}

    std::vector<T>& operator[](int e) { return values[e]; }
    const std::vector<T>& operator[](int e) const { return values[e]; }
    int edges() const { return static_cast<int>(values.size()); }

    /// Fill from a function of (edge, x).
    static GraphFunction sample(const GraphGrid& g, const std::function<T(int, double)>& f) {
        GraphFunction u(g);
        for (int e = 0; e < g.edges(); ++e)
            for (int k = 0; k <= g.N; ++k) u.values[e][k] = f(e, g.x(e, k));
        return u;
    }
};

using RealFunction = GraphFunction<double>;
using ComplexFunction = GraphFunction<cplx>;

ComplexFunction to_complex(const RealFunction& u);
RealFunction real_part(const ComplexFunction& u);

/// Trapezoidal <u,v> = sum_e int u_e conj(v_e).
cplx inner_product(const ComplexFunction& u, const ComplexFunction& v);
double inner_product(const RealFunction& u, const RealFunction& v);
double norm(const RealFunction& u);
double norm(const ComplexFunction& u);

/// Linear combination a*u + b*v on a shared grid.
RealFunction axpby(double a, const RealFunction& u, double b, const RealFunction& v);
ComplexFunction axpby(cplx a, const ComplexFunction& u, cplx b, const ComplexFunction& v);

struct TraceSet {
    std::vector<double> u0minus, u0plus;
    std::vector<double> d1minus, d1plus;
    std::vector<double> d2minus, d2plus;
};

/// One-sided vertex traces. `order` selects how many derivatives are extracted (1 or 2);
/// `accuracy` is 2 (3-/4-point stencils) or 4 (5-/6-point stencils).
TraceSet vertex_traces(const RealFunction& u, int order = 2, int accuracy = 2);

/// f on every negative edge, g on every positive edge (samples indexed by k, x = -kh resp. kh).
RealFunction embed_symmetric(const std::vector<double>& f, const std::vector<double>& g,
                             const GraphGrid& grid);

/// Spread of the one-sided vertex values across all edges.
double vertex_spread(const RealFunction& u);

}  // namespace graphkdv
