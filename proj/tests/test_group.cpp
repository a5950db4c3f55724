#include <doctest.h>

#include "graphkdv/airy_group.hpp"
#include "graphkdv/airy_resolvent.hpp"

using namespace graphkdv;

namespace {

RealFunction bumps(const GraphGrid& g) {
    return RealFunction::sample(g, [&g](int e, double x) {
        const bool neg = g.graph.negative(e);
        const double c = neg ? -5.0 : 5.0;
        return (neg ? 1.0 : 0.5) * std::exp(-(x - c) * (x - c));
    });
}

double rel(const ComplexFunction& a, const ComplexFunction& b) {
    return norm(axpby(cplx(1.0), a, cplx(-1.0), b)) / norm(b);
}

}  // namespace

TEST_SUITE("airy_group") {

TEST_CASE("contour nodes") {
    ContourSpec c;
    std::vector<double> y, w;
    contour_nodes(c, y, w);
    double s = 0.0;
    for (double v : w) s += v;
    CHECK(s == doctest::Approx(c.T_im).epsilon(1e-12));
    CHECK(y.front() >= 0.0);
    CHECK(y.back() <= c.T_im);
    c.M = 4095;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c.M = 4096;
    c.r = 0.0;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
}

TEST_CASE("time stepper conserves the norm and composes") {
    const GraphGrid g = build_grid(StarGraph::uniform(1, 1), 20.0, 1000);
    const ComplexFunction w = to_complex(bumps(g));
    const TimestepResult r = timestep_apply(w, 1.0, 2.5e-4, 1.0);
    CHECK(r.norm_drift < 1e-10);
    const ComplexFunction a = timestep_apply(timestep_apply(w, 0.2, 1e-3, 1.0).u, 0.3, 1e-3, 1.0).u;
    const ComplexFunction b = timestep_apply(w, 0.5, 1e-3, 1.0).u;
    // values only are carried between calls; slopes are re-interpolated at each restart
    CHECK(rel(a, b) < 1e-4);
}

TEST_CASE("Bromwich quadrature against the time stepper") {
    // high wavenumbers of the data reach x = +-20 by t = 0.5, where the two methods close the domain differently
    const GraphGrid g = build_grid(StarGraph::uniform(1, 1), 40.0, 2000);
    const ComplexFunction w = to_complex(bumps(g));
    for (double Z : {1.0, -1.0}) {
        const ComplexFunction wb = bromwich_apply(w, 0.5, Z);
        CHECK(std::abs(norm(wb) / norm(w) - 1.0) < 1e-4);
        CHECK(rel(wb, timestep_apply(w, 0.5, 2.5e-4, Z).u) < 1e-3);
    }
    // short times: compare with the stepper, since |W(t)w - w| itself is of size t |Aw|
    const ComplexFunction early = bromwich_apply(w, 0.01, 1.0);
    CHECK(rel(early, timestep_apply(w, 0.01, 2.5e-4, 1.0).u) < 1e-3);
    CHECK(rel(early, w) < 0.05);
    // backward flow undoes the forward one
    CHECK(rel(bromwich_apply(bromwich_apply(w, 0.3, 1.0), -0.3, 1.0), w) < 1e-3);
    CHECK_THROWS_AS(bromwich_apply(to_complex(RealFunction(build_grid(StarGraph::uniform(2, 1), 10.0, 100))), 0.5, 1.0),
                    InvalidArgument);
}

TEST_CASE("vertex conditions are invariant under the flow") {
    const GraphGrid g2 = build_grid(StarGraph::uniform(2, 2), 20.0, 2000);
    const InvarianceReport r = domain_invariance_check(bumps(g2), 0.5, 1.0);
    CHECK(r.continuity_spread < 1e-6);
    for (double v : r.vertex_residuals) CHECK(v < 1e-6);
    CHECK(r.times.size() == 5);

    const GraphGrid g1 = build_grid(StarGraph::uniform(1, 1), 20.0, 1000);
    InvarianceOptions o;
    o.method = EvolutionMethod::timestep;
    const InvarianceReport r1 = domain_invariance_check(bumps(g1), 0.5, 1.0, o);
    CHECK(r1.continuity_spread < 1e-8);
}

TEST_CASE("pairs evolve independently on a balanced star") {
    const GraphGrid g1 = build_grid(StarGraph::uniform(1, 1), 20.0, 500);
    const GraphGrid g2 = build_grid(StarGraph::uniform(2, 2), 20.0, 500);
    const ComplexFunction u1 = timestep_apply(to_complex(bumps(g1)), 0.5, 1e-3, 1.0).u;
    const ComplexFunction u2 = timestep_apply(to_complex(bumps(g2)), 0.5, 1e-3, 1.0).u;
    double d = 0.0;
    for (int k = 0; k <= 500; ++k) {
        d = std::max(d, std::abs(u2[0][k] - u1[0][k]) + std::abs(u2[1][k] - u1[0][k]));
        d = std::max(d, std::abs(u2[2][k] - u1[1][k]) + std::abs(u2[3][k] - u1[1][k]));
    }
    CHECK(d < 1e-12);
}

}  // TEST_SUITE
