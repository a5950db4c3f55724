#include <doctest.h>

#include <random>

#include "graphkdv/graph.hpp"
#include "graphkdv/profiles.hpp"
#include "oracles.hpp"

using namespace graphkdv;

TEST_SUITE("graph_core") {

TEST_CASE("grid spacing and edge layout") {
    const GraphGrid g = build_grid(StarGraph::uniform(1, 1), 40.0, 2000);
    CHECK(g.h == doctest::Approx(0.02).epsilon(1e-15));
    CHECK(g.x(0, 2000) == doctest::Approx(-40.0));
    CHECK(g.x(1, 2000) == doctest::Approx(40.0));

    const GraphGrid g2 = build_grid(StarGraph::uniform(2, 2), 40.0, 2000);
    CHECK(g2.edges() == 4);
    for (int e = 0; e < 4; ++e) CHECK(std::abs(g2.x(e, 1)) == doctest::Approx(0.02));

    const GraphGrid g3 = build_grid(StarGraph::uniform(2, 1), 10.0, 100);
    CHECK_FALSE(g3.graph.balanced());
    CHECK(g3.edges() == 3);
}

TEST_CASE("grid and graph validation") {
    CHECK_THROWS_AS(build_grid(StarGraph::uniform(1, 1), 0.0, 100), InvalidArgument);
    CHECK_THROWS_AS(build_grid(StarGraph::uniform(1, 1), 10.0, 8), InvalidArgument);
    CHECK_THROWS_AS(StarGraph(1, 1, {1.0, -1.0}, {-1.0, -1.0}).validate(), InvalidArgument);
    CHECK_THROWS_AS(StarGraph(0, 1, {1.0}, {-1.0}).validate(), InvalidArgument);
}

TEST_CASE("inner product") {
    const GraphGrid g = build_grid(StarGraph::uniform(1, 1), 40.0, 2000);
    const RealFunction zero(g);
    CHECK(inner_product(zero, zero) == 0.0);

    // full soliton (3/2) sech^2(x/2): mass 6
    const RealFunction s = RealFunction::sample(g, [](int, double x) { return soliton(x, 1.0, -1.0, 0.0); });
    CHECK(inner_product(s, s) == doctest::Approx(6.0).epsilon(2e-3 / 6.0));

    std::mt19937 rng(3);
    std::normal_distribution<double> nd;
    ComplexFunction u(g), v(g);
    for (int e = 0; e < 2; ++e)
        for (int k = 0; k <= g.N; ++k) {
            u[e][k] = {nd(rng), nd(rng)};
            v[e][k] = {nd(rng), nd(rng)};
        }
    const cplx uv = inner_product(u, v), vu = inner_product(v, u);
    CHECK(std::abs(uv - std::conj(vu)) < 1e-12 * std::abs(uv));
    CHECK(inner_product(u, u).real() > 0.0);

    const GraphGrid other = build_grid(StarGraph::uniform(1, 1), 20.0, 2000);
    CHECK_THROWS_AS(inner_product(zero, RealFunction(other)), InvalidArgument);
}

TEST_CASE("vertex traces reproduce polynomials") {
    const GraphGrid g = build_grid(StarGraph::uniform(1, 1), 10.0, 100);
    const RealFunction lin = RealFunction::sample(g, [](int, double x) { return x; });
    const RealFunction quad = RealFunction::sample(g, [](int, double x) { return x * x; });
    for (int acc : {2, 4}) {
        const TraceSet a = vertex_traces(lin, 2, acc);
        CHECK(std::abs(a.d1plus[0] - 1.0) < 1e-10);
        CHECK(std::abs(a.d1minus[0] - 1.0) < 1e-10);
        const TraceSet b = vertex_traces(quad, 2, acc);
        CHECK(std::abs(b.d2plus[0] - 2.0) < 1e-8);
        CHECK(std::abs(b.d2minus[0] - 2.0) < 1e-8);
        CHECK(std::abs(b.d1plus[0]) < 1e-10);
    }
    const GraphGrid fine = build_grid(StarGraph::uniform(1, 1), 40.0, 2000);
    const TraceSet p = vertex_traces(sample_profile(fine, make_profile(1.0, 1.0, 1.0)));
    CHECK(p.u0plus[0] == doctest::Approx(1.125).epsilon(1e-14));
}

TEST_CASE("embed_symmetric") {
    const GraphGrid g = build_grid(StarGraph::uniform(2, 2), 20.0, 400);
    std::vector<double> f(401), h(401);
    for (int k = 0; k <= 400; ++k) {
        f[k] = std::exp(-0.1 * k * g.h);
        h[k] = std::exp(-0.2 * k * g.h);
    }
    const RealFunction u = embed_symmetric(f, h, g);
    const GraphGrid one = build_grid(StarGraph::uniform(1, 1), 20.0, 400);
    const RealFunction single = embed_symmetric(f, h, one);
    CHECK(inner_product(u, u) == doctest::Approx(2.0 * inner_product(single, single)).epsilon(1e-14));
    CHECK(u[0] == f);
    CHECK(u[3] == h);

    const RealFunction z = embed_symmetric(std::vector<double>(401), std::vector<double>(401), g);
    CHECK(norm(z) == 0.0);

    const GraphGrid unb = build_grid(StarGraph::uniform(2, 1), 20.0, 400);
    CHECK_THROWS_AS(embed_symmetric(f, h, unb), InvalidArgument);
}

}  // TEST_SUITE
