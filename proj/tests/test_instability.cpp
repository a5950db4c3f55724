#include <doctest.h>

#include "graphkdv/airy_group.hpp"
#include "graphkdv/instability.hpp"
#include "oracles.hpp"

using namespace graphkdv;

namespace {

GraphGrid pair_grid(int N = 1000) { return build_grid(StarGraph::uniform(1, 1), 40.0, N); }

}  // namespace

TEST_SUITE("instability") {

TEST_CASE("bare linearized operator is the group generator") {
    const GraphGrid g = pair_grid(200);
    const LinearizedOperator op = assemble_linearized(g, 1.0, std::nullopt);
    const HermiteGraphOperator fe = assemble_hermite(g, 1.0);
    CHECK(SpMat(op.fe.K - fe.K).norm() == 0.0);
    CHECK(SpMat(op.fe.M - fe.M).norm() == 0.0);
    // cubic Hermite elements couple at most two neighbouring nodes (four unknowns each side)
    for (int k = 0; k < op.fe.K.outerSize(); ++k) {
        int nnz = 0;
        for (SpMat::InnerIterator it(op.fe.K, k); it; ++it) ++nnz;
        CHECK(nnz <= 8);
    }
}

TEST_CASE("profile must match the vertex strength") {
    const GraphGrid g = pair_grid(200);
    BalancedProfile bp;
    bp.graph = g.graph;
    bp.Z = 0.5;
    bp.pairs = {make_profile(1.0, 1.0, 1.0)};
    CHECK_THROWS_AS(assemble_linearized(g, 0.5, bp), InvalidArgument);
    CHECK_NOTHROW(assemble_linearized(g, make_profile(1.0, 1.0, 1.0)));
}

TEST_CASE("growing mode of the bump") {
    const LinearizedOperator op = assemble_linearized(pair_grid(), make_profile(1.0, 1.0, 1.0));
    const GrowingMode gm = growing_modes(op);
    REQUIRE(gm.found);
    CHECK(gm.zeta > 0.1);
    CHECK(gm.zeta < 0.15);
    CHECK(gm.residual < 1e-6);
    CHECK(std::abs(gm.paired_negative + gm.zeta) < 1e-6 * std::max(1.0, gm.zeta));
    CHECK(gm.symmetric);
    CHECK(gm.symmetry_error < 1e-6);
    CHECK(norm(gm.eigenfunction) == doctest::Approx(1.0).epsilon(1e-12));

    // the fit of ||v(t)|| recovers zeta from the eigenfunction and from generic data
    const EvolutionResult ev = evolve_linearized(gm.coefficients, 10.0 / gm.zeta, 0.05, op);
    CHECK(std::abs(ev.sigma_fit - gm.zeta) < 0.02 * gm.zeta);
    const EvolutionResult er = evolve_linearized(random_smooth_data(op, 1), 10.0 / gm.zeta, 0.05, op);
    CHECK(std::abs(er.sigma_fit - gm.zeta) < 0.05 * gm.zeta);
}

TEST_CASE("no growth without a profile") {
    const LinearizedOperator op = assemble_linearized(pair_grid(400), 1.0, std::nullopt);
    const EvolutionResult ev = evolve_linearized(random_smooth_data(op, 3), 20.0, 0.05, op);
    CHECK(std::abs(ev.sigma_fit) < 1e-8);
    CHECK(ev.norms.back() == doctest::Approx(ev.norms.front()).epsilon(1e-10));
}

TEST_CASE("tail profiles: no localized real eigenvalue is found") {
    // Documents the observed behaviour for Z < 0: the discrete spectrum near the origin is purely
    // imaginary, so no growing mode exists at these resolutions. See README.
    const LinearizedOperator op = assemble_linearized(pair_grid(), make_profile(-1.0, 1.0, 1.0));
    const GrowingMode gm = growing_modes(op);
    CHECK_FALSE(gm.found);
    CHECK(gm.symmetric);
    CHECK_FALSE(gm.note.empty());
}

TEST_CASE("assumption audit") {
    const GraphGrid g = pair_grid(1000);
    for (double Z : {1.0, -1.0, 0.0}) {
        const Profile p = make_profile(Z, 1.0, 1.0);
        const LinearizedOperator op = assemble_linearized(g, p);
        const RealFunction phi = sample_profile(g, p);
        std::optional<RealFunction> psi;
        if (Z != 0.0) psi = solve_resolvent_at_zero(paired_schrodinger(op, g), phi);
        const AuditReport a = audit_assumptions(op, phi, psi);
        CHECK(a.s1_skew_residual < 1e-12);
        CHECK(a.s3_symmetry_residual < 1e-14);
        CHECK(a.s4_samples == 50);
        CHECK(a.s4_max_ratio < 1e-8);
        CHECK(a.s7_skew_residual < 1e-12);
        if (Z > 0) {
            CHECK(a.morse_index == 2);
            CHECK(a.criterion == "crit");
            REQUIRE(a.s6_psi_phi);
            CHECK(std::abs(*a.s6_psi_phi - oracle::psi_phi(Z)) < 1e-3);
            CHECK(std::abs(a.n_phi_projections.at(1)) > 1e-3);
        } else if (Z < 0) {
            CHECK(a.morse_index == 1);
            CHECK(a.criterion == "crit2");
            CHECK(*a.s6_psi_phi < 0.0);
        } else {
            CHECK(a.kernel_detected);
            CHECK(a.criterion == "inapplicable");
            CHECK_FALSE(a.flags.empty());
        }
    }
}

TEST_CASE("balanced stars reduce to two half-lines") {
    const GraphGrid g = build_grid(StarGraph::uniform(2, 2), 40.0, 1000);
    const BalancedResult r = balanced_instability(g, 1.0, {1.0, 1.0}, {-1.0, -1.0});
    REQUIRE(r.full.found);
    REQUIRE(r.reduced);
    CHECK(r.difference < 1e-6);
    CHECK(r.symmetric_morse_index == 2);
    CHECK_FALSE(r.kernel_detected);

    const double c = -1.0 + 0.25;
    const std::vector<double> a{0.5, 1.5}, b{c - 0.25 * a[0], c - 0.25 * a[1]};
    const GraphGrid gg = build_grid(StarGraph(2, 2, {0.5, 1.5, 0.5, 1.5}, {b[0], b[1], b[0], b[1]}), 40.0, 1000);
    const BalancedResult gen = balanced_instability(gg, 1.0, a, b);
    CHECK(gen.full.found);
    CHECK(gen.full.zeta > 0.0);
    CHECK_FALSE(gen.kernel_detected);
    CHECK_THROWS_AS(balanced_instability(gg, 1.0, a, {-1.0, -1.0}), InvalidArgument);
}

TEST_CASE("observed order") {
    auto f = [](double h) { return 1.0 + 3.0 * h * h; };
    CHECK(observed_order(f(0.4), f(0.2), f(0.1)) == doctest::Approx(2.0).epsilon(1e-12));
}

}  // TEST_SUITE
