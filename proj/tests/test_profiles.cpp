#include <doctest.h>

#include "graphkdv/profiles.hpp"
#include "oracles.hpp"

using namespace graphkdv;

TEST_SUITE("profiles") {

TEST_CASE("soliton family") {
    CHECK(soliton(0.0, 1.0, -1.0, 0.0) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(std::abs(soliton(40.0, 1.0, -1.0, 0.0)) < 1e-12);
    CHECK(std::abs(soliton(-40.0, 1.0, -1.0, 0.0)) < 1e-12);
    CHECK(soliton(0.0, 1.0, -2.5, 0.0) == doctest::Approx(3.75));
    CHECK_THROWS_AS(soliton(0.0, 1.0, 1.0, 0.0), InvalidArgument);
}

TEST_CASE("vertex values and slopes") {
    const Profile bump = make_profile(1.0, 1.0, 1.0);
    CHECK(bump.kind == ProfileKind::bump);
    CHECK(bump.plus(0.0) == doctest::Approx(1.125).epsilon(1e-14));

    const Profile half = make_profile(0.0, 1.0, 1.0);
    CHECK(half.kind == ProfileKind::half_soliton);
    CHECK(half.plus(0.0) == doctest::Approx(1.5));
    CHECK(std::abs(half.plus(0.0, 1)) < 1e-15);

    const Profile tail = make_profile(-1.0, 1.0, 1.0);
    CHECK(tail.kind == ProfileKind::tail);
    CHECK(tail.plus(0.0) == doctest::Approx(1.125));
    // one-sided second-order difference of the independent closed form at 0+
    const double d = 1e-5;
    const double slope = (4 * oracle::profile(d, -1.0, 1.0) - 3 * oracle::profile(0.0, -1.0, 1.0) -
                          oracle::profile(2 * d, -1.0, 1.0)) / (2 * d);
    CHECK(tail.plus(0.0, 1) == doctest::Approx(-0.5625).epsilon(1e-12));
    CHECK(std::abs(slope - tail.plus(0.0, 1)) < 1e-8);

    CHECK_THROWS_AS(make_profile(2.5, 1.0, 1.0), InvalidArgument);
}

TEST_CASE("closed-form vertex conditions") {
    for (double Z : {-1.5, -1.0, -0.5, 0.5, 1.0, 1.5}) {
        const auto r = check_vertex_conditions(make_profile(Z, 1.0, 1.0));
        for (double v : r) CHECK(v < 1e-12);
        CHECK(stationarity_residual(make_profile(Z, 1.0, 1.0), 40.0, 2000) < 1e-10);
    }
    const auto r0 = check_vertex_conditions(make_profile(0.0, 1.0, 1.0));
    for (double v : r0) CHECK(v == 0.0);
    const Profile p = make_profile(0.7, 2.0, 1.3);
    for (double x : {0.3, 1.7, 5.0}) CHECK(p.minus(-x) == p.plus(x));
}

TEST_CASE("omega derivative against finite differences and mass oracle") {
    for (double Z : {-1.0, 0.0, 1.0}) {
        const Profile p = make_profile(Z, 1.0, 1.0);
        const OmegaDerivative psi = omega_derivative(p);
        for (double x : {0.0, 0.5, 2.0, 6.0}) {
            const double fd = -(oracle::profile(x, Z, 1.0 + 1e-5) - oracle::profile(x, Z, 1.0 - 1e-5)) / 2e-5;
            CHECK(std::abs(psi.plus(x) - fd) < 1e-8);
        }
        const GraphGrid g = build_grid(StarGraph::uniform(1, 1), 40.0, 4000);
        const double ip = inner_product(sample_omega_derivative(g, p), sample_profile(g, p));
        CHECK(std::abs(ip - oracle::psi_phi(Z)) < 1e-3);
        CHECK(std::abs(mass_derivative_oracle(Z) - oracle::psi_phi(Z)) < 1e-6);
    }
    CHECK(oracle::psi_phi(0.0) == doctest::Approx(-4.5).epsilon(1e-6));
    CHECK(oracle::psi_phi(1.0) == doctest::Approx(-6.75).epsilon(1e-6));
    CHECK(oracle::psi_phi(-1.0) == doctest::Approx(-2.25).epsilon(1e-6));
    // mass increases with omega
    for (double w : {0.5, 1.0, 2.0}) CHECK(oracle::mass(0.5, w + 0.01) > oracle::mass(0.5, w));
}

TEST_CASE("balanced profiles") {
    const StarGraph g = StarGraph::uniform(2, 2);
    const BalancedProfile b = make_balanced_profile(g, 1.0, {1.0, 1.0}, {-1.0, -1.0});
    for (const Profile& p : b.pairs) {
        CHECK(p.plus(0.0) == doctest::Approx(1.125));
        for (double v : check_vertex_conditions(p)) CHECK(v < 1e-12);
    }
    // general coefficients: beta_i + alpha_i / 4 constant and sum alpha = 2
    const std::vector<double> a{0.5, 1.5};
    const double c = -1.0 + 0.25;  // value of beta + alpha Z^2 / 4 for the unit pair
    const std::vector<double> ok{c - 0.25 * a[0], c - 0.25 * a[1]};
    const BalancedProfile gen = make_balanced_profile(StarGraph(2, 2, {0.5, 1.5, 0.5, 1.5}, {ok[0], ok[1], ok[0], ok[1]}),
                                                      1.0, a, ok);
    CHECK(gen.pairs[0].plus(0.0) == doctest::Approx(gen.pairs[1].plus(0.0)).epsilon(1e-12));
    CHECK_THROWS_AS(make_balanced_profile(StarGraph(2, 2, {0.5, 1.5, 0.5, 1.5}, {-1, -1, -1, -1}), 1.0, a,
                                          {-1.0, -1.0}),
                    InvalidArgument);

    const BalancedProfile three = make_balanced_profile(StarGraph::uniform(3, 3), 0.0, {1, 1, 1}, {-1, -1, -1});
    double flux = 0.0;
    for (const Profile& p : three.pairs) flux += p.plus(0.0, 1) - p.minus(0.0, 1);
    CHECK(std::abs(flux) < 1e-15);
    CHECK_THROWS_AS(make_balanced_profile(StarGraph::uniform(2, 1), 1.0, {1.0}, {-1.0}), InvalidArgument);
}

}  // TEST_SUITE
