#include <doctest.h>

#include <random>

#include "graphkdv/airy_resolvent.hpp"

using namespace graphkdv;

namespace {

ComplexFunction gaussians(const GraphGrid& g) {
    return ComplexFunction::sample(g, [&g](int e, double x) {
        const double c = g.graph.negative(e) ? -5.0 : 5.0;
        return cplx(std::exp(-(x - c) * (x - c)), 0.0);
    });
}

}  // namespace

TEST_SUITE("airy_resolvent") {

TEST_CASE("characteristic roots at lambda = 2") {
    // g^3 + g + 2 = (g + 1)(g^2 - g + 2)
    const RootTriple r = characteristic_roots(cplx(2.0, 0.0), 1);
    const double s7 = std::sqrt(7.0);
    CHECK(std::abs(r.gamma1 - cplx(-1.0, 0.0)) < 1e-14);
    CHECK(std::abs(r.gamma2 - cplx(0.5, 0.5 * s7)) < 1e-14);
    CHECK(std::abs(r.gamma3 - cplx(0.5, -0.5 * s7)) < 1e-14);
    CHECK(std::abs(r.gamma1 + r.gamma2 + r.gamma3) < 1e-14);
    CHECK(std::abs(r.gamma1 * r.gamma2 + r.gamma1 * r.gamma3 + r.gamma2 * r.gamma3 - 1.0) < 1e-14);
    CHECK(std::abs(r.gamma1 * r.gamma2 * r.gamma3 + 2.0) < 1e-14);

    const RootTriple m = characteristic_roots(cplx(2.0, 0.0), -1);
    CHECK(std::abs(m.gamma1 * m.gamma2 + m.gamma1 * m.gamma3 + m.gamma2 * m.gamma3 + 1.0) < 1e-13);
}

TEST_CASE("root ordering and residuals along the right half plane") {
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> re(0.05, 5.0), im(-50.0, 50.0);
    const cplx lam(0.5, 3.0);
    for (int bs : {1, -1}) {
        const RootTriple r = characteristic_roots(lam, bs);
        for (cplx g : r.all()) CHECK(std::abs(g * g * g + double(bs) * g + lam) < 1e-12);
        CHECK(r.gamma1.real() < 0.0);
        CHECK(r.gamma2.real() > 0.0);
        CHECK(r.gamma3.real() > 0.0);
    }
    for (int k = 0; k < 500; ++k) {
        const cplx l(re(rng), im(rng));
        const RootTriple r = characteristic_roots(l, k % 2 ? 1 : -1);
        CHECK(r.residual() < 1e-10 * std::max(1.0, std::abs(l)));
        CHECK(r.gamma1.real() < 0.0);
        CHECK(r.gamma2.real() > 0.0);
        CHECK(r.gamma3.real() > 0.0);
    }
    CHECK_THROWS_AS(characteristic_roots(cplx(0.0, 1.0), 1), InvalidArgument);
    CHECK_THROWS_AS(characteristic_roots(cplx(-1.0, 0.0), -1), InvalidArgument);
}

TEST_CASE("Green's function on the positive half-line") {
    for (int bs : {1, -1}) {
        const RootTriple r = characteristic_roots(cplx(2.0, 0.0), bs);
        const double zeta = 1.0, e = 1e-9;
        CHECK(std::abs(green_plus(0.0, zeta, r)) < 1e-14);
        CHECK(std::abs(green_plus(zeta + 1e-14, zeta, r) - green_plus(zeta - 1e-14, zeta, r)) < 1e-12);
        CHECK(std::abs(green_plus(zeta + e, zeta, r, 1) - green_plus(zeta - e, zeta, r, 1)) < 1e-8);
        const cplx jump = green_plus(zeta + e, zeta, r, 2) - green_plus(zeta - e, zeta, r, 2);
        CHECK(std::abs(jump - 1.0) < 1e-8);
        // solves the homogeneous equation away from the diagonal (fourth-order differences)
        const double x = 2.5, d = 1e-2;
        auto g = [&](double s) { return green_plus(s, zeta, r); };
        const cplx d3 = (-g(x - 2 * d) + 2.0 * g(x - d) - 2.0 * g(x + d) + g(x + 2 * d)) / (2 * d * d * d);
        const cplx d1 = (g(x - 2 * d) - 8.0 * g(x - d) + 8.0 * g(x + d) - g(x + 2 * d)) / (12 * d);
        CHECK(std::abs(r.lambda * g(x) + d3 + double(bs) * d1) < 1e-4);
        // decay like e^{Re g1 x}
        const double c = std::abs(green_plus(2.0, zeta, r)) / std::exp(r.gamma1.real() * 2.0);
        for (double xx : {4.0, 8.0, 16.0})
            CHECK(std::abs(green_plus(xx, zeta, r)) <= 1.0001 * c * std::exp(r.gamma1.real() * xx));
    }
}

TEST_CASE("Green's function on the negative half-line") {
    const RootTriple r = characteristic_roots(cplx(2.0, 0.0), 1);
    const double zeta = -1.0, e = 1e-9;
    CHECK(std::abs(green_minus(0.0, zeta, r)) < 1e-14);
    CHECK(std::abs(green_minus(0.0, zeta, r, 1)) < 1e-14);
    CHECK(std::abs(green_minus(zeta + 1e-14, zeta, r) - green_minus(zeta - 1e-14, zeta, r)) < 1e-12);
    const cplx jump = green_minus(zeta + e, zeta, r, 2) - green_minus(zeta - e, zeta, r, 2);
    CHECK(std::abs(jump - 1.0) < 1e-8);
    // decay like e^{s x} as x -> -inf, s the smaller real part of the two right roots; the terms oscillate,
    // so the envelope constant is taken over more than one period
    const double s = std::min(r.gamma2.real(), r.gamma3.real());
    auto scaled = [&](double x) { return std::abs(green_minus(x, zeta, r)) * std::exp(-s * x); };
    double c = 0.0, tail = 0.0;
    for (double x = -10.0; x <= -2.0; x += 0.01) c = std::max(c, scaled(x));
    for (double x = -30.0; x <= -10.0; x += 0.01) tail = std::max(tail, scaled(x));
    CHECK(tail <= 1.001 * c);
}

TEST_CASE("vertex system determinant") {
    const RootTriple r = characteristic_roots(cplx(2.0, 0.0), 1);
    const BoundarySystem b0 = boundary_matrix(0.0, r);
    const cplx prod = (r.gamma3 - r.gamma2) * (r.gamma1 - r.gamma2) * (r.gamma1 - r.gamma3);
    CHECK(std::abs(b0.det_closed - prod) < 1e-12);
    const BoundarySystem b1 = boundary_matrix(1.0, r);
    CHECK(std::abs(b1.det_direct - b1.det_closed) < 1e-12);
    CHECK(std::abs(b1.A.determinant() - b1.det_direct) < 1e-12);

    std::mt19937 rng(17);
    std::uniform_real_distribution<double> re(0.1, 4.0), im(-20.0, 20.0), zz(-10.0, 10.0);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const RootTriple rr = characteristic_roots(cplx(re(rng), im(rng)), k % 2 ? 1 : -1);
        const BoundarySystem b = boundary_matrix(zz(rng), rr);
        worst = std::max(worst, std::abs(b.det_direct - b.det_closed) / std::max(1.0, std::abs(b.det_closed)));
    }
    CHECK(worst < 1e-12);

    double smallest = 1e300;
    for (int i = -40; i <= 40; ++i)
        for (int j = -50; j <= 50; ++j) {
            const RootTriple rr = characteristic_roots(cplx(1.0, 2.0 * j), -1);
            smallest = std::min(smallest, std::abs(boundary_matrix(0.25 * i, rr).det_closed));
        }
    CHECK(smallest > 0.0);
}

TEST_CASE("exponential cumulative quadrature") {
    const int N = 400;
    const double h = 0.01;
    std::vector<cplx> f(N + 1);
    for (int k = 0; k <= N; ++k) f[k] = std::exp(-0.7 * k * h);
    const cplx mu(-1.3, 2.0);
    const auto F = exponential_cumulative(f, h, mu);
    // int_0^y e^{mu (y - s)} e^{-0.7 s} ds = (e^{mu y} - e^{-0.7 y}) / (mu + 0.7)
    for (int k : {1, 10, 200, 400}) {
        const double y = k * h;
        const cplx exact = (std::exp(mu * y) - std::exp(-0.7 * y)) / (mu + 0.7);
        CHECK(std::abs(F[k] - exact) < 1e-10);
    }
    const cplx nu(1.1, -3.0);
    const auto B = exponential_cumulative_backward(f, h, nu);
    const double yN = N * h;
    for (int k : {0, 100, 399}) {
        const double y = k * h;
        // int_y^{yN} e^{nu (y - s)} e^{-0.7 s} ds
        const cplx exact = std::exp(nu * y) * (std::exp(-(nu + 0.7) * y) - std::exp(-(nu + 0.7) * yN)) / (nu + 0.7);
        CHECK(std::abs(B[k] - exact) < 1e-10);
    }
}

TEST_CASE("resolvent application") {
    const GraphGrid g = build_grid(StarGraph::uniform(1, 1), 40.0, 2000);
    const ResolventResult zero = apply_resolvent(ComplexFunction(g), cplx(2.0, 0.0), 1.0);
    CHECK(norm(zero.v) == 0.0);
    CHECK(std::abs(zero.coefficients[0].a0) == 0.0);

    const ComplexFunction w = gaussians(g);
    for (double Z : {-1.0, 0.0, 1.0}) {
        const ResolventResult r = apply_resolvent(w, cplx(2.0, 0.0), Z);
        CHECK(r.residual < 1e-6);
        for (double v : r.vertex_residuals) CHECK(v < 1e-6);
        // skew generator: ||R(lambda) w|| <= ||w|| / Re lambda
        CHECK(norm(r.v) <= norm(w) / 2.0 * (1.0 + 1e-6));
    }
    // first resolvent identity R(l) - R(m) = (m - l) R(l) R(m). For m far off the real axis R(m) w decays
    // slowly and the truncation at L = 40 dominates (8e-5 at m = 1 + 3i, 2e-6 at L = 60).
    const cplx l(2.0, 0.0), m(1.0, 0.0);
    const ComplexFunction Rl = apply_resolvent(w, l, 1.0).v;
    const ComplexFunction Rm = apply_resolvent(w, m, 1.0).v;
    const ComplexFunction RlRm = apply_resolvent(Rm, l, 1.0, false).v;
    const ComplexFunction lhs = axpby(cplx(1.0), Rl, cplx(-1.0), Rm);
    const ComplexFunction diff = axpby(cplx(1.0), lhs, -(m - l), RlRm);
    CHECK(norm(diff) / norm(lhs) < 1e-5);

    const GraphGrid two = build_grid(StarGraph::uniform(2, 2), 40.0, 2000);
    const ResolventResult r2 = apply_resolvent(gaussians(two), cplx(2.0, 0.0), 1.0);
    const ResolventResult r1 = apply_resolvent(w, cplx(2.0, 0.0), 1.0);
    CHECK(std::abs(r2.v[1][700] - r1.v[0][700]) < 1e-14);
    CHECK_THROWS_AS(apply_resolvent(ComplexFunction(build_grid(StarGraph::uniform(2, 1), 10.0, 100)), 2.0, 1.0),
                    InvalidArgument);
}

}  // TEST_SUITE
