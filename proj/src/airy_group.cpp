#include "graphkdv/airy_group.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "graphkdv/airy_resolvent.hpp"
#include "graphkdv/parallel.hpp"

namespace graphkdv {

void ContourSpec::validate() const {
    require(r > 0.0, "contour: r must be positive");
    require(T_im > 0.0, "contour: T_im must be positive");
    require(M >= 2 && M % 2 == 0, "contour: M must be even and at least 2");
    require(subtract_terms >= 1 && subtract_terms <= 3, "contour: subtract_terms must be 1, 2 or 3");
}

void contour_nodes(const ContourSpec& c, std::vector<double>& y, std::vector<double>& w) {
    c.validate();
    // y = r sinh(u): dense near the real axis, where the integrand varies on the scale r
    const double scale = c.r;
    const double U = std::asinh(c.T_im / scale);
    const int panel = c.M % 8 == 0 ? 8 : (c.M % 4 == 0 ? 4 : 2);
    const int panels = c.M / panel;
    std::vector<double> gx, gw;
    auto fill = [&](const auto& a, const auto& b) {
        for (size_t i = 0; i < a.size(); ++i) {
            if (a[i] == 0.0) {
                gx.push_back(0.0);
                gw.push_back(b[i]);
            } else {
                gx.push_back(-a[i]);
                gw.push_back(b[i]);
                gx.push_back(a[i]);
                gw.push_back(b[i]);
            }
        }
    };
    using boost::math::quadrature::gauss;
    if (panel == 8)
        fill(gauss<double, 8>::abscissa(), gauss<double, 8>::weights());
    else if (panel == 4)
        fill(gauss<double, 4>::abscissa(), gauss<double, 4>::weights());
    else
        fill(gauss<double, 2>::abscissa(), gauss<double, 2>::weights());
    y.clear();
    w.clear();
    const double du = U / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = (p + 0.5) * du;
        for (size_t i = 0; i < gx.size(); ++i) {
            const double u = mid + 0.5 * du * gx[i];
            y.push_back(scale * std::sinh(u));
            w.push_back(0.5 * du * gw[i] * scale * std::cosh(u));
        }
    }
}

namespace {

/// Fornberg finite-difference weights for derivatives 0..order at x0 from nodes x.
std::vector<std::vector<double>> fd_weights(double x0, const std::vector<double>& x, int order) {
    const int n = static_cast<int>(x.size());
    std::vector<std::vector<double>> c(order + 1, std::vector<double>(n, 0.0));
    double c1 = 1.0, c4 = x[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, order);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    return c;
}

/// alpha u''' + beta u' on every edge from 9-point finite differences (one-sided near the ends).
RealFunction airy_fd(const RealFunction& u) {
    const GraphGrid& g = u.grid;
    const int N = g.N;
    RealFunction out(g);
    std::vector<std::vector<double>> w1(N + 1), w3(N + 1);
    std::vector<int> start(N + 1);
    for (int k = 0; k <= N; ++k) {
        const int s = std::clamp(k - 4, 0, N - 8);
        start[k] = s;
        std::vector<double> nodes(9);
        for (int i = 0; i < 9; ++i) nodes[i] = (s + i - k) * g.h;
        auto c = fd_weights(0.0, nodes, 3);
        w1[k] = c[1];
        w3[k] = c[3];
    }
    for (int e = 0; e < g.edges(); ++e) {
        const double sg = g.graph.sign(e);
        for (int k = 0; k <= N; ++k) {
            double d1 = 0.0, d3 = 0.0;
            for (int i = 0; i < 9; ++i) {
                d1 += w1[k][i] * u[e][start[k] + i];
                d3 += w3[k][i] * u[e][start[k] + i];
            }
            out[e][k] = g.graph.alpha[e] * sg * d3 + g.graph.beta[e] * sg * d1;
        }
    }
    return out;
}

ComplexFunction reflect_pairs(const ComplexFunction& w) {
    ComplexFunction r = w;
    const int m = w.grid.graph.m;
    for (int j = 0; j < w.grid.graph.n; ++j) std::swap(r[j], r[m + j]);
    return r;
}

/// Real-data contour integral. The first terms of R(lambda) w ~ sum_j A^j w / lambda^{j+1} are subtracted
/// under the integral and added back exactly as sum_j t^j A^j w / j!.
RealFunction bromwich_real(const RealFunction& w, double t, double Z, const ContourSpec& c) {
    std::vector<double> y, wt;
    contour_nodes(c, y, wt);
    const ComplexFunction wc = to_complex(w);
    std::vector<RealFunction> Aw{w};
    for (int j = 1; j < c.subtract_terms; ++j) Aw.push_back(airy_fd(Aw.back()));
    const int nodes = static_cast<int>(y.size());
    // fixed chunking keeps the summation order independent of the thread count
    const int chunks = std::min(64, nodes);
    std::vector<RealFunction> partial(chunks, RealFunction(w.grid));
    parallel_for(chunks, [&](int ch) {
        const int lo = static_cast<int>(static_cast<long>(nodes) * ch / chunks);
        const int hi = static_cast<int>(static_cast<long>(nodes) * (ch + 1) / chunks);
        RealFunction& acc = partial[ch];
        for (int k = lo; k < hi; ++k) {
            const cplx lambda(c.r, y[k]);
            const ResolventResult R = apply_resolvent(wc, lambda, Z, false);
            const cplx f = wt[k] * std::exp(lambda * t);
            std::vector<cplx> pw;
            cplx p = 1.0 / lambda;
            for (size_t j = 0; j < Aw.size(); ++j, p /= lambda) pw.push_back(p);
            for (int e = 0; e < w.edges(); ++e)
                for (int i = 0; i <= w.grid.N; ++i) {
                    cplx v = R.v[e][i];
                    for (size_t j = 0; j < Aw.size(); ++j) v -= pw[j] * Aw[j][e][i];
                    acc[e][i] += (f * v).real();
                }
        }
    });
    RealFunction out = w;
    double coef = 1.0;
    for (size_t j = 1; j < Aw.size(); ++j) {
        coef *= t / j;
        for (int e = 0; e < w.edges(); ++e)
            for (int i = 0; i <= w.grid.N; ++i) out[e][i] += coef * Aw[j][e][i];
    }
    for (const auto& p : partial)
        for (int e = 0; e < w.edges(); ++e)
            for (int i = 0; i <= w.grid.N; ++i) out[e][i] += p[e][i] / std::numbers::pi;
    return out;
}

}  // namespace

ComplexFunction bromwich_apply(const ComplexFunction& w, double t, double Z, const ContourSpec& contour) {
    contour.validate();
    require(w.grid.graph.balanced(), "bromwich_apply needs a balanced star graph");
    if (t == 0.0) return w;
    if (t < 0.0) return reflect_pairs(bromwich_apply(reflect_pairs(w), -t, Z, contour));
    RealFunction re = real_part(w);
    RealFunction im(w.grid);
    bool has_im = false;
    for (int e = 0; e < w.edges(); ++e)
        for (int k = 0; k <= w.grid.N; ++k) {
            im[e][k] = w[e][k].imag();
            has_im = has_im || im[e][k] != 0.0;
        }
    RealFunction out_re = bromwich_real(re, t, Z, contour);
    ComplexFunction out = to_complex(out_re);
    if (has_im) {
        RealFunction out_im = bromwich_real(im, t, Z, contour);
        for (int e = 0; e < w.edges(); ++e)
            for (int k = 0; k <= w.grid.N; ++k) out[e][k] += cplx(0.0, out_im[e][k]);
    }
    const double n0 = norm(w), n1 = norm(out);
    if (n0 > 0.0 && std::abs(n1 / n0 - 1.0) > 0.05) {
        std::ostringstream os;
        os << "bromwich_apply: norm ratio " << n1 / n0 << " at t = " << t
           << "; increase T_im or M (currently " << contour.T_im << ", " << contour.M << ")";
        throw AccuracyError(os.str());
    }
    return out;
}

MidpointStepper::MidpointStepper(const SpMat& M, const SpMat& K, double dt) : dt_(dt) {
    require(dt > 0.0, "MidpointStepper: dt must be positive");
    SpMat lhs = M - 0.5 * dt * K;
    rhs_ = M + 0.5 * dt * K;
    lu_.compute(lhs);
    if (lu_.info() != Eigen::Success) throw NumericalError("MidpointStepper: factorization failed");
}

Eigen::VectorXd MidpointStepper::step(const Eigen::VectorXd& u) const {
    Eigen::VectorXd b = rhs_ * u;
    Eigen::VectorXd x = lu_.solve(b);
    if (lu_.info() != Eigen::Success) throw NumericalError("MidpointStepper: solve failed");
    return x;
}

TimestepResult timestep_apply(const ComplexFunction& w, double t, double dt, double Z) {
    require(t >= 0.0, "timestep_apply: t must be nonnegative (use the reflection for negative times)");
    require(dt > 0.0, "timestep_apply: dt must be positive");
    const HermiteGraphOperator op = assemble_hermite(w.grid, Z);
    Eigen::VectorXcd c = op.from_function(w);
    Eigen::VectorXd re = c.real(), im = c.imag();
    TimestepResult out;
    out.steps = t > 0.0 ? static_cast<int>(std::ceil(t / dt - 1e-12)) : 0;
    const double e0 = re.dot(op.M * re) + im.dot(op.M * im);
    if (out.steps > 0) {
        MidpointStepper stepper(op.M, op.K, t / out.steps);
        for (int s = 0; s < out.steps; ++s) {
            re = stepper.step(re);
            im = stepper.step(im);
            const double e = re.dot(op.M * re) + im.dot(op.M * im);
            if (e0 > 0.0) out.norm_drift = std::max(out.norm_drift, std::abs(e / e0 - 1.0));
        }
    }
    c.real() = re;
    c.imag() = im;
    out.u = op.to_function(c);
    return out;
}

InvarianceReport domain_invariance_check(const RealFunction& u0, double t, double Z, const InvarianceOptions& o) {
    require(u0.grid.graph.balanced(), "domain_invariance_check needs a balanced star graph");
    require(t > 0.0 && o.samples >= 1, "domain_invariance_check: need t > 0 and at least one sample");
    InvarianceReport rep;
    auto record = [&](const ComplexFunction& u, double time) {
        rep.times.push_back(time);
        rep.continuity_spread = std::max(rep.continuity_spread, vertex_spread(real_part(u)));
        const auto r = vertex_condition_residuals(u, Z);
        for (int i = 0; i < 3; ++i) rep.vertex_residuals[i] = std::max(rep.vertex_residuals[i], r[i]);
    };
    if (o.method == EvolutionMethod::bromwich) {
        const ComplexFunction w = to_complex(u0);
        for (int s = 1; s <= o.samples; ++s) {
            const double time = t * s / o.samples;
            record(bromwich_apply(w, time, Z, o.contour), time);
        }
        return rep;
    }
    const HermiteGraphOperator op = assemble_hermite(u0.grid, Z);
    Eigen::VectorXd c = op.from_function(u0);
    const int per = std::max(1, static_cast<int>(std::ceil(t / o.samples / o.dt - 1e-12)));
    MidpointStepper stepper(op.M, op.K, t / o.samples / per);
    for (int s = 1; s <= o.samples; ++s) {
        for (int k = 0; k < per; ++k) c = stepper.step(c);
        record(to_complex(op.to_function(c)), t * s / o.samples);
    }
    return rep;
}

}  // namespace graphkdv
