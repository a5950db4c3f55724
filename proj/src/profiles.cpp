#include "graphkdv/profiles.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace graphkdv {

namespace {
double sech2(double y) {
    double c = std::cosh(y);
    return std::isfinite(c) ? 1.0 / (c * c) : 0.0;
}
}  // namespace

double soliton(double x, double a, double b, double p) {
    require(a != 0.0, "soliton: a must be nonzero");
    require(b / a < 0.0, "soliton: b/a must be negative for a decaying profile");
    return -1.5 * b * sech2(0.5 * std::sqrt(-b / a) * x + p);
}

std::string to_string(ProfileKind k) {
    switch (k) {
        case ProfileKind::tail: return "tail";
        case ProfileKind::bump: return "bump";
        default: return "half_soliton";
    }
}

double Profile::rate() const { return std::sqrt(omega) / (2.0 * std::sqrt(alpha)); }
double Profile::shift() const { return std::atanh(Z * std::sqrt(alpha) / (2.0 * std::sqrt(omega))); }

double Profile::plus(double x, int deriv) const {
    const double k = rate();
    const double y = k * x - shift();
    const double s = sech2(y);
    const double t = std::tanh(y);
    switch (deriv) {
        case 0: return 1.5 * omega * s;
        case 1: return -3.0 * omega * k * s * t;
        case 2: return 1.5 * omega * k * k * (4.0 * s - 6.0 * s * s);
        case 3: return 1.5 * omega * k * k * k * (-8.0 * s * t + 24.0 * s * s * t);
        default: throw InvalidArgument("Profile: derivative order must be 0..3");
    }
}

double Profile::operator()(double x, int deriv) const { return x >= 0.0 ? plus(x, deriv) : minus(x, deriv); }

Profile make_profile(double Z, double alpha, double omega) {
    require(alpha > 0.0, "profile: alpha must be positive");
    require(omega > 0.0, "profile: omega must be positive");
    if (!(omega / alpha > Z * Z / 4.0)) {
        std::ostringstream os;
        os << "profile: existence condition omega/alpha > Z^2/4 violated (Z=" << Z << ", alpha=" << alpha
           << ", omega=" << omega << ")";
        throw InvalidArgument(os.str());
    }
    Profile p;
    p.Z = Z;
    p.alpha = alpha;
    p.omega = omega;
    p.beta = -omega;
    p.kind = Z < 0 ? ProfileKind::tail : (Z > 0 ? ProfileKind::bump : ProfileKind::half_soliton);
    return p;
}

std::array<double, 3> check_vertex_conditions(const Profile& p) {
    const double um = p.minus(0.0), up = p.plus(0.0);
    const double d1m = p.minus(0.0, 1), d1p = p.plus(0.0, 1);
    const double d2m = p.minus(0.0, 2), d2p = p.plus(0.0, 2);
    const double Z = p.Z;
    return {std::abs(um - up), std::abs(d1p - d1m - Z * um), std::abs(d2p - d2m - 0.5 * Z * Z * um - Z * d1m)};
}

double stationarity_residual(const Profile& p, double L, int N) {
    require(L > 0 && N >= 1, "stationarity_residual: bad grid");
    const double h = L / N;
    double worst = 0.0;
    for (int k = 0; k <= N; ++k) {
        for (double x : {k * h, -k * h}) {
            double f = p(x), f2 = p(x, 2);
            worst = std::max(worst, std::abs(p.alpha * f2 - p.omega * f + f * f));
        }
    }
    return worst;
}

double OmegaDerivative::plus(double x) const {
    const Profile& p = profile;
    const double w = p.omega, a = p.alpha;
    const double T = p.Z * std::sqrt(a) / (2.0 * std::sqrt(w));
    const double y = p.rate() * x - p.shift();
    const double s = sech2(y);
    const double dy = x / (4.0 * std::sqrt(a * w)) + T / (2.0 * w * (1.0 - T * T));
    const double dphi = 1.5 * s - 3.0 * w * s * std::tanh(y) * dy;
    return -dphi;
}

OmegaDerivative omega_derivative(const Profile& p) {
    const double lo = p.Z * p.Z * p.alpha / 4.0;
    require(p.omega > lo, "omega_derivative: omega at or below the existence threshold");
    return OmegaDerivative{p};
}

double omega_derivative_fd(const Profile& p, double x, double step) {
    Profile a = make_profile(p.Z, p.alpha, p.omega + step);
    Profile b = make_profile(p.Z, p.alpha, p.omega - step);
    return -(a(x) - b(x)) / (2.0 * step);
}

BalancedProfile make_balanced_profile(const StarGraph& graph, double Z, const std::vector<double>& alphas,
                                      const std::vector<double>& betas) {
    require(graph.balanced(), "balanced profile: graph must have m == n");
    const int n = graph.n;
    auto per_pair = [&](const std::vector<double>& v, const char* name) {
        std::vector<double> out(n);
        if (static_cast<int>(v.size()) == n) return v;
        if (static_cast<int>(v.size()) == 2 * n) {
            for (int j = 0; j < n; ++j) {
                if (std::abs(v[j] - v[n + j]) > 1e-14) {
                    std::ostringstream os;
                    os << "balanced profile: " << name << " must agree on the two edges of pair " << j;
                    throw InvalidArgument(os.str());
                }
                out[j] = v[n + j];
            }
            return out;
        }
        throw InvalidArgument(std::string("balanced profile: ") + name + " needs n or 2n entries");
    };
    const auto a = per_pair(alphas, "alpha");
    const auto b = per_pair(betas, "beta");
    const double sum = std::accumulate(a.begin(), a.end(), 0.0);
    if (std::abs(sum - n) > 1e-12) {
        std::ostringstream os;
        os << "balanced profile: constraint sum(alpha) = n violated (sum = " << sum << ", n = " << n << ")";
        throw InvalidArgument(os.str());
    }
    const double c0 = b[0] + Z * Z * a[0] / 4.0;
    for (int j = 1; j < n; ++j) {
        const double cj = b[j] + Z * Z * a[j] / 4.0;
        if (std::abs(cj - c0) > 1e-12 * std::max(1.0, std::abs(c0))) {
            std::ostringstream os;
            os << "balanced profile: constraint beta_i + (Z^2/4) alpha_i constant violated at pair " << j << " ("
               << cj << " vs " << c0 << ")";
            throw InvalidArgument(os.str());
        }
    }
    BalancedProfile bp;
    bp.Z = Z;
    std::vector<double> ea(2 * n), eb(2 * n);
    for (int j = 0; j < n; ++j) {
        if (!(-b[j] / a[j] > Z * Z / 4.0)) {
            std::ostringstream os;
            os << "balanced profile: existence condition -beta/alpha > Z^2/4 violated at pair " << j;
            throw InvalidArgument(os.str());
        }
        bp.pairs.push_back(make_profile(Z, a[j], -b[j]));
        ea[j] = ea[n + j] = a[j];
        eb[j] = eb[n + j] = b[j];
    }
    bp.graph = StarGraph(n, n, ea, eb);
    return bp;
}

RealFunction sample_profile(const GraphGrid& grid, const Profile& p, int deriv) {
    RealFunction u(grid);
    for (int e = 0; e < grid.edges(); ++e)
        for (int k = 0; k <= grid.N; ++k) {
            double s = k * grid.h;
            u[e][k] = grid.graph.negative(e) ? p.minus(-s, deriv) : p.plus(s, deriv);
        }
    return u;
}

RealFunction sample_profile(const GraphGrid& grid, const BalancedProfile& bp, int deriv) {
    require(grid.graph.balanced() && grid.graph.n == static_cast<int>(bp.pairs.size()),
            "sample_profile: grid and balanced profile disagree");
    const int m = grid.graph.m;
    RealFunction u(grid);
    for (int e = 0; e < grid.edges(); ++e) {
        const Profile& p = bp.pairs[e < m ? e : e - m];
        for (int k = 0; k <= grid.N; ++k) {
            double s = k * grid.h;
            u[e][k] = e < m ? p.minus(-s, deriv) : p.plus(s, deriv);
        }
    }
    return u;
}

RealFunction sample_omega_derivative(const GraphGrid& grid, const Profile& p) {
    auto psi = omega_derivative(p);
    return RealFunction::sample(grid, [&](int, double x) { return psi(x); });
}

double mass_derivative_oracle(double Z) { return -4.5 * (1.0 + Z / 2.0); }

}  // namespace graphkdv
