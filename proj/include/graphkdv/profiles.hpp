#pragma once

#include <array>
#include <string>
#include <vector>

#include "graphkdv/graph.hpp"

namespace graphkdv {

/// -(3b/2) sech^2( (1/2) sqrt(-b/a) x + p ), the classical soliton family.
double soliton(double x, double a, double b, double p);

enum class ProfileKind { tail, bump, half_soliton };
std::string to_string(ProfileKind k);

/// Shifted sech^2 stationary state on two half-lines, normalized to beta = -omega.
/// phi_plus(x) = (3w/2) sech^2( sqrt(w)/(2 sqrt(a)) x - atanh(Z sqrt(a)/(2 sqrt(w))) ), phi_minus(x) = phi_plus(-x).
struct Profile {
    double Z = 0.0;
    double alpha = 1.0;
    double beta = -1.0;
    double omega = 1.0;
    ProfileKind kind = ProfileKind::half_soliton;

    double rate() const;   // sqrt(omega)/(2 sqrt(alpha))
    double shift() const;  // atanh(Z sqrt(alpha)/(2 sqrt(omega)))

    // derivatives of the plus branch for x >= 0
    double plus(double x, int deriv = 0) const;
    double minus(double x, int deriv = 0) const { return (deriv % 2 ? -1.0 : 1.0) * plus(-x, deriv); }
    /// Value on a signed coordinate: plus branch for x > 0, minus branch for x < 0.
    double operator()(double x, int deriv = 0) const;
};

Profile make_profile(double Z, double alpha, double omega);

/// |phi(0-)-phi(0+)|, |phi'_+ - phi'_- - Z phi(0-)|, |phi''_+ - phi''_- - (Z^2/2) phi(0-) - Z phi'_-|.
std::array<double, 3> check_vertex_conditions(const Profile& p);

/// max over the grid of |alpha phi'' - omega phi + phi^2|, evaluated from the closed forms.
double stationarity_residual(const Profile& p, double L, int N);

/// psi = -(d/d omega) phi, analytic (the shift depends on omega too).
struct OmegaDerivative {
    Profile profile;
    double plus(double x) const;
    double operator()(double x) const { return plus(std::abs(x)); }
};
OmegaDerivative omega_derivative(const Profile& p);
/// Central difference in omega, step 1e-5; independent check of the analytic form.
double omega_derivative_fd(const Profile& p, double x, double step = 1e-5);

/// Balanced star graph with one profile per edge pair (pair j = edges j and m+j).
struct BalancedProfile {
    StarGraph graph;
    double Z = 0.0;
    std::vector<Profile> pairs;
    double vertex_value() const { return pairs.front().plus(0.0); }
};

/// alphas/betas: one entry per pair (length n) or per edge (length 2n with matching pairs).
BalancedProfile make_balanced_profile(const StarGraph& graph, double Z, const std::vector<double>& alphas,
                                      const std::vector<double>& betas);

/// Samples of the profile on every edge (negative edges get the minus branch).
RealFunction sample_profile(const GraphGrid& grid, const Profile& p, int deriv = 0);
RealFunction sample_profile(const GraphGrid& grid, const BalancedProfile& p, int deriv = 0);
RealFunction sample_omega_derivative(const GraphGrid& grid, const Profile& p);

/// Closed-form mass derivative check: <psi,phi> = -(9/2)(1 + Z/2) at omega = alpha = 1.
double mass_derivative_oracle(double Z);

}  // namespace graphkdv
