#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <array>
#include <vector>

#include "graphkdv/graph.hpp"
#include "graphkdv/hermite.hpp"

namespace graphkdv {

/// Vertical line Re lambda = r, |Im lambda| <= T_im, M Gauss-Legendre nodes on a sinh-graded [0, T_im].
struct ContourSpec {
    double r = 1.0;
    double T_im = 200.0;
    int M = 4096;
    int subtract_terms = 3;  // leading terms A^j w / lambda^{j+1} removed from the integrand, j < subtract_terms
    void validate() const;
};

/// Quadrature nodes y_k and weights on [0, T_im]; weights sum to T_im.
void contour_nodes(const ContourSpec& c, std::vector<double>& y, std::vector<double>& w);

/// W(t) w from the inverse Laplace integral of the resolvent along Re lambda = r, with the 1/lambda
/// term subtracted and added back exactly. t < 0 uses the reflection x -> -x inside every pair.
/// The subtracted terms apply the FD generator to w, so w must be smooth and continuous at the vertex:
/// a jump of size d in one node shows up as roughly d / h^6 in the vertex traces of the result.
/// Throws AccuracyError if the norm moves by more than 5%.
ComplexFunction bromwich_apply(const ComplexFunction& w, double t, double Z, const ContourSpec& contour = {});

/// Implicit midpoint for M du/dt = K u.
class MidpointStepper {
public:
    MidpointStepper(const SpMat& M, const SpMat& K, double dt);
    Eigen::VectorXd step(const Eigen::VectorXd& u) const;
    double dt() const { return dt_; }

private:
    double dt_;
    SpMat rhs_;
    Eigen::SparseLU<SpMat> lu_;
};

struct TimestepResult {
    ComplexFunction u;
    double norm_drift = 0.0;  // max over steps of |E(t)/E(0) - 1|, E = c^T M c
    int steps = 0;
};

/// Evolves w to time t with steps of at most dt using the Hermite discretization of the Airy generator.
TimestepResult timestep_apply(const ComplexFunction& w, double t, double dt, double Z);

struct InvarianceReport {
    double continuity_spread = 0.0;            // max over sampled times of the vertex spread over all edges
    std::array<double, 3> vertex_residuals{};  // worst over pairs and times, fourth-order one-sided traces
    std::vector<double> times;
};

enum class EvolutionMethod { bromwich, timestep };

struct InvarianceOptions {
    EvolutionMethod method = EvolutionMethod::bromwich;
    int samples = 5;
    double dt = 2.5e-4;   // time stepper only
    ContourSpec contour;  // contour only
};

/// Evolves u0 (expected continuous at the vertex and satisfying the vertex conditions) and tracks the
/// vertex conditions at `samples` equally spaced times in (0, t]. The curvature condition is natural in the
/// Hermite discretization, so its pointwise trace is only weakly controlled on the time-stepper path.
InvarianceReport domain_invariance_check(const RealFunction& u0, double t, double Z,
                                         const InvarianceOptions& options = {});

}  // namespace graphkdv
