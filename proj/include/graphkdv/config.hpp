#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "graphkdv/errors.hpp"

namespace graphkdv {

/// Raised for malformed or out-of-range configuration; `field` is the dotted path (e.g. "graph.alpha").
struct ConfigError : InvalidArgument {
    ConfigError(std::string field_, const std::string& msg)
        : InvalidArgument(field_ + ": " + msg), field(std::move(field_)) {}
    std::string field;
};

struct Tolerances {
    double vertex = 1e-12;         // closed-form vertex residuals of the profile
    double stationarity = 1e-10;
    double eigen_residual = 1e-8;  // Schrodinger eigenpairs
    double mode_residual = 1e-6;   // growing mode
    double symmetry = 1e-6;        // spectrum under lambda -> -lambda, conj
    double growth_fit = 0.05;      // relative |sigma_fit - zeta| / zeta
    double resolvent = 1e-6;
    double norm_drift = 1e-10;
    double group_agreement = 1e-3;
    double invariance = 1e-6;
    double s4 = 1e-8;
};

/// Every field has a default; see README for the file format.
struct RunConfig {
    // [graph]
    int m = 1, n = 1;
    std::vector<double> alpha{1.0};  // one value for all edges, or one per edge
    std::vector<double> beta{-1.0};
    // [discretization]
    double L = 40.0;
    int N = 2000;
    // [vertex]
    double Z = 1.0;
    std::vector<double> sweep;
    // [task]
    std::string task = "all";
    // [modes]
    int coarse_N = 160;
    double window = 2.0;
    // [evolution]
    double dt = 0.05;
    double T = 0.0;  // 0: 10 / zeta, capped at 200
    std::uint32_t seed = 1;
    // [resolvent]
    double lambda_re = 2.0, lambda_im = 0.0;
    double group_time = 0.5;
    bool bromwich = true;
    // [tolerances]
    Tolerances tol;
    // [output]
    std::string output_dir = "graphkdv_out";

    std::vector<double> edge_alpha() const;
    std::vector<double> edge_beta() const;
    /// Throws ConfigError naming the offending field.
    void validate() const;
};

const std::vector<std::string>& task_names();

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

}  // namespace graphkdv
