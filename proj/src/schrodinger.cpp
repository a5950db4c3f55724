#include "graphkdv/schrodinger.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace graphkdv {

std::string to_string(VertexKind k) {
    switch (k) {
        case VertexKind::kirchhoff: return "kirchhoff";
        case VertexKind::delta: return "delta";
        default: return "full_delta_sum";
    }
}

VertexKind vertex_kind_from_string(const std::string& s) {
    if (s == "kirchhoff") return VertexKind::kirchhoff;
    if (s == "delta") return VertexKind::delta;
    if (s == "full_delta_sum") return VertexKind::full_delta_sum;
    throw InvalidArgument("unknown vertex kind '" + s + "' (expected kirchhoff, delta or full_delta_sum)");
}

SchrodingerOperator assemble_schrodinger(const GraphGrid& grid, double Z, const std::optional<RealFunction>& phi,
                                         VertexKind kind) {
    const StarGraph& g = grid.graph;
    g.validate();
    if (phi) require(phi->grid.same_as(grid), "assemble_schrodinger: profile grid mismatch");
    if (kind == VertexKind::full_delta_sum) require(g.balanced(), "full_delta_sum needs a balanced graph");
    if (kind == VertexKind::kirchhoff) require(Z == 0.0, "kirchhoff vertex requires Z = 0");

    SchrodingerOperator op;
    op.grid = grid;
    op.Z = Z;
    op.vertex_kind = kind;
    op.potential = RealFunction(grid);
    for (int e = 0; e < grid.edges(); ++e)
        for (int k = 0; k <= grid.N; ++k) op.potential[e][k] = -g.beta[e] - 2.0 * (phi ? (*phi)[e][k] : 0.0);

    double plus_alpha = 0.0;
    for (int e = g.m; e < g.edges(); ++e) plus_alpha += g.alpha[e];
    switch (kind) {
        case VertexKind::kirchhoff: op.vertex_coupling = 0.0; break;
        case VertexKind::delta: op.vertex_coupling = Z * plus_alpha / g.n; break;
        case VertexKind::full_delta_sum: op.vertex_coupling = Z * plus_alpha; break;
    }

    const int N = grid.N;
    const double h = grid.h;
    const int n_dof = grid.edges() * (N - 1) + 1;
    const int v = op.vertex_dof();
    op.w = Eigen::VectorXd::Constant(n_dof, h);
    op.w[v] = 0.5 * h * grid.edges();

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(4 * n_dof);
    double vdiag = op.vertex_coupling;
    for (int e = 0; e < grid.edges(); ++e) {
        const double a = g.alpha[e] / h;
        vdiag += 0.5 * h * op.potential[e][0];
        // element (k, k+1) for k = 0..N-1; node 0 is the vertex, node N is Dirichlet
        auto id = [&](int k) { return k == 0 ? v : op.dof(e, k); };
        for (int k = 0; k < N; ++k) {
            const int i = id(k);
            if (k == 0)
                vdiag += a;
            else
                trip.emplace_back(i, i, a);
            if (k + 1 < N) {
                const int j = id(k + 1);
                trip.emplace_back(j, j, a);
                trip.emplace_back(i, j, -a);
                trip.emplace_back(j, i, -a);
            }
        }
        for (int k = 1; k < N; ++k) trip.emplace_back(op.dof(e, k), op.dof(e, k), h * op.potential[e][k]);
    }
    trip.emplace_back(v, v, vdiag);
    op.K.resize(n_dof, n_dof);
    op.K.setFromTriplets(trip.begin(), trip.end());
    op.K.makeCompressed();
    return op;
}

Eigen::VectorXd SchrodingerOperator::to_vector(const RealFunction& u) const {
    require(u.grid.same_as(grid), "SchrodingerOperator: grid mismatch");
    Eigen::VectorXd x(size());
    double v = 0.0;
    for (int e = 0; e < grid.edges(); ++e) {
        v += u[e][0];
        for (int k = 1; k < grid.N; ++k) x[dof(e, k)] = u[e][k];
    }
    x[vertex_dof()] = v / grid.edges();
    return x;
}

RealFunction SchrodingerOperator::to_function(const Eigen::VectorXd& x) const {
    RealFunction u(grid);
    for (int e = 0; e < grid.edges(); ++e) {
        u[e][0] = x[vertex_dof()];
        for (int k = 1; k < grid.N; ++k) u[e][k] = x[dof(e, k)];
        u[e][grid.N] = 0.0;
    }
    return u;
}

RealFunction SchrodingerOperator::apply(const RealFunction& u) const {
    Eigen::VectorXd y = K * to_vector(u);
    return to_function(y.cwiseQuotient(w));
}

double SchrodingerOperator::essential_edge() const {
    double edge = -grid.graph.beta[0];
    for (double b : grid.graph.beta) edge = std::min(edge, -b);
    return edge;
}

double SchrodingerOperator::symmetry_residual() const {
    SpMat d = SpMat(K.transpose()) - K;
    double worst = 0.0;
    for (int c = 0; c < d.outerSize(); ++c)
        for (SpMat::InnerIterator it(d, c); it; ++it) worst = std::max(worst, std::abs(it.value()));
    return worst;
}

namespace {
double default_tol(const SchrodingerOperator& op, double tol) { return tol > 0 ? tol : 10.0 * op.grid.h * op.grid.h; }
}  // namespace

SpectralReport spectrum_below_edge(const SchrodingerOperator& op, int k, double kernel_tol) {
    require(k >= 1, "spectrum_below_edge: k must be at least 1");
    SpectralReport rep;
    rep.kernel_threshold = default_tol(op, kernel_tol);
    rep.essential_edge = op.essential_edge();
    SymmetricPencil pencil(op.K, op.w);
    const double h = op.grid.h;
    const int below = pencil.count_below(rep.essential_edge - 5.0 * h * h);
    const int neg = pencil.count_below(-rep.kernel_threshold);
    const int small = pencil.count_below(rep.kernel_threshold);
    rep.morse_index = neg;
    rep.kernel_detected = small > neg;

    const int want = std::min(k, pencil.size());
    std::vector<double> ev;
    for (int j = 0; j < want; ++j) ev.push_back(pencil.eigenvalue(j));
    Eigen::MatrixXd X = pencil.eigenvectors(ev);
    for (int j = 0; j < want; ++j) {
        if (j < below) {
            rep.eigenvalues.push_back(ev[j]);
            rep.eigenvectors.push_back(op.to_function(X.col(j)));
            rep.residuals.push_back(pencil.residual(ev[j], X.col(j)));
        } else {
            rep.above_edge.push_back(ev[j]);
        }
    }
    // smallest |lambda|: the eigenvalue closest to zero, found from the inertia split at zero
    const int at0 = pencil.count_below(0.0);
    double best = std::numeric_limits<double>::infinity();
    if (at0 > 0) best = std::abs(pencil.eigenvalue(at0 - 1));
    if (at0 < pencil.size()) best = std::min(best, std::abs(pencil.eigenvalue(at0)));
    rep.min_abs_eigenvalue = best;
    return rep;
}

RealFunction solve_resolvent_at_zero(const SchrodingerOperator& op, const RealFunction& rhs, double kernel_tol,
                                     double* residual) {
    const double tol = default_tol(op, kernel_tol);
    SymmetricPencil pencil(op.K, op.w);
    if (pencil.count_below(tol) != pencil.count_below(-tol))
        throw SingularOperator("solve_resolvent_at_zero: the operator has an eigenvalue within the kernel threshold");
    Eigen::VectorXd b = op.w.cwiseProduct(op.to_vector(rhs));
    Eigen::SimplicialLDLT<SpMat> ldlt(op.K);
    if (ldlt.info() != Eigen::Success) throw NumericalError("solve_resolvent_at_zero: factorization failed");
    Eigen::VectorXd x = ldlt.solve(b);
    // one step of iterative refinement
    x += ldlt.solve(b - op.K * x);
    const double bn = b.norm();
    const double r = bn > 0 ? (op.K * x - b).norm() / bn : (op.K * x).norm();
    if (residual) *residual = r;
    return op.to_function(x);
}

ReducedOperator reduced_operator(const SchrodingerOperator& op, const RealFunction& phi, double kernel_tol) {
    const double tol = default_tol(op, kernel_tol);
    Eigen::VectorXd p = op.to_vector(phi);
    const Eigen::VectorXd s = op.w.cwiseSqrt();
    Eigen::VectorXd q = s.cwiseProduct(p);
    require(q.norm() > 0.0, "reduced_operator: phi must be nonzero");
    q.normalize();
    const int n = op.size();
    Eigen::MatrixXd A = Eigen::MatrixXd(op.K);
    A = s.cwiseInverse().asDiagonal() * A * s.cwiseInverse().asDiagonal();
    // Householder reflector mapping q to a multiple of e_0; the trailing block spans q-perp
    Eigen::VectorXd v = q;
    v[0] += (q[0] >= 0 ? 1.0 : -1.0);
    v.normalize();
    // B = H A H with H = I - 2 v v^T
    Eigen::VectorXd Av = A * v;
    const double vAv = v.dot(Av);
    Eigen::MatrixXd B = A - 2.0 * Av * v.transpose() - 2.0 * v * Av.transpose() + 4.0 * vAv * v * v.transpose();
    ReducedOperator r;
    r.matrix = B.bottomRightCorner(n - 1, n - 1);
    r.matrix = 0.5 * (r.matrix + r.matrix.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r.matrix, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("reduced_operator: dense eigensolver failed");
    r.eigenvalues = es.eigenvalues();
    r.morse_index = static_cast<int>((r.eigenvalues.array() < -tol).count());
    return r;
}

RealFunction apply_reduced(const SchrodingerOperator& op, const RealFunction& phi, const RealFunction& v) {
    Eigen::VectorXd p = op.to_vector(phi);
    const double pp = p.dot(op.w.cwiseProduct(p));
    require(pp > 0.0, "apply_reduced: phi must be nonzero");
    auto Q = [&](const Eigen::VectorXd& f) -> Eigen::VectorXd { return f - (f.dot(op.w.cwiseProduct(p)) / pp) * p; };
    Eigen::VectorXd x = Q(op.to_vector(v));
    Eigen::VectorXd y = (op.K * x).cwiseQuotient(op.w);
    return op.to_function(Q(y));
}

int reduced_morse_index(const SchrodingerOperator& op, const RealFunction& phi) {
    const int n = op.size();
    Eigen::VectorXd c = op.w.cwiseProduct(op.to_vector(phi));
    require(c.norm() > 0.0, "reduced_morse_index: phi must be nonzero");
    c /= c.norm();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(op.K.nonZeros() + 2 * n);
    for (int col = 0; col < op.K.outerSize(); ++col)
        for (SpMat::InnerIterator it(op.K, col); it; ++it) trip.emplace_back(it.row(), it.col(), it.value());
    for (int i = 0; i < n; ++i)
        if (c[i] != 0.0) {
            trip.emplace_back(n, i, c[i]);
            trip.emplace_back(i, n, c[i]);
        }
    SpMat B(n + 1, n + 1);
    B.setFromTriplets(trip.begin(), trip.end());
    // natural ordering: the far-to-vertex numbering has no fill, and the border is eliminated last
    Eigen::SimplicialLDLT<SpMat, Eigen::Lower, Eigen::NaturalOrdering<int>> ldlt(B);
    if (ldlt.info() != Eigen::Success) throw NumericalError("reduced_morse_index: bordered factorization failed");
    const int neg = static_cast<int>((ldlt.vectorD().array() < 0.0).count());
    return neg - 1;
}

std::vector<ScanRow> perturbation_scan(const std::vector<double>& Zs, const GraphGrid& grid,
                                       const std::function<RealFunction(double)>& profile, VertexKind kind) {
    std::vector<ScanRow> rows;
    for (double Z : Zs) {
        auto op = assemble_schrodinger(grid, Z, profile(Z), Z == 0.0 && kind != VertexKind::full_delta_sum
                                                                ? VertexKind::kirchhoff
                                                                : kind);
        SymmetricPencil pencil(op.K, op.w);
        const double tol = 10.0 * grid.h * grid.h;
        ScanRow r;
        r.Z = Z;
        r.first_eigenvalue = pencil.eigenvalue(0);
        r.second_eigenvalue = pencil.eigenvalue(1);
        r.morse_index = pencil.count_below(-tol);
        r.kernel_detected = pencil.count_below(tol) > r.morse_index;
        rows.push_back(r);
    }
    return rows;
}

}  // namespace graphkdv
