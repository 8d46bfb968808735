#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "torsion/geometry.hpp"

// P1 finite-element oracle on convex polygons: Robin and Dirichlet torsion,
// the Steklov spectrum via a boundary Schur complement, and Richardson-based
// error budgets.  Exact per-element integrals, deterministic meshes.

namespace torsion {

struct TriangleMesh {
    std::vector<Vec2> nodes;
    std::vector<std::array<int, 3>> triangles;       // positively oriented
    std::vector<std::array<int, 2>> boundary_edges;  // one closed ccw loop
    double mesh_size = 0.0;                          // longest edge
};

namespace detail {

inline double tri_area(const Vec2& a, const Vec2& b, const Vec2& c) {
    return 0.5 * (b - a).cross(c - a);
}

}  // namespace detail

// Deterministic mesh: each polygon edge is split into segments no longer than
// target_h, the boundary loop is fanned from the centroid, and the fan is
// refined 4-way until the longest edge fits.  Boundary nodes stay on the
// polygon edges because refinement only inserts edge midpoints.
inline TriangleMesh triangulate(const ConvexPolygon& poly, double target_h,
                                std::size_t max_nodes = 200000) {
    if (!(target_h > 0.0)) throw std::invalid_argument("triangulate: target_h must be positive");

    const auto vs = poly.vertices();
    const std::size_t n = vs.size();
    TriangleMesh mesh;

    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = vs[i];
        const Vec2 b = vs[(i + 1) % n];
        const int segs = std::max(1, static_cast<int>(std::ceil((b - a).norm() / target_h)));
        for (int j = 0; j < segs; ++j) {
            const double w = static_cast<double>(j) / segs;
            mesh.nodes.push_back({a.x + w * (b.x - a.x), a.y + w * (b.y - a.y)});
        }
    }
    const int nb = static_cast<int>(mesh.nodes.size());

    Vec2 centroid{0.0, 0.0};
    double area_acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {  // area-weighted centroid of the polygon
        const Vec2 a = vs[i], b = vs[(i + 1) % n];
        const double w = a.cross(b);
        centroid = centroid + (a + b) * w;
        area_acc += w;
    }
    centroid = centroid * (1.0 / (3.0 * area_acc));
    mesh.nodes.push_back(centroid);
    const int center = nb;

    for (int i = 0; i < nb; ++i) {
        mesh.triangles.push_back({center, i, (i + 1) % nb});
        mesh.boundary_edges.push_back({i, (i + 1) % nb});
    }

    auto longest_edge = [&]() {
        double h = 0.0;
        for (const auto& t : mesh.triangles)
            for (int e = 0; e < 3; ++e)
                h = std::max(h, (mesh.nodes[t[e]] - mesh.nodes[t[(e + 1) % 3]]).norm());
        return h;
    };

    double h = longest_edge();
    while (h > target_h) {
        const std::size_t projected = mesh.nodes.size() * 4;
        if (projected > max_nodes) {
            std::ostringstream msg;
            msg << "triangulate: refinement to h <= " << target_h << " would need about "
                << projected << " nodes (cap " << max_nodes << ")";
            throw std::invalid_argument(msg.str());
        }
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int a, int b) {
            const auto key = std::minmax(a, b);
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            const Vec2 pm = (mesh.nodes[a] + mesh.nodes[b]) * 0.5;
            mesh.nodes.push_back(pm);
            const int idx = static_cast<int>(mesh.nodes.size()) - 1;
            midpoint.emplace(key, idx);
            return idx;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(mesh.triangles.size() * 4);
        for (const auto& t : mesh.triangles) {
            const int m01 = mid(t[0], t[1]), m12 = mid(t[1], t[2]), m20 = mid(t[2], t[0]);
            next.push_back({t[0], m01, m20});
            next.push_back({t[1], m12, m01});
            next.push_back({t[2], m20, m12});
            next.push_back({m01, m12, m20});
        }
        mesh.triangles.swap(next);
        std::vector<std::array<int, 2>> bnext;
        bnext.reserve(mesh.boundary_edges.size() * 2);
        for (const auto& e : mesh.boundary_edges) {
            const int m = mid(e[0], e[1]);
            bnext.push_back({e[0], m});
            bnext.push_back({m, e[1]});
        }
        mesh.boundary_edges.swap(bnext);
        h = longest_edge();
    }
    mesh.mesh_size = h;

    const double amin = 1e-14 * poly.area();
    for (std::size_t ti = 0; ti < mesh.triangles.size(); ++ti) {
        const auto& t = mesh.triangles[ti];
        if (detail::tri_area(mesh.nodes[t[0]], mesh.nodes[t[1]], mesh.nodes[t[2]]) <= amin)
            throw std::runtime_error("triangulate: degenerate triangle " + std::to_string(ti));
    }
    return mesh;
}

struct FemSystem {
    Eigen::SparseMatrix<double> stiffness;      // K
    Eigen::SparseMatrix<double> boundary_mass;  // B
    Eigen::SparseMatrix<double> domain_mass;    // M
    Eigen::VectorXd load;                       // b_i = int phi_i
    std::vector<int> boundary_nodes;            // in boundary-loop order
    std::vector<char> is_boundary;
    double area = 0.0;
    double boundary_length = 0.0;
};

inline FemSystem assemble(const TriangleMesh& mesh) {
    const int n = static_cast<int>(mesh.nodes.size());
    FemSystem sys;
    sys.load = Eigen::VectorXd::Zero(n);
    sys.is_boundary.assign(n, 0);

    std::vector<Eigen::Triplet<double>> kt, mt, bt;
    kt.reserve(mesh.triangles.size() * 9);
    mt.reserve(mesh.triangles.size() * 9);
    for (std::size_t ti = 0; ti < mesh.triangles.size(); ++ti) {
        const auto& t = mesh.triangles[ti];
        const Vec2 p0 = mesh.nodes[t[0]], p1 = mesh.nodes[t[1]], p2 = mesh.nodes[t[2]];
        const double a = detail::tri_area(p0, p1, p2);
        if (a <= 0.0)
            throw std::runtime_error("assemble: non-positive triangle " + std::to_string(ti));
        sys.area += a;
        // grad(lambda_i) = perp(opposite edge) / (2A)
        const Vec2 g[3] = {{(p1.y - p2.y) / (2 * a), (p2.x - p1.x) / (2 * a)},
                           {(p2.y - p0.y) / (2 * a), (p0.x - p2.x) / (2 * a)},
                           {(p0.y - p1.y) / (2 * a), (p1.x - p0.x) / (2 * a)}};
        for (int i = 0; i < 3; ++i) {
            sys.load[t[i]] += a / 3.0;
            for (int j = 0; j < 3; ++j) {
                kt.emplace_back(t[i], t[j], a * g[i].dot(g[j]));
                mt.emplace_back(t[i], t[j], a / (i == j ? 6.0 : 12.0));
            }
        }
    }
    for (const auto& e : mesh.boundary_edges) {
        const double len = (mesh.nodes[e[1]] - mesh.nodes[e[0]]).norm();
        sys.boundary_length += len;
        bt.emplace_back(e[0], e[0], len / 3.0);
        bt.emplace_back(e[1], e[1], len / 3.0);
        bt.emplace_back(e[0], e[1], len / 6.0);
        bt.emplace_back(e[1], e[0], len / 6.0);
        sys.is_boundary[e[0]] = 1;
        sys.is_boundary[e[1]] = 1;
    }
    sys.stiffness.resize(n, n);
    sys.stiffness.setFromTriplets(kt.begin(), kt.end());
    sys.domain_mass.resize(n, n);
    sys.domain_mass.setFromTriplets(mt.begin(), mt.end());
    sys.boundary_mass.resize(n, n);
    sys.boundary_mass.setFromTriplets(bt.begin(), bt.end());
    for (const auto& e : mesh.boundary_edges) sys.boundary_nodes.push_back(e[0]);
    return sys;
}

struct SolveResult {
    Eigen::VectorXd u;
    double torsion = 0.0;          // tau_h = b^T u
    double energy_residual = 0.0;  // |delta_alpha[u] - b^T u|, zero in exact arithmetic
};

// Solve (K + alpha B) u = b.  For alpha < 0 the matrix is indefinite; the
// caller may pass known discrete Steklov values to guard against resonances,
// and a residual check catches near-singular factorizations either way.
inline SolveResult solve_robin_torsion(const FemSystem& sys, double alpha,
                                       std::span<const double> steklov_guard = {},
                                       double guard_margin = 1e-8) {
    if (alpha == 0.0) throw std::invalid_argument("solve_robin_torsion: alpha = 0");
    if (alpha < 0.0) {
        for (double sigma : steklov_guard) {
            if (std::abs(alpha + sigma) <= guard_margin * std::max(1.0, std::abs(alpha))) {
                std::ostringstream msg;
                msg << "solve_robin_torsion: alpha = " << alpha
                    << " is within the resonance margin of discrete Steklov value " << sigma;
                throw std::runtime_error(msg.str());
            }
        }
    }
    Eigen::SparseMatrix<double> a = sys.stiffness + alpha * sys.boundary_mass;
    a.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(a);
    if (lu.info() != Eigen::Success)
        throw std::runtime_error("solve_robin_torsion: factorization failed (resonance?)");
    SolveResult res;
    res.u = lu.solve(sys.load);
    const double rel_residual =
        (a * res.u - sys.load).norm() / std::max(sys.load.norm(), 1e-300);
    if (!(rel_residual < 1e-6))
        throw std::runtime_error(
            "solve_robin_torsion: solution residual " + std::to_string(rel_residual) +
            " indicates a near-singular system (nearest Steklov resonance?)");
    res.torsion = sys.load.dot(res.u);
    const double quad = res.u.dot(sys.stiffness * res.u) + alpha * res.u.dot(sys.boundary_mass * res.u);
    res.energy_residual = std::abs(quad - res.torsion);
    return res;
}

// Homogeneous Dirichlet: eliminate boundary nodes, solve the SPD interior block.
inline SolveResult solve_dirichlet_torsion(const FemSystem& sys) {
    const int n = static_cast<int>(sys.is_boundary.size());
    std::vector<int> interior;
    for (int i = 0; i < n; ++i)
        if (!sys.is_boundary[i]) interior.push_back(i);
    if (interior.empty())
        throw std::runtime_error("solve_dirichlet_torsion: no interior nodes; refine the mesh");
    std::vector<int> pos(n, -1);
    for (std::size_t k = 0; k < interior.size(); ++k) pos[interior[k]] = static_cast<int>(k);

    std::vector<Eigen::Triplet<double>> trip;
    for (int col = 0; col < sys.stiffness.outerSize(); ++col) {
        if (pos[col] < 0) continue;
        for (Eigen::SparseMatrix<double>::InnerIterator it(sys.stiffness, col); it; ++it) {
            if (pos[it.row()] >= 0) trip.emplace_back(pos[it.row()], pos[col], it.value());
        }
    }
    Eigen::SparseMatrix<double> kii(interior.size(), interior.size());
    kii.setFromTriplets(trip.begin(), trip.end());
    Eigen::VectorXd bi(interior.size());
    for (std::size_t k = 0; k < interior.size(); ++k) bi[k] = sys.load[interior[k]];

    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> chol(kii);
    if (chol.info() != Eigen::Success)
        throw std::runtime_error("solve_dirichlet_torsion: interior factorization failed");
    const Eigen::VectorXd ui = chol.solve(bi);

    SolveResult res;
    res.u = Eigen::VectorXd::Zero(n);
    for (std::size_t k = 0; k < interior.size(); ++k) res.u[interior[k]] = ui[k];
    res.torsion = bi.dot(ui);
    res.energy_residual = std::abs(ui.dot(kii * ui) - res.torsion);
    return res;
}

struct SteklovResult {
    std::vector<double> eigenvalues;  // sigma_0 <= sigma_1 <= ...
    Eigen::MatrixXd boundary_modes;   // one column per eigenvalue, boundary dofs
    std::vector<int> boundary_nodes;
};

// Boundary Schur complement S = K_bb - K_bi K_ii^{-1} K_ib against the
// boundary mass B_bb.  S is positive semidefinite with the constant mode in
// its kernel, so sigma_0 comes out as (numerical) zero.
inline SteklovResult steklov_spectrum(const FemSystem& sys, int count) {
    if (count < 2) throw std::invalid_argument("steklov_spectrum: count must be >= 2");
    const int n = static_cast<int>(sys.is_boundary.size());
    std::vector<int> bnd = sys.boundary_nodes;
    std::vector<int> interior;
    for (int i = 0; i < n; ++i)
        if (!sys.is_boundary[i]) interior.push_back(i);
    const int nbnd = static_cast<int>(bnd.size());
    const int nint = static_cast<int>(interior.size());
    if (count > nbnd) throw std::invalid_argument("steklov_spectrum: count exceeds boundary size");

    std::vector<int> bpos(n, -1), ipos(n, -1);
    for (int k = 0; k < nbnd; ++k) bpos[bnd[k]] = k;
    for (int k = 0; k < nint; ++k) ipos[interior[k]] = k;

    std::vector<Eigen::Triplet<double>> tii, tib;
    Eigen::MatrixXd kbb = Eigen::MatrixXd::Zero(nbnd, nbnd);
    for (int col = 0; col < sys.stiffness.outerSize(); ++col) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(sys.stiffness, col); it; ++it) {
            const int r = static_cast<int>(it.row()), c = col;
            if (bpos[r] >= 0 && bpos[c] >= 0)
                kbb(bpos[r], bpos[c]) += it.value();
            else if (ipos[r] >= 0 && ipos[c] >= 0)
                tii.emplace_back(ipos[r], ipos[c], it.value());
            else if (ipos[r] >= 0 && bpos[c] >= 0)
                tib.emplace_back(ipos[r], bpos[c], it.value());
        }
    }
    Eigen::SparseMatrix<double> kii(nint, nint), kib(nint, nbnd);
    kii.setFromTriplets(tii.begin(), tii.end());
    kib.setFromTriplets(tib.begin(), tib.end());

    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> chol(kii);
    if (chol.info() != Eigen::Success)
        throw std::runtime_error("steklov_spectrum: interior factorization failed (mesh quality)");

    // S = K_bb - K_bi K_ii^{-1} K_ib, built in column blocks to bound memory.
    Eigen::MatrixXd schur = kbb;
    const int block = 256;
    for (int c0 = 0; c0 < nbnd; c0 += block) {
        const int bc = std::min(block, nbnd - c0);
        const Eigen::MatrixXd rhs = Eigen::MatrixXd(kib.middleCols(c0, bc));
        const Eigen::MatrixXd x = chol.solve(rhs);
        schur.middleCols(c0, bc).noalias() -= kib.transpose() * x;
    }
    schur = 0.5 * (schur + schur.transpose()).eval();

    Eigen::MatrixXd bbb = Eigen::MatrixXd::Zero(nbnd, nbnd);
    for (int col = 0; col < sys.boundary_mass.outerSize(); ++col)
        for (Eigen::SparseMatrix<double>::InnerIterator it(sys.boundary_mass, col); it; ++it)
            if (bpos[it.row()] >= 0 && bpos[col] >= 0)
                bbb(bpos[it.row()], bpos[col]) += it.value();

    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(schur, bbb);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("steklov_spectrum: generalized eigensolver failed");

    SteklovResult res;
    res.boundary_nodes = bnd;
    res.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + count);
    res.boundary_modes = es.eigenvectors().leftCols(count);
    return res;
}

struct BudgetEstimate {
    double value = 0.0;       // Richardson-extrapolated
    double error_bar = 0.0;   // conservative: 3x the last increment
    double observed_order = 0.0;
    bool monotone = true;
    std::vector<double> samples;
};

// Richardson extrapolation over a geometric h-sequence.  Non-monotone
// increments inflate the budget instead of trusting the order estimate.
inline BudgetEstimate richardson(std::span<const double> h, std::span<const double> values) {
    if (h.size() != values.size() || h.size() < 3)
        throw std::invalid_argument("richardson: need >= 3 mesh sizes with matching values");
    for (std::size_t i = 0; i + 1 < h.size(); ++i) {
        const double ratio = h[i] / h[i + 1];
        if (!(ratio > 1.2) || std::abs(ratio - h[0] / h[1]) > 1e-9 * ratio)
            throw std::invalid_argument("richardson: mesh sizes must be a geometric progression");
    }
    BudgetEstimate est;
    est.samples.assign(values.begin(), values.end());
    const std::size_t last = values.size() - 1;
    const double d1 = values[last - 1] - values[last - 2];
    const double d2 = values[last] - values[last - 1];
    const double r = h[0] / h[1];
    est.monotone = d1 * d2 > 0.0;
    if (est.monotone && std::abs(d2) < std::abs(d1)) {
        est.observed_order = std::log(std::abs(d1 / d2)) / std::log(r);
        const double factor = std::pow(r, est.observed_order) - 1.0;
        est.value = values[last] + d2 / factor;
        est.error_bar = 3.0 * std::abs(d2);
    } else {
        est.observed_order = 0.0;
        est.value = values[last];
        est.error_bar = 10.0 * std::max(std::abs(d1), std::abs(d2));
    }
    return est;
}

// Refinement study of the torsion functional; alpha unset means Dirichlet.
inline BudgetEstimate torsion_budget(const ConvexPolygon& poly, std::optional<double> alpha,
                                     std::span<const double> h_seq) {
    std::vector<double> vals;
    for (double h : h_seq) {
        const FemSystem sys = assemble(triangulate(poly, h));
        vals.push_back(alpha ? solve_robin_torsion(sys, *alpha).torsion
                             : solve_dirichlet_torsion(sys).torsion);
    }
    return richardson(h_seq, vals);
}

inline BudgetEstimate steklov_budget(const ConvexPolygon& poly, std::span<const double> h_seq,
                                     int index = 1) {
    std::vector<double> vals;
    for (double h : h_seq) {
        const FemSystem sys = assemble(triangulate(poly, h));
        vals.push_back(steklov_spectrum(sys, index + 1).eigenvalues[index]);
    }
    return richardson(h_seq, vals);
}

// Text dump: node count + coordinates, triangle count + indices, boundary loop.
inline void dump_mesh(const TriangleMesh& mesh, std::ostream& out) {
    out << "nodes " << mesh.nodes.size() << "\n";
    out.precision(17);
    for (const auto& p : mesh.nodes) out << p.x << " " << p.y << "\n";
    out << "triangles " << mesh.triangles.size() << "\n";
    for (const auto& t : mesh.triangles) out << t[0] << " " << t[1] << " " << t[2] << "\n";
    out << "boundary_edges " << mesh.boundary_edges.size() << "\n";
    for (const auto& e : mesh.boundary_edges) out << e[0] << " " << e[1] << "\n";
}

}  // namespace torsion
