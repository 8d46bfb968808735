#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

// 2-D convex polygon kernel: validation, summary quantities, inner parallel
// bodies by inset half-plane intersection, level profiles of the boundary
// distance function, and the Steiner / isoperimetric sanity checks.

namespace torsion {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double cross(Vec2 o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
};

class ConvexPolygon {
  public:
    // Validates: >= 3 vertices, counterclockwise, strictly convex turning at
    // every vertex (cross product above 1e-12 * scale^2), no repeated points.
    explicit ConvexPolygon(std::vector<Vec2> vertices) : verts_(std::move(vertices)) {
        validate();
    }

    std::span<const Vec2> vertices() const { return verts_; }
    std::size_t size() const { return verts_.size(); }
    const Vec2& operator[](std::size_t i) const { return verts_[i]; }

    double area() const {
        double twice = 0.0;
        for (std::size_t i = 1; i + 1 < verts_.size(); ++i)
            twice += (verts_[i] - verts_[0]).cross(verts_[i + 1] - verts_[0]);
        return 0.5 * twice;
    }

    double perimeter() const {
        double p = 0.0;
        for (std::size_t i = 0; i < verts_.size(); ++i)
            p += (verts_[(i + 1) % verts_.size()] - verts_[i]).norm();
        return p;
    }

    double scale() const {
        double s = 0.0;
        for (const auto& v : verts_) s = std::max({s, std::abs(v.x), std::abs(v.y)});
        return s;
    }

    // Sum of exterior (turning) angles; 2*pi for any convex polygon.
    double turning_angle_sum() const {
        double sum = 0.0;
        const std::size_t n = verts_.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2 e0 = verts_[i] - verts_[(i + n - 1) % n];
            const Vec2 e1 = verts_[(i + 1) % n] - verts_[i];
            sum += std::atan2(e0.cross(e1), e0.dot(e1));
        }
        return sum;
    }

    ConvexPolygon scaled(double s) const {
        std::vector<Vec2> v(verts_);
        for (auto& p : v) p = p * s;
        return ConvexPolygon(std::move(v));
    }

    struct unchecked_tag {};
    // Used by the erosion path, whose output is convex by construction but may
    // carry nearly-collinear vertices at clip corners.
    ConvexPolygon(std::vector<Vec2> vertices, unchecked_tag) : verts_(std::move(vertices)) {}

  private:
    void validate() const {
        if (verts_.size() < 3)
            throw std::invalid_argument("ConvexPolygon: need at least 3 vertices");
        double sc = 0.0;
        for (const auto& v : verts_) sc = std::max({sc, std::abs(v.x), std::abs(v.y)});
        const double tol = 1e-12 * sc * sc;
        const std::size_t n = verts_.size();
        for (std::size_t i = 0; i < n; ++i) {
            if ((verts_[i] - verts_[(i + n - 1) % n]).norm() <= 1e-12 * sc)
                throw std::invalid_argument("ConvexPolygon: repeated point at vertex " +
                                            std::to_string(i));
        }
        if (area() < 0.0)
            throw std::invalid_argument("ConvexPolygon: vertices are clockwise");
        for (std::size_t i = 0; i < n; ++i) {
            const Vec2 prev = verts_[(i + n - 1) % n];
            const Vec2 next = verts_[(i + 1) % n];
            const double turn = (verts_[i] - prev).cross(next - verts_[i]);
            if (turn <= tol)
                throw std::invalid_argument("ConvexPolygon: not strictly convex at vertex " +
                                            std::to_string(i));
        }
    }

    std::vector<Vec2> verts_;
};

struct GeometricSummary {
    double area = 0.0;
    double perimeter = 0.0;
    double inradius = 0.0;
    // (W0, W1, W2) = (|Omega|, |dOmega|/2, pi)
    double quermass[3] = {0.0, 0.0, 0.0};
};

namespace detail {

// Clip a convex vertex loop against the half-plane n . p >= c.
inline void clip_halfplane(std::vector<Vec2>& poly, Vec2 n, double c, std::vector<Vec2>& out) {
    out.clear();
    const std::size_t m = poly.size();
    for (std::size_t i = 0; i < m; ++i) {
        const Vec2 cur = poly[i];
        const Vec2 nxt = poly[(i + 1) % m];
        const double sc = n.dot(cur) - c;
        const double sn = n.dot(nxt) - c;
        if (sc >= 0.0) out.push_back(cur);
        if ((sc > 0.0 && sn < 0.0) || (sc < 0.0 && sn > 0.0)) {
            const double w = sc / (sc - sn);
            out.push_back({cur.x + w * (nxt.x - cur.x), cur.y + w * (nxt.y - cur.y)});
        }
    }
    poly.swap(out);
}

// Shoelace about the first vertex: keeps tiny polygons far from the origin
// out of the roundoff floor of the raw cross products.
inline double loop_area(const std::vector<Vec2>& v) {
    double twice = 0.0;
    for (std::size_t i = 1; i + 1 < v.size(); ++i)
        twice += (v[i] - v[0]).cross(v[i + 1] - v[0]);
    return 0.5 * twice;
}

}  // namespace detail

// Intersection of all edge half-planes inset inward by t.  Empty result
// (nullopt) once t reaches the inradius.
inline std::optional<ConvexPolygon> inner_parallel_body(const ConvexPolygon& poly, double t) {
    if (t < 0.0) throw std::invalid_argument("inner_parallel_body: t must be >= 0");
    const auto vs = poly.vertices();
    const std::size_t n = vs.size();
    if (t == 0.0) return poly;

    std::vector<Vec2> work(vs.begin(), vs.end());
    std::vector<Vec2> scratch;
    scratch.reserve(n + 4);
    for (std::size_t i = 0; i < n && work.size() >= 3; ++i) {
        const Vec2 a = vs[i];
        const Vec2 e = vs[(i + 1) % n] - a;
        const double len = e.norm();
        const Vec2 inward{-e.y / len, e.x / len};  // interior lies left of ccw edges
        detail::clip_halfplane(work, inward, inward.dot(a) + t, scratch);
    }
    if (work.size() < 3) return std::nullopt;

    // Merge clip artifacts: duplicate corners carry coordinate noise of a few
    // ulp of the coordinate magnitude, so the tolerance tracks that, not the
    // polygon extent.
    const double merge_tol = 3e-15 * std::max(poly.scale(), 1e-300);
    std::vector<Vec2> clean;
    clean.reserve(work.size());
    for (const auto& v : work) {
        if (clean.empty() || (v - clean.back()).norm() > merge_tol) clean.push_back(v);
    }
    while (clean.size() >= 2 && (clean.back() - clean.front()).norm() <= merge_tol)
        clean.pop_back();
    if (clean.size() < 3 || detail::loop_area(clean) <= 0.0) return std::nullopt;
    return ConvexPolygon(std::move(clean), ConvexPolygon::unchecked_tag{});
}

// Largest t with nonempty erosion, by bisection on the erosion primitive.
inline double inradius(const ConvexPolygon& poly) {
    double lo = 0.0;
    double hi = std::sqrt(poly.area() / std::numbers::pi) * (1.0 + 1e-9);
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (inner_parallel_body(poly, mid).has_value())
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

inline GeometricSummary summarize(const ConvexPolygon& poly) {
    GeometricSummary s;
    s.area = poly.area();
    s.perimeter = poly.perimeter();
    s.inradius = inradius(poly);
    s.quermass[0] = s.area;
    s.quermass[1] = 0.5 * s.perimeter;
    s.quermass[2] = std::numbers::pi;
    return s;
}

struct LevelSample {
    double t = 0.0;
    double boundary_length = 0.0;  // |dOmega_t|
    double area = 0.0;             // |Omega_t|
    double perimeter_decay = 0.0;  // -d/dt |dOmega_t| = 2 sum tan(phi_i/2)
    int vertex_count = 0;
};

struct InnerBodyProfile {
    std::vector<LevelSample> samples;
};

namespace detail {

// -d/dt of the inset perimeter: each vertex with exterior angle phi eats
// 2 tan(phi/2) of edge length per unit inset.  Always >= 2*pi since
// tan(x) >= x and the exterior angles of a convex loop sum to 2*pi.
inline double perimeter_decay(const ConvexPolygon& p) {
    const auto vs = p.vertices();
    const std::size_t n = vs.size();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 e0 = vs[i] - vs[(i + n - 1) % n];
        const Vec2 e1 = vs[(i + 1) % n] - vs[i];
        const double phi = std::atan2(e0.cross(e1), e0.dot(e1));
        sum += 2.0 * std::tan(0.5 * std::max(phi, 0.0));
    }
    return sum;
}

}  // namespace detail

inline InnerBodyProfile level_profiles(const ConvexPolygon& poly, std::span<const double> grid) {
    const double r = inradius(poly);
    InnerBodyProfile profile;
    profile.samples.reserve(grid.size());
    for (double t : grid) {
        if (t < 0.0 || t > r * (1.0 + 1e-12))
            throw std::invalid_argument("level_profiles: grid node outside [0, inradius]");
        LevelSample s;
        s.t = t;
        if (auto inner = inner_parallel_body(poly, t)) {
            s.boundary_length = inner->perimeter();
            s.area = inner->area();
            s.perimeter_decay = detail::perimeter_decay(*inner);
            s.vertex_count = static_cast<int>(inner->size());
        }
        profile.samples.push_back(s);
    }
    return profile;
}

// Inset parameters where an edge of the eroded polygon vanishes (kinks of
// t -> |dOmega_t|).  Detected by vertex-count changes over a scan, each
// refined by bisection.
inline std::vector<double> erosion_events(const ConvexPolygon& poly, int scan = 256) {
    const double r = inradius(poly);
    auto count_at = [&](double t) -> int {
        auto p = inner_parallel_body(poly, t);
        return p ? static_cast<int>(p->size()) : 0;
    };
    std::vector<double> events;
    int prev_count = count_at(0.0);
    double prev_t = 0.0;
    for (int i = 1; i <= scan; ++i) {
        const double t = r * i / scan;
        const int c = count_at(t);
        if (c != prev_count) {
            double lo = prev_t, hi = t;
            int lo_count = prev_count;
            for (int it = 0; it < 60 && hi - lo > 1e-13 * r; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (count_at(mid) == lo_count)
                    lo = mid;
                else
                    hi = mid;
            }
            events.push_back(0.5 * (lo + hi));
        }
        prev_count = c;
        prev_t = t;
    }
    return events;
}

struct SteinerCheck {
    double area_geometric = 0.0;   // offset area assembled edge-by-edge and corner-by-corner
    double area_polynomial = 0.0;  // |K| + |dK| rho + pi rho^2
    double offset_perimeter = 0.0; // |d(K + rho B1)|
};

inline SteinerCheck steiner_outer_check(const ConvexPolygon& poly, double rho) {
    if (rho < 0.0) throw std::invalid_argument("steiner_outer_check: rho must be >= 0");
    const double a = poly.area();
    const double p = poly.perimeter();
    const double turn = poly.turning_angle_sum();  // corner sectors sum to a full disk
    SteinerCheck c;
    c.area_geometric = a + rho * p + 0.5 * rho * rho * turn;
    c.area_polynomial = a + rho * p + std::numbers::pi * rho * rho;
    c.offset_perimeter = p + rho * turn;
    if (std::abs(c.area_geometric - c.area_polynomial) > 1e-10 * c.area_polynomial)
        throw std::runtime_error("steiner_outer_check: geometric and polynomial areas disagree");
    return c;
}

struct InequalityReport {
    double iso_lhs = 0.0;      // |dK|^2
    double iso_rhs = 0.0;      // 4 pi |K|
    double iso_deficit = 0.0;  // lhs - rhs >= 0
    double w2 = 0.0;           // always pi in d = 2
    bool ok = false;
};

inline InequalityReport inequality_checks(const GeometricSummary& s) {
    InequalityReport r;
    r.iso_lhs = s.perimeter * s.perimeter;
    r.iso_rhs = 4.0 * std::numbers::pi * s.area;
    r.iso_deficit = r.iso_lhs - r.iso_rhs;
    r.w2 = s.quermass[2];
    r.ok = r.iso_deficit >= -1e-10 * r.iso_lhs &&
           std::abs(r.w2 - std::numbers::pi) <= 1e-12 * std::numbers::pi &&
           s.inradius > 0.0 && s.inradius <= s.perimeter / (2.0 * std::numbers::pi) * (1.0 + 1e-9);
    return r;
}

// --- shared polygon file format -------------------------------------------
// One object with field "vertices": array of [x, y] pairs, counterclockwise.

inline ConvexPolygon read_polygon(std::istream& in) {
    nlohmann::json j;
    in >> j;
    if (!j.contains("vertices") || !j["vertices"].is_array())
        throw std::invalid_argument("polygon file: missing \"vertices\" array");
    std::vector<Vec2> vs;
    for (const auto& p : j["vertices"]) {
        if (!p.is_array() || p.size() != 2)
            throw std::invalid_argument("polygon file: vertices must be [x, y] pairs");
        vs.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    return ConvexPolygon(std::move(vs));
}

inline ConvexPolygon read_polygon_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open polygon file: " + path);
    return read_polygon(in);
}

inline void write_polygon(const ConvexPolygon& poly, std::ostream& out) {
    nlohmann::json j;
    auto& vs = j["vertices"];
    vs = nlohmann::json::array();
    for (const auto& v : poly.vertices()) vs.push_back({v.x, v.y});
    out << j.dump(2) << '\n';
}

}  // namespace torsion
