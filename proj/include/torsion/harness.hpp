#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <future>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "torsion/fem.hpp"
#include "torsion/geometry.hpp"
#include "torsion/parallel_coordinates.hpp"
#include "torsion/radial.hpp"
#include "torsion/report.hpp"
#include "torsion/thresholds.hpp"

// Experiment orchestration: seeded domain families, the theorem / lemma
// verification sweeps against the FEM oracle, the threshold certification
// suite, and the parallel-coordinates sandwich runs.

namespace torsion {

inline constexpr const char* kToolVersion = "0.1.0";

enum class DomainFamily { regular_ngon, random_convex, stretched_hexagon, mixed };

inline const char* to_string(DomainFamily f) {
    switch (f) {
        case DomainFamily::regular_ngon: return "regular-ngon";
        case DomainFamily::random_convex: return "random-convex";
        case DomainFamily::stretched_hexagon: return "stretched-hexagon";
        case DomainFamily::mixed: return "mixed";
    }
    return "?";
}

inline DomainFamily domain_family_from(const std::string& s) {
    if (s == "regular-ngon") return DomainFamily::regular_ngon;
    if (s == "random-convex") return DomainFamily::random_convex;
    if (s == "stretched-hexagon") return DomainFamily::stretched_hexagon;
    if (s == "mixed") return DomainFamily::mixed;
    throw std::invalid_argument("unknown domain family: " + s);
}

struct ExperimentConfig {
    DomainFamily family = DomainFamily::mixed;
    int count = 20;
    std::uint64_t seed = 1;
    Constraint constraint = Constraint::perimeter;
    double normalization_value = 2.0 * std::numbers::pi;  // perimeter = 2 pi or area = pi
    std::vector<double> alpha_fractions = {0.1, 0.3, 0.5, 0.7, 0.9};
    double mesh_h = 0.25;  // base of the {h, h/2, h/4} budget sequence
    double sigma_window_slack = 0.02;  // keep alpha this fraction away from -sigma_1
};

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    if (j.contains("family")) c.family = domain_family_from(j["family"].get<std::string>());
    c.count = j.value("count", c.count);
    c.seed = j.value("seed", c.seed);
    if (j.contains("constraint")) {
        const auto s = j["constraint"].get<std::string>();
        if (s == "perimeter")
            c.constraint = Constraint::perimeter;
        else if (s == "volume" || s == "area")
            c.constraint = Constraint::volume;
        else
            throw std::invalid_argument("unknown constraint: " + s);
    }
    c.normalization_value = j.value("normalization_value", c.normalization_value);
    if (j.contains("alpha_fractions"))
        c.alpha_fractions = j["alpha_fractions"].get<std::vector<double>>();
    c.mesh_h = j.value("mesh_h", c.mesh_h);
    c.sigma_window_slack = j.value("sigma_window_slack", c.sigma_window_slack);
    return c;
}

struct NamedDomain {
    std::string id;
    std::string family;
    ConvexPolygon poly;
};

namespace detail {

inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline ConvexPolygon regular_ngon(int n, double circumradius = 1.0) {
    std::vector<Vec2> vs;
    vs.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double a = 2.0 * std::numbers::pi * i / n;
        vs.push_back({circumradius * std::cos(a), circumradius * std::sin(a)});
    }
    return ConvexPolygon(std::move(vs));
}

inline ConvexPolygon stretched_hexagon(double aspect) {
    std::vector<Vec2> vs;
    for (int i = 0; i < 6; ++i) {
        const double a = std::numbers::pi / 6.0 + 2.0 * std::numbers::pi * i / 6.0;
        vs.push_back({aspect * std::cos(a), std::sin(a)});
    }
    return ConvexPolygon(std::move(vs));
}

// Convex hull (monotone chain) with strictly convex output: collinear points
// are dropped so the polygon validator's turning test passes.
inline std::optional<ConvexPolygon> convex_hull(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Vec2& a, const Vec2& b) {
                              return (a - b).norm() < 1e-12;
                          }),
              pts.end());
    const std::size_t m = pts.size();
    if (m < 3) return std::nullopt;
    double sc = 0.0;
    for (const auto& p : pts) sc = std::max({sc, std::abs(p.x), std::abs(p.y)});
    const double tol = 1e-9 * sc * sc;
    std::vector<Vec2> hull(2 * m);
    std::size_t k = 0;
    for (std::size_t i = 0; i < m; ++i) {
        while (k >= 2 && (hull[k - 1] - hull[k - 2]).cross(pts[i] - hull[k - 2]) <= tol) --k;
        hull[k++] = pts[i];
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = m - 1; i-- > 0;) {
        while (k >= lower && (hull[k - 1] - hull[k - 2]).cross(pts[i] - hull[k - 2]) <= tol) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    if (hull.size() < 3) return std::nullopt;
    try {
        return ConvexPolygon(std::move(hull));
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
}

inline ConvexPolygon random_convex(std::mt19937_64& rng) {
    for (int attempt = 0; attempt < 32; ++attempt) {
        const int m = 12 + static_cast<int>(rng() % 13);
        const double a = 0.6 + 0.9 * uniform01(rng);
        const double b = 0.6 + 0.9 * uniform01(rng);
        std::vector<Vec2> pts;
        pts.reserve(m);
        for (int i = 0; i < m; ++i) {
            const double ang = 2.0 * std::numbers::pi * uniform01(rng);
            const double jitter = 1.0 + 0.16 * (uniform01(rng) - 0.5);
            pts.push_back({a * jitter * std::cos(ang), b * jitter * std::sin(ang)});
        }
        if (auto hull = convex_hull(std::move(pts))) return *std::move(hull);
    }
    throw std::runtime_error("random_convex: hull degenerated repeatedly");
}

inline ConvexPolygon normalized(const ConvexPolygon& poly, Constraint c, double value) {
    const double s = c == Constraint::perimeter ? value / poly.perimeter()
                                                : std::sqrt(value / poly.area());
    return poly.scaled(s);
}

}  // namespace detail

inline std::vector<NamedDomain> generate_domains(const ExperimentConfig& cfg) {
    if (cfg.count < 1) throw std::invalid_argument("generate_domains: count must be >= 1");
    std::vector<NamedDomain> out;
    std::mt19937_64 rng(cfg.seed);
    auto push = [&](std::string id, const char* family, ConvexPolygon poly) {
        out.push_back({std::move(id),
                       family,
                       detail::normalized(poly, cfg.constraint, cfg.normalization_value)});
    };
    switch (cfg.family) {
        case DomainFamily::regular_ngon: {
            if (cfg.count > 62)
                throw std::invalid_argument("regular-ngon family spans n in {3..64}");
            for (int i = 0; i < cfg.count; ++i) {
                const int n =
                    cfg.count == 1 ? 3 : 3 + static_cast<int>(std::lround(61.0 * i / (cfg.count - 1)));
                push("ngon-" + std::to_string(n), "regular-ngon", detail::regular_ngon(n));
            }
            break;
        }
        case DomainFamily::random_convex: {
            for (int i = 0; i < cfg.count; ++i) {
                std::ostringstream id;
                id << "rand-" << (i < 10 ? "0" : "") << i;
                push(id.str(), "random-convex", detail::random_convex(rng));
            }
            break;
        }
        case DomainFamily::stretched_hexagon: {
            const double aspects[] = {1.5, 2.0, 3.0, 5.0};
            const int n = std::min(cfg.count, 4);
            for (int i = 0; i < n; ++i) {
                std::ostringstream id;
                id << "hex-" << aspects[i] << "x";
                push(id.str(), "stretched-hexagon", detail::stretched_hexagon(aspects[i]));
            }
            break;
        }
        case DomainFamily::mixed: {
            // spread of regular n-gons (64-gon included: the near-ball case),
            // the four stretched hexagons, random hulls for the rest
            const int ngons[] = {3, 4, 5, 6, 8, 12, 16, 24, 32, 48, 64};
            for (int n : ngons)
                push("ngon-" + std::to_string(n), "regular-ngon", detail::regular_ngon(n));
            const double aspects[] = {1.5, 2.0, 3.0, 5.0};
            for (double a : aspects) {
                std::ostringstream id;
                id << "hex-" << a << "x";
                push(id.str(), "stretched-hexagon", detail::stretched_hexagon(a));
            }
            const int remaining = std::max(cfg.count - static_cast<int>(out.size()), 5);
            for (int i = 0; i < remaining; ++i) {
                std::ostringstream id;
                id << "rand-" << (i < 10 ? "0" : "") << i;
                push(id.str(), "random-convex", detail::random_convex(rng));
            }
            break;
        }
    }
    return out;
}

namespace detail {

inline int thread_budget() {
    if (const char* env = std::getenv("TORSION_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return 1;
}

// Runs fn(i) for i in [0, n) with at most thread_budget() tasks in flight;
// results land in input order regardless of scheduling.
template <class Fn>
auto ordered_parallel(int n, Fn&& fn) {
    using R = decltype(fn(0));
    std::vector<R> results(n);
    const int threads = std::min(thread_budget(), std::max(n, 1));
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) results[i] = fn(i);
        return results;
    }
    std::vector<std::future<R>> inflight;
    int next = 0, done = 0;
    while (done < n) {
        while (next < n && static_cast<int>(inflight.size()) - done < threads) {
            inflight.push_back(std::async(std::launch::async, fn, next));
            ++next;
        }
        results[done] = inflight[done].get();
        ++done;
    }
    return results;
}

struct DomainMeasurement {
    GeometricSummary summary;
    BudgetEstimate sigma1;
    BudgetEstimate tau_dirichlet;
    std::vector<double> guard_spectrum;  // finest-mesh sigma_0..sigma_5
    std::vector<FemSystem> systems;      // one per mesh size, coarse to fine
    std::vector<double> h_seq;
};

inline DomainMeasurement measure_domain(const ConvexPolygon& poly, double base_h) {
    DomainMeasurement m;
    m.summary = summarize(poly);
    m.h_seq = {base_h, base_h / 2.0, base_h / 4.0};
    std::vector<double> sigma_vals, tau_d_vals;
    for (double h : m.h_seq) {
        m.systems.push_back(assemble(triangulate(poly, h)));
        const auto& sys = m.systems.back();
        const auto spectrum = steklov_spectrum(sys, 6);
        sigma_vals.push_back(spectrum.eigenvalues[1]);
        tau_d_vals.push_back(solve_dirichlet_torsion(sys).torsion);
        if (h == m.h_seq.back()) m.guard_spectrum = spectrum.eigenvalues;
    }
    m.sigma1 = richardson(m.h_seq, sigma_vals);
    m.tau_dirichlet = richardson(m.h_seq, tau_d_vals);
    return m;
}

}  // namespace detail

// One sweep measures each (domain, alpha) pair once and grades it against
// both inequalities: the theorem margin tau_alpha(Omega) - tau_alpha(B_R)
// and the core-lemma margin tau_alpha - tau_D - |Omega|^2/(alpha |dOmega|).
struct SweepResult {
    std::vector<VerificationRecord> theorem_records;
    std::vector<VerificationRecord> lemma_records;
};

inline SweepResult verify_sweep(const ExperimentConfig& cfg) {
    for (double f : cfg.alpha_fractions)
        if (!(f > 0.0 && f < 1.0))
            throw std::invalid_argument("alpha fractions must lie in (0, 1)");
    const auto domains = generate_domains(cfg);

    // Comparison ball fixed by the constraint value, not by the domain.
    const double ball_radius =
        cfg.constraint == Constraint::perimeter
            ? cfg.normalization_value / (2.0 * std::numbers::pi)
            : std::sqrt(cfg.normalization_value / std::numbers::pi);
    const BallGeometry ball(2, ball_radius);

    auto run_domain = [&](int di) -> std::vector<std::pair<VerificationRecord, double>> {
        const auto& dom = domains[di];
        const auto m = detail::measure_domain(dom.poly, cfg.mesh_h);
        std::vector<std::pair<VerificationRecord, double>> recs;  // record + tau_D budget
        const double sigma_safe = m.sigma1.samples.back() - m.sigma1.error_bar;
        for (double frac : cfg.alpha_fractions) {
            VerificationRecord r;
            r.domain_id = dom.id;
            r.family = dom.family;
            r.n_vertices = static_cast<int>(dom.poly.size());
            r.area = m.summary.area;
            r.perimeter = m.summary.perimeter;
            r.inradius = m.summary.inradius;
            r.sigma1 = m.sigma1.value;
            r.sigma1_budget = m.sigma1.error_bar;
            if (!(sigma_safe > 0.0)) {
                r.status = RecordStatus::skipped;
                r.note = "sigma_1 budget swallows the admissible window";
                recs.emplace_back(std::move(r), 0.0);
                continue;
            }
            const double alpha = -frac * sigma_safe * (1.0 - cfg.sigma_window_slack);
            r.alpha = alpha;
            std::vector<double> tau_vals;
            for (const auto& sys : m.systems)
                tau_vals.push_back(
                    solve_robin_torsion(sys, alpha, m.guard_spectrum).torsion);
            const auto tau = richardson(m.h_seq, tau_vals);
            r.tau_alpha = tau.value;
            r.tau_alpha_budget = tau.error_bar;
            r.tau_ball = robin_torsion_ball(ball, alpha);
            r.tau_dirichlet = m.tau_dirichlet.value;
            r.theorem_margin = r.tau_alpha - r.tau_ball;
            const double correction =
                m.summary.area * m.summary.area / (alpha * m.summary.perimeter);
            r.lemma_margin = r.tau_alpha - r.tau_dirichlet - correction;
            recs.emplace_back(std::move(r), m.tau_dirichlet.error_bar);
        }
        return recs;
    };

    auto chunks = detail::ordered_parallel(static_cast<int>(domains.size()), run_domain);
    SweepResult result;
    for (auto& c : chunks) {
        for (auto& [r, tau_d_budget] : c) {
            VerificationRecord theorem = r;
            VerificationRecord lemma = std::move(r);
            if (theorem.status != RecordStatus::skipped) {
                theorem.status = classify_margin(theorem.theorem_margin, theorem.tau_alpha_budget);
                lemma.status = classify_margin(lemma.lemma_margin,
                                               lemma.tau_alpha_budget + tau_d_budget);
            }
            result.theorem_records.push_back(std::move(theorem));
            result.lemma_records.push_back(std::move(lemma));
        }
    }
    return result;
}

inline std::vector<VerificationRecord> verify_theorem_2d(const ExperimentConfig& cfg) {
    return verify_sweep(cfg).theorem_records;
}

inline std::vector<VerificationRecord> verify_lemma_core(const ExperimentConfig& cfg) {
    return verify_sweep(cfg).lemma_records;
}

struct ThresholdSuiteResult {
    std::vector<CertifiedMinimum> minima;
    std::vector<LemmaFunctionReport> structures;
    bool all_pass = false;
};

inline ThresholdSuiteResult run_threshold_suite(std::span<const int> dims, int grid_nodes = 10000,
                                                int scan_nodes = 4096, double tolerance = 1e-9) {
    ThresholdSuiteResult res;
    res.minima.push_back(
        certified_minimum(ThresholdKind::planar_perimeter, 2, grid_nodes, tolerance));
    res.minima.push_back(
        certified_minimum(ThresholdKind::threed_perimeter, 3, grid_nodes, tolerance));
    res.minima.push_back(
        certified_minimum(ThresholdKind::threed_volume, 3, grid_nodes, tolerance));
    for (int d : dims) {
        res.minima.push_back(
            certified_minimum(ThresholdKind::general_perimeter, d, grid_nodes, tolerance));
        res.minima.push_back(
            certified_minimum(ThresholdKind::general_volume, d, grid_nodes, tolerance));
    }
    for (int d : dims)
        for (LemmaId id : {LemmaId::g, LemmaId::h, LemmaId::k, LemmaId::m, LemmaId::M})
            res.structures.push_back(sign_pattern(id, d, scan_nodes));
    res.all_pass = true;
    for (const auto& c : res.minima) res.all_pass = res.all_pass && c.pass;
    for (const auto& s : res.structures) res.all_pass = res.all_pass && s.structure_ok;
    return res;
}

struct SandwichRecord {
    std::string domain_id;
    double shell_torsion = 0.0;     // tau_DN, closed form
    double lower_bound = 0.0;       // Rayleigh bound from the trial function
    double tau_dirichlet = 0.0;     // FEM, Richardson-extrapolated
    double tau_dirichlet_budget = 0.0;
    bool ok = false;
};

// tau_DN(matched shell) <= LB <= tau_D for every convex domain.
inline std::vector<SandwichRecord> run_parallel_coordinates_suite(const ExperimentConfig& cfg) {
    const auto domains = generate_domains(cfg);
    auto run_domain = [&](int di) -> SandwichRecord {
        const auto& dom = domains[di];
        SandwichRecord rec;
        rec.domain_id = dom.id;
        const auto rep = dirichlet_lower_bound(dom.poly);
        rec.shell_torsion = rep.shell_torsion;
        rec.lower_bound = rep.lower_bound;
        const std::vector<double> h_seq = {cfg.mesh_h, cfg.mesh_h / 2.0, cfg.mesh_h / 4.0};
        const auto tau = torsion_budget(dom.poly, std::nullopt, h_seq);
        rec.tau_dirichlet = tau.value;
        rec.tau_dirichlet_budget = tau.error_bar;
        rec.ok = rec.lower_bound >= rec.shell_torsion * (1.0 - 1e-8) &&
                 rec.lower_bound <= rec.tau_dirichlet + rec.tau_dirichlet_budget +
                                        1e-8 * std::abs(rec.tau_dirichlet);
        return rec;
    };
    return detail::ordered_parallel(static_cast<int>(domains.size()), run_domain);
}

}  // namespace torsion
