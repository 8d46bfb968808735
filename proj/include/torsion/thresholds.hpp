#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "torsion/radial.hpp"
#include "torsion/stable.hpp"

// Smallness-condition thresholds and the auxiliary lemma functions behind
// them: the planar and 3-d conditions, their general-d counterparts, root /
// sign-pattern certification, certified grid minima against the proven lower
// bounds, and the quantitative torsion-gap estimate.

namespace torsion {

enum class ThresholdKind {
    planar_perimeter,   // d = 2, bound on -2 alpha R, proven >= 4
    threed_perimeter,   // d = 3, bound on -alpha R, proven >= 2
    threed_volume,      // d = 3, bound on -alpha R, proven >= 1
    general_perimeter,  // d >= 3, bound on -alpha R, proven >= 2
    general_volume,     // d >= 3, bound on -alpha R, proven >= 1
};

inline const char* to_string(ThresholdKind k) {
    switch (k) {
        case ThresholdKind::planar_perimeter: return "planar-perimeter";
        case ThresholdKind::threed_perimeter: return "3d-perimeter";
        case ThresholdKind::threed_volume: return "3d-volume";
        case ThresholdKind::general_perimeter: return "general-perimeter";
        case ThresholdKind::general_volume: return "general-volume";
    }
    return "?";
}

inline double threshold_bound(ThresholdKind k) {
    switch (k) {
        case ThresholdKind::planar_perimeter: return 4.0;
        case ThresholdKind::threed_perimeter: return 2.0;
        case ThresholdKind::threed_volume: return 1.0;
        case ThresholdKind::general_perimeter: return 2.0;
        case ThresholdKind::general_volume: return 1.0;
    }
    return 0.0;
}

enum class LemmaId { f, g, h, k, m, M };

inline const char* to_string(LemmaId id) {
    switch (id) {
        case LemmaId::f: return "f";
        case LemmaId::g: return "g";
        case LemmaId::h: return "h";
        case LemmaId::k: return "k";
        case LemmaId::m: return "m";
        case LemmaId::M: return "M";
    }
    return "?";
}

namespace detail {

// g(t) = (d^2-4)t^d + (d+2)t^{2d} - d^2 t^{d+2} - (d-2)[1-(1-t^d)^{(d+2)/d}].
// Two algebraically equal arrangements: in terms of x = t^d for the left half
// and in terms of u = 1 - t^d for the right half, where the naive form
// cancels O(d^2) terms down to O(u^{1+2/d}).
inline long double lemma_g(int d, long double t) {
    const long double d2 = static_cast<long double>(d) * d;
    const long double x = std::pow(t, d);
    if (x <= 0.5L) {
        const long double f2 = -std::expm1((1.0L + 2.0L / d) * std::log1p(-x));
        return (d2 - 4.0L) * x + (d + 2.0L) * x * x - d2 * x * t * t - (d - 2.0L) * f2;
    }
    const long double u = -std::expm1(d * std::log(t));  // 1 - t^d
    return (d + 2.0L) * u * u + (d - 2.0L) * std::pow(u, 1.0L + 2.0L / d) -
           d2 * stable::pow1m_corr(1.0L + 2.0L / d, u);
}

inline long double lemma_h(int d, long double t) {
    const long double d2 = static_cast<long double>(d) * d;
    const long double omt2 = (1.0L - t) * (1.0L + t);
    const long double u = t > 0.0L ? -std::expm1(d * std::log(t)) : 1.0L;  // 1 - t^d
    return d2 * omt2 - 2.0L * d * u - (d - 2.0L) * std::pow(u, 2.0L / d);
}

inline long double lemma_f(int d, long double t) {
    if (t <= 0.0L) return 0.0L;
    return -std::expm1((d - 1.0L) / d * stable::log_one_minus_pow(t, d));
}

inline long double lemma_k(int d, long double t) {
    if (t <= 0.0L || t >= 1.0L) return 0.0L;
    const long double lu = stable::log_one_minus_pow(t, d);
    // (1-t^d)^{1+2/d} - (1-t^d)^{2+1/d} as a product of positives
    const long double bracket =
        -std::exp((1.0L + 2.0L / d) * lu) * std::expm1((d - 1.0L) / d * lu);
    const long double d2 = static_cast<long double>(d) * d;
    return (d2 - 4.0L) * bracket - lemma_g(d, t);
}

inline long double lemma_m(int d, long double t) {
    const long double d2 = static_cast<long double>(d) * d;
    const long double u = t > 0.0L ? -std::expm1(d * std::log(t)) : 1.0L;
    return (d - 2.0L) * (2.0L * d + 1.0L) * std::pow(u, 1.0L + 1.0L / d) -
           (d - 2.0L) * (d + 1.0L) * std::pow(u, 2.0L / d) - d2 * (1.0L - t) * (1.0L + t) +
           2.0L * d * u;
}

// M(u) = m(t(u)) with u = 1 - t^d, written so the O(u) terms cancel exactly:
// M(u) = d^2 q(2/d, u) - (d-2)(d+1) u^{2/d} + (2d^2-3d-2) u^{1+1/d}.
inline long double lemma_M(int d, long double u) {
    const long double d2 = static_cast<long double>(d) * d;
    return d2 * stable::pow1m_corr(2.0L / d, u) -
           (d - 2.0L) * (d + 1.0L) * std::pow(u, 2.0L / d) +
           (2.0L * d2 - 3.0L * d - 2.0L) * std::pow(u, 1.0L + 1.0L / d);
}

// M'(u), used to isolate the two critical points of M.
inline long double lemma_M_prime(int d, long double u) {
    const long double d2 = static_cast<long double>(d) * d;
    return -2.0L * d * std::pow(1.0L - u, 2.0L / d - 1.0L) -
           (2.0L / d) * (d - 2.0L) * (d + 1.0L) * std::pow(u, 2.0L / d - 1.0L) +
           (1.0L + 1.0L / d) * (2.0L * d2 - 3.0L * d - 2.0L) * std::pow(u, 1.0L / d) + 2.0L * d;
}

inline long double threshold_raw(ThresholdKind kind, int d, long double t) {
    const long double d2 = static_cast<long double>(d) * d;
    switch (kind) {
        case ThresholdKind::planar_perimeter: {
            // [(1-t^2)^2 - 1] / [-t^4 log(t)/2 + 3t^4/8 - t^2/2], with t^2
            // cancelled from both sides; exact at both endpoints.
            const long double t2 = t * t;
            const long double tlt = t == 0.0L ? 0.0L : t2 * std::log(t);
            return 2.0L * (2.0L - t2) / (1.0L + tlt - 0.75L * t2);
        }
        case ThresholdKind::threed_perimeter: {
            // 5[(1-t^3)^2 - 1] / (9t^5 - 5t^6 - 5t^3)
            const long double t3 = t * t * t;
            const long double num = 5.0L * std::expm1(2.0L * std::log1p(-t3));
            return num / (t3 * (9.0L * t * t - 5.0L * t3 - 5.0L));
        }
        case ThresholdKind::threed_volume: {
            // 5[(1-t^3)^{7/3} - (1-t^3)^{5/3}] / (9t^5 - 5t^6 - 5t^3 + 1 - (1-t^3)^{5/3})
            const long double t3 = t * t * t;
            const long double lu = std::log1p(-t3);
            const long double num =
                5.0L * std::exp(5.0L / 3.0L * lu) * std::expm1(2.0L / 3.0L * lu);
            long double den;
            if (t3 <= 0.5L) {
                den = t3 * (9.0L * t * t - 5.0L * t3 - 5.0L) - std::expm1(5.0L / 3.0L * lu);
            } else {
                const long double u = -std::expm1(3.0L * std::log(t));
                den = 9.0L * stable::pow1m_corr(5.0L / 3.0L, u) - 5.0L * u * u -
                      std::pow(u, 5.0L / 3.0L);
            }
            return num / den;
        }
        case ThresholdKind::general_perimeter: {
            // (d^2-4)[1-(1-t^d)^2] / (t^d[(d^2-4) - d^2 t^2 + (d+2)t^d]),
            // with t^d cancelled:  (d^2-4)(2-t^d) / ((d^2-4) - d^2 t^2 + (d+2)t^d).
            const long double td = std::pow(t, d);
            return (d2 - 4.0L) * (2.0L - td) / ((d2 - 4.0L) - d2 * t * t + (d + 2.0L) * td);
        }
        case ThresholdKind::general_volume: {
            const long double lu = stable::log_one_minus_pow(t, d);
            const long double num = -(d2 - 4.0L) * std::exp((d + 2.0L) / d * lu) *
                                    std::expm1((d - 1.0L) / d * lu);
            return num / lemma_g(d, t);
        }
    }
    return 0.0L;
}

}  // namespace detail

struct ThresholdValue {
    double value = 0.0;
    bool at_endpoint = false;  // limiting value at t = 0 or t = 1
};

inline ThresholdValue threshold_point(ThresholdKind kind, int d, double t) {
    switch (kind) {
        case ThresholdKind::planar_perimeter:
            if (d != 2) throw std::invalid_argument("planar threshold fixes d = 2");
            break;
        case ThresholdKind::threed_perimeter:
        case ThresholdKind::threed_volume:
            if (d != 3) throw std::invalid_argument("3-d thresholds fix d = 3");
            break;
        default:
            if (d < 3) throw std::invalid_argument("general thresholds require d >= 3");
    }
    if (t < 0.0 || t > 1.0) throw std::invalid_argument("threshold: t outside [0, 1]");
    // Every kind tends to its proven lower bound as t -> 0.
    if (t == 0.0) return {threshold_bound(kind), true};
    if (t == 1.0) {
        switch (kind) {
            case ThresholdKind::planar_perimeter: return {8.0, true};
            case ThresholdKind::threed_perimeter: return {5.0, true};
            default: return {static_cast<double>(d + 2), true};
        }
    }
    return {static_cast<double>(detail::threshold_raw(kind, d, t)), false};
}

inline double threshold(ThresholdKind kind, int d, double t) {
    return threshold_point(kind, d, t).value;
}

// The planar condition is stated on -2 alpha R; this is the equivalent bound
// on -alpha R, matching the convention of every other kind.
inline double planar_alpha_bound(double t) {
    return 0.5 * threshold(ThresholdKind::planar_perimeter, 2, t);
}

inline double lemma_function(LemmaId id, int d, double x) {
    if (d < 3) throw std::invalid_argument("lemma_function: d must be >= 3");
    if (x < 0.0 || x > 1.0) throw std::invalid_argument("lemma_function: argument outside [0, 1]");
    switch (id) {
        case LemmaId::f: return static_cast<double>(detail::lemma_f(d, x));
        case LemmaId::g: return static_cast<double>(detail::lemma_g(d, x));
        case LemmaId::h: return static_cast<double>(detail::lemma_h(d, x));
        case LemmaId::k: return static_cast<double>(detail::lemma_k(d, x));
        case LemmaId::m: return static_cast<double>(detail::lemma_m(d, x));
        case LemmaId::M: return static_cast<double>(detail::lemma_M(d, x));
    }
    return 0.0;
}

struct RootInterval {
    double lo = 0.0;
    double hi = 0.0;
    double midpoint() const { return 0.5 * (lo + hi); }
};

struct LemmaFunctionReport {
    LemmaId id = LemmaId::g;
    int d = 0;
    double value_at_0 = 0.0;
    double value_at_1 = 0.0;
    std::vector<RootInterval> roots;            // interior sign changes
    std::vector<RootInterval> critical_points;  // interior extrema
    bool structure_ok = false;
    std::string note;
};

namespace detail {

template <class F>
std::vector<RootInterval> isolate_sign_changes(F&& fn, int nodes) {
    std::vector<RootInterval> roots;
    const long double lo = 1.0L / (nodes + 1), hi = 1.0L - 1.0L / (nodes + 1);
    long double prev_x = lo;
    long double prev_v = fn(lo);
    for (int i = 1; i < nodes; ++i) {
        const long double x = lo + (hi - lo) * i / (nodes - 1);
        const long double v = fn(x);
        if ((prev_v < 0.0L && v > 0.0L) || (prev_v > 0.0L && v < 0.0L)) {
            long double a = prev_x, b = x, fa = prev_v;
            for (int it = 0; it < 80; ++it) {
                const long double mid = 0.5L * (a + b);
                const long double fm = fn(mid);
                if ((fa < 0.0L) == (fm < 0.0L)) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            roots.push_back({static_cast<double>(a), static_cast<double>(b)});
        }
        prev_x = x;
        prev_v = v;
    }
    return roots;
}

}  // namespace detail

// Certifies the sign/root structure asserted by the monotonicity analysis:
//   h: exactly one interior root (+ to -); g: positive with a single maximum;
//   m: exactly one interior root (+ to -); k: positive with a single maximum;
//   M: one interior root and exactly two critical points (min then max).
inline LemmaFunctionReport sign_pattern(LemmaId id, int d, int scan_nodes = 4096) {
    if (d < 3) throw std::invalid_argument("sign_pattern: d must be >= 3");
    if (id == LemmaId::f)
        throw std::invalid_argument("sign_pattern: f carries no sign-structure claim");
    LemmaFunctionReport rep;
    rep.id = id;
    rep.d = d;
    rep.value_at_0 = lemma_function(id, d, 0.0);
    rep.value_at_1 = lemma_function(id, d, 1.0);

    auto eval = [&](long double x) -> long double {
        switch (id) {
            case LemmaId::g: return detail::lemma_g(d, x);
            case LemmaId::h: return detail::lemma_h(d, x);
            case LemmaId::k: return detail::lemma_k(d, x);
            case LemmaId::m: return detail::lemma_m(d, x);
            default: return detail::lemma_M(d, x);
        }
    };
    rep.roots = detail::isolate_sign_changes(eval, scan_nodes);

    bool all_positive = true;
    for (int i = 1; i <= scan_nodes; ++i) {
        const long double x = static_cast<long double>(i) / (scan_nodes + 1);
        if (eval(x) <= 0.0L) {
            all_positive = false;
            break;
        }
    }

    switch (id) {
        case LemmaId::h:
        case LemmaId::m:
            rep.structure_ok = rep.roots.size() == 1;
            if (rep.structure_ok) rep.critical_points = {};  // not tracked for h, m
            rep.note = rep.structure_ok ? "one interior sign change"
                                        : "expected exactly one interior sign change, found " +
                                              std::to_string(rep.roots.size());
            break;
        case LemmaId::g: {
            // g' = (d+2) t^{d-1} h(t): the unique root of h is g's unique maximum.
            auto hroots = detail::isolate_sign_changes(
                [&](long double x) { return detail::lemma_h(d, x); }, scan_nodes);
            rep.critical_points = hroots;
            rep.structure_ok = all_positive && rep.roots.empty() && hroots.size() == 1;
            rep.note = rep.structure_ok ? "positive with a single interior maximum"
                                        : "structure violated";
            break;
        }
        case LemmaId::k: {
            // k' = (d+2) t^{d-1} m(t).
            auto mroots = detail::isolate_sign_changes(
                [&](long double x) { return detail::lemma_m(d, x); }, scan_nodes);
            rep.critical_points = mroots;
            rep.structure_ok = all_positive && rep.roots.empty() && mroots.size() == 1;
            rep.note = rep.structure_ok ? "positive with a single interior maximum"
                                        : "structure violated";
            break;
        }
        case LemmaId::M: {
            auto crit = detail::isolate_sign_changes(
                [&](long double x) { return detail::lemma_M_prime(d, x); }, scan_nodes);
            rep.critical_points = crit;
            rep.structure_ok = rep.roots.size() == 1 && crit.size() == 2 &&
                               eval(crit[0].midpoint()) < 0.0L && eval(crit[1].midpoint()) > 0.0L;
            rep.note = rep.structure_ok ? "one interior root, min then max"
                                        : "structure violated";
            break;
        }
        default: break;
    }
    return rep;
}

struct CertifiedMinimum {
    ThresholdKind kind = ThresholdKind::planar_perimeter;
    int d = 0;
    double grid_min = 0.0;
    double argmin = 0.0;
    double bound = 0.0;
    bool pass = false;
};

// Grid certification over (1e-4, 1-1e-4): every value must clear the proven
// bound minus the tolerance.  A failure is a reportable finding, not an
// exception.
inline CertifiedMinimum certified_minimum(ThresholdKind kind, int d, int grid_nodes = 10000,
                                          double tolerance = 1e-9) {
    CertifiedMinimum cm;
    cm.kind = kind;
    cm.d = d;
    cm.bound = threshold_bound(kind);
    cm.grid_min = std::numeric_limits<double>::infinity();
    const double lo = 1e-4, hi = 1.0 - 1e-4;
    for (int i = 0; i < grid_nodes; ++i) {
        const double t = lo + (hi - lo) * i / (grid_nodes - 1);
        const double v = threshold(kind, d, t);
        if (v < cm.grid_min) {
            cm.grid_min = v;
            cm.argmin = t;
        }
    }
    cm.pass = cm.grid_min >= cm.bound - tolerance;
    return cm;
}

enum class Constraint { perimeter, volume };

inline const char* to_string(Constraint c) {
    return c == Constraint::perimeter ? "perimeter" : "volume";
}

struct QuantitativeGap {
    double lhs = 0.0;     // tau_D(B_R) - tau_DN(A_{R1,R2})
    double rhs = 0.0;     // c R (|B_R|^2/|dB_R| - |Omega|^2/|dOmega|)
    double margin = 0.0;  // rhs - lhs
};

// Both sides vanish like t^d as the shell degenerates to the ball, far below
// the size of the individual closed forms, so the differences are formed
// analytically rather than by subtracting torsion values.
inline QuantitativeGap quantitative_gap(int d, const ShellGeometry& shell, Constraint constraint) {
    if (d < 3) throw std::invalid_argument("quantitative_gap: d must be >= 3");
    if (shell.dim != d) throw std::invalid_argument("quantitative_gap: dimension mismatch");
    if (!(shell.inner_radius > 0.0))
        throw std::invalid_argument("quantitative_gap: R1 must be positive");
    const long double t = shell.ratio();
    const long double R2 = shell.outer_radius;
    const long double d2 = static_cast<long double>(d) * d;
    const long double x = std::pow(t, d);  // t^d
    const long double lx = std::log1p(-x); // log(1 - t^d)
    const auto dc = dimensional_constants(d);
    const long double S = dc.sphere_area;
    const long double B1 = dc.ball_volume;
    const long double scale = std::pow(R2, d + 2);

    QuantitativeGap q;
    if (constraint == Constraint::perimeter) {
        // tau_D(B_{R2}) - tau_DN = |S| R2^{d+2} t^d [1/d^2 + t^d/(d^2(d-2)) - t^2/(d^2-4)]
        const long double bracket =
            1.0L / d2 + x / (d2 * (d - 2)) - t * t / (d2 - 4.0L);
        q.lhs = static_cast<double>(S * scale * x * bracket);
        // |B_R|^2/|dB_R| - |Omega|^2/|dOmega| = (|B_1| R2^{d+1}/d) (1 - (1-t^d)^2)
        q.rhs = static_cast<double>(0.5L * R2 * (B1 * std::pow(R2, d + 1) / d) * x *
                                    (2.0L - x));
    } else {
        // R = R2 (1-t^d)^{1/d}
        const long double R = R2 * std::exp(lx / d);
        // tau_D(B_R)/(|S| R2^{d+2}) - T_d(t), grouped so the O(1) parts cancel exactly
        const long double diff = stable::pow1m_m1(1.0L + 2.0L / d, x) / (d2 * (d + 2)) +
                                 x / d2 + x * x / (d2 * (d - 2)) - x * t * t / (d2 - 4.0L);
        q.lhs = static_cast<double>(S * scale * diff);
        // |Omega|^2 (1/|dB_R| - 1/|dB_{R2}|) with |Omega| = |B_R|
        const long double gap = (B1 * std::pow(R2, d + 1) / d) * (1.0L - x) * (1.0L - x) *
                                std::expm1(-(d - 1.0L) / d * lx);
        q.rhs = static_cast<double>(R * gap);
    }
    q.margin = q.rhs - q.lhs;
    return q;
}

enum class ClauseState { holds, fails, unknown };

struct ApplicabilityDecision {
    double matched_ratio = 0.0;      // t = R1/R2 of the shell matched to the geometry
    double comparison_radius = 0.0;  // R of the comparison ball for the constraint
    double alpha_r = 0.0;            // -alpha * R
    double threshold_value = 0.0;    // bound on -alpha R at the matched t
    double universal_bound = 0.0;    // 2 (perimeter kinds) or 1 (volume kinds)
    bool below_critical = false;     // alpha <= -(d+2)/R: outside every proven regime
    ClauseState sigma_clause = ClauseState::unknown;
    bool threshold_clause = false;
    bool fallback_clause = false;
    bool certified = false;
};

// Checks the sufficient-condition chain for the small-|alpha| theorems:
// alpha in (-sigma_1, 0) plus the threshold at the matched-shell ratio (with
// the planar factor-2 convention), falling back on the universal -2/R or
// -1/R window.  sigma_1 may be unknown, in which case that clause is
// reported as deferred rather than decided.
inline ApplicabilityDecision applicability_certificate(int d, double volume, double surface,
                                                       double alpha, Constraint constraint,
                                                       std::optional<double> sigma1 = {}) {
    if (!(alpha < 0.0))
        throw std::invalid_argument("applicability_certificate: requires alpha < 0");
    if (!(volume > 0.0) || !(surface > 0.0))
        throw std::invalid_argument("applicability_certificate: degenerate geometry");
    if (d == 2 && constraint == Constraint::volume)
        throw std::invalid_argument(
            "applicability_certificate: no threshold kind for d = 2 under volume constraint");

    const auto dc = dimensional_constants(d);
    // Matched shell: |dB_{R2}| = surface, |A| = volume.
    const double R2 = std::pow(surface / dc.sphere_area, 1.0 / (d - 1));
    const double inner_power = std::pow(R2, d) - volume / dc.ball_volume;
    if (inner_power < -1e-9 * std::pow(R2, d))
        throw std::invalid_argument("applicability_certificate: isoperimetric deficit negative");
    const double R1 = std::pow(std::max(inner_power, 0.0), 1.0 / d);

    ApplicabilityDecision dec;
    dec.matched_ratio = R1 / R2;
    dec.comparison_radius = constraint == Constraint::perimeter
                                ? R2
                                : std::pow(volume / dc.ball_volume, 1.0 / d);
    dec.alpha_r = -alpha * dec.comparison_radius;
    dec.below_critical = alpha <= critical_alpha(BallGeometry(d, dec.comparison_radius));

    const ThresholdKind kind = d == 2 ? ThresholdKind::planar_perimeter
                               : constraint == Constraint::perimeter
                                   ? ThresholdKind::general_perimeter
                                   : ThresholdKind::general_volume;
    const double thr = threshold(kind, d, std::min(dec.matched_ratio, 1.0));
    dec.threshold_value = kind == ThresholdKind::planar_perimeter ? 0.5 * thr : thr;
    dec.universal_bound = constraint == Constraint::perimeter ? 2.0 : 1.0;
    dec.threshold_clause = dec.alpha_r <= dec.threshold_value;
    dec.fallback_clause = dec.alpha_r <= dec.universal_bound;
    if (sigma1)
        dec.sigma_clause = alpha > -*sigma1 ? ClauseState::holds : ClauseState::fails;

    dec.certified = !dec.below_critical && (dec.threshold_clause || dec.fallback_clause) &&
                    dec.sigma_clause != ClauseState::fails;
    return dec;
}

}  // namespace torsion
