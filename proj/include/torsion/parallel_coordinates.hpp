#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "torsion/geometry.hpp"
#include "torsion/quadrature.hpp"
#include "torsion/radial.hpp"

// Method of parallel coordinates in d = 2: match a shell to the polygon,
// transfer its radial profile to a trial function of the boundary distance,
// and evaluate the resulting Rayleigh-quotient lower bound on the Dirichlet
// torsion by coarea integration over the inner parallel bodies.

namespace torsion {

struct MatchedShell {
    ShellGeometry shell;
    double source_area = 0.0;
    double source_perimeter = 0.0;
};

// R2 = |dOmega|/(2 pi), R1 = sqrt(|dOmega|^2 - 4 pi |Omega|)/(2 pi); the
// shell has the area of Omega and its outer circle the perimeter of Omega.
inline MatchedShell matched_shell(const GeometricSummary& s) {
    const double pi = std::numbers::pi;
    const double deficit = s.perimeter * s.perimeter - 4.0 * pi * s.area;
    if (deficit < -1e-9 * s.perimeter * s.perimeter)
        throw std::invalid_argument("matched_shell: isoperimetric deficit is negative");
    const double r2 = s.perimeter / (2.0 * pi);
    const double r1 = std::sqrt(std::max(deficit, 0.0)) / (2.0 * pi);
    return {ShellGeometry(2, r1, r2), s.area, s.perimeter};
}

// The shell profile phi pulled back to boundary distance: f(s) = phi(R2 - s)
// for s in [0, R2 - R1], constant u_M past the cap.
class TrialProfile {
  public:
    explicit TrialProfile(const MatchedShell& m)
        : shell_(m.shell),
          cap_(m.shell.outer_radius - m.shell.inner_radius),
          u_max_(shell_solution_max(m.shell)) {}

    const ShellGeometry& shell() const { return shell_; }
    double cap() const { return cap_; }
    double u_max() const { return u_max_; }

    double phi(double r) const { return radial_solution(shell_, r); }

    double phi_prime(double r) const {
        const double r1 = shell_.inner_radius;
        return -0.5 * r + 0.5 * r1 * r1 / r;  // zero at r = R1, negative beyond
    }

    // f(s) = psi at boundary distance s.
    double value(double dist) const {
        if (dist <= 0.0) return 0.0;
        if (dist >= cap_) return u_max_;
        return phi(shell_.outer_radius - dist);
    }

    // f'(s); vanishes on the plateau.
    double slope(double dist) const {
        if (dist <= 0.0) return 0.5 * shell_.outer_radius -
                                0.5 * shell_.inner_radius * shell_.inner_radius /
                                    shell_.outer_radius;
        if (dist >= cap_) return 0.0;
        return -phi_prime(shell_.outer_radius - dist);
    }

    // f^{-1}(v) on [0, u_M] by bisection; f is strictly increasing on the cap.
    double inverse_value(double v) const {
        if (v <= 0.0) return 0.0;
        if (v >= u_max_) return cap_;
        double lo = 0.0, hi = cap_;
        for (int it = 0; it < 100 && hi - lo > 1e-15 * cap_; ++it) {
            const double mid = 0.5 * (lo + hi);
            (value(mid) < v ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }

    // phi^{-1}(v) on [R1, R2]; phi is strictly decreasing.
    double inverse_phi(double v) const {
        return shell_.outer_radius - inverse_value(v);
    }

  private:
    ShellGeometry shell_;
    double cap_;
    double u_max_;
};

inline TrialProfile trial_profile(const MatchedShell& m) { return TrialProfile(m); }

struct LowerBoundReport {
    double integral_psi = 0.0;  // int_Omega psi
    double energy_psi = 0.0;    // int_Omega |grad psi|^2
    double lower_bound = 0.0;   // (int psi)^2 / int |grad psi|^2
    double shell_torsion = 0.0; // tau_DN of the matched shell
    double psi_max = 0.0;
    double u_max = 0.0;
    double inradius = 0.0;
    double cap = 0.0;
};

namespace detail {

struct ErosionCache {
    const ConvexPolygon* poly;
    mutable double last_t = -1.0;
    mutable std::optional<ConvexPolygon> last;

    const std::optional<ConvexPolygon>& at(double t) const {
        if (t != last_t) {
            last = inner_parallel_body(*poly, t);
            last_t = t;
        }
        return last;
    }
    double boundary_length(double t) const {
        const auto& p = at(t);
        return p ? p->perimeter() : 0.0;
    }
    double area(double t) const {
        const auto& p = at(t);
        return p ? p->area() : 0.0;
    }
};

}  // namespace detail

// tau_D(Omega) >= LB = (int psi)^2 / int |grad psi|^2 >= tau_DN(matched shell).
// Coarea over boundary distance: int psi = int_0^{r} f(s) |dOmega_s| ds and
// int |grad psi|^2 = int_0^{min(r, cap)} f'(s)^2 |dOmega_s| ds  (|grad rho| = 1).
inline LowerBoundReport dirichlet_lower_bound(const ConvexPolygon& poly) {
    const GeometricSummary s = summarize(poly);
    const MatchedShell m = matched_shell(s);
    const TrialProfile prof(m);

    LowerBoundReport rep;
    rep.shell_torsion = dn_torsion_shell(m.shell);
    rep.u_max = prof.u_max();
    rep.cap = prof.cap();
    rep.inradius = s.inradius;
    rep.psi_max = prof.value(std::min(s.inradius, prof.cap()));

    detail::ErosionCache cache{&poly};
    std::vector<double> breaks = erosion_events(poly);
    breaks.push_back(prof.cap());

    const double tol = 1e-11 * s.area * std::max(prof.u_max(), 1e-300);
    rep.integral_psi = integrate(
        [&](double t) { return prof.value(t) * cache.boundary_length(t); }, 0.0, s.inradius,
        breaks, tol);
    const double energy_cut = std::min(s.inradius, prof.cap());
    const double slope0 = prof.slope(0.0);
    rep.energy_psi = integrate(
        [&](double t) {
            const double fp = prof.slope(t);
            return fp * fp * cache.boundary_length(t);
        },
        0.0, energy_cut, breaks, tol * std::max(slope0 * slope0, 1.0));
    rep.lower_bound = rep.integral_psi * rep.integral_psi / rep.energy_psi;

    if (!(rep.lower_bound >= rep.shell_torsion * (1.0 - 1e-8)))
        throw std::runtime_error(
            "dirichlet_lower_bound: Rayleigh bound fell below the shell torsion");
    return rep;
}

struct MeasurePair {
    double level = 0.0;
    double mu = 0.0;   // |E_t|, superlevel measure of the trial function
    double eta = 0.0;  // |A_t|, superlevel measure of the shell solution
};

// mu(0) = eta(0) = |Omega| and mu >= eta on [0, psi_M).  (The comparison set
// is the shell superlevel A_t; adding the inner disk to both sides of the
// derivative argument would offset eta(0) by pi R1^2 and break equality at 0.)
inline std::vector<MeasurePair> measure_profiles(const ConvexPolygon& poly,
                                                 std::span<const double> levels) {
    const GeometricSummary s = summarize(poly);
    const MatchedShell m = matched_shell(s);
    const TrialProfile prof(m);
    const double psi_max = prof.value(std::min(s.inradius, prof.cap()));
    const double r1 = m.shell.inner_radius;

    std::vector<MeasurePair> out;
    out.reserve(levels.size());
    for (double v : levels) {
        if (v < 0.0 || v >= psi_max)
            throw std::invalid_argument("measure_profiles: level outside [0, psi_max)");
        MeasurePair p;
        p.level = v;
        const double dist = prof.inverse_value(v);
        auto inner = inner_parallel_body(poly, dist);
        p.mu = inner ? inner->area() : 0.0;
        const double radius = prof.inverse_phi(v);
        p.eta = std::numbers::pi * (radius * radius - r1 * r1);
        out.push_back(p);
    }
    return out;
}

struct EnergyComparison {
    double energy_psi = 0.0;     // int_Omega |grad psi|^2
    double energy_shell = 0.0;   // int_A |grad u|^2 by radial quadrature
    double integral_psi = 0.0;   // int_Omega psi
    double integral_shell = 0.0; // int_A u by radial quadrature
};

// int |grad psi|^2 <= int_A |grad u|^2 and int psi >= int_A u; both shell
// integrals also equal tau_DN, which the tests use as a cross-check.
inline EnergyComparison energy_comparison(const ConvexPolygon& poly) {
    const LowerBoundReport rep = dirichlet_lower_bound(poly);
    const GeometricSummary s = summarize(poly);
    const MatchedShell m = matched_shell(s);
    const TrialProfile prof(m);
    const double r1 = m.shell.inner_radius, r2 = m.shell.outer_radius;
    const double two_pi = 2.0 * std::numbers::pi;
    const double tol = 1e-12 * std::max(rep.shell_torsion, 1e-300);

    EnergyComparison cmp;
    cmp.energy_psi = rep.energy_psi;
    cmp.integral_psi = rep.integral_psi;
    cmp.integral_shell =
        integrate([&](double r) { return prof.phi(r) * two_pi * r; }, r1, r2, tol);
    cmp.energy_shell = integrate(
        [&](double r) {
            const double d = prof.phi_prime(r);
            return d * d * two_pi * r;
        },
        r1, r2, tol);
    return cmp;
}

}  // namespace torsion
