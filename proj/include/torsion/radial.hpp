#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "torsion/stable.hpp"

// Closed-form radial quantities: Robin/Dirichlet torsion of a ball, the
// Dirichlet-Neumann torsion of a spherical shell, the Steklov spectrum of a
// ball and the explicit radial solution profiles behind all of them.

namespace torsion {

struct BallGeometry {
    int dim;
    double radius;

    BallGeometry(int d, double r) : dim(d), radius(r) {
        if (d < 1) throw std::invalid_argument("BallGeometry: dimension must be >= 1");
        if (!(r > 0.0)) throw std::invalid_argument("BallGeometry: radius must be positive");
    }
};

struct ShellGeometry {
    int dim;
    double inner_radius;
    double outer_radius;

    ShellGeometry(int d, double r1, double r2) : dim(d), inner_radius(r1), outer_radius(r2) {
        if (d < 2) throw std::invalid_argument("ShellGeometry: dimension must be >= 2");
        if (!(r1 >= 0.0) || !(r2 > 0.0) || !(r1 < r2))
            throw std::invalid_argument("ShellGeometry: need 0 <= R1 < R2, got R1=" +
                                        std::to_string(r1) + " R2=" + std::to_string(r2));
    }

    double ratio() const { return inner_radius / outer_radius; }
};

struct DimensionalConstants {
    double sphere_area;   // |S^{d-1}|
    double ball_volume;   // |B_1|
};

inline DimensionalConstants dimensional_constants(int d) {
    if (d < 1) throw std::invalid_argument("dimensional_constants: dimension must be >= 1");
    const long double hd = 0.5L * d;
    const long double area =
        2.0L * std::exp(hd * std::log(std::numbers::pi_v<long double>) - std::lgamma(hd));
    // |B_1| = |S^{d-1}|/d exactly, keeping the identity sphere_area = d*ball_volume tight.
    return {static_cast<double>(area), static_cast<double>(area / d)};
}

// sigma_k(B_R) = k/R
inline double steklov_ball(const BallGeometry& ball, int k) {
    if (k < 0) throw std::invalid_argument("steklov_ball: index must be >= 0");
    return k / ball.radius;
}

// alpha_* = -(d+2)/R, the unique negative parameter with vanishing torsion.
inline double critical_alpha(const BallGeometry& ball) {
    return -(ball.dim + 2) / ball.radius;
}

// True when -alpha lies within rel_tol of some Steklov eigenvalue k/R (k >= 1),
// i.e. the boundary value problem is at (or numerically near) a resonance.
inline bool steklov_resonant(const BallGeometry& ball, double alpha, double rel_tol = 1e-9) {
    const double target = -alpha * ball.radius;
    if (target <= 0.5) return false;  // nearest positive integer would be k = 0, excluded
    const double k = std::round(target);
    return std::abs(target - k) <= rel_tol * k;
}

inline double robin_torsion_ball(const BallGeometry& ball, double alpha) {
    if (alpha == 0.0)
        throw std::invalid_argument("robin_torsion_ball: alpha = 0 (Neumann) has no solution");
    const int d = ball.dim;
    const long double R = ball.radius;
    const long double rd1 = std::pow(R, d + 1);
    const auto c = dimensional_constants(d);
    return static_cast<double>(
        c.sphere_area * (rd1 * R / (static_cast<long double>(d) * d * (d + 2)) +
                         rd1 / (alpha * static_cast<long double>(d) * d)));
}

inline double dirichlet_torsion_ball(const BallGeometry& ball) {
    const int d = ball.dim;
    const long double R = ball.radius;
    const auto c = dimensional_constants(d);
    return static_cast<double>(c.sphere_area * std::pow(R, d + 2) /
                               (static_cast<long double>(d) * d * (d + 2)));
}

namespace detail {

// tau_DN(A_{tR,R}) / (pi/8 R^4) in d = 2:  1 - 4t^2 + 3t^4 - 4t^4 log t.
// The t -> 1 shell is the hard case: the closed form cancels to O((1-t)^3),
// so past t = 1/2 we switch to the exact series in s = 1-t,
//   16/3 s^3 - 16/3 s^4 + sum_{k>=5} 96 s^k / (k(k-1)(k-2)(k-3)(k-4)).
inline long double shell_factor_2d(long double t) {
    if (t == 0.0L) return 1.0L;
    if (t < 0.5L) {
        const long double t2 = t * t, t4 = t2 * t2;
        return 1.0L - 4.0L * t2 + 3.0L * t4 - 4.0L * t4 * std::log(t);
    }
    const long double s = 1.0L - t;
    const long double s3 = s * s * s;
    long double sum = 16.0L / 3.0L * s3 * (1.0L - s);
    long double sk = s3 * s * s;
    for (int k = 5; k < 4096; ++k) {
        const long double term = 96.0L * sk /
            (static_cast<long double>(k) * (k - 1) * (k - 2) * (k - 3) * (k - 4));
        const long double next = sum + term;
        if (next == sum) break;
        sum = next;
        sk *= s;
    }
    return sum;
}

// tau_DN(A_{tR,R}) / (|S^{d-1}| R^{d+2}) for d >= 3:
//   T_d(t) = 1/(d^2(d+2)) + t^{d+2}/(d^2-4) - t^d/d^2 - t^{2d}/(d^2(d-2)).
// T_d vanishes to third order at t = 1; since all exponents are integers,
// T_d(1-s) is an exact polynomial in s whose coefficients start at s^3.
inline long double shell_factor_nd(int d, long double t) {
    const long double d2 = static_cast<long double>(d) * d;
    if (t < 0.5L) {
        const long double td = std::pow(t, d);
        return 1.0L / (d2 * (d + 2)) + td * t * t / (d2 - 4.0L) - td / d2 -
               td * td / (d2 * (d - 2));
    }
    const long double s = 1.0L - t;
    long double sum = 0.0L;
    for (int k = 2 * d; k >= 3; --k) {
        const long double sign = (k % 2 == 0) ? 1.0L : -1.0L;
        const long double ck = sign * (stable::binomial(d + 2, k) / (d2 - 4.0L) -
                                       stable::binomial(d, k) / d2 -
                                       stable::binomial(2 * d, k) / (d2 * (d - 2)));
        sum = sum * s + ck;
    }
    return sum * s * s * s;
}

}  // namespace detail

// Torsion of the shell with Dirichlet data on the outer sphere and Neumann on
// the inner one.  One power-law branch serves all d >= 3; d = 2 carries the
// logarithmic branch with the R1 = 0 limit taken exactly.
inline double dn_torsion_shell(const ShellGeometry& shell) {
    const int d = shell.dim;
    const long double R2 = shell.outer_radius;
    const long double t = shell.inner_radius / shell.outer_radius;
    if (d == 2) {
        const long double r4 = R2 * R2 * R2 * R2;
        return static_cast<double>(std::numbers::pi_v<long double> / 8.0L * r4 *
                                   detail::shell_factor_2d(t));
    }
    const auto c = dimensional_constants(d);
    return static_cast<double>(static_cast<long double>(c.sphere_area) * std::pow(R2, d + 2) *
                               detail::shell_factor_nd(d, t));
}

// u(r) = (R^2-r^2)/(2d) + R/(alpha d) on the ball.
inline double radial_solution(const BallGeometry& ball, double alpha, double r) {
    if (alpha == 0.0)
        throw std::invalid_argument("radial_solution: alpha = 0 has no solution on the ball");
    if (r < 0.0 || r > ball.radius)
        throw std::out_of_range("radial_solution: r outside [0, R]");
    const double d = ball.dim;
    return (ball.radius * ball.radius - r * r) / (2.0 * d) + ball.radius / (alpha * d);
}

// Shell profile with phi(R2) = 0 and phi'(R1) = 0.  d >= 3 is the power-law
// solution from the ODE; d = 2 is the derived logarithmic profile
// phi(r) = (R2^2-r^2)/4 + (R1^2/2) log(r/R2), validated against the d = 2
// line of the shell torsion by quadrature.
inline double radial_solution(const ShellGeometry& shell, double r) {
    if (r < shell.inner_radius || r > shell.outer_radius)
        throw std::out_of_range("radial_solution: r outside [R1, R2]");
    const double d = shell.dim;
    const double R1 = shell.inner_radius, R2 = shell.outer_radius;
    if (shell.dim == 2) {
        if (R1 == 0.0) return (R2 * R2 - r * r) / 4.0;
        return (R2 * R2 - r * r) / 4.0 + R1 * R1 / 2.0 * std::log(r / R2);
    }
    return (R2 * R2 - r * r) / (2.0 * d) +
           std::pow(R1, d) / ((d - 2.0) * d) * (std::pow(R2, 2.0 - d) - std::pow(r, 2.0 - d));
}

// u_M = phi(R1), the supremum of the shell solution.
inline double shell_solution_max(const ShellGeometry& shell) {
    return radial_solution(shell, shell.inner_radius);
}

enum class SolutionSign { all_positive, all_negative, sign_changing };

// Sign of the ball solution as the formula dictates: positive for alpha > 0,
// negative exactly for alpha in [-2/R, 0), sign-changing below -2/R.  (The
// source text also lists (0, 1/R) as negative, which contradicts its own
// positivity statement; the formula settles it.)
inline SolutionSign ball_solution_sign(const BallGeometry& ball, double alpha) {
    if (alpha == 0.0)
        throw std::invalid_argument("ball_solution_sign: alpha = 0 has no solution");
    if (alpha > 0.0) return SolutionSign::all_positive;
    if (alpha >= -2.0 / ball.radius) return SolutionSign::all_negative;
    return SolutionSign::sign_changing;
}

}  // namespace torsion
