// Adaptive quadrature: 15-point Gauss–Kronrod with interval bisection,
// plus an adaptive Simpson used by the characteristic-function inversion.

#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace rcar {

namespace detail {

// QUADPACK dqk15 nodes and weights (positive half).
inline constexpr double kGk15X[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
inline constexpr double kGk15Wk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double kGk15Wg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct Gk15Result {
    double integral;
    double error;
};

template <class F>
Gk15Result gk15(const F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * kGk15X[i]);
        fv[14 - i] = f(c + h * kGk15X[i]);
    }
    fv[7] = f(c);
    double ik = 0.0, ig = 0.0;
    for (int i = 0; i < 7; ++i) ik += kGk15Wk[i] * (fv[i] + fv[14 - i]);
    ik += kGk15Wk[7] * fv[7];
    for (int i = 0; i < 3; ++i) ig += kGk15Wg[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
    ig += kGk15Wg[3] * fv[7];
    ik *= h;
    ig *= h;
    return {ik, std::fabs(ik - ig)};
}

template <class F>
double gk_adaptive(const F& f, double a, double b, double abs_tol, double rel_tol, int depth) {
    const auto r = gk15(f, a, b);
    const double tol = std::max(abs_tol, rel_tol * std::fabs(r.integral));
    if (r.error <= tol || depth >= 48 || !(b - a > 0.0)) return r.integral;
    const double m = 0.5 * (a + b);
    return gk_adaptive(f, a, m, 0.5 * abs_tol, rel_tol, depth + 1) +
           gk_adaptive(f, m, b, 0.5 * abs_tol, rel_tol, depth + 1);
}

}  // namespace detail

// Adaptive Gauss–Kronrod on a finite interval.
template <class F>
double integrate(const F& f, double a, double b, double abs_tol = 1e-10,
                 double rel_tol = 1e-10) {
    if (a == b) return 0.0;
    return detail::gk_adaptive(f, a, b, abs_tol, rel_tol, 0);
}

// Integral over [a, inf) via x = a + t/(1-t).
template <class F>
double integrate_to_inf(const F& f, double a, double abs_tol = 1e-10,
                        double rel_tol = 1e-10) {
    auto g = [&](double t) {
        const double om = 1.0 - t;
        const double x = a + t / om;
        return f(x) / (om * om);
    };
    return detail::gk_adaptive(g, 0.0, 1.0, abs_tol, rel_tol, 0);
}

// Adaptive Simpson with absolute step control; throws on non-convergence.
template <class F>
double integrate_simpson(const F& f, double a, double b, double tol = 1e-9,
                         int max_depth = 40) {
    struct Rec {
        const F& f;
        int max_depth;
        bool converged = true;
        double run(double a, double fa, double b, double fb, double fm, double whole,
                   double tol, int depth) {
            const double m = 0.5 * (a + b);
            const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
            const double flm = f(lm), frm = f(rm);
            const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            const double delta = left + right - whole;
            if (std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
            if (depth >= max_depth) {
                converged = false;
                return left + right;
            }
            return run(a, fa, m, fm, flm, left, 0.5 * tol, depth + 1) +
                   run(m, fm, b, fb, frm, right, 0.5 * tol, depth + 1);
        }
    };
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    Rec rec{f, max_depth};
    const double v = rec.run(a, fa, b, fb, fm, whole, tol, 0);
    if (!rec.converged)
        throw std::runtime_error("NumericalFailure: adaptive Simpson did not converge");
    return v;
}

}  // namespace rcar
