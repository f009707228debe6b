// The intermediate processes Z_beta (cross-sectional) and Z*_beta
// (iso-sectional): stochastic integrals of O-U functionals against a
// Poisson random measure with intensity psi1^2 (x1 x2)^{beta-1} dx1 dx2
// (resp. psi1 x^{beta-1} dx), simulated by truncating each coordinate to
// [delta, x_max] and summing integrated O-U products over the Poisson
// points.
//
// In the cross case no compensator is needed on the truncated region:
// conditionally on the coordinates, E_B z(tau; x1, x2) = 0, so the
// compensated and uncompensated truncated integrals coincide in law.  In
// the iso case E z*(tau; x) = tau/(2x) > 0 and for 1 < beta < 2 the
// truncated compensator psi1 (tau/2) int_delta^xmax x^{beta-2} dx is
// subtracted; for 0 < beta < 1 the measure is not compensated.

#pragma once

#include <cstdint>
#include <vector>

#include "rcar/rng.hpp"

namespace rcar {

struct OUGrid {
    double h = 1.0 / 256.0;
    double horizon = 1.0;

    std::int64_t points() const {
        return static_cast<std::int64_t>(std::ceil(horizon / h)) + 1;
    }
};

struct PoissonTruncation {
    double delta = 1e-3;
    double x_max = 1e3;

    void validate() const {
        if (!(delta > 0.0 && delta < x_max))
            throw std::invalid_argument("TruncationInvalid: need 0 < delta < x_max");
    }
};

struct ZPath {
    std::vector<double> taus;
    std::vector<double> values;
    enum class Kind { Cross, Iso } kind = Kind::Cross;
    double beta = 0.0;
    double psi1 = 0.0;
    PoissonTruncation trunc;
    OUGrid grid;
    double expected_count = 0.0;   // truncated intensity mass
    std::int64_t point_count = 0;  // realized Poisson count
    // Cross, 1 < beta < 3/2: L2 mass of z(1;.) outside the truncation box,
    // absolute and relative to sigma_inf^2 (NaN outside that range).
    double omitted_l2 = 0.0;
    double omitted_l2_rel = 0.0;
    // Iso: probability that at least one sub-delta point is missed.
    double miss_prob_below = 0.0;
};

// Stationary O-U path on the grid: Y(0) ~ N(0, 1/(2x)),
// Y(u+h) = e^{-xh} Y(u) + N(0, (1-e^{-2xh})/(2x)); marginals exact at
// every grid point.
std::vector<double> ou_path(double x, const OUGrid& grid, Rng& rng);

// Trapezoidal int_0^tau Y1 Y2 du; tau is snapped to the nearest grid point.
double z_cross(double tau, const std::vector<double>& path1, const std::vector<double>& path2,
               const OUGrid& grid);

// Trapezoidal int_0^tau Y^2 du.
double z_iso(double tau, const std::vector<double>& path, const OUGrid& grid);

// E z(tau; x1, x2)^2 = (1/(4 x1 x2)) int_{(0,tau]^2} e^{-(x1+x2)|u-v|} du dv.
double ez2_cross(double tau, double x1, double x2);

// var z*(tau; x) = (1/(8 x^4)) (2 x tau - 1 + e^{-2 x tau}).
double var_z_iso(double tau, double x);

// psi1^2 int_box E z(tau;.)^2 (x1 x2)^{beta-1} over [delta, x_max]^2.
double truncated_second_moment_cross(double beta, double psi1, const PoissonTruncation& trunc,
                                     double tau = 1.0);

// E Z_beta(t1) Z_beta(t2) = (sigma_inf^2/2)(t1^{2(2-b)} + t2^{2(2-b)}
//                            - |t2-t1|^{2(2-b)}),  1 < beta < 3/2.
double cov_Z_cross(double tau1, double tau2, double beta, double psi1);

// One sample path of Z_beta at the requested taus.  Points with x h > 1/4
// are simulated on a locally refined sub-grid with step 1/(4x).
ZPath simulate_Z_cross(double beta, double psi1, const std::vector<double>& taus,
                       const PoissonTruncation& trunc, const OUGrid& grid, std::uint64_t seed);

// One draw of Z*_beta(tau); diagnostics optionally returned through `info`.
double simulate_Z_iso(double beta, double psi1, double tau, const PoissonTruncation& trunc,
                      const OUGrid& grid, std::uint64_t seed, ZPath* info = nullptr);

}  // namespace rcar
