#include "rcar/intermediate.hpp"

#include <cmath>
#include <limits>

#include "rcar/limit_laws.hpp"
#include "rcar/quadrature.hpp"

namespace rcar {

namespace {

// x^{beta-1} dx on [delta, x_max] normalized: inverse-CDF draw.
double draw_coordinate(double u, double beta, const PoissonTruncation& tr) {
    const double lo = std::pow(tr.delta, beta);
    const double hi = std::pow(tr.x_max, beta);
    return std::pow(lo + u * (hi - lo), 1.0 / beta);
}

double coordinate_mass(double beta, const PoissonTruncation& tr) {
    return (std::pow(tr.x_max, beta) - std::pow(tr.delta, beta)) / beta;
}

// Refined per-point grid: stiff components (x h > 1/4) decorrelate inside
// one global step and would otherwise bias the trapezoidal variance.
OUGrid point_grid(double x, const OUGrid& grid) {
    OUGrid g = grid;
    if (x * g.h > 0.25) g.h = 0.25 / x;
    return g;
}

// e^{-s} - 1 + s, series-stable for small s.
double expm1_plus(double s) {
    if (s < 1e-4) return s * s * (0.5 - s / 6.0 + s * s / 24.0);
    return std::expm1(-s) + s;
}

}  // namespace

std::vector<double> ou_path(double x, const OUGrid& grid, Rng& rng) {
    if (!(x > 0.0)) throw std::invalid_argument("ou_path: x must be > 0");
    const std::int64_t m = grid.points();
    std::vector<double> path(static_cast<std::size_t>(m));
    const double sd0 = 1.0 / std::sqrt(2.0 * x);
    const double decay = std::exp(-x * grid.h);
    const double sd_step = std::sqrt((1.0 - decay * decay) / (2.0 * x));
    double y = sd0 * rng.normal();
    path[0] = y;
    for (std::int64_t j = 1; j < m; ++j) {
        y = decay * y + sd_step * rng.normal();
        path[j] = y;
    }
    return path;
}

namespace {

std::int64_t tau_index(double tau, const OUGrid& grid) {
    if (tau < 0.0 || tau > grid.horizon * (1.0 + 1e-9))
        throw std::out_of_range("TauBeyondHorizon: tau must lie in [0, horizon]");
    const auto idx = static_cast<std::int64_t>(std::llround(tau / grid.h));
    return std::min(idx, grid.points() - 1);
}

}  // namespace

double z_cross(double tau, const std::vector<double>& path1, const std::vector<double>& path2,
               const OUGrid& grid) {
    const std::int64_t m = tau_index(tau, grid);
    if (m == 0) return 0.0;
    double acc = 0.5 * (path1[0] * path2[0] + path1[m] * path2[m]);
    for (std::int64_t j = 1; j < m; ++j) acc += path1[j] * path2[j];
    return acc * grid.h;
}

double z_iso(double tau, const std::vector<double>& path, const OUGrid& grid) {
    const std::int64_t m = tau_index(tau, grid);
    if (m == 0) return 0.0;
    double acc = 0.5 * (path[0] * path[0] + path[m] * path[m]);
    for (std::int64_t j = 1; j < m; ++j) acc += path[j] * path[j];
    return acc * grid.h;
}

double ez2_cross(double tau, double x1, double x2) {
    const double s = x1 + x2;
    // int_{(0,tau]^2} e^{-s|u-v|} du dv = (2/s^2)(e^{-s tau} - 1 + s tau)
    const double g = 2.0 / (s * s) * expm1_plus(s * tau);
    return g / (4.0 * x1 * x2);
}

double var_z_iso(double tau, double x) {
    return expm1_plus(2.0 * x * tau) / (8.0 * x * x * x * x);
}

double truncated_second_moment_cross(double beta, double psi1, const PoissonTruncation& trunc,
                                     double tau) {
    trunc.validate();
    auto outer = [&](double x1) {
        auto inner = [&](double x2) {
            return ez2_cross(tau, x1, x2) * std::pow(x1 * x2, beta - 1.0);
        };
        return integrate(inner, trunc.delta, trunc.x_max, 1e-12, 1e-9);
    };
    return psi1 * psi1 * integrate(outer, trunc.delta, trunc.x_max, 1e-10, 1e-8);
}

double cov_Z_cross(double tau1, double tau2, double beta, double psi1) {
    if (!(beta > 1.0 && beta < 1.5))
        throw std::domain_error("BetaOutOfRange: cov of Z_beta needs 1 < beta < 3/2");
    if (tau1 < 0.0 || tau2 < 0.0) throw std::invalid_argument("cov_Z_cross: taus must be >= 0");
    const double s2 = const_sigma_inf2(beta, psi1);
    const double e = 2.0 * (2.0 - beta);
    return 0.5 * s2 *
           (std::pow(tau1, e) + std::pow(tau2, e) - std::pow(std::fabs(tau2 - tau1), e));
}

ZPath simulate_Z_cross(double beta, double psi1, const std::vector<double>& taus,
                       const PoissonTruncation& trunc, const OUGrid& grid, std::uint64_t seed) {
    if (!(beta > 0.0 && beta < 1.5))
        throw std::domain_error("BetaOutOfRange: Z_beta needs 0 < beta < 3/2");
    trunc.validate();
    ZPath out;
    out.kind = ZPath::Kind::Cross;
    out.taus = taus;
    out.values.assign(taus.size(), 0.0);
    out.beta = beta;
    out.psi1 = psi1;
    out.trunc = trunc;
    out.grid = grid;
    const double m1 = coordinate_mass(beta, trunc);
    out.expected_count = psi1 * psi1 * m1 * m1;

    Rng count_rng(seed, stream_tag::kPoissonCount);
    const std::int64_t k = count_rng.poisson(out.expected_count);
    out.point_count = k;
    for (std::int64_t j = 0; j < k; ++j) {
        Rng rng(seed, stream_tag::kPoissonPoint, static_cast<std::uint64_t>(j));
        const double x1 = draw_coordinate(rng.uniform01(), beta, trunc);
        const double x2 = draw_coordinate(rng.uniform01(), beta, trunc);
        const OUGrid g = point_grid(std::max(x1, x2), grid);
        const auto p1 = ou_path(x1, g, rng);
        const auto p2 = ou_path(x2, g, rng);
        for (std::size_t i = 0; i < taus.size(); ++i)
            out.values[i] += z_cross(taus[i], p1, p2, g);
    }

    if (beta > 1.0) {
        const double full = const_sigma_inf2(beta, psi1);
        const double box = truncated_second_moment_cross(beta, psi1, trunc, 1.0);
        out.omitted_l2 = full - box;
        out.omitted_l2_rel = out.omitted_l2 / full;
    } else {
        out.omitted_l2 = std::numeric_limits<double>::quiet_NaN();
        out.omitted_l2_rel = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

double simulate_Z_iso(double beta, double psi1, double tau, const PoissonTruncation& trunc,
                      const OUGrid& grid, std::uint64_t seed, ZPath* info) {
    if (!(beta > 0.0 && beta < 2.0) || beta == 1.0)
        throw std::domain_error("BetaOutOfRange: Z*_beta needs 0 < beta < 2, beta != 1");
    trunc.validate();
    const double mass = psi1 * coordinate_mass(beta, trunc);
    Rng count_rng(seed, stream_tag::kPoissonCount);
    const std::int64_t k = count_rng.poisson(mass);
    double value = 0.0;
    for (std::int64_t j = 0; j < k; ++j) {
        Rng rng(seed, stream_tag::kPoissonPoint, static_cast<std::uint64_t>(j));
        const double x = draw_coordinate(rng.uniform01(), beta, trunc);
        const OUGrid g = point_grid(x, grid);
        const auto p = ou_path(x, g, rng);
        value += z_iso(tau, p, g);
    }
    if (beta > 1.0) {
        // E z*(tau; x) = tau/(2x) integrated over the truncated intensity.
        const double comp = psi1 * 0.5 * tau *
                            (std::pow(trunc.x_max, beta - 1.0) - std::pow(trunc.delta, beta - 1.0)) /
                            (beta - 1.0);
        value -= comp;
    }
    if (info) {
        info->kind = ZPath::Kind::Iso;
        info->taus = {tau};
        info->values = {value};
        info->beta = beta;
        info->psi1 = psi1;
        info->trunc = trunc;
        info->grid = grid;
        info->expected_count = mass;
        info->point_count = k;
        info->omitted_l2 = std::numeric_limits<double>::quiet_NaN();
        info->omitted_l2_rel = std::numeric_limits<double>::quiet_NaN();
        info->miss_prob_below = -std::expm1(-psi1 * std::pow(trunc.delta, beta) / beta);
    }
    return value;
}

}  // namespace rcar
