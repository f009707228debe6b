// RCAR(1) panel model: X(t) = a X(t-1) + eps(t) with random coefficient
// a in [0,1) drawn once per row.  The mixing law of a has density
// psi(x)(1-x)^{beta-1} near the unit root; the BetaSquared variant means
// a^2 ~ Beta(alpha, beta), for which psi(1) = 2^beta / B(alpha, beta).

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rcar/rng.hpp"

namespace rcar {

// a is capped at 1 - 2^-40 after sampling so 1/(1-a) stays finite.
inline constexpr double kCoefficientCap = 1.0 - 0x1.0p-40;

// Tail tolerance of the truncated moving-average stationary start.
inline constexpr double kStationaryTol = 1e-10;

struct MixingLaw {
    enum class Kind { BetaSquared, Degenerate };
    Kind kind = Kind::Degenerate;
    double alpha = 0.0;  // BetaSquared only
    double beta = 0.0;   // BetaSquared only; tail exponent
    double a0 = 0.0;     // Degenerate only

    static MixingLaw beta_squared(double alpha, double beta) {
        if (!(alpha > 0.0) || !(beta > 0.0))
            throw std::invalid_argument("MixingLaw: BetaSquared needs alpha > 0, beta > 0");
        MixingLaw m;
        m.kind = Kind::BetaSquared;
        m.alpha = alpha;
        m.beta = beta;
        return m;
    }

    static MixingLaw degenerate(double a0) {
        if (!(a0 >= 0.0 && a0 < 1.0))
            throw std::invalid_argument("MixingLaw: Degenerate needs a0 in [0,1)");
        MixingLaw m;
        m.kind = Kind::Degenerate;
        m.a0 = a0;
        return m;
    }

    bool has_tail() const { return kind == Kind::BetaSquared; }

    // Tail exponent beta of (1-a) near the unit root.
    double tail_beta() const;

    // Density of a on [0,1); for BetaSquared equals
    // 2 x^{2 alpha - 1} (1+x)^{beta-1} (1-x)^{beta-1} / B(alpha, beta).
    double density(double x) const;
};

// lim_{x->1} psi(x); BetaSquared: 2^beta / B(alpha, beta).
double psi_at_one(const MixingLaw& law);

struct InnovationLaw {
    enum class Kind { Gaussian, StudentT, Rademacher };
    Kind kind = Kind::Gaussian;
    double dof = 0.0;  // StudentT only, > 4

    static InnovationLaw gaussian() { return {}; }

    static InnovationLaw student_t(double dof) {
        if (!(dof > 4.0)) throw std::invalid_argument("InnovationLaw: StudentT needs dof > 4");
        InnovationLaw l;
        l.kind = Kind::StudentT;
        l.dof = dof;
        return l;
    }

    static InnovationLaw rademacher() {
        InnovationLaw l;
        l.kind = Kind::Rademacher;
        return l;
    }

    // 4th cumulant: 0 (Gaussian), 6/(dof-4) (standardized StudentT), -2 (Rademacher).
    double cum4() const;

    // Mean-zero unit-variance draw.
    double draw(Rng& rng) const;
};

struct Panel {
    std::int64_t n_rows = 0;
    std::int64_t n_cols = 0;
    std::vector<double> values;        // row-major, n_rows * n_cols
    std::vector<double> coefficients;  // per-row a_i
    std::uint64_t seed = 0;
    MixingLaw mixing;
    InnovationLaw innovation;

    std::span<const double> row(std::int64_t i) const {
        return {values.data() + i * n_cols, static_cast<std::size_t>(n_cols)};
    }
};

// One draw of a; BetaSquared returns sqrt(u) with u ~ Beta(alpha, beta),
// capped at kCoefficientCap.
double sample_coefficient(const MixingLaw& law, Rng& rng);

// Draw of X(0) from the conditional stationary law given a.  Gaussian
// innovations use the exact N(0, 1/(1-a^2)) draw; other laws use the
// moving-average sum truncated once the omitted tail sd drops below tol.
double stationary_initial(double a, const InnovationLaw& innovation, Rng& rng,
                          double tol = kStationaryTol);

// Row i of the panel rooted at `seed`: draws a_i, the stationary start,
// then iterates the recursion n times into out[0..n).  Every row uses the
// independent stream (seed, kRow, i), so rows can be produced in any order.
double generate_row(const MixingLaw& mixing, const InnovationLaw& innovation,
                    std::uint64_t seed, std::int64_t i, std::int64_t n, double* out);

Panel simulate_panel(std::int64_t n_rows, std::int64_t n_cols, const MixingLaw& mixing,
                     const InnovationLaw& innovation, std::uint64_t seed);

// gamma(t) = E a^{|t|} / (1 - a^2); adaptive quadrature over the mixing
// density (closed form for Degenerate).  Requires beta > 1.
double true_gamma(std::int64_t t, const MixingLaw& mixing);

// (psi1/2) Gamma(beta-1) t^{-(beta-1)}, the t -> inf asymptote of gamma(t).
double gamma_asymptote(std::int64_t t, double beta, double psi1);

}  // namespace rcar
