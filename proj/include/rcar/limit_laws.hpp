// Closed-form limit-law constants and the regime classifier.
//
// The classifier resolves the growth exponent rho (N ~ c n^rho) against the
// regime boundaries of each statistic -- {2b, b, 2b/(4b-1), 2b/(5-4b)} for
// cross-sectional covariances, {b} for temporal covariances and the sample
// mean -- and returns the matching case with its normalization exponents,
// limit law and centering rule.

#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>

#include "rcar/panel.hpp"

namespace rcar {

inline constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

enum class Statistic { CrossCov, TemporalCov, Mean };

struct GrowthRule {
    double rho = 1.0;
    // Resolves the comparison when rho lands exactly on a boundary b:
    // Above reads N/n^b -> inf, At reads N/n^b -> c in (0,inf), Below -> 0.
    enum class Comparator { Below, At, Above } comparator = Comparator::At;
};

struct LimitLaw {
    enum class Kind {
        Gaussian,                    // N(0, variance)
        SymmetricStable,             // chf exp(-c |theta|^alpha)
        AsymmetricStable,            // chf exp(-c |theta|^a (1 - i sign tan(pi a/2)))
        NegSquaredSymmetricStable,   // -(X)^2 with X symmetric stable
        SubordinatedBM,              // A^{1/2} B(tau), A positive (2b/3)-stable
        IntermediatePoisson
    };
    enum class PoissonKind { Cross, Iso, Mean };

    Kind kind = Kind::Gaussian;
    double variance = kUnset;   // Gaussian
    double index = kUnset;      // stable index alpha
    double scale_c = kUnset;    // chf scale c (not the S1 sigma)
    double sigma0 = kUnset;     // SubordinatedBM
    PoissonKind poisson_kind = PoissonKind::Cross;
    double lambda_inf = kUnset;  // filled by the caller from realized (N,n)

    static LimitLaw gaussian(double variance);
    static LimitLaw symmetric_stable(double index, double scale_c);
    static LimitLaw asymmetric_stable(double index, double scale_c);
    static LimitLaw neg_squared(double base_index, double base_scale_c);
    static LimitLaw intermediate(PoissonKind kind);
};

struct RegimeCase {
    Statistic statistic = Statistic::CrossCov;
    std::string case_id;
    double p_N = 0.0;  // statistic scaled by N^{p_N} n^{p_n}
    double p_n = 0.0;
    // C3.5-ii only: additionally divide by log^{1/(2 beta)}(lambda_{N,n}).
    bool log_factor = false;
    LimitLaw limit;
    enum class Centering { None, TrueGamma, TrueGammaIfBetaGt1 } centering = Centering::None;
    double beta = 0.0;
};

// sigma^2_inf = psi1^2 Gamma(beta-1)^2 / (4 (2-beta)(3-2beta)),  1 < beta < 3/2.
double const_sigma_inf2(double beta, double psi1);

// c_inf = psi1^2 2^{1-2beta} Gamma(beta+1/2) Gamma(1-beta) / sqrt(pi),  0 < beta < 1.
double const_c_inf(double beta, double psi1);

// sigma_0 = psi1^2 2^{-2beta/3} Gamma(1-2beta/3) B(beta/3,beta/3) / (2beta),  0 < beta < 3/2.
double const_sigma0(double beta, double psi1);

// c+ = psi1 Gamma(2-beta) cos(pi beta/2) / (2^beta beta (1-beta)),  0 < beta < 2, beta != 1.
double const_c_plus(double beta, double psi1);

// c* = c+ E|Z|^{2 beta}.
double const_c_star(double beta, double psi1);

struct MeanLimitConstants {
    std::optional<double> sigma_bar2_beta;  // 1 < beta < 2
    std::optional<double> K_bar;            // 0 < beta < 1
    std::optional<double> k_bar;            // 0 < beta < 2
    std::optional<double> sigma_bar2;       // beta > 2, needs the mixing law
};

MeanLimitConstants const_mean_limits(double beta, double psi1,
                                     const std::optional<MixingLaw>& mixing = {});

// sigma^2 = E A_12 by double quadrature over the product mixing law; needs
// beta > 3/2 (or a Degenerate law).
double const_sigma2_cross(const MixingLaw& mixing, const InnovationLaw& innovation);

// (sigma*_t)^2 = var(a^{|t|} / (1-a^2)); needs beta > 2 (0 for Degenerate).
double const_sigma_star_t2(const MixingLaw& mixing, std::int64_t t);

// A_ij of the conditional long-run variance: (1+a_i a_j) /
// ((1-a_i^2)(1-a_j^2)(1-a_i a_j)) off-row; the cum4 form on-row.
double conditional_longrun_var(double a_i, double a_j, double cum4, bool same_row);

// A^{t,0}_ii = ((1+a^2)/(1-a^2)) ((1+a^{2|t|})/(1-a^2)^2
//              + a^{2|t|}(2|t|+cum4)/(1-a^4)).
double longrun_var_A_tt(double a, std::int64_t t, double cum4);

// var bound: C_ij n^2 / ((1-a_i)(1-a_j)) min{1, 1/(n(2-a_i-a_j))},
// C_ij = 4 off-row, 2(2+|cum4|) on-row.
double longrun_var_bound(double a_i, double a_j, std::int64_t n, double cum4, bool same_row);

// Limit variances that need the full mixing law (E A_12, (sigma*_t)^2,
// E(1-a)^{-2}) are left unset when `mixing` is absent.
RegimeCase classify(Statistic statistic, double beta, GrowthRule growth, double psi1,
                    const std::optional<MixingLaw>& mixing = {}, std::int64_t t = 0);

}  // namespace rcar
