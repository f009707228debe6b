#include "rcar/limit_laws.hpp"

#include <cmath>
#include <functional>

#include "rcar/quadrature.hpp"
#include "rcar/special.hpp"

namespace rcar {

LimitLaw LimitLaw::gaussian(double variance) {
    LimitLaw l;
    l.kind = Kind::Gaussian;
    l.variance = variance;
    return l;
}

LimitLaw LimitLaw::symmetric_stable(double index, double scale_c) {
    LimitLaw l;
    l.kind = Kind::SymmetricStable;
    l.index = index;
    l.scale_c = scale_c;
    return l;
}

LimitLaw LimitLaw::asymmetric_stable(double index, double scale_c) {
    LimitLaw l;
    l.kind = Kind::AsymmetricStable;
    l.index = index;
    l.scale_c = scale_c;
    return l;
}

LimitLaw LimitLaw::neg_squared(double base_index, double base_scale_c) {
    LimitLaw l;
    l.kind = Kind::NegSquaredSymmetricStable;
    l.index = base_index;
    l.scale_c = base_scale_c;
    return l;
}

LimitLaw LimitLaw::intermediate(PoissonKind kind) {
    LimitLaw l;
    l.kind = Kind::IntermediatePoisson;
    l.poisson_kind = kind;
    return l;
}

double const_sigma_inf2(double beta, double psi1) {
    if (!(beta > 1.0 && beta < 1.5))
        throw std::domain_error("BetaOutOfRange: sigma_inf^2 needs 1 < beta < 3/2");
    const double g = std::tgamma(beta - 1.0);
    return psi1 * psi1 * g * g / (4.0 * (2.0 - beta) * (3.0 - 2.0 * beta));
}

double const_c_inf(double beta, double psi1) {
    if (!(beta > 0.0 && beta < 1.0))
        throw std::domain_error("BetaOutOfRange: c_inf needs 0 < beta < 1");
    return psi1 * psi1 * std::pow(2.0, 1.0 - 2.0 * beta) * std::tgamma(beta + 0.5) *
           std::tgamma(1.0 - beta) / std::sqrt(M_PI);
}

double const_sigma0(double beta, double psi1) {
    if (!(beta > 0.0 && beta < 1.5))
        throw std::domain_error("BetaOutOfRange: sigma_0 needs 0 < beta < 3/2");
    return psi1 * psi1 * std::pow(2.0, -2.0 * beta / 3.0) * std::tgamma(1.0 - 2.0 * beta / 3.0) *
           beta_fn(beta / 3.0, beta / 3.0) / (2.0 * beta);
}

double const_c_plus(double beta, double psi1) {
    if (!(beta > 0.0 && beta < 2.0) || beta == 1.0)
        throw std::domain_error("BetaOutOfRange: c+ needs 0 < beta < 2, beta != 1");
    // cos(pi beta/2) and (1-beta) change sign together across beta = 1.
    return psi1 * std::tgamma(2.0 - beta) * std::cos(M_PI * beta / 2.0) /
           (std::pow(2.0, beta) * beta * (1.0 - beta));
}

double const_c_star(double beta, double psi1) {
    return const_c_plus(beta, psi1) * gaussian_abs_moment_2beta(beta);
}

namespace {

// int g(a) phi(a) da over the mixing density with the endpoint
// substitution a = 1 - e^{-v}; `weight_shift` subtracts powers of (1-a)
// already folded into g, i.e. integrates g(a) psi(a) (1-a)^{beta-1-shift} da.
double mixing_integral(const MixingLaw& m, double shift,
                       const std::function<double(double)>& g) {
    const double beta = m.beta;
    auto f = [&](double v) {
        const double e = std::exp(-v);
        const double a = 1.0 - e;
        if (a <= 0.0) return 0.0;
        const double psi = 2.0 * std::pow(a, 2.0 * m.alpha - 1.0) *
                           std::pow(1.0 + a, beta - 1.0) / beta_fn(m.alpha, beta);
        return g(a) * psi * std::exp(-v * (beta - shift));
    };
    return integrate_to_inf(f, 0.0, 1e-10, 1e-12);
}

}  // namespace

MeanLimitConstants const_mean_limits(double beta, double psi1,
                                     const std::optional<MixingLaw>& mixing) {
    MeanLimitConstants out;
    if (beta > 1.0 && beta < 2.0)
        out.sigma_bar2_beta = psi1 * std::tgamma(beta - 1.0) / ((3.0 - beta) * (2.0 - beta));
    if (beta > 0.0 && beta < 1.0)
        out.K_bar = psi1 * std::pow(4.0, -beta) * std::tgamma(1.0 - beta) / beta;
    if (beta > 0.0 && beta < 2.0)
        out.k_bar = psi1 * std::pow(2.0, -beta / 2.0) * std::tgamma(1.0 - beta / 2.0) / beta;
    if (beta > 2.0 && mixing) {
        if (mixing->kind == MixingLaw::Kind::Degenerate) {
            const double d = 1.0 - mixing->a0;
            out.sigma_bar2 = 1.0 / (d * d);
        } else {
            // E (1-a)^{-2}
            out.sigma_bar2 = mixing_integral(*mixing, 2.0, [](double) { return 1.0; });
        }
    }
    return out;
}

double const_sigma2_cross(const MixingLaw& mixing, const InnovationLaw&) {
    if (mixing.kind == MixingLaw::Kind::Degenerate) {
        const double a = mixing.a0;
        return (1.0 + a * a) / ((1.0 - a * a) * (1.0 - a * a) * (1.0 - a * a));
    }
    const double beta = mixing.beta;
    if (!(beta > 1.5)) throw std::domain_error("NonIntegrable: E A_12 needs beta > 3/2");
    auto outer = [&](double a1) {
        auto inner = [&](double a2) {
            return (1.0 + a1 * a2) /
                   ((1.0 - a1 * a1) * (1.0 - a2 * a2) * (1.0 - a1 * a2));
        };
        return mixing_integral(mixing, 0.0, inner);
    };
    return mixing_integral(mixing, 0.0, [&](double a1) { return outer(a1); });
}

double const_sigma_star_t2(const MixingLaw& mixing, std::int64_t t) {
    if (mixing.kind == MixingLaw::Kind::Degenerate) return 0.0;
    if (!(mixing.beta > 2.0))
        throw std::domain_error("NonIntegrable: (sigma*_t)^2 needs beta > 2");
    const double lag = static_cast<double>(t < 0 ? -t : t);
    // first moment: a^t/(1-a^2) = a^t/(1+a) * (1-a)^{-1}
    const double m1 = mixing_integral(mixing, 1.0,
                                      [&](double a) { return std::pow(a, lag) / (1.0 + a); });
    const double m2 = mixing_integral(mixing, 2.0, [&](double a) {
        const double q = std::pow(a, lag) / (1.0 + a);
        return q * q;
    });
    return m2 - m1 * m1;
}

double conditional_longrun_var(double a_i, double a_j, double cum4, bool same_row) {
    if (same_row) return longrun_var_A_tt(a_i, 0, cum4);
    return (1.0 + a_i * a_j) / ((1.0 - a_i * a_i) * (1.0 - a_j * a_j) * (1.0 - a_i * a_j));
}

double longrun_var_A_tt(double a, std::int64_t t, double cum4) {
    const double lag = static_cast<double>(t < 0 ? -t : t);
    const double a2 = a * a;
    const double a2t = std::pow(a, 2.0 * lag);
    return (1.0 + a2) / (1.0 - a2) *
           ((1.0 + a2t) / ((1.0 - a2) * (1.0 - a2)) + a2t * (2.0 * lag + cum4) / (1.0 - a2 * a2));
}

double longrun_var_bound(double a_i, double a_j, std::int64_t n, double cum4, bool same_row) {
    const double c = same_row ? 2.0 * (2.0 + std::fabs(cum4)) : 4.0;
    const double nn = static_cast<double>(n);
    return c * nn * nn / ((1.0 - a_i) * (1.0 - a_j)) *
           std::min(1.0, 1.0 / (nn * (2.0 - a_i - a_j)));
}

namespace {

// -1 below the boundary, 0 at it, +1 above; ties resolved by the comparator.
int side(double rho, double boundary, GrowthRule::Comparator cmp) {
    if (rho < boundary) return -1;
    if (rho > boundary) return +1;
    switch (cmp) {
        case GrowthRule::Comparator::Below: return -1;
        case GrowthRule::Comparator::At: return 0;
        case GrowthRule::Comparator::Above: return +1;
    }
    return 0;
}

RegimeCase make_case(Statistic st, std::string id, double p_N, double p_n, LimitLaw law,
                     RegimeCase::Centering centering, double beta, bool log_factor = false) {
    RegimeCase rc;
    rc.statistic = st;
    rc.case_id = std::move(id);
    rc.p_N = p_N;
    rc.p_n = p_n;
    rc.log_factor = log_factor;
    rc.limit = law;
    rc.centering = centering;
    rc.beta = beta;
    return rc;
}

RegimeCase classify_cross(double beta, GrowthRule g, double psi1,
                          const std::optional<MixingLaw>& mixing) {
    const auto st = Statistic::CrossCov;
    const auto none = RegimeCase::Centering::None;
    if (beta == 0.5 || beta == 0.75)
        throw std::domain_error("UnsupportedBeta: cross-sectional cases omit beta in {1/2, 3/4}");
    if (beta > 1.5) {
        double var = kUnset;
        if (mixing) var = const_sigma2_cross(*mixing, InnovationLaw::gaussian());
        return make_case(st, "C3.5-xi", 0.5, 0.5, LimitLaw::gaussian(var), none, beta);
    }
    const MeanLimitConstants mc = const_mean_limits(beta, psi1);
    const int s2b = side(g.rho, 2.0 * beta, g.comparator);
    if (s2b > 0) {
        if (beta > 1.0)
            return make_case(st, "C3.5-i", 0.5, beta - 1.0,
                             LimitLaw::gaussian(const_sigma_inf2(beta, psi1)), none, beta);
        if (beta > 0.5)
            return make_case(st, "C3.5-ii", 1.0 - 1.0 / (2.0 * beta), 0.0,
                             LimitLaw::symmetric_stable(2.0 * beta, const_c_inf(beta, psi1)),
                             none, beta, /*log_factor=*/true);
        return make_case(st, "C3.5-iii", 2.0 - 1.0 / beta, 0.0,
                         LimitLaw::neg_squared(2.0 * beta, *mc.K_bar), none, beta);
    }
    const LimitLaw w_law =
        LimitLaw::symmetric_stable(4.0 * beta / 3.0,
                                   const_sigma0(beta, psi1) / std::pow(2.0, 2.0 * beta / 3.0));
    const double w_pN = 1.0 - 3.0 / (4.0 * beta);
    if (s2b == 0) {
        // Critical rate N ~ n^{2 beta}: the partial-sum part dominates for
        // beta > 1/2 and the limit is the intermediate process; below 1/2
        // the squared sample mean keeps dominating.
        if (beta > 0.5)
            return make_case(st, "T3.1-iii", w_pN, 0.5,
                             LimitLaw::intermediate(LimitLaw::PoissonKind::Cross), none, beta);
        return make_case(st, "C3.5-iii", 2.0 - 1.0 / beta, 0.0,
                         LimitLaw::neg_squared(2.0 * beta, *mc.K_bar), none, beta);
    }
    // rho < 2 beta.
    const int sb = side(g.rho, beta, g.comparator);
    if (beta > 0.75) {
        if (sb >= 0) return make_case(st, "C3.5-iv", w_pN, 0.5, w_law, none, beta);
        return make_case(st, "C3.5-viii", w_pN, 0.5, w_law, none, beta);
    }
    if (beta > 0.5) {
        const int r1 = side(g.rho, 2.0 * beta / (4.0 * beta - 1.0), g.comparator);
        if (r1 >= 0) return make_case(st, "C3.5-v", w_pN, 0.5, w_law, none, beta);
        if (sb > 0)
            return make_case(st, "C3.5-vi", 2.0 - 1.0 / beta, 0.0,
                             LimitLaw::neg_squared(2.0 * beta, *mc.K_bar), none, beta);
        if (sb == 0)
            return make_case(st, "P3.4-int^2", 2.0 - 2.0 / beta, 1.0,
                             LimitLaw::intermediate(LimitLaw::PoissonKind::Mean), none, beta);
        const int r2 = side(g.rho, 2.0 * beta / (5.0 - 4.0 * beta), g.comparator);
        if (r2 >= 0)
            return make_case(st, "C3.5-ix", 2.0 - 2.0 / beta, 0.0,
                             LimitLaw::neg_squared(beta, *mc.k_bar), none, beta);
        return make_case(st, "C3.5-x", w_pN, 0.5, w_law, none, beta);
    }
    // 0 < beta < 1/2
    if (sb > 0)
        return make_case(st, "C3.5-vii", 2.0 - 1.0 / beta, 0.0,
                         LimitLaw::neg_squared(2.0 * beta, *mc.K_bar), none, beta);
    if (sb == 0)
        return make_case(st, "P3.4-int^2", 2.0 - 2.0 / beta, 1.0,
                         LimitLaw::intermediate(LimitLaw::PoissonKind::Mean), none, beta);
    const int r2 = side(g.rho, 2.0 * beta / (5.0 - 4.0 * beta), g.comparator);
    if (r2 >= 0)
        return make_case(st, "C3.5-ix", 2.0 - 2.0 / beta, 0.0,
                         LimitLaw::neg_squared(beta, *mc.k_bar), none, beta);
    return make_case(st, "C3.5-x", w_pN, 0.5, w_law, none, beta);
}

RegimeCase classify_temporal(double beta, GrowthRule g, double psi1,
                             const std::optional<MixingLaw>& mixing, std::int64_t t) {
    const auto st = Statistic::TemporalCov;
    if (beta > 2.0) {
        double var = kUnset;
        if (mixing) var = const_sigma_star_t2(*mixing, t);
        return make_case(st, "T4.2", 0.5, 0.0, LimitLaw::gaussian(var),
                         RegimeCase::Centering::TrueGamma, beta);
    }
    const auto centering = RegimeCase::Centering::TrueGammaIfBetaGt1;
    const double pN = 1.0 - 1.0 / beta;
    const int sb = side(g.rho, beta, g.comparator);
    if (sb > 0)
        return make_case(st, "T4.1-i", pN, 0.0,
                         LimitLaw::asymmetric_stable(beta, const_c_star(beta, psi1)), centering,
                         beta);
    if (sb < 0)
        return make_case(st, "T4.1-ii", pN, 0.0,
                         LimitLaw::asymmetric_stable(beta, const_c_plus(beta, psi1)), centering,
                         beta);
    return make_case(st, "T4.1-iii", pN, 0.0,
                     LimitLaw::intermediate(LimitLaw::PoissonKind::Iso), centering, beta);
}

RegimeCase classify_mean(double beta, GrowthRule g, double psi1,
                         const std::optional<MixingLaw>& mixing) {
    const auto st = Statistic::Mean;
    const auto none = RegimeCase::Centering::None;
    const MeanLimitConstants mc = const_mean_limits(beta, psi1, mixing);
    if (beta > 2.0) {
        const double var = mc.sigma_bar2 ? *mc.sigma_bar2 : kUnset;
        return make_case(st, "P3.4-iv", 0.5, 0.5, LimitLaw::gaussian(var), none, beta);
    }
    const int sb = side(g.rho, beta, g.comparator);
    if (sb > 0) {
        if (beta > 1.0)
            return make_case(st, "P3.4-i", 0.5, 0.5 * (beta - 1.0),
                             LimitLaw::gaussian(*mc.sigma_bar2_beta), none, beta);
        return make_case(st, "P3.4-ii", 1.0 - 1.0 / (2.0 * beta), 0.0,
                         LimitLaw::symmetric_stable(2.0 * beta, *mc.K_bar), none, beta);
    }
    if (sb < 0)
        return make_case(st, "P3.4-iii", 1.0 - 1.0 / beta, 0.5,
                         LimitLaw::symmetric_stable(beta, *mc.k_bar), none, beta);
    return make_case(st, "P3.4-int", 1.0 - 1.0 / beta, 0.5,
                     LimitLaw::intermediate(LimitLaw::PoissonKind::Mean), none, beta);
}

}  // namespace

RegimeCase classify(Statistic statistic, double beta, GrowthRule growth, double psi1,
                    const std::optional<MixingLaw>& mixing, std::int64_t t) {
    if (!(beta > 0.0)) throw std::domain_error("UnsupportedBeta: beta must be > 0");
    if (beta == 1.0 || beta == 2.0)
        throw std::domain_error("UnsupportedBeta: the boundary cases beta = 1, 2 are omitted");
    if (statistic == Statistic::CrossCov && beta == 1.5)
        throw std::domain_error("UnsupportedBeta: cross-sectional cases omit beta = 3/2");
    if (!(growth.rho > 0.0)) throw std::invalid_argument("classify: rho must be > 0");
    switch (statistic) {
        case Statistic::CrossCov: return classify_cross(beta, growth, psi1, mixing);
        case Statistic::TemporalCov: return classify_temporal(beta, growth, psi1, mixing, t);
        case Statistic::Mean: return classify_mean(beta, growth, psi1, mixing);
    }
    throw std::logic_error("classify: unreachable");
}

}  // namespace rcar
