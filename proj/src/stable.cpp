#include "rcar/stable.hpp"

#include <algorithm>
#include <cmath>

#include "rcar/quadrature.hpp"
#include "rcar/special.hpp"

namespace rcar {

namespace {

// |chf| drops to 1e-12 at sigma^a Theta^a = 27.631.
constexpr double kLogChfCut = 27.631021115928547;
// Beyond |x - mu| > kTailSwitch * sigma the first-order tail series is used.
constexpr double kTailSwitch = 10.0;

double tail_const(double alpha) {
    // C_a with P(X > x) ~ C_a (1+skew)/2 sigma^a x^{-a}.
    return (1.0 - alpha) / (std::tgamma(2.0 - alpha) * std::cos(M_PI * alpha / 2.0));
}

bool support_cut_below(const StableParams& p) { return p.alpha < 1.0 && p.skew == 1.0; }
bool support_cut_above(const StableParams& p) { return p.alpha < 1.0 && p.skew == -1.0; }

// (1/pi) int_0^Theta exp(-sa t^a) cos(-z t + bt sa t^a) dt  (pdf), and the
// Gil-Pelaez counterpart for the cdf.  For alpha < 1 the theta^{a-1} cusp at
// the origin is flattened by the substitution theta = u^{1/a} on [0,1].
double inversion_pdf(const StableParams& p, double z) {
    const double a = p.alpha;
    const double sa = std::pow(p.scale, a);
    const double bt = p.skew * std::tan(M_PI * a / 2.0);
    const double theta_max = std::pow(kLogChfCut / sa, 1.0 / a);
    auto f = [&](double t) {
        const double ta = std::pow(t, a);
        return std::exp(-sa * ta) * std::cos(-z * t + bt * sa * ta);
    };
    double value = 0.0;
    const double tol = 2e-11;
    if (a < 1.0 && theta_max > 1.0) {
        auto g = [&](double u) {
            const double t = std::pow(u, 1.0 / a);
            return std::exp(-sa * u) * std::cos(-z * t + bt * sa * u) * (1.0 / a) *
                   std::pow(u, 1.0 / a - 1.0);
        };
        value += integrate_simpson(g, 0.0, 1.0, tol);
        value += integrate_simpson(f, 1.0, theta_max, tol);
    } else {
        value += integrate_simpson(f, 0.0, theta_max, tol);
    }
    return std::max(0.0, value / M_PI);
}

double inversion_cdf(const StableParams& p, double z) {
    const double a = p.alpha;
    const double sa = std::pow(p.scale, a);
    const double bt = p.skew * std::tan(M_PI * a / 2.0);
    const double theta_max = std::pow(kLogChfCut / sa, 1.0 / a);
    auto f = [&](double t) {
        const double ta = std::pow(t, a);
        return std::exp(-sa * ta) * std::sin(z * t - bt * sa * ta) / t;
    };
    double value = 0.0;
    const double tol = 2e-11;
    if (a < 1.0 && theta_max > 1.0) {
        auto g = [&](double u) {
            const double t = std::pow(u, 1.0 / a);
            return std::exp(-sa * u) * std::sin(z * t - bt * sa * u) / (a * u);
        };
        value += integrate_simpson(g, 1e-300, 1.0, tol);
        value += integrate_simpson(f, 1.0, theta_max, tol);
    } else {
        // Integrand -> z - bt sa t^{a-1} as t -> 0 (a > 1): start at 0.
        auto f0 = [&](double t) { return t == 0.0 ? z : f(t); };
        value += integrate_simpson(f0, 0.0, theta_max, tol);
    }
    return std::clamp(0.5 + value / M_PI, 0.0, 1.0);
}

// Upper-tail mass by the series, continuity-matched to the inversion value
// at the switch point.
double tail_upper(const StableParams& p, double z) {
    const double a = p.alpha;
    const double w = 0.5 * (1.0 + p.skew);
    if (w == 0.0) return 0.0;
    const double zs = kTailSwitch * p.scale;
    const double series_sw = tail_const(a) * w * std::pow(p.scale, a) * std::pow(zs, -a);
    const double inv_sw = 1.0 - inversion_cdf(p, zs);
    const double match = series_sw > 0.0 ? inv_sw / series_sw : 1.0;
    return match * tail_const(a) * w * std::pow(p.scale, a) * std::pow(z, -a);
}

double tail_lower(const StableParams& p, double z) {
    StableParams q = p;
    q.skew = -p.skew;
    return tail_upper(q, z);
}

}  // namespace

void StableParams::validate() const {
    if (!(alpha > 0.0 && alpha <= 2.0) || alpha == 1.0)
        throw std::domain_error("BetaOutOfRange: stable index must be in (0,2], != 1");
    if (!(skew >= -1.0 && skew <= 1.0))
        throw std::invalid_argument("StableParams: skew must be in [-1,1]");
    if (alpha == 2.0 && skew != 0.0)
        throw std::invalid_argument("StableParams: alpha = 2 forces skew = 0");
    if (!(scale > 0.0)) throw std::invalid_argument("StableParams: scale must be > 0");
    if (!std::isfinite(location)) throw std::invalid_argument("StableParams: location not finite");
}

TransformedLaw from_paper_law(const LimitLaw& limit) {
    TransformedLaw out;
    switch (limit.kind) {
        case LimitLaw::Kind::SymmetricStable:
            out.base = {limit.index, 0.0, std::pow(limit.scale_c, 1.0 / limit.index), 0.0};
            break;
        case LimitLaw::Kind::AsymmetricStable:
            out.base = {limit.index, 1.0, std::pow(limit.scale_c, 1.0 / limit.index), 0.0};
            break;
        case LimitLaw::Kind::NegSquaredSymmetricStable:
            out.base = {limit.index, 0.0, std::pow(limit.scale_c, 1.0 / limit.index), 0.0};
            out.transform = TransformedLaw::Transform::NegSquare;
            break;
        default:
            throw std::domain_error("NotAStableLaw: only stable limit variants map to S1");
    }
    out.base.validate();
    return out;
}

double stable_sample(const StableParams& p, Rng& rng) {
    if (p.alpha == 2.0) return p.location + p.scale * std::sqrt(2.0) * rng.normal();
    const double a = p.alpha;
    const double u = M_PI * (rng.uniform01() - 0.5);
    const double w = rng.exponential();
    double x;
    if (p.skew == 0.0) {
        x = std::sin(a * u) / std::pow(std::cos(u), 1.0 / a) *
            std::pow(std::cos((1.0 - a) * u) / w, (1.0 - a) / a);
    } else {
        const double bt = p.skew * std::tan(M_PI * a / 2.0);
        const double theta0 = std::atan(bt) / a;
        const double fac = std::pow(1.0 + bt * bt, 0.5 / a);
        x = fac * std::sin(a * (u + theta0)) / std::pow(std::cos(u), 1.0 / a) *
            std::pow(std::cos(u - a * (u + theta0)) / w, (1.0 - a) / a);
    }
    return p.location + p.scale * x;
}

std::complex<double> stable_chf(const StableParams& p, double theta) {
    if (theta == 0.0) return {1.0, 0.0};
    const double a = p.alpha;
    const double sa = std::pow(p.scale, a);
    const double mag = sa * std::pow(std::fabs(theta), a);
    const double bt = (a == 2.0) ? 0.0 : p.skew * std::tan(M_PI * a / 2.0);
    const std::complex<double> expo(-mag, p.location * theta + mag * bt * (theta > 0 ? 1.0 : -1.0));
    return std::exp(expo);
}

double stable_pdf(const StableParams& p, double x) {
    p.validate();
    if (p.alpha == 2.0) {
        const double sd = p.scale * std::sqrt(2.0);
        return normal_pdf((x - p.location) / sd) / sd;
    }
    const double z = x - p.location;
    if (support_cut_below(p) && z <= 0.0) return 0.0;
    if (support_cut_above(p) && z >= 0.0) return 0.0;
    if (std::fabs(z) > kTailSwitch * p.scale) {
        // Differentiated tail series, matched like the cdf tails.
        const double az = std::fabs(z);
        const double mass = z > 0.0 ? tail_upper(p, az) : tail_lower(p, az);
        return p.alpha * mass / az;
    }
    return inversion_pdf(p, z);
}

double stable_cdf(const StableParams& p, double x) {
    p.validate();
    if (p.alpha == 2.0) return normal_cdf((x - p.location) / (p.scale * std::sqrt(2.0)));
    const double z = x - p.location;
    if (support_cut_below(p) && z <= 0.0) return 0.0;
    if (support_cut_above(p) && z >= 0.0) return 1.0;
    if (z > kTailSwitch * p.scale) return 1.0 - tail_upper(p, z);
    if (z < -kTailSwitch * p.scale) return tail_lower(p, -z);
    return inversion_cdf(p, z);
}

double stable_quantile(const StableParams& p, double prob) {
    p.validate();
    if (!(prob > 0.0 && prob < 1.0))
        throw std::invalid_argument("stable_quantile: p must be in (0,1)");
    if (p.alpha == 2.0)
        return p.location + p.scale * std::sqrt(2.0) * normal_quantile(prob);
    // Bracket from the scale-quantile guess, doubling outward.
    double lo, hi;
    if (support_cut_below(p)) {
        lo = p.location;
    } else {
        lo = p.location - 4.0 * p.scale;
        while (stable_cdf(p, lo) > prob) lo = p.location - 2.0 * (p.location - lo);
    }
    if (support_cut_above(p)) {
        hi = p.location;
    } else {
        hi = p.location + 4.0 * p.scale;
        while (stable_cdf(p, hi) < prob) hi = p.location + 2.0 * (hi - p.location);
    }
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        const double f = stable_cdf(p, mid);
        if (std::fabs(f - prob) < 1e-10 || hi - lo < 1e-12 * (1.0 + std::fabs(mid))) break;
        (f < prob ? lo : hi) = mid;
    }
    // Newton polish with the pdf.
    for (int it = 0; it < 3; ++it) {
        const double f = stable_cdf(p, mid);
        const double d = stable_pdf(p, mid);
        if (d <= 0.0) break;
        const double step = (f - prob) / d;
        const double next = mid - step;
        if (next <= lo || next >= hi) break;
        mid = next;
        if (std::fabs(step) < 1e-12 * (1.0 + std::fabs(mid))) break;
    }
    return mid;
}

double sample_transformed(const TransformedLaw& law, Rng& rng) {
    const double x = stable_sample(law.base, rng);
    return law.transform == TransformedLaw::Transform::NegSquare ? -x * x : x;
}

double cdf_transformed(const TransformedLaw& law, double x) {
    if (law.transform == TransformedLaw::Transform::Identity) return stable_cdf(law.base, x);
    if (law.base.skew != 0.0)
        throw std::invalid_argument("cdf_transformed: NegSquare requires a symmetric base");
    if (x >= 0.0) return 1.0;
    return 2.0 * (1.0 - stable_cdf(law.base, std::sqrt(-x)));
}

StableDist::StableDist(StableParams p) : p_(p) {
    p_.validate();
    if (p_.alpha == 2.0) return;  // closed form, no grid needed
    const int m = 2049;
    grid_w_.resize(m);
    grid_f_.resize(m);
    const double w_max = M_PI / 2.0 - std::atan(1.0 / kTailSwitch);  // tan(w_max) = 10
    for (int i = 0; i < m; ++i) {
        const double w = -w_max + 2.0 * w_max * i / (m - 1);
        grid_w_[i] = w;
        grid_f_[i] = stable_cdf(p_, p_.location + p_.scale * std::tan(w));
    }
    // Enforce monotone grid against quadrature jitter.
    for (int i = 1; i < m; ++i) grid_f_[i] = std::max(grid_f_[i], grid_f_[i - 1]);
}

double StableDist::cdf_fast(double x) const {
    if (p_.alpha == 2.0) return stable_cdf(p_, x);
    const double w = std::atan((x - p_.location) / p_.scale);
    if (w <= grid_w_.front() || w >= grid_w_.back()) return stable_cdf(p_, x);
    const auto it = std::upper_bound(grid_w_.begin(), grid_w_.end(), w);
    const std::size_t j = static_cast<std::size_t>(it - grid_w_.begin());
    const double t = (w - grid_w_[j - 1]) / (grid_w_[j] - grid_w_[j - 1]);
    return grid_f_[j - 1] + t * (grid_f_[j] - grid_f_[j - 1]);
}

double StableDist::quantile(double prob) const { return stable_quantile(p_, prob); }

}  // namespace rcar
