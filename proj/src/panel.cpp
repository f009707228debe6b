#include "rcar/panel.hpp"

#include <cmath>

#include "rcar/quadrature.hpp"
#include "rcar/special.hpp"

namespace rcar {

double MixingLaw::tail_beta() const {
    if (kind != Kind::BetaSquared)
        throw std::domain_error("DegenerateHasNoTail: point-mass coefficient has no tail exponent");
    return beta;
}

double MixingLaw::density(double x) const {
    if (kind == Kind::Degenerate)
        throw std::domain_error("DegenerateHasNoTail: point mass has no density");
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return 2.0 * std::pow(x, 2.0 * alpha - 1.0) * std::pow(1.0 + x, beta - 1.0) *
           std::pow(1.0 - x, beta - 1.0) / beta_fn(alpha, beta);
}

double psi_at_one(const MixingLaw& law) {
    if (law.kind != MixingLaw::Kind::BetaSquared)
        throw std::domain_error("DegenerateHasNoTail: psi(1) undefined for a point mass");
    return std::pow(2.0, law.beta) / beta_fn(law.alpha, law.beta);
}

double InnovationLaw::cum4() const {
    switch (kind) {
        case Kind::Gaussian: return 0.0;
        case Kind::StudentT: return 6.0 / (dof - 4.0);
        case Kind::Rademacher: return -2.0;
    }
    return 0.0;
}

double InnovationLaw::draw(Rng& rng) const {
    switch (kind) {
        case Kind::Gaussian: return rng.normal();
        case Kind::StudentT: {
            const double z = rng.normal();
            const double chi2 = 2.0 * rng.gamma(0.5 * dof);
            const double t = z / std::sqrt(chi2 / dof);
            return t * std::sqrt((dof - 2.0) / dof);  // unit variance
        }
        case Kind::Rademacher: return rng.rademacher();
    }
    return 0.0;
}

double sample_coefficient(const MixingLaw& law, Rng& rng) {
    if (law.kind == MixingLaw::Kind::Degenerate) return law.a0;
    const double u = rng.beta(law.alpha, law.beta);
    const double a = std::sqrt(u);
    return a < kCoefficientCap ? a : kCoefficientCap;
}

double stationary_initial(double a, const InnovationLaw& innovation, Rng& rng, double tol) {
    if (!(a >= 0.0 && a < 1.0)) throw std::invalid_argument("stationary_initial: a must be in [0,1)");
    if (!(tol > 0.0)) throw std::invalid_argument("stationary_initial: tol must be > 0");
    if (innovation.kind == InnovationLaw::Kind::Gaussian)
        return rng.normal() / std::sqrt(1.0 - a * a);
    if (a == 0.0) return innovation.draw(rng);
    // Truncate the MA sum once the omitted tail sd a^{m+1}/sqrt(1-a^2) < tol.
    const double r = std::log(tol * std::sqrt(1.0 - a * a)) / std::log(a);
    const std::int64_t m = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(r)));
    double sum = 0.0;
    double p = 1.0;
    for (std::int64_t k = 0; k <= m; ++k) {
        sum += p * innovation.draw(rng);
        p *= a;
    }
    return sum;
}

double generate_row(const MixingLaw& mixing, const InnovationLaw& innovation,
                    std::uint64_t seed, std::int64_t i, std::int64_t n, double* out) {
    Rng rng(seed, stream_tag::kRow, static_cast<std::uint64_t>(i));
    const double a = sample_coefficient(mixing, rng);
    double x = stationary_initial(a, innovation, rng);
    for (std::int64_t t = 0; t < n; ++t) {
        x = a * x + innovation.draw(rng);
        out[t] = x;
    }
    return a;
}

Panel simulate_panel(std::int64_t n_rows, std::int64_t n_cols, const MixingLaw& mixing,
                     const InnovationLaw& innovation, std::uint64_t seed) {
    if (n_rows < 1 || n_cols < 1)
        throw std::invalid_argument("simulate_panel: N and n must be >= 1");
    Panel p;
    p.n_rows = n_rows;
    p.n_cols = n_cols;
    p.seed = seed;
    p.mixing = mixing;
    p.innovation = innovation;
    p.values.resize(static_cast<std::size_t>(n_rows) * n_cols);
    p.coefficients.resize(n_rows);
    for (std::int64_t i = 0; i < n_rows; ++i)
        p.coefficients[i] = generate_row(mixing, innovation, seed, i, n_cols,
                                         p.values.data() + i * n_cols);
    return p;
}

double true_gamma(std::int64_t t, const MixingLaw& mixing) {
    const std::int64_t lag = t < 0 ? -t : t;
    if (mixing.kind == MixingLaw::Kind::Degenerate) {
        const double a = mixing.a0;
        return std::pow(a, static_cast<double>(lag)) / (1.0 - a * a);
    }
    if (!(mixing.beta > 1.0))
        throw std::domain_error("InfiniteCovariance: gamma(t) requires beta > 1");
    // E a^t/(1-a^2) = int_0^1 x^t/(1+x) * psi(x) (1-x)^{beta-2} dx with the
    // endpoint substitution x = 1 - e^{-v}.
    const double beta = mixing.beta;
    auto integrand = [&](double v) {
        const double e = std::exp(-v);
        const double x = 1.0 - e;
        if (x <= 0.0) return 0.0;
        const double psi = 2.0 * std::pow(x, 2.0 * mixing.alpha - 1.0) *
                           std::pow(1.0 + x, beta - 1.0) / beta_fn(mixing.alpha, beta);
        return std::pow(x, static_cast<double>(lag)) / (1.0 + x) * psi *
               std::exp(-v * (beta - 1.0));
    };
    return integrate_to_inf(integrand, 0.0, 1e-10, 1e-12);
}

double gamma_asymptote(std::int64_t t, double beta, double psi1) {
    if (!(beta > 1.0)) throw std::domain_error("InvalidBeta: asymptote requires beta > 1");
    if (t < 1) throw std::invalid_argument("gamma_asymptote: t must be >= 1");
    return 0.5 * psi1 * std::tgamma(beta - 1.0) *
           std::pow(static_cast<double>(t), -(beta - 1.0));
}

}  // namespace rcar
