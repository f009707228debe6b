// General alpha-stable engine in the S1 parameterization
//   chf(theta) = exp{ i mu theta - sigma^a |theta|^a
//                     (1 - i skew sign(theta) tan(pi a / 2)) },  a != 1,
// with Chambers–Mallows–Stuck sampling, Gil-Pelaez inversion for the pdf
// and cdf, and bracketed quantiles.  The limiting laws V*_b, V+_b, V_2b,
// W_{4b/3}, bar W_b, bar V_2b map onto it via from_paper_law.

#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "rcar/limit_laws.hpp"
#include "rcar/rng.hpp"

namespace rcar {

struct StableParams {
    double alpha = 2.0;     // (0,2], alpha != 1
    double skew = 0.0;      // [-1,1]; alpha = 2 forces skew = 0
    double scale = 1.0;     // sigma > 0
    double location = 0.0;

    void validate() const;
};

struct TransformedLaw {
    StableParams base;
    enum class Transform { Identity, NegSquare } transform = Transform::Identity;
};

// Map a stable LimitLaw (chf scale c) onto S1 parameters: sigma = c^{1/alpha},
// skew 0 for symmetric laws, +1 for completely asymmetric ones.
TransformedLaw from_paper_law(const LimitLaw& limit);

// One CMS draw; alpha = 2 reduces to Normal(location, 2 scale^2).
double stable_sample(const StableParams& p, Rng& rng);

std::complex<double> stable_chf(const StableParams& p, double theta);

double stable_pdf(const StableParams& p, double x);
double stable_cdf(const StableParams& p, double x);
double stable_quantile(const StableParams& p, double prob);

double sample_transformed(const TransformedLaw& law, Rng& rng);
// NegSquare: P(-X^2 <= x) = 1 for x >= 0, else 2(1 - F_base(sqrt(-x))).
double cdf_transformed(const TransformedLaw& law, double x);

// Immutable distribution object with a precomputed monotone cdf grid, for
// workloads that evaluate the cdf at many points (KS distances, coverage).
class StableDist {
public:
    explicit StableDist(StableParams p);

    const StableParams& params() const { return p_; }
    double pdf(double x) const { return stable_pdf(p_, x); }
    double cdf(double x) const { return stable_cdf(p_, x); }
    // Grid-interpolated cdf, accurate to ~1e-5; falls back to the tail
    // series outside the grid.
    double cdf_fast(double x) const;
    double quantile(double prob) const;

private:
    StableParams p_;
    std::vector<double> grid_w_;  // x = location + scale * tan(w)
    std::vector<double> grid_f_;
};

}  // namespace rcar
