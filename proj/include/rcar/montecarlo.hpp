// Reproducible Monte Carlo experiments: replication engine with
// per-replication derived streams, streamed panel statistics (panels are
// generated row by row and never materialized), kernel density estimates,
// KS distances and confidence-interval coverage studies.
//
// Replication r of an experiment rooted at root_seed simulates its panel
// from replication_seed(root_seed, r); parallelism is over replications
// only and results are reduced in replication order, so any thread count
// reproduces the serial output bit for bit.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "rcar/estimators.hpp"
#include "rcar/limit_laws.hpp"
#include "rcar/panel.hpp"

namespace rcar {

void parallel_for(std::int64_t count, int threads, const std::function<void(std::int64_t)>& body);

struct ExperimentSpec {
    enum class Stat { SampleMean, SampleCov, PartialSum };
    Stat stat = Stat::SampleCov;
    std::int64_t t = 0;
    std::int64_t s = 0;
    double tau = 1.0;  // PartialSum only
    MixingLaw mixing;
    InnovationLaw innovation;
    // Sizes: n is always explicit; N is either explicit or floor(c n^rho).
    std::int64_t n = 0;
    std::int64_t N = 0;
    std::optional<GrowthRule> growth;
    double growth_c = 1.0;
    std::int64_t replications = 100;
    std::uint64_t root_seed = 1;
    // Normalization/centering come from classify unless overridden.  Auto
    // classification needs a BetaSquared mixing law and applies to
    // SampleMean/SampleCov; PartialSum experiments must pass an override.
    bool normalize = true;
    std::optional<RegimeCase> regime_override;
    bool want_reference = true;
    int threads = 0;  // 0 = hardware concurrency
    int kde_points = 512;
};

struct ExperimentResult {
    std::vector<double> samples;  // normalized statistic per replication
    bool has_regime = false;
    RegimeCase regime;
    std::vector<double> kde_grid;
    std::vector<double> kde_density;
    std::vector<double> reference_density;  // empty when no reference law
    double ks = -1.0;                       // -1 when no reference cdf
    double mean = 0.0;
    double variance = 0.0;
    double skewness = 0.0;
    std::int64_t N = 0;
    std::int64_t n = 0;
    double lambda = 0.0;       // N^{1/(2 beta)} / n (0 for Degenerate mixing)
    double lambda_star = 0.0;  // N^{1/beta} / n
    double runtime_seconds = 0.0;
    std::uint64_t root_seed = 0;
};

struct CoverageReport {
    double level = 0.0;
    double empirical_coverage = 0.0;
    std::int64_t replications = 0;
    CiMode mode = CiMode::Gaussian;
    double average_width = 0.0;
};

// Raw (un-centered, un-normalized) streamed statistic of one panel.
double raw_statistic(const ExperimentSpec& spec, std::uint64_t panel_seed, std::int64_t N,
                     std::int64_t n);

ExperimentResult run(const ExperimentSpec& spec);

// Gaussian kernel, Silverman bandwidth 1.06 min(sd, IQR/1.34) R^{-1/5}
// with a 1e-6 floor; the grid spans [q_0.001 - 5h, q_0.999 + 5h] and
// kernel centers are clamped to the quantile span so the on-grid integral
// stays within 1e-3 of one even for heavy-tailed samples.
void kde(const std::vector<double>& samples, std::vector<double>& grid,
         std::vector<double>& density, int points = 512);

double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf);
double ks_two_sample(std::vector<double> a, std::vector<double> b);

// CDF evaluator for a stable/Gaussian limit law (throws NotAStableLaw for
// intermediate laws and laws with unset constants).
std::function<double(double)> reference_cdf(const LimitLaw& law);

// Fraction of replications whose confidence interval covers true gamma(t).
// Stable modes with a plug-in tail reuse one set of quantiles across
// replications.
CoverageReport coverage_study(const ExperimentSpec& spec, double level, CiMode mode,
                              std::int64_t replications,
                              std::optional<TailEstimate> plug_in = {});

}  // namespace rcar
