#include "rcar/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <memory>
#include <mutex>
#include <thread>

#include "rcar/special.hpp"
#include "rcar/stable.hpp"

namespace rcar {

void parallel_for(std::int64_t count, int threads, const std::function<void(std::int64_t)>& body) {
    if (count <= 0) return;
    int nt = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    if (nt < 1) nt = 1;
    nt = static_cast<int>(std::min<std::int64_t>(nt, count));
    if (nt == 1) {
        for (std::int64_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            const std::int64_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (int w = 0; w < nt; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

namespace {

std::int64_t resolve_rows(const ExperimentSpec& spec) {
    if (spec.N > 0) return spec.N;
    if (!spec.growth) throw std::invalid_argument("ExperimentSpec: need N or a growth rule");
    const double raw = spec.growth_c * std::pow(static_cast<double>(spec.n), spec.growth->rho);
    if (!(raw >= 1.0) || raw > 9e15)
        throw std::invalid_argument("ExperimentSpec: growth rule gives unusable N");
    return static_cast<std::int64_t>(std::floor(raw));
}

Statistic map_statistic(const ExperimentSpec& spec) {
    if (spec.stat == ExperimentSpec::Stat::SampleMean) return Statistic::Mean;
    return spec.s == 0 ? Statistic::TemporalCov : Statistic::CrossCov;
}

// Streamed gamma_hat(t,s) over generated rows.  Algebraically identical to
// the two-pass estimator:
//   gamma_hat = (A - Xbar (B1 + B2) + cnt Xbar^2) / (N n),
// where A, B1, B2 run over the Eq-(5) index ranges and Xbar over all cells.
double streamed_cov(const MixingLaw& mixing, const InnovationLaw& innovation,
                    std::uint64_t seed, std::int64_t N, std::int64_t n, std::int64_t t,
                    std::int64_t s) {
    if (s < 0) {  // gamma_hat(t,s) = gamma_hat(-t,-s)
        s = -s;
        t = -t;
    }
    const std::int64_t at = t < 0 ? -t : t;
    if (at >= n || s >= N) throw std::out_of_range("LagOutOfRange: need |t| < n and |s| < N");
    const std::int64_t k_lo = std::max<std::int64_t>(0, -t);
    const std::int64_t k_hi = std::min<std::int64_t>(n, n - t);
    const std::int64_t w = s + 1;
    std::vector<std::vector<double>> ring(w, std::vector<double>(n));
    double total = 0.0, a_acc = 0.0, b1 = 0.0, b2 = 0.0;
    for (std::int64_t j = 0; j < N; ++j) {
        auto& buf = ring[j % w];
        generate_row(mixing, innovation, seed, j, n, buf.data());
        for (std::int64_t k = 0; k < n; ++k) total += buf[k];
        if (j >= s) {
            const auto& a = ring[(j - s) % w];
            const auto& b = buf;
            double pa = 0.0, p1 = 0.0, p2 = 0.0;
            for (std::int64_t k = k_lo; k < k_hi; ++k) {
                pa += a[k] * b[k + t];
                p1 += a[k];
                p2 += b[k + t];
            }
            a_acc += pa;
            b1 += p1;
            b2 += p2;
        }
    }
    const double cells = static_cast<double>(N) * static_cast<double>(n);
    const double xbar = total / cells;
    const double cnt = static_cast<double>(N - s) * static_cast<double>(k_hi - k_lo);
    return (a_acc - xbar * (b1 + b2) + cnt * xbar * xbar) / cells;
}

double streamed_mean(const MixingLaw& mixing, const InnovationLaw& innovation,
                     std::uint64_t seed, std::int64_t N, std::int64_t n) {
    std::vector<double> buf(n);
    double total = 0.0;
    for (std::int64_t j = 0; j < N; ++j) {
        generate_row(mixing, innovation, seed, j, n, buf.data());
        for (std::int64_t k = 0; k < n; ++k) total += buf[k];
    }
    return total / (static_cast<double>(N) * static_cast<double>(n));
}

// S^{t,s}(tau) with nominal length n; the panel is simulated with n + |t|
// columns so every product X_i(u) X_{i+s}(u+t) exists.
double streamed_partial_sum(const MixingLaw& mixing, const InnovationLaw& innovation,
                            std::uint64_t seed, std::int64_t N, std::int64_t n, std::int64_t t,
                            std::int64_t s, double tau) {
    if (s < 0) {
        s = -s;
        t = -t;
    }
    if (!(tau >= 0.0 && tau <= 1.0)) throw std::out_of_range("TauOutOfRange");
    const std::int64_t at = t < 0 ? -t : t;
    const std::int64_t cols = n + at;
    const std::int64_t u_lo = std::max<std::int64_t>(0, -t);
    const std::int64_t cut = static_cast<std::int64_t>(std::floor(static_cast<double>(n) * tau));
    const std::int64_t w = s + 1;
    std::vector<std::vector<double>> ring(w, std::vector<double>(cols));
    double acc = 0.0;
    for (std::int64_t j = 0; j < N; ++j) {
        auto& buf = ring[j % w];
        generate_row(mixing, innovation, seed, j, cols, buf.data());
        if (j >= s) {
            const auto& a = ring[(j - s) % w];
            const auto& b = buf;
            double p = 0.0;
            for (std::int64_t u = 0; u < cut; ++u) p += a[u_lo + u] * b[u_lo + u + t];
            acc += p;
        }
    }
    return acc;
}

}  // namespace

double raw_statistic(const ExperimentSpec& spec, std::uint64_t panel_seed, std::int64_t N,
                     std::int64_t n) {
    switch (spec.stat) {
        case ExperimentSpec::Stat::SampleMean:
            return streamed_mean(spec.mixing, spec.innovation, panel_seed, N, n);
        case ExperimentSpec::Stat::SampleCov:
            return streamed_cov(spec.mixing, spec.innovation, panel_seed, N, n, spec.t, spec.s);
        case ExperimentSpec::Stat::PartialSum:
            return streamed_partial_sum(spec.mixing, spec.innovation, panel_seed, N, n, spec.t,
                                        spec.s, spec.tau);
    }
    throw std::logic_error("raw_statistic: unreachable");
}

std::function<double(double)> reference_cdf(const LimitLaw& law) {
    switch (law.kind) {
        case LimitLaw::Kind::Gaussian: {
            if (!std::isfinite(law.variance))
                throw std::domain_error("NotAStableLaw: Gaussian reference variance unset");
            const double sd = std::sqrt(law.variance);
            return [sd](double x) { return normal_cdf(x / sd); };
        }
        case LimitLaw::Kind::SymmetricStable:
        case LimitLaw::Kind::AsymmetricStable: {
            auto dist = std::make_shared<StableDist>(from_paper_law(law).base);
            return [dist](double x) { return dist->cdf_fast(x); };
        }
        case LimitLaw::Kind::NegSquaredSymmetricStable: {
            auto dist = std::make_shared<StableDist>(from_paper_law(law).base);
            return [dist](double x) {
                if (x >= 0.0) return 1.0;
                return 2.0 * (1.0 - dist->cdf_fast(std::sqrt(-x)));
            };
        }
        default:
            throw std::domain_error("NotAStableLaw: no closed-form reference cdf");
    }
}

ExperimentResult run(const ExperimentSpec& spec) {
    const auto t_start = std::chrono::steady_clock::now();
    if (spec.replications < 1) throw std::invalid_argument("ExperimentSpec: replications >= 1");
    if (spec.n < 1) throw std::invalid_argument("ExperimentSpec: n >= 1");
    ExperimentResult res;
    res.n = spec.n;
    res.N = resolve_rows(spec);
    res.root_seed = spec.root_seed;

    if (spec.regime_override) {
        res.regime = *spec.regime_override;
        res.has_regime = true;
    } else if (spec.normalize || spec.want_reference) {
        if (!spec.mixing.has_tail())
            throw std::invalid_argument(
                "ExperimentSpec: Degenerate mixing needs an explicit regime override");
        if (spec.stat == ExperimentSpec::Stat::PartialSum)
            throw std::invalid_argument(
                "ExperimentSpec: PartialSum normalization needs an explicit regime override");
        if (!spec.growth)
            throw std::invalid_argument("ExperimentSpec: auto classification needs a growth rule");
        res.regime = classify(map_statistic(spec), spec.mixing.tail_beta(), *spec.growth,
                              psi_at_one(spec.mixing), spec.mixing, spec.t);
        res.has_regime = true;
    }

    const double beta = spec.mixing.has_tail() ? spec.mixing.tail_beta() : 0.0;
    if (spec.mixing.has_tail()) {
        res.lambda = std::pow(static_cast<double>(res.N), 1.0 / (2.0 * beta)) /
                     static_cast<double>(res.n);
        res.lambda_star =
            std::pow(static_cast<double>(res.N), 1.0 / beta) / static_cast<double>(res.n);
    }

    // Centering value, shared by all replications.
    double center = 0.0;
    if (res.has_regime && spec.normalize) {
        const auto c = res.regime.centering;
        const bool apply = c == RegimeCase::Centering::TrueGamma ||
                           (c == RegimeCase::Centering::TrueGammaIfBetaGt1 &&
                            (!spec.mixing.has_tail() || beta > 1.0));
        if (apply) {
            center = true_gamma(spec.t, spec.mixing);
            if (spec.stat == ExperimentSpec::Stat::PartialSum)
                center *= static_cast<double>(res.N) *
                          std::floor(static_cast<double>(res.n) * spec.tau);
        }
    }
    double factor = 1.0;
    if (res.has_regime && spec.normalize) {
        factor = std::pow(static_cast<double>(res.N), res.regime.p_N) *
                 std::pow(static_cast<double>(res.n), res.regime.p_n);
        if (res.regime.log_factor) {
            if (!(res.lambda > 1.0))
                throw std::domain_error(
                    "ExperimentSpec: log-factor normalization needs lambda_{N,n} > 1");
            factor /= std::pow(std::log(res.lambda), 1.0 / (2.0 * beta));
        }
    }

    res.samples.assign(spec.replications, 0.0);
    parallel_for(spec.replications, spec.threads, [&](std::int64_t r) {
        const std::uint64_t panel_seed = replication_seed(spec.root_seed, static_cast<std::uint64_t>(r));
        const double raw = raw_statistic(spec, panel_seed, res.N, res.n);
        res.samples[r] = factor * (raw - center);
    });

    // Moments.
    const double R = static_cast<double>(res.samples.size());
    double m = 0.0;
    for (double v : res.samples) m += v;
    m /= R;
    double v2 = 0.0, v3 = 0.0;
    for (double v : res.samples) {
        const double d = v - m;
        v2 += d * d;
        v3 += d * d * d;
    }
    res.mean = m;
    res.variance = R > 1 ? v2 / (R - 1.0) : 0.0;
    res.skewness = v2 > 0.0 ? (v3 / R) / std::pow(v2 / R, 1.5) : 0.0;

    kde(res.samples, res.kde_grid, res.kde_density, spec.kde_points);

    if (spec.want_reference && res.has_regime) {
        try {
            const auto cdf = reference_cdf(res.regime.limit);
            res.ks = ks_distance(res.samples, cdf);
            res.reference_density.assign(res.kde_grid.size(), 0.0);
            // Central difference of the reference cdf on the kde grid.
            for (std::size_t i = 0; i < res.kde_grid.size(); ++i) {
                const double x = res.kde_grid[i];
                const double eps = 1e-4 * (1.0 + std::fabs(x));
                res.reference_density[i] = (cdf(x + eps) - cdf(x - eps)) / (2.0 * eps);
            }
        } catch (const std::domain_error&) {
            res.ks = -1.0;  // intermediate or unset law: no reference curve
        }
    }

    res.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return res;
}

void kde(const std::vector<double>& samples, std::vector<double>& grid,
         std::vector<double>& density, int points) {
    const std::size_t R = samples.size();
    if (R < 10) throw std::invalid_argument("TooFewSamples: kde needs >= 10 samples");
    std::vector<double> sorted(samples);
    std::sort(sorted.begin(), sorted.end());
    auto quantile = [&](double p) {
        const double pos = p * static_cast<double>(R - 1);
        const std::size_t lo = static_cast<std::size_t>(pos);
        const std::size_t hi = std::min(lo + 1, R - 1);
        return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
    };
    double mean = 0.0;
    for (double v : sorted) mean += v;
    mean /= static_cast<double>(R);
    double var = 0.0;
    for (double v : sorted) var += (v - mean) * (v - mean);
    var /= static_cast<double>(R > 1 ? R - 1 : 1);
    const double iqr = quantile(0.75) - quantile(0.25);
    double spread = std::sqrt(var);
    if (iqr > 0.0) spread = std::min(spread, iqr / 1.34);
    double h = 1.06 * spread * std::pow(static_cast<double>(R), -0.2);
    if (!(h > 1e-6)) h = 1e-6;
    const double q_lo = quantile(0.001), q_hi = quantile(0.999);
    const double lo = q_lo - 5.0 * h, hi = q_hi + 5.0 * h;
    grid.resize(points);
    density.assign(points, 0.0);
    for (int i = 0; i < points; ++i)
        grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    const double norm = 1.0 / (static_cast<double>(R) * h);
    for (double x : sorted) {
        const double c = std::clamp(x, q_lo, q_hi);
        for (int i = 0; i < points; ++i) {
            const double u = (grid[i] - c) / h;
            if (std::fabs(u) < 8.5) density[i] += norm * normal_pdf(u);
        }
    }
}

double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw std::invalid_argument("ks_distance: need >= 1 sample");
    std::sort(samples.begin(), samples.end());
    const double R = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, f - static_cast<double>(i) / R);
        d = std::max(d, static_cast<double>(i + 1) / R - f);
    }
    return d;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        const double fa = static_cast<double>(i) / static_cast<double>(a.size());
        const double fb = static_cast<double>(j) / static_cast<double>(b.size());
        d = std::max(d, std::fabs(fa - fb));
    }
    return d;
}

CoverageReport coverage_study(const ExperimentSpec& spec, double level, CiMode mode,
                              std::int64_t replications, std::optional<TailEstimate> plug_in) {
    ExperimentSpec local = spec;
    local.N = resolve_rows(spec);
    const double gamma_true = true_gamma(spec.t, spec.mixing);
    // Stable modes with a plug-in tail share one pair of quantiles.
    double q_lo = 0.0, q_hi = 0.0, rate = 0.0;
    const bool fast_stable = mode != CiMode::Gaussian && plug_in.has_value();
    if (fast_stable) {
        const double c = mode == CiMode::StableStar
                             ? const_c_star(plug_in->beta_hat, plug_in->psi_hat)
                             : const_c_plus(plug_in->beta_hat, plug_in->psi_hat);
        StableParams params{plug_in->beta_hat, 1.0, std::pow(c, 1.0 / plug_in->beta_hat), 0.0};
        const double tail = 0.5 * (1.0 - level);
        q_lo = stable_quantile(params, tail);
        q_hi = stable_quantile(params, 1.0 - tail);
        rate = std::pow(static_cast<double>(local.N), 1.0 / plug_in->beta_hat - 1.0);
    }
    std::vector<unsigned char> hit(replications, 0);
    std::vector<double> width(replications, 0.0);
    parallel_for(replications, spec.threads, [&](std::int64_t r) {
        const std::uint64_t panel_seed = replication_seed(spec.root_seed, static_cast<std::uint64_t>(r));
        const Panel panel =
            simulate_panel(local.N, spec.n, spec.mixing, spec.innovation, panel_seed);
        double lo, hi;
        if (fast_stable) {
            const double gamma_hat = sample_cov(panel, {spec.t, 0});
            lo = gamma_hat - rate * q_hi;
            hi = gamma_hat - rate * q_lo;
        } else {
            const auto ci = confidence_interval_gamma(panel, spec.t, level, mode, plug_in);
            lo = ci.lower;
            hi = ci.upper;
        }
        hit[r] = (lo <= gamma_true && gamma_true <= hi) ? 1 : 0;
        width[r] = hi - lo;
    });
    CoverageReport rep;
    rep.level = level;
    rep.mode = mode;
    rep.replications = replications;
    double hits = 0.0, w = 0.0;
    for (std::int64_t r = 0; r < replications; ++r) {
        hits += hit[r];
        w += width[r];
    }
    rep.empirical_coverage = hits / static_cast<double>(replications);
    rep.average_width = w / static_cast<double>(replications);
    return rep;
}

}  // namespace rcar
