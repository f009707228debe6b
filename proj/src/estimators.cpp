#include "rcar/estimators.hpp"

#include <cmath>

#include "rcar/limit_laws.hpp"
#include "rcar/special.hpp"
#include "rcar/stable.hpp"

namespace rcar {

namespace {

void check_lag(const RowSource& src, CovarianceLag lag) {
    const std::int64_t at = lag.t < 0 ? -lag.t : lag.t;
    const std::int64_t as = lag.s < 0 ? -lag.s : lag.s;
    if (at >= src.cols() || as >= src.rows())
        throw std::out_of_range("LagOutOfRange: need |t| < n and |s| < N");
}

}  // namespace

double sample_mean(const RowSource& src) {
    const std::int64_t N = src.rows(), n = src.cols();
    if (N < 1 || n < 1) throw std::invalid_argument("sample_mean: empty panel");
    double total = 0.0;
    for (std::int64_t i = 0; i < N; ++i) {
        const double* r = src.row(i);
        double row_sum = 0.0;
        for (std::int64_t k = 0; k < n; ++k) row_sum += r[k];
        total += row_sum;
    }
    return total / (static_cast<double>(N) * static_cast<double>(n));
}

double sample_cov(const RowSource& src, CovarianceLag lag) {
    check_lag(src, lag);
    const std::int64_t N = src.rows(), n = src.cols();
    const std::int64_t t = lag.t, s = lag.s;
    const double xbar = sample_mean(src);
    // 1 <= i, i+s <= N and 1 <= k, k+t <= n (1-based) give the loop bounds.
    const std::int64_t i_lo = std::max<std::int64_t>(0, -s);
    const std::int64_t i_hi = std::min<std::int64_t>(N, N - s);  // exclusive
    const std::int64_t k_lo = std::max<std::int64_t>(0, -t);
    const std::int64_t k_hi = std::min<std::int64_t>(n, n - t);
    double acc = 0.0;
    for (std::int64_t i = i_lo; i < i_hi; ++i) {
        const double* a = src.row(i);
        const double* b = src.row(i + s);
        double row_acc = 0.0;
        for (std::int64_t k = k_lo; k < k_hi; ++k)
            row_acc += (a[k] - xbar) * (b[k + t] - xbar);
        acc += row_acc;
    }
    return acc / (static_cast<double>(N) * static_cast<double>(n));
}

std::vector<double> partial_sum_process(const RowSource& src, CovarianceLag lag,
                                        const std::vector<double>& taus) {
    check_lag(src, lag);
    const std::int64_t N = src.rows(), n = src.cols();
    const std::int64_t t = lag.t, s = lag.s;
    for (double tau : taus)
        if (!(tau >= 0.0 && tau <= 1.0))
            throw std::out_of_range("TauOutOfRange: need tau in [0,1]");
    const std::int64_t at = t < 0 ? -t : t;
    const std::int64_t n_stat = n - at;
    const std::int64_t u_lo = std::max<std::int64_t>(0, -t);   // 0-based first index
    const std::int64_t i_lo = std::max<std::int64_t>(0, -s);
    const std::int64_t i_hi = std::min<std::int64_t>(N, N - s);

    // Prefix counts per tau; sort-free since each tau maps to a cut point.
    std::vector<std::int64_t> cuts(taus.size());
    for (std::size_t j = 0; j < taus.size(); ++j)
        cuts[j] = static_cast<std::int64_t>(std::floor(static_cast<double>(n_stat) * taus[j]));

    std::vector<double> out(taus.size(), 0.0);
    std::vector<double> prefix(static_cast<std::size_t>(n_stat) + 1, 0.0);
    std::vector<double> col_acc(static_cast<std::size_t>(n_stat), 0.0);
    for (std::int64_t i = i_lo; i < i_hi; ++i) {
        const double* a = src.row(i);
        const double* b = src.row(i + s);
        for (std::int64_t u = 0; u < n_stat; ++u)
            col_acc[u] += a[u_lo + u] * b[u_lo + u + t];
    }
    for (std::int64_t u = 0; u < n_stat; ++u) prefix[u + 1] = prefix[u] + col_acc[u];
    for (std::size_t j = 0; j < taus.size(); ++j) out[j] = prefix[cuts[j]];
    return out;
}

double sigma_star_hat(const RowSource& src, std::int64_t t) {
    const std::int64_t N = src.rows(), n = src.cols();
    if (t < 0 || t >= n) throw std::out_of_range("LagOutOfRange: need 0 <= t < n");
    double sum_sq = 0.0, sum = 0.0;
    for (std::int64_t i = 0; i < N; ++i) {
        const double* r = src.row(i);
        double m = 0.0;
        for (std::int64_t k = 0; k + t < n; ++k) m += r[k] * r[k + t];
        m /= static_cast<double>(n);
        sum_sq += m * m;
        sum += m;
    }
    const double mean = sum / static_cast<double>(N);
    return sum_sq / static_cast<double>(N) - mean * mean;
}

TailEstimate estimate_tail(const RowSource& src, double u0) {
    const std::int64_t N = src.rows(), n = src.cols();
    if (N < 50) throw std::invalid_argument("estimate_tail: need N >= 50");
    if (!(u0 > 0.0 && u0 < 1.0)) throw std::invalid_argument("estimate_tail: u0 must be in (0,1)");
    std::int64_t k_used = 0;
    double log_sum = 0.0;
    for (std::int64_t i = 0; i < N; ++i) {
        const double* r = src.row(i);
        double num = 0.0, den = 0.0;
        for (std::int64_t k = 0; k + 1 < n; ++k) num += r[k] * r[k + 1];
        for (std::int64_t k = 0; k < n; ++k) den += r[k] * r[k];
        double a_hat = den > 0.0 ? num / den : 0.0;
        if (a_hat < 0.0) a_hat = 0.0;  // model space is a in [0,1)
        if (a_hat > kCoefficientCap) a_hat = kCoefficientCap;
        const double u = 1.0 - a_hat;
        if (u < u0) {
            ++k_used;
            log_sum += std::log(u0 / u);
        }
    }
    if (k_used == 0) throw std::runtime_error("NoExceedances: no a_hat_i above 1 - u0");
    TailEstimate est;
    est.u0 = u0;
    est.k_used = k_used;
    est.beta_hat = static_cast<double>(k_used) / log_sum;
    est.psi_hat = est.beta_hat * static_cast<double>(k_used) /
                  (static_cast<double>(N) * std::pow(u0, est.beta_hat));
    return est;
}

ConfidenceInterval confidence_interval_gamma(const RowSource& src, std::int64_t t,
                                             double level, CiMode mode,
                                             std::optional<TailEstimate> plug_in) {
    if (!(level > 0.0 && level < 1.0))
        throw std::invalid_argument("confidence_interval_gamma: level must be in (0,1)");
    const double gamma_hat = sample_cov(src, {t, 0});
    const double tail = 0.5 * (1.0 - level);
    ConfidenceInterval ci;
    ci.level = level;
    ci.mode = mode;
    if (mode == CiMode::Gaussian) {
        const double s2 = sigma_star_hat(src, t);
        const double half = normal_quantile(1.0 - tail) *
                            std::sqrt(std::max(0.0, s2) / static_cast<double>(src.rows()));
        ci.lower = gamma_hat - half;
        ci.upper = gamma_hat + half;
        return ci;
    }
    const TailEstimate est = plug_in ? *plug_in : estimate_tail(src, 0.1);
    if (!(est.beta_hat > 1.0 && est.beta_hat < 2.0))
        throw std::domain_error("TailEstimateOutOfRange: stable modes need 1 < beta_hat < 2");
    ci.beta_hat = est.beta_hat;
    ci.psi_hat = est.psi_hat;
    const double c = mode == CiMode::StableStar ? const_c_star(est.beta_hat, est.psi_hat)
                                                : const_c_plus(est.beta_hat, est.psi_hat);
    StableParams params;
    params.alpha = est.beta_hat;
    params.skew = 1.0;
    params.scale = std::pow(c, 1.0 / est.beta_hat);
    StableDist dist(params);
    const double rate = std::pow(static_cast<double>(src.rows()), 1.0 / est.beta_hat - 1.0);
    ci.lower = gamma_hat - rate * dist.quantile(1.0 - tail);
    ci.upper = gamma_hat - rate * dist.quantile(tail);
    return ci;
}

double sample_mean(const Panel& p) { return sample_mean(PanelRows(p)); }
double sample_cov(const Panel& p, CovarianceLag lag) { return sample_cov(PanelRows(p), lag); }
std::vector<double> partial_sum_process(const Panel& p, CovarianceLag lag,
                                        const std::vector<double>& taus) {
    return partial_sum_process(PanelRows(p), lag, taus);
}
double sigma_star_hat(const Panel& p, std::int64_t t) { return sigma_star_hat(PanelRows(p), t); }
TailEstimate estimate_tail(const Panel& p, double u0) { return estimate_tail(PanelRows(p), u0); }
ConfidenceInterval confidence_interval_gamma(const Panel& p, std::int64_t t, double level,
                                             CiMode mode, std::optional<TailEstimate> plug_in) {
    return confidence_interval_gamma(PanelRows(p), t, level, mode, plug_in);
}

}  // namespace rcar
