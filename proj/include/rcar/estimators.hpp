// Sample statistics of the N x n panel: sample mean, sample covariances
// gamma_hat(t,s) with the fixed 1/(Nn) normalization, un-centered partial
// sum processes, the long-run-variance estimator sigma_hat^2_{N,n,t}, a
// Goldie–Smith style tail estimator, and the asymptotic confidence
// intervals for gamma(t).

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rcar/panel.hpp"

namespace rcar {

// Read-only row access; panels held in memory and rows generated on the
// fly both implement this, so the statistics are computed by one code
// path regardless of where the data lives.
class RowSource {
public:
    virtual ~RowSource() = default;
    virtual std::int64_t rows() const = 0;
    virtual std::int64_t cols() const = 0;
    virtual const double* row(std::int64_t i) const = 0;  // 0-based
};

class PanelRows final : public RowSource {
public:
    explicit PanelRows(const Panel& p) : p_(p) {}
    std::int64_t rows() const override { return p_.n_rows; }
    std::int64_t cols() const override { return p_.n_cols; }
    const double* row(std::int64_t i) const override { return p_.values.data() + i * p_.n_cols; }

private:
    const Panel& p_;
};

struct CovarianceLag {
    std::int64_t t = 0;  // temporal lag
    std::int64_t s = 0;  // cross-sectional lag; s = 0 is the iso-sectional statistic
};

struct TailEstimate {
    double beta_hat = 0.0;
    double psi_hat = 0.0;
    double u0 = 0.0;
    std::int64_t k_used = 0;
};

enum class CiMode { Gaussian, StablePlus, StableStar };

struct ConfidenceInterval {
    double lower = 0.0;
    double upper = 0.0;
    double level = 0.0;
    CiMode mode = CiMode::Gaussian;
    double beta_hat = 0.0;  // stable modes only
    double psi_hat = 0.0;
};

double sample_mean(const RowSource& src);

// gamma_hat(t,s) = (1/(Nn)) sum_{1<=i,i+s<=N} sum_{1<=k,k+t<=n}
//                  (X_i(k) - Xbar)(X_{i+s}(k+t) - Xbar).
// The 1/(Nn) normalization is kept even though the double sum has fewer
// than Nn terms when t,s != 0.
double sample_cov(const RowSource& src, CovarianceLag lag);

// S^{t,s}(tau) = sum_i sum_{u=1}^{floor(n_stat tau)} X_i(u) X_{i+s}(u+t),
// un-centered, where n_stat = cols - |t| so every product lies inside the
// panel.  Values are returned at each requested tau in [0,1] and are
// prefix-consistent across taus.
std::vector<double> partial_sum_process(const RowSource& src, CovarianceLag lag,
                                        const std::vector<double>& taus);

// sigma_hat^2_{N,n,t} =
//   (1/N) sum_i ((1/n) sum_{k<=n-t} X_i(k)X_i(k+t))^2
// - ((1/(Nn)) sum_i sum_{k<=n-t} X_i(k)X_i(k+t))^2.
double sigma_star_hat(const RowSource& src, std::int64_t t);

// Per-row AR(1) fits a_hat_i clamped to [0, 1-2^-40]; exceedances of
// U_i = 1 - a_hat_i below u0 feed the Goldie–Smith estimates
//   beta_hat = K / sum log(u0/U_i),  psi_hat = beta_hat K / (N u0^beta_hat).
TailEstimate estimate_tail(const RowSource& src, double u0);

// Asymptotic confidence interval for gamma(t).  Gaussian mode (beta > 2):
// gamma_hat(t,0) -+ z_{1-(1-level)/2} sqrt(sigma_hat^2/N).  Stable modes
// (1 < beta_hat < 2): [gamma_hat - N^{1/beta_hat - 1} q(1-(1-level)/2),
// gamma_hat - N^{1/beta_hat - 1} q((1-level)/2)] with q the quantile of the
// completely asymmetric stable law with scale c*_beta (StableStar) or
// c+_beta (StablePlus).  When plug_in is absent the stable modes call
// estimate_tail with u0 = 0.1.
ConfidenceInterval confidence_interval_gamma(const RowSource& src, std::int64_t t,
                                             double level, CiMode mode,
                                             std::optional<TailEstimate> plug_in = {});

// Panel conveniences.
double sample_mean(const Panel& p);
double sample_cov(const Panel& p, CovarianceLag lag);
std::vector<double> partial_sum_process(const Panel& p, CovarianceLag lag,
                                        const std::vector<double>& taus);
double sigma_star_hat(const Panel& p, std::int64_t t);
TailEstimate estimate_tail(const Panel& p, double u0);
ConfidenceInterval confidence_interval_gamma(const Panel& p, std::int64_t t, double level,
                                             CiMode mode,
                                             std::optional<TailEstimate> plug_in = {});

}  // namespace rcar
