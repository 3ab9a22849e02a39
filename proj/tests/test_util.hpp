#pragma once

// Shared oracle helpers for the test suites. Everything here is deliberately
// independent of the library implementation paths it is used to check:
// quadrature instead of closed forms, brute-force simulation instead of
// conditional algebra, grid normalization instead of conjugate updates.

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "vvjump/model.hpp"
#include "vvjump/rng.hpp"
#include "vvjump/stats.hpp"

namespace testutil {

// Composite Simpson rule on [a, b] with n (even) intervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    if (n % 2 != 0) ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return s * h / 3.0;
}

// One-sample Kolmogorov-Smirnov statistic against a CDF.
inline double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double F = cdf(sample[i]);
        d = std::max(d, std::abs(F - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - F));
    }
    return d;
}

// Asymptotic Kolmogorov p-value with Marsaglia's finite-n correction.
inline double ks_pvalue(double d, std::size_t n) {
    const double sn = std::sqrt(static_cast<double>(n));
    const double t = d * (sn + 0.12 + 0.11 / sn);
    double p = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = 2.0 * std::pow(-1.0, k - 1) * std::exp(-2.0 * k * k * t * t);
        p += term;
        if (std::abs(term) < 1e-12) break;
    }
    return std::clamp(p, 0.0, 1.0);
}

// Jarque-Bera statistic (asymptotically chi-squared with 2 dof under normality).
inline double jarque_bera(std::span<const double> x) {
    const double n = static_cast<double>(x.size());
    const double s = vvjump::stats::skewness(x);
    const double k = vvjump::stats::excess_kurtosis(x);
    return n / 6.0 * (s * s + k * k / 4.0);
}

// Tabulated log-density on a grid, normalized numerically; exposes the CDF
// for KS comparisons against sampler draws.
class GridPosterior {
public:
    GridPosterior(std::vector<double> xs, std::vector<double> log_density)
        : xs_(std::move(xs)), cdf_(xs_.size(), 0.0) {
        const double m = *std::max_element(log_density.begin(), log_density.end());
        std::vector<double> dens(xs_.size());
        for (std::size_t i = 0; i < xs_.size(); ++i) dens[i] = std::exp(log_density[i] - m);
        for (std::size_t i = 1; i < xs_.size(); ++i)
            cdf_[i] = cdf_[i - 1] + 0.5 * (dens[i] + dens[i - 1]) * (xs_[i] - xs_[i - 1]);
        const double total = cdf_.back();
        for (double& c : cdf_) c /= total;
    }

    double cdf(double x) const {
        if (x <= xs_.front()) return 0.0;
        if (x >= xs_.back()) return 1.0;
        const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - xs_.begin());
        const double w = (x - xs_[i - 1]) / (xs_[i] - xs_[i - 1]);
        return cdf_[i - 1] + w * (cdf_[i] - cdf_[i - 1]);
    }

private:
    std::vector<double> xs_;
    std::vector<double> cdf_;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
};

// Brute-force Monte Carlo estimate of the risk-neutral VVIX^2 definition:
// (1/tau) [ integral of omega ds + sum of squared logVIX jumps ] via Euler
// simulation of the Q-dynamics of omega with co-jumps. Independent of the
// closed-form loadings it is used to validate.
inline McEstimate mc_vvix_squared(const vvjump::QParams& q, double sigma_omega, double sigma_omega_J,
                                  double omega0, double tau, double dt, int n_paths,
                                  std::uint64_t seed) {
    vvjump::Rng rng(seed);
    const int n_steps = static_cast<int>(std::round(tau / dt));
    double sum = 0.0, sum_sq = 0.0;
    for (int p = 0; p < n_paths; ++p) {
        double omega = omega0;
        double integral = 0.0;
        double jump_sq = 0.0;
        for (int s = 0; s < n_steps; ++s) {
            const double om = std::max(omega, 0.0);
            const double lambda = q.lambda0 + q.lambda1 * om;
            const double cont_next = omega + (q.alpha_omega - q.kappa_omega_Q * omega) * dt +
                                     sigma_omega * std::sqrt(om * dt) * rng.normal();
            double jump = 0.0;
            if (rng.uniform() < lambda * dt) {
                jump = rng.normal(q.mu_omega, sigma_omega_J);
                const double jy = rng.normal(q.mu_y, q.sigma_y_J);
                jump_sq += jy * jy;
            }
            integral += 0.5 * (omega + cont_next) * dt;
            omega = cont_next + jump;
        }
        const double v = (integral + jump_sq) / tau;
        sum += v;
        sum_sq += v * v;
    }
    McEstimate e;
    e.mean = sum / n_paths;
    const double var = (sum_sq - sum * sum / n_paths) / (n_paths - 1);
    e.std_error = std::sqrt(var / n_paths);
    return e;
}

} // namespace testutil
