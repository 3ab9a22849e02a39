#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vvjump/mcmc.hpp"
#include "vvjump/model.hpp"

namespace vvjump {

// Standardized one-step-ahead residuals implied by posterior point estimates:
// eps_y spans days 2..T+1, eps_omega days 2..T (index-aligned, unused slots 0).
struct ResidualSeries {
    std::vector<double> eps_y;
    std::vector<double> eps_omega;
};

// Point estimates needed to invert the transition equations. Usually filled
// from a ChainOutput; tests may plant simulation truths instead.
struct PosteriorPointEstimate {
    PParams p;
    QParams q;
    std::vector<double> omega;        // days 1..T
    std::vector<double> jump_y;       // applied logVIX jump per day, 2..T+1
    std::vector<double> jump_omega;   // applied volatility jump per day, 2..T+1
};

PosteriorPointEstimate point_estimate_from_chain(const ChainOutput& chain);

ResidualSeries vix_residuals(const EstimationData& data, const PosteriorPointEstimate& est,
                             double delta, double epsilon_omega = 1e-8);
ResidualSeries vol_residuals(const EstimationData& data, const PosteriorPointEstimate& est,
                             double delta, double epsilon_omega = 1e-8);

// Theoretical-vs-sample quantile pairs at plotting positions (k - 0.5)/n.
struct QQPoint {
    double theoretical;
    double sample;
};
std::vector<QQPoint> qq_points(std::vector<double> residuals);

// Per-day posterior jump probability and mean applied jump sizes.
struct JumpProfile {
    std::vector<double> probability;  // days 2..T+1
    std::vector<double> mean_size_y;
    std::vector<double> mean_size_omega;
};
JumpProfile posterior_jump_profile(const ChainOutput& chain);

// Descriptive statistics in the layout of the data summary table. Kurtosis
// is reported in excess of the normal benchmark; undefined moments (constant
// input) come back as NaN.
struct SummaryStats {
    double mean;
    double volatility;
    double skewness;
    double kurtosis;
    double min;
    double max;
};
SummaryStats summary_stats(std::span<const double> series);

// The thirteen reference statistics of the simulation study: level moments
// and extremes of a logVIX series plus jump-style statistics of its daily
// changes.
struct PredictiveStatistics {
    double stadev;
    double skewness;
    double kurtosis;
    double maximum;
    double minimum;
    double maxjump;
    double minjump;
    double avgmax10;
    double avgmin10;
    double perc001;
    double perc005;
    double perc095;
    double perc099;

    static constexpr int count = 13;
    double value(int k) const;
    static const char* name(int k);
};
PredictiveStatistics predictive_statistics(std::span<const double> y_series);

// Posterior-predictive exceedance fractions: simulate paths of the fitted
// model at the point estimates and count, per statistic, how often the
// simulated value strictly exceeds the observed one.
struct PValueStudyResult {
    PredictiveStatistics data_stats;
    std::vector<PredictiveStatistics> simulated; // one entry per simulation
    double p_values[PredictiveStatistics::count];
};
PValueStudyResult pvalue_study(ModelVariant variant, const PParams& p, const QParams& q,
                               std::span<const double> y_data, int n_simulations,
                               double delta, std::uint64_t seed);

// Posterior-draw variant: each predictive path is simulated at one retained
// draw of the chain instead of the posterior mean, which propagates the
// parameter uncertainty into the predictive distribution.
PValueStudyResult pvalue_study_posterior_draws(const ChainOutput& chain,
                                               std::span<const double> y_data, int n_simulations,
                                               double delta, std::uint64_t seed);

// Pearson correlation between a posterior volatility path and observed VVIX
// levels; NaN for zero-variance input.
double proxy_correlation(std::span<const double> omega, std::span<const double> vvix);

} // namespace vvjump
