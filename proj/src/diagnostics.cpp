#include "vvjump/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vvjump/simulator.hpp"
#include "vvjump/stats.hpp"

namespace vvjump {

PosteriorPointEstimate point_estimate_from_chain(const ChainOutput& chain) {
    if (chain.draws.empty()) throw std::invalid_argument("point_estimate_from_chain: no draws");
    PosteriorPointEstimate est;
    const double n = static_cast<double>(chain.draws.size());
    auto& p = est.p;
    auto& q = est.q;
    for (const ParameterDraw& d : chain.draws) {
        p.kappa_V += d.kappa_V;
        p.varsigma_V += d.varsigma_V;
        p.theta += d.theta;
        p.kappa_omega_P += d.kappa_omega_P;
        p.mu_y_JP += d.mu_y_JP;
        p.mu_omega_JP += d.mu_omega_JP;
        p.sigma_omega_J += d.sigma_omega_J;
        p.rho += d.rho;
        p.sigma_omega += d.sigma_omega;
        q.alpha_omega += d.alpha_omega;
        q.kappa_omega_Q += d.kappa_omega_Q;
        q.lambda0 += d.lambda0;
        q.lambda1 += d.lambda1;
        q.mu_y += d.mu_y;
        q.mu_omega += d.mu_omega;
        q.sigma_y_J += d.sigma_y_J;
    }
    p.kappa_V /= n;
    p.varsigma_V /= n;
    p.theta /= n;
    p.kappa_omega_P /= n;
    p.mu_y_JP /= n;
    p.mu_omega_JP /= n;
    p.sigma_omega_J /= n;
    p.rho /= n;
    p.sigma_omega /= n;
    q.alpha_omega /= n;
    q.kappa_omega_Q /= n;
    q.lambda0 /= n;
    q.lambda1 /= n;
    q.mu_y /= n;
    q.mu_omega /= n;
    q.sigma_y_J /= n;
    est.omega = chain.omega_mean;
    est.jump_y = chain.jump_y_mean;
    est.jump_omega = chain.jump_omega_mean;
    return est;
}

ResidualSeries vix_residuals(const EstimationData& data, const PosteriorPointEstimate& est,
                             double delta, double epsilon_omega) {
    const int T = data.T;
    if (static_cast<int>(est.omega.size()) != T + 1 ||
        static_cast<int>(est.jump_y.size()) != T + 2)
        throw std::invalid_argument("vix_residuals: estimate layout mismatch");
    const DiscreteCoeffs k = coefficients(est.p, est.q, delta);
    ResidualSeries r;
    r.eps_y.assign(T + 2, 0.0);
    for (int i = 2; i <= T + 1; ++i) {
        const double om_prev = std::max(est.omega[i - 1], epsilon_omega);
        const double ytilde = data.y[i] - est.jump_y[i];
        r.eps_y[i] = (ytilde - k.a0 - k.a1 * data.y[i - 1] - k.a2 * est.omega[i - 1]) /
                     std::sqrt(om_prev * delta);
    }
    return r;
}

ResidualSeries vol_residuals(const EstimationData& data, const PosteriorPointEstimate& est,
                             double delta, double epsilon_omega) {
    const int T = data.T;
    if (static_cast<int>(est.omega.size()) != T + 1 ||
        static_cast<int>(est.jump_omega.size()) != T + 2)
        throw std::invalid_argument("vol_residuals: estimate layout mismatch");
    const DiscreteCoeffs k = coefficients(est.p, est.q, delta);
    ResidualSeries r;
    r.eps_omega.assign(T + 1, 0.0);
    for (int i = 2; i <= T; ++i) {
        const double om_prev = std::max(est.omega[i - 1], epsilon_omega);
        const double omtilde = est.omega[i] - est.jump_omega[i];
        r.eps_omega[i] = (omtilde - k.c0 - k.c1 * est.omega[i - 1]) /
                         (est.p.sigma_omega * std::sqrt(om_prev * delta));
    }
    return r;
}

std::vector<QQPoint> qq_points(std::vector<double> residuals) {
    const std::size_t n = residuals.size();
    if (n < 2) throw std::invalid_argument("qq_points: need at least two residuals");
    std::sort(residuals.begin(), residuals.end());
    std::vector<QQPoint> pts(n);
    for (std::size_t k = 0; k < n; ++k) {
        pts[k].theoretical = stats::normal_quantile((static_cast<double>(k) + 0.5) / n);
        pts[k].sample = residuals[k];
    }
    return pts;
}

JumpProfile posterior_jump_profile(const ChainOutput& chain) {
    if (chain.draws.empty()) throw std::invalid_argument("posterior_jump_profile: no draws");
    JumpProfile prof;
    prof.probability = chain.jump_prob;
    prof.mean_size_y = chain.jump_y_mean;
    prof.mean_size_omega = chain.jump_omega_mean;
    return prof;
}

SummaryStats summary_stats(std::span<const double> series) {
    if (series.size() < 4) throw std::invalid_argument("summary_stats: need at least 4 points");
    SummaryStats s;
    s.mean = stats::mean(series);
    s.volatility = stats::stddev(series);
    s.skewness = stats::skewness(series);
    s.kurtosis = stats::excess_kurtosis(series);
    s.min = *std::min_element(series.begin(), series.end());
    s.max = *std::max_element(series.begin(), series.end());
    return s;
}

double PredictiveStatistics::value(int k) const {
    switch (k) {
    case 0: return stadev;
    case 1: return skewness;
    case 2: return kurtosis;
    case 3: return maximum;
    case 4: return minimum;
    case 5: return maxjump;
    case 6: return minjump;
    case 7: return avgmax10;
    case 8: return avgmin10;
    case 9: return perc001;
    case 10: return perc005;
    case 11: return perc095;
    case 12: return perc099;
    }
    throw std::out_of_range("PredictiveStatistics::value");
}

const char* PredictiveStatistics::name(int k) {
    static const char* names[] = {"stadev",  "skewness", "kurtosis", "maximum",  "minimum",
                                  "maxjump", "minjump",  "avgmax10", "avgmin10", "perc0.01",
                                  "perc0.05", "perc0.95", "perc0.99"};
    if (k < 0 || k >= count) throw std::out_of_range("PredictiveStatistics::name");
    return names[k];
}

PredictiveStatistics predictive_statistics(std::span<const double> y) {
    if (y.size() < 11)
        throw std::invalid_argument("predictive_statistics: series must have at least 11 points");
    PredictiveStatistics s;
    s.stadev = stats::stddev(y);
    s.skewness = stats::skewness(y);
    s.kurtosis = stats::excess_kurtosis(y);
    s.maximum = *std::max_element(y.begin(), y.end());
    s.minimum = *std::min_element(y.begin(), y.end());

    std::vector<double> changes(y.size() - 1);
    for (std::size_t t = 1; t < y.size(); ++t) changes[t - 1] = y[t] - y[t - 1];
    std::vector<double> sorted = changes;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    s.maxjump = sorted.back();
    s.minjump = sorted.front();
    double top = 0.0, bottom = 0.0;
    for (std::size_t k = 0; k < 10; ++k) {
        top += sorted[n - 1 - k];
        bottom += sorted[k];
    }
    s.avgmax10 = top / 10.0;
    s.avgmin10 = bottom / 10.0;
    s.perc001 = stats::percentile(changes, 0.01);
    s.perc005 = stats::percentile(changes, 0.05);
    s.perc095 = stats::percentile(changes, 0.95);
    s.perc099 = stats::percentile(changes, 0.99);
    return s;
}

PValueStudyResult pvalue_study(ModelVariant variant, const PParams& p, const QParams& q,
                               std::span<const double> y_data, int n_simulations, double delta,
                               std::uint64_t seed) {
    if (n_simulations < 1) throw std::invalid_argument("pvalue_study: need at least 1 simulation");
    PValueStudyResult res;
    res.data_stats = predictive_statistics(y_data);
    res.simulated.reserve(n_simulations);
    const int T = static_cast<int>(y_data.size()) - 2;
    const double y0 = stationary_logvix(p, q);
    const double omega0 = stationary_omega(p, q);
    for (int n = 0; n < n_simulations; ++n) {
        const auto path = simulate_path(variant, p, q, y0, omega0, T, delta,
                                        Rng::derive_seed(seed, static_cast<std::uint64_t>(n)));
        res.simulated.push_back(predictive_statistics(path.y));
    }
    for (int k = 0; k < PredictiveStatistics::count; ++k) {
        long exceed = 0;
        for (const auto& sim : res.simulated)
            if (sim.value(k) > res.data_stats.value(k)) ++exceed;
        res.p_values[k] = static_cast<double>(exceed) / static_cast<double>(n_simulations);
    }
    return res;
}

PValueStudyResult pvalue_study_posterior_draws(const ChainOutput& chain,
                                               std::span<const double> y_data, int n_simulations,
                                               double delta, std::uint64_t seed) {
    if (chain.draws.empty()) throw std::invalid_argument("pvalue_study: chain has no draws");
    if (n_simulations < 1) throw std::invalid_argument("pvalue_study: need at least 1 simulation");
    PValueStudyResult res;
    res.data_stats = predictive_statistics(y_data);
    res.simulated.reserve(n_simulations);
    const int T = static_cast<int>(y_data.size()) - 2;
    for (int n = 0; n < n_simulations; ++n) {
        // spread the selected draws over the whole retained chain
        const std::size_t idx =
            (static_cast<std::size_t>(n) * chain.draws.size()) / static_cast<std::size_t>(n_simulations);
        const ParameterDraw& d = chain.draws[idx];
        PParams p;
        p.kappa_V = d.kappa_V;
        p.varsigma_V = d.varsigma_V;
        p.theta = d.theta;
        p.kappa_omega_P = d.kappa_omega_P;
        p.mu_y_JP = d.mu_y_JP;
        p.mu_omega_JP = d.mu_omega_JP;
        p.sigma_omega_J = d.sigma_omega_J;
        p.rho = d.rho;
        p.sigma_omega = d.sigma_omega;
        QParams q;
        q.alpha_omega = d.alpha_omega;
        q.kappa_omega_Q = d.kappa_omega_Q;
        q.lambda0 = d.lambda0;
        q.lambda1 = d.lambda1;
        q.mu_y = d.mu_y;
        q.mu_omega = d.mu_omega;
        q.sigma_y_J = d.sigma_y_J;
        // Replicated paths start from the state the estimation conditioned
        // on: the observed first logVIX and the posterior day-one volatility.
        const double y0 = y_data[0];
        const double omega0 = chain.omega_mean.empty() ? 0.5 : std::max(chain.omega_mean[1], 1e-6);
        const auto path = simulate_path(chain.variant, p, q, y0, omega0, T, delta,
                                        Rng::derive_seed(seed, static_cast<std::uint64_t>(n)));
        res.simulated.push_back(predictive_statistics(path.y));
    }
    for (int k = 0; k < PredictiveStatistics::count; ++k) {
        long exceed = 0;
        for (const auto& sim : res.simulated)
            if (sim.value(k) > res.data_stats.value(k)) ++exceed;
        res.p_values[k] = static_cast<double>(exceed) / static_cast<double>(n_simulations);
    }
    return res;
}

double proxy_correlation(std::span<const double> omega, std::span<const double> vvix) {
    return stats::correlation(omega, vvix);
}

} // namespace vvjump
