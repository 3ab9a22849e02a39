#include "vvjump/jump_tests.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "vvjump/stats.hpp"

namespace vvjump {

namespace {

std::vector<double> returns_of(std::span<const double> levels, bool log_diff) {
    std::vector<double> r(levels.size(), 0.0);
    for (std::size_t t = 1; t < levels.size(); ++t) {
        if (log_diff) {
            if (!(levels[t] > 0.0 && levels[t - 1] > 0.0))
                throw std::invalid_argument("jump tests: log returns need positive levels");
            r[t] = std::log(levels[t]) - std::log(levels[t - 1]);
        } else {
            r[t] = levels[t] - levels[t - 1];
        }
    }
    return r;
}

} // namespace

double mu_four_thirds() {
    return std::pow(2.0, 2.0 / 3.0) * std::tgamma(7.0 / 6.0) / std::tgamma(0.5);
}

std::vector<RollingJumpStats> rolling_stats(std::span<const double> levels, int n, bool log_diff) {
    if (n < 1) throw std::invalid_argument("rolling_stats: window must be at least 1");
    const int len = static_cast<int>(levels.size());
    if (len <= n + 2) throw std::invalid_argument("rolling_stats: series length must exceed n+2");
    const std::vector<double> r = returns_of(levels, log_diff);

    const double pi = std::numbers::pi;
    const double theta = (pi / 2.0) * (pi / 2.0) + pi - 5.0;
    const double mu43 = mu_four_thirds();
    const double tp_scale = std::pow(mu43, -3.0) * (n >= 3 ? double(n) * n / (n - 2) : 0.0);

    std::vector<RollingJumpStats> out;
    out.reserve(len - n - 2);
    for (int t = n + 2; t < len; ++t) {
        RollingJumpStats s;
        s.t = t;
        for (int k = 0; k <= n; ++k) s.rv += r[t - k] * r[t - k];
        for (int k = 0; k <= n - 1; ++k) s.bv += std::abs(r[t - k]) * std::abs(r[t - k - 1]);
        s.bv *= pi / 2.0;
        if (n >= 3) {
            for (int k = 0; k <= n - 1; ++k)
                s.tp += std::pow(std::abs(r[t - k]), 4.0 / 3.0) *
                        std::pow(std::abs(r[t - k - 1]), 4.0 / 3.0) *
                        std::pow(std::abs(r[t - k - 2]), 4.0 / 3.0);
            s.tp *= tp_scale;
        } else {
            s.tp = stats::nan_value;
        }
        if (s.rv > 0.0) {
            s.rj = (s.rv - s.bv) / s.rv;
            if (s.bv > 0.0 && n >= 3) {
                const double ratio = std::max(1.0, s.tp / (s.bv * s.bv));
                s.z = s.rj / std::sqrt(theta * ratio / n);
                s.defined = true;
            } else {
                s.z = stats::nan_value;
            }
        } else {
            s.rj = stats::nan_value;
            s.z = stats::nan_value;
        }
        out.push_back(s);
    }
    return out;
}

std::vector<RollingJumpStats> detect_jumps(std::span<const double> levels, int n, double alpha,
                                           bool log_diff) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("detect_jumps: alpha must be in (0, 1)");
    std::vector<RollingJumpStats> out = rolling_stats(levels, n, log_diff);
    const double crit = stats::normal_quantile(1.0 - alpha / 2.0);
    for (RollingJumpStats& s : out) s.flagged = s.defined && std::abs(s.z) > crit;
    return out;
}

std::vector<CojumpStats> detect_cojumps(std::span<const double> series1,
                                        std::span<const double> series2, int n, double alpha,
                                        bool log_diff) {
    if (series1.size() != series2.size())
        throw std::invalid_argument("detect_cojumps: series lengths differ");
    if (n < 1) throw std::invalid_argument("detect_cojumps: window must be at least 1");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("detect_cojumps: alpha must be in (0, 1)");
    const int len = static_cast<int>(series1.size());
    if (len <= n + 1) throw std::invalid_argument("detect_cojumps: series length must exceed n+1");
    const std::vector<double> r1 = returns_of(series1, log_diff);
    const std::vector<double> r2 = returns_of(series2, log_diff);

    std::vector<CojumpStats> out;
    out.reserve(len - n);
    double sum = 0.0;
    for (int t = n; t < len; ++t) {
        CojumpStats s;
        s.t = t;
        for (int k = 0; k <= n - 1; ++k) s.cp += r1[t - k] * r2[t - k];
        sum += s.cp;
        out.push_back(s);
    }
    const double m = sum / static_cast<double>(out.size());
    double ss = 0.0;
    for (const CojumpStats& s : out) ss += (s.cp - m) * (s.cp - m);
    const double sd = std::sqrt(ss / static_cast<double>(out.size()));
    if (!(sd > 0.0)) {
        for (CojumpStats& s : out) s.z_cp = stats::nan_value;
        return out;
    }
    const double crit = stats::normal_quantile(1.0 - alpha / 2.0);
    for (CojumpStats& s : out) {
        s.z_cp = (s.cp - m) / sd;
        s.defined = true;
        s.flagged = std::abs(s.z_cp) > crit;
    }
    return out;
}

} // namespace vvjump
