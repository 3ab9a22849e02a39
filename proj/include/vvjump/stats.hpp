#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace vvjump::stats {

inline constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();

inline double normal_pdf(double z) {
    static const double inv_sqrt_2pi = 0.39894228040143267794;
    return inv_sqrt_2pi * std::exp(-0.5 * z * z);
}

inline double normal_cdf(double z) {
    return 0.5 * std::erfc(-z * 0.70710678118654752440);
}

// Inverse standard normal CDF. Acklam's rational approximation polished with
// one Halley step against erfc, accurate to ~1e-15 over (0, 1).
inline double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("normal_quantile: p must be in (0, 1)");
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double e = normal_cdf(x) - p;
    const double u = e / normal_pdf(x);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

inline double mean(std::span<const double> x) {
    if (x.empty()) return nan_value;
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

// Sample variance with the n-1 denominator.
inline double variance(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 2) return nan_value;
    const double m = mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(n - 1);
}

inline double stddev(std::span<const double> x) { return std::sqrt(variance(x)); }

// Moment-based skewness m3 / m2^{3/2}; NaN for constant input.
inline double skewness(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 3) return nan_value;
    const double m = mean(x);
    double m2 = 0.0, m3 = 0.0;
    for (double v : x) {
        const double d = v - m;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= static_cast<double>(n);
    m3 /= static_cast<double>(n);
    if (m2 <= 0.0) return nan_value;
    return m3 / std::pow(m2, 1.5);
}

// Excess kurtosis m4 / m2^2 - 3; NaN for constant input.
inline double excess_kurtosis(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 4) return nan_value;
    const double m = mean(x);
    double m2 = 0.0, m4 = 0.0;
    for (double v : x) {
        const double d = v - m;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    m2 /= static_cast<double>(n);
    m4 /= static_cast<double>(n);
    if (m2 <= 0.0) return nan_value;
    return m4 / (m2 * m2) - 3.0;
}

// Percentile by linear interpolation of order statistics: h = (n-1)p.
inline double percentile(std::vector<double> x, double p) {
    if (x.empty()) return nan_value;
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("percentile: p must be in [0, 1]");
    std::sort(x.begin(), x.end());
    const double h = static_cast<double>(x.size() - 1) * p;
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= x.size()) return x.back();
    const double frac = h - static_cast<double>(lo);
    return x[lo] + frac * (x[lo + 1] - x[lo]);
}

inline double correlation(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw std::invalid_argument("correlation: length mismatch");
    const std::size_t n = x.size();
    if (n < 2) return nan_value;
    const double mx = mean(x), my = mean(y);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) return nan_value;
    return sxy / std::sqrt(sxx * syy);
}

} // namespace vvjump::stats
