#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace vvjump {

// Nested model family. SVJJ_S is the full model with state-dependent jump
// intensity; the others are obtained by zeroing parameters.
enum class ModelVariant { SV, SVJ_C, SVJJ_C, SVJJ_S };

inline std::string variant_name(ModelVariant v) {
    switch (v) {
    case ModelVariant::SV: return "SV";
    case ModelVariant::SVJ_C: return "SVJ_C";
    case ModelVariant::SVJJ_C: return "SVJJ_C";
    case ModelVariant::SVJJ_S: return "SVJJ_S";
    }
    throw std::logic_error("variant_name: bad enum");
}

inline ModelVariant parse_variant(const std::string& s) {
    if (s == "SV") return ModelVariant::SV;
    if (s == "SVJ_C" || s == "SVJ-C" || s == "SVJ") return ModelVariant::SVJ_C;
    if (s == "SVJJ_C" || s == "SVJJ-C") return ModelVariant::SVJJ_C;
    if (s == "SVJJ_S" || s == "SVJJ-S") return ModelVariant::SVJJ_S;
    throw std::invalid_argument("unknown model variant: " + s);
}

// Physical-measure parameters of the logVIX / volatility dynamics.
struct PParams {
    double kappa_V = 0.0;       // mean-reversion speed of logVIX (1/year)
    double varsigma_V = 0.0;    // volatility risk-premium loading in the logVIX drift
    double theta = 0.0;         // long-run logVIX level
    double kappa_omega_P = 0.0; // volatility mean-reversion speed under P (1/year)
    double mu_y_JP = 0.0;       // P-mean of logVIX jump size
    double mu_omega_JP = 0.0;   // P-mean of volatility jump size
    double sigma_omega_J = 0.0; // std of volatility jump size (shared across P and Q)
    double rho = 0.0;           // Brownian correlation
    double sigma_omega = 0.0;   // vol-of-vol diffusion coefficient

    void validate() const {
        if (!(kappa_V > 0.0)) throw std::invalid_argument("PParams: kappa_V must be positive");
        if (!(kappa_omega_P > 0.0)) throw std::invalid_argument("PParams: kappa_omega_P must be positive");
        if (!(sigma_omega > 0.0)) throw std::invalid_argument("PParams: sigma_omega must be positive");
        if (!(sigma_omega_J >= 0.0)) throw std::invalid_argument("PParams: sigma_omega_J must be nonnegative");
        if (!(rho > -1.0 && rho < 1.0)) throw std::invalid_argument("PParams: rho must be in (-1, 1)");
    }
};

// Pricing-measure parameters entering the VVIX^2 loadings.
struct QParams {
    double alpha_omega = 0.0;   // volatility drift constant (variance/year)
    double kappa_omega_Q = 0.0; // volatility mean-reversion speed under Q
    double lambda0 = 0.0;       // baseline jump intensity (1/year)
    double lambda1 = 0.0;       // intensity loading on volatility
    double mu_y = 0.0;          // Q-mean of logVIX jump size
    double mu_omega = 0.0;      // Q-mean of volatility jump size
    double sigma_y_J = 0.0;     // std of logVIX jump size (shared across P and Q)

    // kappa_omega_Q - lambda1 * mu_omega; must stay positive for bounded loadings.
    double effective_reversion() const { return kappa_omega_Q - lambda1 * mu_omega; }

    void validate() const {
        if (!(alpha_omega > 0.0)) throw std::invalid_argument("QParams: alpha_omega must be positive");
        if (!(lambda0 >= 0.0)) throw std::invalid_argument("QParams: lambda0 must be nonnegative");
        if (!(lambda1 >= 0.0)) throw std::invalid_argument("QParams: lambda1 must be nonnegative");
        if (!(sigma_y_J >= 0.0)) throw std::invalid_argument("QParams: sigma_y_J must be nonnegative");
        if (!(effective_reversion() > 0.0))
            throw std::invalid_argument("QParams: kappa_omega_Q - lambda1*mu_omega must be positive");
    }
};

// Observation-noise scale of the VVIX^2 measurement equation.
struct PricingError {
    double sigma_P = 0.0; // std of the VVIX^2 pricing error (decimal variance units)

    void validate() const {
        if (!(sigma_P > 0.0)) throw std::invalid_argument("PricingError: sigma_P must be positive");
    }
};

// Affine map from spot volatility to model VVIX^2 at horizon tau:
// VVIX^2 = A + B * omega.
struct AffineLoading {
    double tau = 0.0;
    double alpha_Q = 0.0;
    double beta_Q = 0.0;
    double A = 0.0;
    double B = 0.0;
};

struct IntegratedVariance {
    double alpha_Q = 0.0;
    double beta_Q = 0.0;
    double value = 0.0;
};

// lambda(omega) = lambda0 + lambda1 * omega.
inline double jump_intensity(const QParams& q, double omega) {
    if (!(omega >= 0.0)) throw std::domain_error("jump_intensity: omega must be nonnegative");
    return q.lambda0 + q.lambda1 * omega;
}

// E_t^Q of the integrated variance over (t, t+tau].
// alpha_Q = (1 - e^{-k tau}) / k with k the effective reversion,
// beta_Q  = (tau - alpha_Q) (alpha_omega + lambda0 mu_omega) / k.
// Near k*tau = 0 the expm1 form cancels badly; switch to the series.
inline IntegratedVariance expected_integrated_variance(const QParams& q, double omega_t, double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("expected_integrated_variance: tau must be positive");
    const double k = q.effective_reversion();
    if (!(k > 0.0))
        throw std::invalid_argument("expected_integrated_variance: effective reversion must be positive");
    IntegratedVariance r;
    const double drift = q.alpha_omega + q.lambda0 * q.mu_omega;
    if (std::abs(k * tau) < 1e-8) {
        r.alpha_Q = tau * (1.0 - 0.5 * k * tau);
        r.beta_Q = 0.5 * tau * tau * drift;
    } else {
        r.alpha_Q = -std::expm1(-k * tau) / k;
        r.beta_Q = (tau - r.alpha_Q) * drift / k;
    }
    r.value = r.alpha_Q * omega_t + r.beta_Q;
    return r;
}

// E_t^Q of the cumulative squared logVIX jumps over (t, t+tau]:
// (mu_y^2 + sigma_y_J^2) * (lambda0 tau + lambda1 beta_Q + lambda1 alpha_Q omega).
inline double expected_jump_quadratic(const QParams& q, double omega_t, double tau) {
    const IntegratedVariance iv = expected_integrated_variance(q, omega_t, tau);
    const double m2 = q.mu_y * q.mu_y + q.sigma_y_J * q.sigma_y_J;
    return m2 * (q.lambda0 * tau + q.lambda1 * iv.beta_Q + q.lambda1 * iv.alpha_Q * omega_t);
}

inline AffineLoading affine_loadings(const QParams& q, double tau) {
    const IntegratedVariance iv = expected_integrated_variance(q, 0.0, tau);
    const double m2 = q.mu_y * q.mu_y + q.sigma_y_J * q.sigma_y_J;
    AffineLoading l;
    l.tau = tau;
    l.alpha_Q = iv.alpha_Q;
    l.beta_Q = iv.beta_Q;
    l.A = (iv.beta_Q + m2 * (q.lambda0 * tau + q.lambda1 * iv.beta_Q)) / tau;
    l.B = (1.0 + q.lambda1 * m2) * iv.alpha_Q / tau;
    return l;
}

inline double model_vvix_squared(const QParams& q, double omega_t, double tau) {
    const AffineLoading l = affine_loadings(q, tau);
    return l.A + l.B * omega_t;
}

// kappa_omega_P = kappa_omega_Q + varsigma_omega * sigma_omega.
inline double p_from_q_drift(const QParams& q, double varsigma_omega, double sigma_omega) {
    if (!(sigma_omega > 0.0)) throw std::invalid_argument("p_from_q_drift: sigma_omega must be positive");
    return q.kappa_omega_Q + varsigma_omega * sigma_omega;
}

// The volatility risk premium is never stored; it is implied by the two
// mean-reversion speeds and sigma_omega.
inline double implied_varsigma_omega(const PParams& p, const QParams& q) {
    return (p.kappa_omega_P - q.kappa_omega_Q) / p.sigma_omega;
}

// Zeroing constraints of the nested variants; idempotent.
inline std::pair<PParams, QParams> apply_variant(ModelVariant v, PParams p, QParams q) {
    switch (v) {
    case ModelVariant::SV:
        p.mu_y_JP = p.mu_omega_JP = p.sigma_omega_J = 0.0;
        q.mu_y = q.mu_omega = q.sigma_y_J = 0.0;
        q.lambda0 = q.lambda1 = 0.0;
        break;
    case ModelVariant::SVJ_C:
        p.mu_omega_JP = p.sigma_omega_J = 0.0;
        q.mu_omega = 0.0;
        q.lambda1 = 0.0;
        break;
    case ModelVariant::SVJJ_C:
        q.lambda1 = 0.0;
        break;
    case ModelVariant::SVJJ_S:
        break;
    }
    return {p, q};
}

inline bool variant_has_jumps(ModelVariant v) { return v != ModelVariant::SV; }
inline bool variant_has_vol_jumps(ModelVariant v) {
    return v == ModelVariant::SVJJ_C || v == ModelVariant::SVJJ_S;
}
inline bool variant_has_state_intensity(ModelVariant v) { return v == ModelVariant::SVJJ_S; }

} // namespace vvjump
