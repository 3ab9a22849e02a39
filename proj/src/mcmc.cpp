#include "vvjump/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vvjump/stats.hpp"

namespace vvjump {

namespace {

constexpr double kProbFloor = 1e-12;

double log_normal_prior(double x, const NormalPrior& pr) {
    const double d = x - pr.mean;
    return -0.5 * d * d / pr.var;
}

// Log density of InvGamma(shape, scale) up to its normalizing constant.
double log_inv_gamma(double x, const InvGammaPrior& pr) {
    if (!(x > 0.0)) return -std::numeric_limits<double>::infinity();
    return -(pr.shape + 1.0) * std::log(x) - pr.scale / x;
}

} // namespace

void EstimationData::validate(bool need_vvix) const {
    if (T < 2) throw std::invalid_argument("EstimationData: T must be at least 2");
    if (static_cast<int>(y.size()) != T + 2)
        throw std::invalid_argument("EstimationData: y must hold days 0..T+1");
    for (double v : y)
        if (!std::isfinite(v)) throw std::invalid_argument("EstimationData: non-finite logVIX");
    if (need_vvix) {
        if (static_cast<int>(vvix_sq.size()) != T + 1)
            throw std::invalid_argument("EstimationData: vvix_sq must hold days 1..T");
        for (int i = 1; i <= T; ++i)
            if (!std::isfinite(vvix_sq[i]) || vvix_sq[i] <= 0.0)
                throw std::invalid_argument("EstimationData: VVIX^2 must be positive and finite");
    }
}

EstimationData estimation_data_from_path(const SimulatedPath& path) {
    EstimationData d;
    d.T = path.T;
    d.y = path.y;
    d.vvix_sq = path.vvix_sq;
    return d;
}

void PriorHyper::validate() const {
    const NormalPrior* normals[] = {&theta, &kappa_V,  &varsigma_V, &kappa_omega_P, &mu_y_JP,
                                    &mu_omega_JP, &alpha_omega, &kappa_omega_Q, &lambda0, &lambda1,
                                    &mu_y, &mu_omega, &rho, &sigma_omega};
    for (const NormalPrior* n : normals)
        if (!(n->var > 0.0)) throw std::invalid_argument("PriorHyper: prior variances must be positive");
    const InvGammaPrior* igs[] = {&sigma_omega_J_sq, &sigma_y_J_sq, &sigma_P_sq};
    for (const InvGammaPrior* g : igs)
        if (!(g->shape > 0.0 && g->scale > 0.0))
            throw std::invalid_argument("PriorHyper: inverse-gamma hyperparameters must be positive");
    const double steps_list[] = {steps.omega,  steps.alpha_omega, steps.kappa_omega_Q,
                                 steps.lambda0, steps.lambda1,     steps.mu_y,
                                 steps.mu_omega, steps.sigma_y_J,   steps.rho,
                                 steps.sigma_omega};
    for (double s : steps_list)
        if (!(s > 0.0)) throw std::invalid_argument("PriorHyper: proposal steps must be positive");
}

void ChainConfig::validate() const {
    if (!(iterations >= 1)) throw std::invalid_argument("ChainConfig: iterations must be positive");
    if (!(burn_in >= 0 && burn_in < iterations))
        throw std::invalid_argument("ChainConfig: burn-in must be smaller than iterations");
    if (!(thinning >= 1)) throw std::invalid_argument("ChainConfig: thinning must be at least 1");
    if (!(delta > 0.0 && tau > 0.0))
        throw std::invalid_argument("ChainConfig: delta and tau must be positive");
    if (!(adaptation_window >= 1))
        throw std::invalid_argument("ChainConfig: adaptation window must be positive");
    if (!(target_accept_low > 0.0 && target_accept_low < target_accept_high &&
          target_accept_high < 1.0))
        throw std::invalid_argument("ChainConfig: bad acceptance band");
    if (!(epsilon_omega > 0.0))
        throw std::invalid_argument("ChainConfig: epsilon_omega must be positive");
}

void GibbsSampler::Block::record(bool accepted) {
    ++win_attempts;
    if (accepted) ++win_accepts;
    if (counting) {
        ++attempts;
        if (accepted) ++accepts;
    }
}

void GibbsSampler::Block::adapt(double low, double high) {
    if (win_attempts == 0) return;
    const double rate = static_cast<double>(win_accepts) / static_cast<double>(win_attempts);
    if (rate < low) step *= 0.8;
    else if (rate > high) step *= 1.25;
    win_accepts = win_attempts = 0;
}

GibbsSampler::GibbsSampler(ModelVariant variant, const EstimationData& data,
                           const PriorHyper& priors, const ChainConfig& config)
    : variant_(variant), data_(data), priors_(priors), config_(config) {
    config_.validate();
    priors_.validate();
    data_.validate(config_.vvix_enabled);
    omega_blocks_.assign(data_.T + 1, Block{priors_.steps.omega});
    alpha_omega_block_.step = priors_.steps.alpha_omega;
    kappa_omega_Q_block_.step = priors_.steps.kappa_omega_Q;
    lambda0_block_.step = priors_.steps.lambda0;
    lambda1_block_.step = priors_.steps.lambda1;
    mu_y_block_.step = priors_.steps.mu_y;
    mu_omega_block_.step = priors_.steps.mu_omega;
    sigma_y_J_block_.step = priors_.steps.sigma_y_J;
    ridge_block_.step = 0.3;
    rho_sigma_block_.step = 1.0; // multiplier on the (rho, sigma_omega) pair scales
    initialize();
}

double GibbsSampler::floored(double omega) const { return std::max(omega, config_.epsilon_omega); }

void GibbsSampler::refresh_coeffs() { k_ = coefficients(p_, q_, config_.delta); }

void GibbsSampler::initialize() {
    p_.theta = priors_.theta.mean;
    p_.kappa_V = priors_.kappa_V.mean;
    p_.varsigma_V = priors_.varsigma_V.mean;
    p_.kappa_omega_P = priors_.kappa_omega_P.mean;
    p_.mu_y_JP = priors_.mu_y_JP.mean;
    p_.mu_omega_JP = priors_.mu_omega_JP.mean;
    p_.rho = std::clamp(priors_.rho.mean, -0.99, 0.99);
    p_.sigma_omega = priors_.sigma_omega.mean > 0.0 ? priors_.sigma_omega.mean : 1.0;
    q_.alpha_omega = priors_.alpha_omega.mean;
    q_.kappa_omega_Q = priors_.kappa_omega_Q.mean;
    q_.lambda0 = std::max(priors_.lambda0.mean, 0.0);
    q_.lambda1 = std::max(priors_.lambda1.mean, 0.0);
    q_.mu_y = priors_.mu_y.mean;
    q_.mu_omega = priors_.mu_omega.mean;
    const auto ig_mean = [](const InvGammaPrior& pr) {
        return pr.shape > 1.0 ? pr.scale / (pr.shape - 1.0) : pr.scale;
    };
    p_.sigma_omega_J = std::sqrt(ig_mean(priors_.sigma_omega_J_sq));
    q_.sigma_y_J = std::sqrt(ig_mean(priors_.sigma_y_J_sq));
    sigma_P_sq_ = ig_mean(priors_.sigma_P_sq);
    enforce_variant();
    if (!(q_.effective_reversion() > 0.0))
        throw std::invalid_argument("GibbsSampler: prior means violate the loading constraint");
    refresh_coeffs();

    const int T = data_.T;
    state_.omega.assign(T + 1, 0.0);
    state_.n.assign(T + 2, 0);
    state_.j_y.assign(T + 2, p_.mu_y_JP);
    state_.j_omega.assign(T + 2, p_.mu_omega_JP);

    if (config_.vvix_enabled) {
        const AffineLoading l = affine_loadings(q_, config_.tau);
        for (int i = 1; i <= T; ++i)
            state_.omega[i] = std::max((data_.vvix_sq[i] - l.A) / l.B, config_.epsilon_omega);
    } else {
        // Rolling variance of logVIX differences, annualized by 1/delta.
        const int window = 22;
        for (int i = 1; i <= T; ++i) {
            const int lo = std::max(1, i - window + 1);
            double m = 0.0;
            int cnt = 0;
            for (int j = lo; j <= i; ++j, ++cnt) m += data_.y[j] - data_.y[j - 1];
            m /= cnt;
            double v = 0.0;
            for (int j = lo; j <= i; ++j) {
                const double d = data_.y[j] - data_.y[j - 1] - m;
                v += d * d;
            }
            v = cnt > 1 ? v / (cnt - 1) : (data_.y[i] - data_.y[i - 1]) * (data_.y[i] - data_.y[i - 1]);
            state_.omega[i] = std::max(v / config_.delta, config_.epsilon_omega);
        }
    }
    warm_start_drift_params();
    enforce_variant();
    refresh_coeffs();

    // Seed the latent jump sizes from their priors rather than a constant;
    // an all-equal start makes the jump-scale conditionals collapse before
    // the augmentation can regenerate dispersion.
    Rng init_rng(Rng::derive_seed(config_.seed, 0x1a17));
    if (variant_has_jumps(variant_)) {
        for (int i = 2; i <= T + 1; ++i) {
            state_.j_y[i] = init_rng.normal(p_.mu_y_JP, q_.sigma_y_J);
            if (variant_has_vol_jumps(variant_))
                state_.j_omega[i] = init_rng.normal(p_.mu_omega_JP, p_.sigma_omega_J);
        }
    }

    // Re-invert the path at the warm-started loadings so the starting
    // (path, A, B) triple is self-consistent; repairing a level offset
    // through single-day moves costs hundreds of sweeps.
    if (config_.vvix_enabled) {
        const AffineLoading l = affine_loadings(q_, config_.tau);
        double mean_w = 0.0;
        for (int i = 1; i <= T; ++i) {
            state_.omega[i] = std::max((data_.vvix_sq[i] - l.A) / l.B, config_.epsilon_omega);
            mean_w += state_.omega[i];
        }
        mean_w /= T;
        q_.alpha_omega = std::clamp(p_.kappa_omega_P * mean_w, 0.05, 60.0);

        // Start each day's proposal scale near the width of its conditional
        // (measurement precision plus the two adjacent transitions); a flat
        // initial scale needs many adaptation rounds when the pricing error
        // is small, and the path cannot track the observable until then.
        const double c1w = 1.0 - p_.kappa_omega_P * config_.delta;
        const double meas_prec = l.B * l.B / sigma_P_sq_;
        for (int i = 1; i <= T; ++i) {
            const double trans_prec =
                (1.0 + c1w * c1w) /
                (p_.sigma_omega * p_.sigma_omega * floored(state_.omega[i]) * config_.delta);
            omega_blocks_[i].step = 2.4 / std::sqrt(meas_prec + trans_prec);
        }
    }
}

// Moment-matched starting values for the physical-measure parameters, from
// plain autoregressions of logVIX and the inverted volatility path. Burn-in
// otherwise spends most of its budget walking the drift block and the path
// smoothness into the posterior bulk.
void GibbsSampler::warm_start_drift_params() {
    const int T = data_.T;
    if (T < 20) return;
    const double delta = config_.delta;

    double Sy[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
    double by[3] = {0, 0, 0};
    for (int i = 2; i <= T + 1; ++i) {
        const double x[3] = {1.0, data_.y[i - 1], state_.omega[i - 1]};
        const double dy = data_.y[i] - data_.y[i - 1];
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) Sy[r][c] += x[r] * x[c];
            by[r] += x[r] * dy;
        }
    }
    // 3x3 solve, falling back silently on degeneracy.
    const auto solve3 = [](double M[3][3], double v[3], double out[3]) {
        for (int col = 0; col < 3; ++col) {
            int piv = col;
            for (int r = col + 1; r < 3; ++r)
                if (std::abs(M[r][col]) > std::abs(M[piv][col])) piv = r;
            if (std::abs(M[piv][col]) < 1e-12) return false;
            std::swap(M[col], M[piv]);
            std::swap(v[col], v[piv]);
            for (int r = 0; r < 3; ++r) {
                if (r == col) continue;
                const double f = M[r][col] / M[col][col];
                for (int c = 0; c < 3; ++c) M[r][c] -= f * M[col][c];
                v[r] -= f * v[col];
            }
        }
        for (int r = 0; r < 3; ++r) out[r] = v[r] / M[r][r];
        return true;
    };
    double cy[3];
    if (solve3(Sy, by, cy)) {
        const double kv = std::clamp(-cy[1] / delta, 0.1, 40.0);
        p_.kappa_V = kv;
        p_.theta = std::clamp(cy[0] / (kv * delta), -5.0, 10.0);
        p_.varsigma_V = std::clamp(-cy[2] / delta, -30.0, 30.0);
    }

    // Mean reversion of the latent path from autocovariance ratios. The
    // inverted path carries the pricing-error noise, which inflates the
    // lag-zero variance but leaves gamma_2 / gamma_1 = c1 untouched, unlike
    // a plain autoregression whose slope is badly attenuated.
    double mean_w = 0.0;
    for (int i = 1; i <= T; ++i) mean_w += state_.omega[i];
    mean_w /= T;
    double g0 = 0.0, g1 = 0.0, g2 = 0.0;
    for (int i = 1; i <= T; ++i) {
        const double d0 = state_.omega[i] - mean_w;
        g0 += d0 * d0;
        if (i + 1 <= T) g1 += d0 * (state_.omega[i + 1] - mean_w);
        if (i + 2 <= T) g2 += d0 * (state_.omega[i + 2] - mean_w);
    }
    g0 /= T;
    g1 /= T;
    g2 /= T;
    bool have_omega_fit = false;
    if (g1 > 0.0 && g2 > 0.0) {
        const double c1_hat = std::clamp(g2 / g1, 0.3, 0.9999);
        p_.kappa_omega_P = std::clamp((1.0 - c1_hat) / delta, 0.2, 60.0);
        q_.alpha_omega = std::clamp(p_.kappa_omega_P * mean_w, 0.05, 60.0);
        // Noise-free variance of the latent path and its one-step innovation.
        const double v_true = std::min(g1 / c1_hat, g0);
        const double innov = std::max(v_true * (1.0 - c1_hat * c1_hat), 1e-10);
        p_.sigma_omega = std::clamp(std::sqrt(0.7 * innov / (mean_w * delta)), 0.05, 10.0);
        have_omega_fit = true;
    }

    // Raw (unstandardized) residual correlation; dividing by sqrt(omega)
    // would let near-floor days of the inverted path dominate the estimate.
    double s_ee = 0.0, s_uu = 0.0, s_eu = 0.0;
    double mean_dy = 0.0, mean_dw = 0.0;
    int cnt = 0;
    const double cw0 = q_.alpha_omega * delta;
    const double cw1 = -p_.kappa_omega_P * delta;
    for (int i = 2; i <= T; ++i, ++cnt) {
        const double om = state_.omega[i - 1];
        const double ey = data_.y[i] - data_.y[i - 1] - (cy[0] + cy[1] * data_.y[i - 1] + cy[2] * om);
        const double eu = state_.omega[i] - state_.omega[i - 1] - (cw0 + cw1 * om);
        s_ee += ey * ey;
        s_uu += eu * eu;
        s_eu += ey * eu;
        mean_dy += data_.y[i] - data_.y[i - 1];
        mean_dw += state_.omega[i] - state_.omega[i - 1];
    }
    if (have_omega_fit && cnt > 10 && s_uu > 0.0 && s_ee > 0.0)
        p_.rho = std::clamp(s_eu / std::sqrt(s_ee * s_uu), -0.9, 0.9);
    if (variant_has_jumps(variant_) && cnt > 10) {
        double v_dy = 0.0, v_dw = 0.0;
        mean_dy /= cnt;
        mean_dw /= cnt;
        for (int i = 2; i <= T; ++i) {
            const double ddy = data_.y[i] - data_.y[i - 1] - mean_dy;
            const double ddw = state_.omega[i] - state_.omega[i - 1] - mean_dw;
            v_dy += ddy * ddy;
            v_dw += ddw * ddw;
        }
        q_.sigma_y_J = std::max(0.02, 2.0 * std::sqrt(v_dy / cnt));
        if (variant_has_vol_jumps(variant_))
            p_.sigma_omega_J = std::max(0.02, 2.0 * std::sqrt(v_dw / cnt));
    }

    // Pricing-measure reversion from the slope of the affine relation.
    // Matching the mean observed VVIX^2 against a jump-robust (bipower)
    // estimate of the mean diffusion variance of logVIX gives a slope
    // estimate; inverting the loading pins the effective reversion, which
    // equals kappa_omega_Q at the zero starting value of mu_omega. Starting
    // the chain at the wrong loading slope forces the whole latent path to
    // rescale through single-day moves, which dominates the burn-in budget.
    if (config_.vvix_enabled && have_omega_fit) {
        double v_bar = 0.0;
        for (int i = 1; i <= T; ++i) v_bar += data_.vvix_sq[i];
        v_bar /= T;
        double bp = 0.0;
        int bp_cnt = 0;
        for (int i = 2; i <= T + 1; ++i, ++bp_cnt)
            bp += std::abs(data_.y[i] - data_.y[i - 1]) * std::abs(data_.y[i - 1] - data_.y[i - 2]);
        const double omega_bar_y =
            std::max(1.5707963267948966 * bp / bp_cnt / delta, 1e-3);
        const double intercept_guess = 0.1 * v_bar;
        const double slope = std::clamp((v_bar - intercept_guess) / omega_bar_y, 0.2, 3.0);
        const double m2 = q_.mu_y * q_.mu_y + q_.sigma_y_J * q_.sigma_y_J;
        const double target = std::clamp(slope * config_.tau / (1.0 + q_.lambda1 * m2),
                                         1e-4, config_.tau * 0.9999);
        double lo = 1e-3, hi = 80.0; // (1 - e^{-k tau})/k is decreasing in k
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double val = -std::expm1(-mid * config_.tau) / mid;
            (val > target ? lo : hi) = mid;
        }
        const double k_eff = 0.5 * (lo + hi);

        // The intercept pins the risk-neutral drift alpha_omega + lambda0
        // mu_omega; with alpha_omega matched on the physical side, it hands
        // back a starting value for the jump mean under pricing.
        if (variant_has_vol_jumps(variant_) && q_.lambda0 > 0.0) {
            const double alpha_q = -std::expm1(-k_eff * config_.tau) / k_eff;
            const double beta_target = config_.tau * (intercept_guess - m2 * q_.lambda0) /
                                       (1.0 + m2 * q_.lambda1);
            if (config_.tau - alpha_q > 1e-10) {
                const double drift_target = beta_target * k_eff / (config_.tau - alpha_q);
                q_.mu_omega = std::clamp((drift_target - q_.alpha_omega) / q_.lambda0, -4.0, 1.0);
            }
        }
        q_.kappa_omega_Q = std::clamp(k_eff + q_.lambda1 * q_.mu_omega, 0.1, 60.0);
        if (!(q_.effective_reversion() > 0.05))
            q_.kappa_omega_Q = 0.05 + q_.lambda1 * q_.mu_omega;
    }
}

void GibbsSampler::enforce_variant() {
    auto [p2, q2] = apply_variant(variant_, p_, q_);
    p_ = p2;
    q_ = q2;
    if (!variant_has_jumps(variant_)) {
        std::fill(state_.n.begin(), state_.n.end(), 0);
        std::fill(state_.j_y.begin(), state_.j_y.end(), 0.0);
    }
    if (!variant_has_vol_jumps(variant_))
        std::fill(state_.j_omega.begin(), state_.j_omega.end(), 0.0);
}

double GibbsSampler::resid_C(int i) const {
    const double om = floored(state_.omega[i - 1]);
    return (ytilde(i) - k_.a0 - k_.a1 * data_.y[i - 1] - k_.a2 * state_.omega[i - 1]) /
           std::sqrt(om * config_.delta);
}

double GibbsSampler::resid_D(int i) const {
    const double om = floored(state_.omega[i - 1]);
    return (omtilde(i) - k_.c0 - k_.c1 * state_.omega[i - 1]) /
           (p_.sigma_omega * std::sqrt(om * config_.delta));
}

double GibbsSampler::clamped_intensity_prob(double omega_prev) const {
    const double raw = (q_.lambda0 + q_.lambda1 * omega_prev) * config_.delta;
    return std::clamp(raw, kProbFloor, 1.0 - kProbFloor);
}

// Full conditional of omega_i (up to constants in omega_i):
//  (a) transition of day i given day i-1        [absent at i = 1]
//  (b) transition of day i+1 given day i        [univariate in Y at i = T]
//  (c) VVIX^2 pricing-error density at day i    [absent when disabled]
double GibbsSampler::log_omega_conditional(int i, double value) const {
    const int T = data_.T;
    const double rho = p_.rho;
    const double one_m_rho2 = 1.0 - rho * rho;
    double lp = 0.0;

    if (i >= 2) {
        const double om_prev = floored(state_.omega[i - 1]);
        const double sq = std::sqrt(om_prev * config_.delta);
        const double C = (ytilde(i) - k_.a0 - k_.a1 * data_.y[i - 1] - k_.a2 * state_.omega[i - 1]) / sq;
        const double D =
            (value - state_.j_omega[i] * state_.n[i] - k_.c0 - k_.c1 * state_.omega[i - 1]) /
            (p_.sigma_omega * sq);
        lp -= (C * C + D * D - 2.0 * rho * C * D) / (2.0 * one_m_rho2);
    }
    if (i <= T - 1) {
        const double om = floored(value);
        const double sq = std::sqrt(om * config_.delta);
        const double C = (ytilde(i + 1) - k_.a0 - k_.a1 * data_.y[i] - k_.a2 * value) / sq;
        const double D = (omtilde(i + 1) - k_.c0 - k_.c1 * value) / (p_.sigma_omega * sq);
        lp += -std::log(om) - (C * C + D * D - 2.0 * rho * C * D) / (2.0 * one_m_rho2);
    } else {
        const double om = floored(value);
        const double sq = std::sqrt(om * config_.delta);
        const double C = (ytilde(T + 1) - k_.a0 - k_.a1 * data_.y[T] - k_.a2 * value) / sq;
        lp += -0.5 * std::log(om) - 0.5 * C * C;
    }
    if (config_.vvix_enabled) {
        const AffineLoading l = affine_loadings(q_, config_.tau);
        const double e = data_.vvix_sq[i] - l.A - l.B * value;
        lp -= e * e / (2.0 * sigma_P_sq_);
    }
    return lp;
}

void GibbsSampler::sample_volatility_point(int i, Rng& rng) {
    Block& blk = omega_blocks_[i];
    const double current = state_.omega[i];
    const double proposal = current + blk.step * rng.normal();
    if (!(proposal > 0.0)) {
        blk.record(false);
        return;
    }
    const double lp_new = log_omega_conditional(i, proposal);
    const double lp_old = log_omega_conditional(i, current);
    bool accept = false;
    if (std::isfinite(lp_new)) {
        const double logu = std::log(rng.uniform_pos());
        accept = logu < lp_new - lp_old;
    }
    if (accept) state_.omega[i] = proposal;
    blk.record(accept);
}

void GibbsSampler::sample_volatility_path(Rng& rng) {
    for (int i = 1; i <= data_.T; ++i) sample_volatility_point(i, rng);
}

void GibbsSampler::sample_jump_indicator(int i, Rng& rng) {
    const int T = data_.T;
    const double om_prev_raw = state_.omega[i - 1];
    const double om_prev = floored(om_prev_raw);
    const double prob = clamped_intensity_prob(om_prev_raw);
    const double sq = std::sqrt(om_prev * config_.delta);
    double ll1, ll0;
    if (i <= T) {
        const double rho = p_.rho;
        const double one_m_rho2 = 1.0 - rho * rho;
        const auto biv = [&](int s) {
            const double C = (data_.y[i] - k_.a0 - k_.a1 * data_.y[i - 1] - k_.a2 * om_prev_raw -
                              s * state_.j_y[i]) / sq;
            const double D = (state_.omega[i] - k_.c0 - k_.c1 * om_prev_raw - s * state_.j_omega[i]) /
                             (p_.sigma_omega * sq);
            return -(C * C + D * D - 2.0 * rho * C * D) / (2.0 * one_m_rho2);
        };
        ll1 = biv(1);
        ll0 = biv(0);
    } else {
        const auto uni = [&](int s) {
            const double C = (data_.y[i] - k_.a0 - k_.a1 * data_.y[i - 1] - k_.a2 * om_prev_raw -
                              s * state_.j_y[i]) / sq;
            return -0.5 * C * C;
        };
        ll1 = uni(1);
        ll0 = uni(0);
    }
    const double logit = ll1 - ll0 + std::log(prob) - std::log1p(-prob);
    const double posterior = 1.0 / (1.0 + std::exp(-logit));
    state_.n[i] = rng.bernoulli(posterior) ? 1 : 0;
}

void GibbsSampler::sample_jump_indicators(Rng& rng) {
    for (int i = 2; i <= data_.T + 1; ++i) sample_jump_indicator(i, rng);
}

// Jump sizes for day i: the volatility size first from its normal
// conditional, then the logVIX size from the rho-corrected conditional.
// Without a jump both fall back to their priors.
void GibbsSampler::sample_jump_sizes(int i, Rng& rng) {
    const int T = data_.T;
    const bool vol_jumps = variant_has_vol_jumps(variant_);
    const double sj_y2 = q_.sigma_y_J * q_.sigma_y_J;
    const double sj_om2 = p_.sigma_omega_J * p_.sigma_omega_J;

    if (state_.n[i] == 0) {
        state_.j_y[i] = rng.normal(p_.mu_y_JP, q_.sigma_y_J);
        if (vol_jumps) state_.j_omega[i] = rng.normal(p_.mu_omega_JP, p_.sigma_omega_J);
        return;
    }

    const double om_prev = floored(state_.omega[i - 1]);
    const double od = om_prev * config_.delta;
    if (vol_jumps) {
        if (i <= T) {
            const double so2 = p_.sigma_omega * p_.sigma_omega;
            const double A = 1.0 / (so2 * od) + 1.0 / sj_om2;
            const double B = (state_.omega[i] - k_.c0 - k_.c1 * state_.omega[i - 1]) / (so2 * od) +
                             p_.mu_omega_JP / sj_om2;
            state_.j_omega[i] = rng.normal(B / A, std::sqrt(1.0 / A));
        } else {
            state_.j_omega[i] = rng.normal(p_.mu_omega_JP, p_.sigma_omega_J);
        }
    }
    if (i <= T) {
        const double one_m_rho2 = 1.0 - p_.rho * p_.rho;
        const double A = 1.0 / (od * one_m_rho2) + 1.0 / sj_y2;
        const double corr = (p_.rho / p_.sigma_omega) *
                            (state_.omega[i] - k_.c0 - k_.c1 * state_.omega[i - 1] - state_.j_omega[i]);
        const double B = (data_.y[i] - k_.a0 - k_.a1 * data_.y[i - 1] - k_.a2 * state_.omega[i - 1] -
                          corr) / (od * one_m_rho2) + p_.mu_y_JP / sj_y2;
        state_.j_y[i] = rng.normal(B / A, std::sqrt(1.0 / A));
    } else {
        const double A = 1.0 / od + 1.0 / sj_y2;
        const double B = (data_.y[i] - k_.a0 - k_.a1 * data_.y[i - 1] - k_.a2 * state_.omega[i - 1]) /
                             od + p_.mu_y_JP / sj_y2;
        state_.j_y[i] = rng.normal(B / A, std::sqrt(1.0 / A));
    }
}

void GibbsSampler::sample_all_jump_sizes(Rng& rng) {
    for (int i = 2; i <= data_.T + 1; ++i) sample_jump_sizes(i, rng);
}

// The four conjugate drift blocks. Sums run over the bivariate transition
// days 2..T plus, for the logVIX equation, the univariate day T+1 (the
// state grid carries no volatility for that day, so the shock is marginal).
double GibbsSampler::draw_theta(Rng& rng) {
    const int T = data_.T;
    const double one_m_rho2 = 1.0 - p_.rho * p_.rho;
    double A = 1.0 / priors_.theta.var;
    double B = priors_.theta.mean / priors_.theta.var;
    const double kv = p_.kappa_V;
    for (int i = 2; i <= T; ++i) {
        const double om_raw = state_.omega[i - 1];
        const double om = floored(om_raw);
        const double R = ytilde(i) - data_.y[i - 1] + kv * data_.y[i - 1] * config_.delta +
                         p_.varsigma_V * om_raw * config_.delta -
                         p_.rho * resid_D(i) * std::sqrt(om * config_.delta);
        A += kv * kv * config_.delta / (one_m_rho2 * om);
        B += kv * R / (one_m_rho2 * om);
    }
    {
        const double om = floored(state_.omega[T]);
        const double R = ytilde(T + 1) - data_.y[T] + kv * data_.y[T] * config_.delta +
                         p_.varsigma_V * state_.omega[T] * config_.delta;
        A += kv * kv * config_.delta / om;
        B += kv * R / om;
    }
    p_.theta = rng.normal(B / A, std::sqrt(1.0 / A));
    refresh_coeffs();
    return p_.theta;
}

double GibbsSampler::draw_kappa_V(Rng& rng) {
    const int T = data_.T;
    const double one_m_rho2 = 1.0 - p_.rho * p_.rho;
    double A = 1.0 / priors_.kappa_V.var;
    double B = priors_.kappa_V.mean / priors_.kappa_V.var;
    for (int i = 2; i <= T; ++i) {
        const double om_raw = state_.omega[i - 1];
        const double om = floored(om_raw);
        const double x = p_.theta - data_.y[i - 1];
        const double R = ytilde(i) - data_.y[i - 1] + p_.varsigma_V * om_raw * config_.delta -
                         p_.rho * resid_D(i) * std::sqrt(om * config_.delta);
        A += x * x * config_.delta / (one_m_rho2 * om);
        B += R * x / (one_m_rho2 * om);
    }
    {
        const double om = floored(state_.omega[T]);
        const double x = p_.theta - data_.y[T];
        const double R = ytilde(T + 1) - data_.y[T] + p_.varsigma_V * state_.omega[T] * config_.delta;
        A += x * x * config_.delta / om;
        B += R * x / om;
    }
    p_.kappa_V = rng.normal(B / A, std::sqrt(1.0 / A));
    refresh_coeffs();
    return p_.kappa_V;
}

double GibbsSampler::draw_varsigma_V(Rng& rng) {
    const int T = data_.T;
    const double one_m_rho2 = 1.0 - p_.rho * p_.rho;
    double A = 1.0 / priors_.varsigma_V.var;
    double B = priors_.varsigma_V.mean / priors_.varsigma_V.var;
    for (int i = 2; i <= T; ++i) {
        const double om_raw = state_.omega[i - 1];
        const double om = floored(om_raw);
        const double R = ytilde(i) - data_.y[i - 1] -
                         p_.kappa_V * (p_.theta - data_.y[i - 1]) * config_.delta -
                         p_.rho * resid_D(i) * std::sqrt(om * config_.delta);
        A += om_raw * om_raw * config_.delta * config_.delta / (one_m_rho2 * om * config_.delta);
        B -= R / one_m_rho2 * (om_raw / om);
    }
    {
        const double om_raw = state_.omega[T];
        const double om = floored(om_raw);
        const double R = ytilde(T + 1) - data_.y[T] - p_.kappa_V * (p_.theta - data_.y[T]) * config_.delta;
        A += om_raw * om_raw * config_.delta / om;
        B -= R * (om_raw / om);
    }
    p_.varsigma_V = rng.normal(B / A, std::sqrt(1.0 / A));
    refresh_coeffs();
    return p_.varsigma_V;
}

double GibbsSampler::draw_kappa_omega_P(Rng& rng) {
    const int T = data_.T;
    const double one_m_rho2 = 1.0 - p_.rho * p_.rho;
    const double so2 = p_.sigma_omega * p_.sigma_omega;
    double A = 1.0 / priors_.kappa_omega_P.var;
    double B = priors_.kappa_omega_P.mean / priors_.kappa_omega_P.var;
    for (int i = 2; i <= T; ++i) {
        const double om_raw = state_.omega[i - 1];
        const double om = floored(om_raw);
        const double R = omtilde(i) - om_raw - q_.alpha_omega * config_.delta -
                         p_.sigma_omega * p_.rho * resid_C(i) * std::sqrt(om * config_.delta);
        A += om_raw * om_raw * config_.delta / (one_m_rho2 * so2 * om);
        B -= R / (one_m_rho2 * so2) * (om_raw / om);
    }
    p_.kappa_omega_P = rng.normal(B / A, std::sqrt(1.0 / A));
    refresh_coeffs();
    return p_.kappa_omega_P;
}

void GibbsSampler::sample_p_drift_params(Rng& rng) {
    draw_theta(rng);
    draw_kappa_V(rng);
    draw_varsigma_V(rng);
    draw_kappa_omega_P(rng);
}

double GibbsSampler::draw_mu_omega_JP(Rng& rng) {
    const int T = data_.T;
    const double m = static_cast<double>(T); // jump sizes live on days 2..T+1
    const double sj2 = p_.sigma_omega_J * p_.sigma_omega_J;
    double sum = 0.0;
    for (int i = 2; i <= T + 1; ++i) sum += state_.j_omega[i];
    const double prec = m / sj2 + 1.0 / priors_.mu_omega_JP.var;
    const double mean = (sum / sj2 + priors_.mu_omega_JP.mean / priors_.mu_omega_JP.var) / prec;
    p_.mu_omega_JP = rng.normal(mean, std::sqrt(1.0 / prec));
    return p_.mu_omega_JP;
}

double GibbsSampler::draw_mu_y_JP(Rng& rng) {
    const int T = data_.T;
    const double m = static_cast<double>(T);
    const double sj2 = q_.sigma_y_J * q_.sigma_y_J;
    double sum = 0.0;
    for (int i = 2; i <= T + 1; ++i) sum += state_.j_y[i];
    const double prec = m / sj2 + 1.0 / priors_.mu_y_JP.var;
    const double mean = (sum / sj2 + priors_.mu_y_JP.mean / priors_.mu_y_JP.var) / prec;
    p_.mu_y_JP = rng.normal(mean, std::sqrt(1.0 / prec));
    return p_.mu_y_JP;
}

double GibbsSampler::draw_sigma_omega_J_sq(Rng& rng) {
    const int T = data_.T;
    double sse = 0.0;
    for (int i = 2; i <= T + 1; ++i) {
        const double d = state_.j_omega[i] - p_.mu_omega_JP;
        sse += d * d;
    }
    const double shape = priors_.sigma_omega_J_sq.shape + 0.5 * static_cast<double>(T);
    const double scale = priors_.sigma_omega_J_sq.scale + 0.5 * sse;
    const double draw = rng.inverse_gamma(shape, scale);
    p_.sigma_omega_J = std::sqrt(draw);
    return draw;
}

double GibbsSampler::draw_sigma_y_J_sq(Rng& rng) {
    const int T = data_.T;
    double sse = 0.0;
    for (int i = 2; i <= T + 1; ++i) {
        const double d = state_.j_y[i] - p_.mu_y_JP;
        sse += d * d;
    }
    const double shape = priors_.sigma_y_J_sq.shape + 0.5 * static_cast<double>(T);
    const double scale = priors_.sigma_y_J_sq.scale + 0.5 * sse;
    const double draw = rng.inverse_gamma(shape, scale);
    q_.sigma_y_J = std::sqrt(draw);
    return draw;
}

void GibbsSampler::sample_jump_distribution_params(Rng& rng) {
    if (!variant_has_jumps(variant_)) return;
    if (variant_has_vol_jumps(variant_)) {
        draw_mu_omega_JP(rng);
        draw_sigma_omega_J_sq(rng);
    }
    draw_mu_y_JP(rng);
    // With the VVIX likelihood active, sigma_y_J also enters the loadings and
    // is handled by the Metropolis block instead.
    if (!config_.vvix_enabled) draw_sigma_y_J_sq(rng);
}

double GibbsSampler::vvix_sse() const {
    const AffineLoading l = affine_loadings(q_, config_.tau);
    double sse = 0.0;
    for (int i = 1; i <= data_.T; ++i) {
        const double e = data_.vvix_sq[i] - l.A - l.B * state_.omega[i];
        sse += e * e;
    }
    return sse;
}

double GibbsSampler::bivariate_transition_loglik(double c0_override) const {
    const int T = data_.T;
    const double rho = p_.rho;
    const double one_m_rho2 = 1.0 - rho * rho;
    double lp = 0.0;
    for (int i = 2; i <= T; ++i) {
        const double om = floored(state_.omega[i - 1]);
        const double sq = std::sqrt(om * config_.delta);
        const double C = (ytilde(i) - k_.a0 - k_.a1 * data_.y[i - 1] - k_.a2 * state_.omega[i - 1]) / sq;
        const double D = (omtilde(i) - c0_override - k_.c1 * state_.omega[i - 1]) /
                         (p_.sigma_omega * sq);
        lp -= (C * C + D * D - 2.0 * rho * C * D) / (2.0 * one_m_rho2);
    }
    return lp;
}

double GibbsSampler::intensity_loglik(double lambda0, double lambda1) const {
    const int T = data_.T;
    double lp = 0.0;
    for (int i = 2; i <= T + 1; ++i) {
        const double raw = (lambda0 + lambda1 * state_.omega[i - 1]) * config_.delta;
        const double pr = std::clamp(raw, kProbFloor, 1.0 - kProbFloor);
        lp += state_.n[i] == 1 ? std::log(pr) : std::log1p(-pr);
    }
    return lp;
}

double GibbsSampler::jump_size_sse_y() const {
    double sse = 0.0;
    for (int i = 2; i <= data_.T + 1; ++i) {
        const double d = state_.j_y[i] - p_.mu_y_JP;
        sse += d * d;
    }
    return sse;
}

// Block-wise random-walk Metropolis over the Q parameters. Every target
// carries the VVIX pricing-error likelihood (when enabled) times the prior;
// parameters that also drive the physical dynamics pick up the matching
// likelihood factor unless the replication switch asks for the plain
// VVIX-only targets.
void GibbsSampler::sample_q_params(Rng& rng) {
    const bool extended = !config_.paper_exact_q_targets;
    const bool vvix = config_.vvix_enabled;
    const double inv2s = vvix ? 1.0 / (2.0 * sigma_P_sq_) : 0.0;

    const auto vvix_term = [&]() { return vvix ? -vvix_sse() * inv2s : 0.0; };

    // alpha_omega: VVIX term plus the volatility transition density.
    {
        const double cur = q_.alpha_omega;
        const double prop = cur + alpha_omega_block_.step * rng.normal();
        bool accept = false;
        if (prop > 0.0) {
            double lp_old = vvix_term() + log_normal_prior(cur, priors_.alpha_omega);
            double lp_new;
            {
                const double saved = q_.alpha_omega;
                q_.alpha_omega = prop;
                lp_new = vvix_term() + log_normal_prior(prop, priors_.alpha_omega);
                q_.alpha_omega = saved;
            }
            if (extended) {
                lp_old += bivariate_transition_loglik(cur * config_.delta);
                lp_new += bivariate_transition_loglik(prop * config_.delta);
            }
            accept = std::isfinite(lp_new) && std::log(rng.uniform_pos()) < lp_new - lp_old;
        }
        if (accept) {
            q_.alpha_omega = prop;
            refresh_coeffs();
        }
        alpha_omega_block_.record(accept);
    }

    // kappa_omega_Q: VVIX term only (the P-side speed is a separate parameter).
    {
        const double cur = q_.kappa_omega_Q;
        const double prop = cur + kappa_omega_Q_block_.step * rng.normal();
        bool accept = false;
        if (prop - q_.lambda1 * q_.mu_omega > 0.0) {
            const double lp_old = vvix_term() + log_normal_prior(cur, priors_.kappa_omega_Q);
            const double saved = q_.kappa_omega_Q;
            q_.kappa_omega_Q = prop;
            const double lp_new = vvix_term() + log_normal_prior(prop, priors_.kappa_omega_Q);
            q_.kappa_omega_Q = saved;
            accept = std::isfinite(lp_new) && std::log(rng.uniform_pos()) < lp_new - lp_old;
        }
        if (accept) q_.kappa_omega_Q = prop;
        kappa_omega_Q_block_.record(accept);
    }

    // lambda0 / lambda1: VVIX term plus the Bernoulli indicator likelihood.
    const auto lambda_update = [&](double& param, Block& blk, const NormalPrior& prior,
                                   bool check_reversion) {
        const double cur = param;
        const double prop = cur + blk.step * rng.normal();
        bool accept = false;
        const bool ok = prop >= 0.0 &&
                        (!check_reversion || q_.kappa_omega_Q - prop * q_.mu_omega > 0.0);
        if (ok) {
            double lp_old = vvix_term() + log_normal_prior(cur, prior);
            if (extended) lp_old += intensity_loglik(q_.lambda0, q_.lambda1);
            const double saved = param;
            param = prop;
            double lp_new = vvix_term() + log_normal_prior(prop, prior);
            if (extended) lp_new += intensity_loglik(q_.lambda0, q_.lambda1);
            param = saved;
            accept = std::isfinite(lp_new) && std::log(rng.uniform_pos()) < lp_new - lp_old;
        }
        if (accept) param = prop;
        blk.record(accept);
    };
    if (variant_has_jumps(variant_)) lambda_update(q_.lambda0, lambda0_block_, priors_.lambda0, false);
    if (variant_has_state_intensity(variant_))
        lambda_update(q_.lambda1, lambda1_block_, priors_.lambda1, true);

    // mu_y: VVIX term only.
    if (variant_has_jumps(variant_)) {
        const double cur = q_.mu_y;
        const double prop = cur + mu_y_block_.step * rng.normal();
        const double lp_old = vvix_term() + log_normal_prior(cur, priors_.mu_y);
        q_.mu_y = prop;
        const double lp_new = vvix_term() + log_normal_prior(prop, priors_.mu_y);
        q_.mu_y = cur;
        const bool accept = std::isfinite(lp_new) && std::log(rng.uniform_pos()) < lp_new - lp_old;
        if (accept) q_.mu_y = prop;
        mu_y_block_.record(accept);
    }

    // mu_omega: VVIX term only, guarded by the loading constraint.
    if (variant_has_vol_jumps(variant_)) {
        const double cur = q_.mu_omega;
        const double prop = cur + mu_omega_block_.step * rng.normal();
        bool accept = false;
        if (q_.kappa_omega_Q - q_.lambda1 * prop > 0.0) {
            const double lp_old = vvix_term() + log_normal_prior(cur, priors_.mu_omega);
            q_.mu_omega = prop;
            const double lp_new = vvix_term() + log_normal_prior(prop, priors_.mu_omega);
            q_.mu_omega = cur;
            accept = std::isfinite(lp_new) && std::log(rng.uniform_pos()) < lp_new - lp_old;
        }
        if (accept) q_.mu_omega = prop;
        mu_omega_block_.record(accept);
    }

    // Joint move along the loading-preserving direction: shifting mu_omega
    // with kappa_omega_Q following lambda1 times the shift and alpha_omega
    // absorbing lambda0 times the shift leaves A and B exactly unchanged,
    // so the scalar blocks' slow crawl along this soft direction is replaced
    // by a direct walk. The proposal map is linear in the conditioned
    // lambdas, hence symmetric.
    if (variant_has_vol_jumps(variant_)) {
        const double shift = ridge_block_.step * rng.normal();
        const double mu_prop = q_.mu_omega + shift;
        const double kq_prop = q_.kappa_omega_Q + q_.lambda1 * shift;
        const double a_prop = q_.alpha_omega - q_.lambda0 * shift;
        bool accept = false;
        if (a_prop > 0.0 && kq_prop - q_.lambda1 * mu_prop > 0.0) {
            double lp_old = log_normal_prior(q_.mu_omega, priors_.mu_omega) +
                            log_normal_prior(q_.kappa_omega_Q, priors_.kappa_omega_Q) +
                            log_normal_prior(q_.alpha_omega, priors_.alpha_omega);
            double lp_new = log_normal_prior(mu_prop, priors_.mu_omega) +
                            log_normal_prior(kq_prop, priors_.kappa_omega_Q) +
                            log_normal_prior(a_prop, priors_.alpha_omega);
            if (vvix) {
                lp_old += -vvix_sse() * inv2s;
                const QParams saved = q_;
                q_.mu_omega = mu_prop;
                q_.kappa_omega_Q = kq_prop;
                q_.alpha_omega = a_prop;
                lp_new += -vvix_sse() * inv2s;
                q_ = saved;
            }
            if (extended) {
                lp_old += bivariate_transition_loglik(q_.alpha_omega * config_.delta);
                lp_new += bivariate_transition_loglik(a_prop * config_.delta);
            }
            accept = std::isfinite(lp_new) && std::log(rng.uniform_pos()) < lp_new - lp_old;
        }
        if (accept) {
            q_.mu_omega = mu_prop;
            q_.kappa_omega_Q = kq_prop;
            q_.alpha_omega = a_prop;
            refresh_coeffs();
        }
        ridge_block_.record(accept);
    }

    // sigma_y_J: VVIX term plus the jump-size density; prior lives on the
    // square, hence the 2*sigma Jacobian.
    if (variant_has_jumps(variant_) && config_.vvix_enabled) {
        const int T = data_.T;
        const double cur = q_.sigma_y_J;
        const double prop = cur + sigma_y_J_block_.step * rng.normal();
        bool accept = false;
        if (prop > 0.0) {
            const double sse = extended ? jump_size_sse_y() : 0.0;
            const auto target = [&](double s) {
                double lp = log_inv_gamma(s * s, priors_.sigma_y_J_sq) + std::log(2.0 * s);
                if (extended) lp += -static_cast<double>(T) * std::log(s) - sse / (2.0 * s * s);
                return lp;
            };
            double lp_old = vvix_term() + target(cur);
            q_.sigma_y_J = prop;
            double lp_new = vvix_term() + target(prop);
            q_.sigma_y_J = cur;
            accept = std::isfinite(lp_new) && std::log(rng.uniform_pos()) < lp_new - lp_old;
        }
        if (accept) q_.sigma_y_J = prop;
        sigma_y_J_block_.record(accept);
    }
}

double GibbsSampler::rho_sigma_loglik(double rho, double sigma_omega) const {
    const int T = data_.T;
    const double one_m_rho2 = 1.0 - rho * rho;
    double lp = -static_cast<double>(T - 1) *
                (std::log(sigma_omega) + 0.5 * std::log(one_m_rho2));
    for (int i = 2; i <= T; ++i) {
        const double om = floored(state_.omega[i - 1]);
        const double sq = std::sqrt(om * config_.delta);
        const double C = (ytilde(i) - k_.a0 - k_.a1 * data_.y[i - 1] - k_.a2 * state_.omega[i - 1]) / sq;
        const double D = (omtilde(i) - k_.c0 - k_.c1 * state_.omega[i - 1]) / (sigma_omega * sq);
        lp -= (C * C + D * D - 2.0 * rho * C * D) / (2.0 * one_m_rho2);
    }
    return lp;
}

void GibbsSampler::sample_rho_sigma_omega(Rng& rng) {
    const double rho_prop = p_.rho + rho_sigma_block_.step * priors_.steps.rho * rng.normal();
    const double sig_prop =
        p_.sigma_omega + rho_sigma_block_.step * priors_.steps.sigma_omega * rng.normal();
    bool accept = false;
    if (std::abs(rho_prop) < 1.0 && sig_prop > 0.0) {
        const double lp_old = rho_sigma_loglik(p_.rho, p_.sigma_omega) +
                              log_normal_prior(p_.rho, priors_.rho) +
                              log_normal_prior(p_.sigma_omega, priors_.sigma_omega);
        const double lp_new = rho_sigma_loglik(rho_prop, sig_prop) +
                              log_normal_prior(rho_prop, priors_.rho) +
                              log_normal_prior(sig_prop, priors_.sigma_omega);
        accept = std::isfinite(lp_new) && std::log(rng.uniform_pos()) < lp_new - lp_old;
    }
    if (accept) {
        p_.rho = rho_prop;
        p_.sigma_omega = sig_prop;
    }
    rho_sigma_block_.record(accept);
}

double GibbsSampler::sample_sigma_P(Rng& rng) {
    if (!config_.vvix_enabled) {
        sigma_P_sq_ = rng.inverse_gamma(priors_.sigma_P_sq.shape, priors_.sigma_P_sq.scale);
        return sigma_P_sq_;
    }
    const double shape = priors_.sigma_P_sq.shape + 0.5 * static_cast<double>(data_.T);
    const double scale = priors_.sigma_P_sq.scale + 0.5 * vvix_sse();
    sigma_P_sq_ = rng.inverse_gamma(shape, scale);
    return sigma_P_sq_;
}

void GibbsSampler::gibbs_sweep(Rng& rng) {
    sample_volatility_path(rng);
    if (variant_has_jumps(variant_)) {
        sample_jump_indicators(rng);
        sample_all_jump_sizes(rng);
        enforce_variant();
    }
    sample_p_drift_params(rng);
    enforce_variant();
    sample_jump_distribution_params(rng);
    enforce_variant();
    sample_q_params(rng);
    enforce_variant();
    sample_rho_sigma_omega(rng);
    sample_sigma_P(rng);
    enforce_variant();
    refresh_coeffs();
}

void GibbsSampler::adapt_proposals() {
    const double lo = config_.target_accept_low;
    const double hi = config_.target_accept_high;
    for (Block& b : omega_blocks_) b.adapt(lo, hi);
    alpha_omega_block_.adapt(lo, hi);
    kappa_omega_Q_block_.adapt(lo, hi);
    lambda0_block_.adapt(lo, hi);
    lambda1_block_.adapt(lo, hi);
    mu_y_block_.adapt(lo, hi);
    mu_omega_block_.adapt(lo, hi);
    ridge_block_.adapt(lo, hi);
    sigma_y_J_block_.adapt(lo, hi);
    rho_sigma_block_.adapt(lo, hi);
}

void GibbsSampler::begin_accept_accounting() {
    for (Block& b : omega_blocks_) b.counting = true;
    for (Block* b : {&alpha_omega_block_, &kappa_omega_Q_block_, &lambda0_block_, &lambda1_block_,
                     &mu_y_block_, &mu_omega_block_, &sigma_y_J_block_, &rho_sigma_block_, &ridge_block_})
        b->counting = true;
}

AcceptanceReport GibbsSampler::acceptance_report() const {
    const auto rate = [](const Block& b) {
        return b.attempts > 0 ? static_cast<double>(b.accepts) / static_cast<double>(b.attempts) : 0.0;
    };
    AcceptanceReport r;
    long acc = 0, att = 0;
    for (int i = 1; i <= data_.T; ++i) {
        acc += omega_blocks_[i].accepts;
        att += omega_blocks_[i].attempts;
    }
    r.omega_path = att > 0 ? static_cast<double>(acc) / static_cast<double>(att) : 0.0;
    r.alpha_omega = rate(alpha_omega_block_);
    r.kappa_omega_Q = rate(kappa_omega_Q_block_);
    r.lambda0 = rate(lambda0_block_);
    r.lambda1 = rate(lambda1_block_);
    r.mu_y = rate(mu_y_block_);
    r.mu_omega = rate(mu_omega_block_);
    r.sigma_y_J = rate(sigma_y_J_block_);
    r.rho_sigma_omega = rate(rho_sigma_block_);
    return r;
}

void GibbsSampler::check_finite(int sweep_index) const {
    const double params[] = {p_.kappa_V, p_.varsigma_V, p_.theta, p_.kappa_omega_P, p_.mu_y_JP,
                             p_.mu_omega_JP, p_.sigma_omega_J, p_.rho, p_.sigma_omega,
                             q_.alpha_omega, q_.kappa_omega_Q, q_.lambda0, q_.lambda1, q_.mu_y,
                             q_.mu_omega, q_.sigma_y_J, sigma_P_sq_};
    for (double v : params)
        if (!std::isfinite(v)) throw ChainDivergence(sweep_index, "non-finite parameter");
    for (int i = 1; i <= data_.T; ++i)
        if (!std::isfinite(state_.omega[i]) || !(state_.omega[i] > 0.0))
            throw ChainDivergence(sweep_index, "non-finite volatility state");
}

ChainOutput run_chain(const ChainConfig& config, ModelVariant variant, const EstimationData& data,
                      const PriorHyper& priors) {
    GibbsSampler sampler(variant, data, priors, config);
    Rng rng(config.seed);
    const int T = data.T;

    ChainOutput out;
    out.variant = variant;
    out.config = config;
    const int retained = (config.iterations - config.burn_in) / config.thinning;
    out.draws.reserve(retained);
    std::vector<double> om_sum(T + 1, 0.0), om_sq(T + 1, 0.0);
    std::vector<double> n_sum(T + 2, 0.0), jy_sum(T + 2, 0.0), jo_sum(T + 2, 0.0);

    for (int g = 1; g <= config.iterations; ++g) {
        sampler.gibbs_sweep(rng);
        sampler.check_finite(g);
        if (g <= config.burn_in) {
            if (g % config.adaptation_window == 0) sampler.adapt_proposals();
            if (g == config.burn_in) sampler.begin_accept_accounting();
            continue;
        }
        if ((g - config.burn_in) % config.thinning != 0) continue;

        const PParams& p = sampler.p();
        const QParams& q = sampler.q();
        ParameterDraw d{p.kappa_V, p.varsigma_V, p.theta, p.kappa_omega_P, p.mu_y_JP, p.mu_omega_JP,
                        p.sigma_omega_J, p.rho, p.sigma_omega, q.alpha_omega, q.kappa_omega_Q,
                        q.lambda0, q.lambda1, q.mu_y, q.mu_omega, q.sigma_y_J,
                        std::sqrt(sampler.sigma_P_sq())};
        out.draws.push_back(d);
        const LatentState& s = sampler.state();
        for (int i = 1; i <= T; ++i) {
            om_sum[i] += s.omega[i];
            om_sq[i] += s.omega[i] * s.omega[i];
        }
        for (int i = 2; i <= T + 1; ++i) {
            n_sum[i] += s.n[i];
            jy_sum[i] += s.j_y[i] * s.n[i];
            jo_sum[i] += s.j_omega[i] * s.n[i];
        }
    }

    const double nd = static_cast<double>(out.draws.size());
    out.omega_mean.assign(T + 1, 0.0);
    out.omega_std.assign(T + 1, 0.0);
    out.jump_prob.assign(T + 2, 0.0);
    out.jump_y_mean.assign(T + 2, 0.0);
    out.jump_omega_mean.assign(T + 2, 0.0);
    if (nd > 0) {
        for (int i = 1; i <= T; ++i) {
            out.omega_mean[i] = om_sum[i] / nd;
            out.omega_std[i] = std::sqrt(std::max(0.0, om_sq[i] / nd - out.omega_mean[i] * out.omega_mean[i]));
        }
        for (int i = 2; i <= T + 1; ++i) {
            out.jump_prob[i] = n_sum[i] / nd;
            out.jump_y_mean[i] = jy_sum[i] / nd;
            out.jump_omega_mean[i] = jo_sum[i] / nd;
        }
    }
    out.acceptance = sampler.acceptance_report();
    return out;
}

} // namespace vvjump
