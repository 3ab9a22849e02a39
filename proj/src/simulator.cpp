#include "vvjump/simulator.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "vvjump/rng.hpp"

namespace vvjump {

namespace {

void check_simulation_inputs(const PParams& p, const QParams& q, double omega0, int T,
                             double delta) {
    if (!(T >= 2)) throw std::invalid_argument("simulate_path: T must be at least 2");
    if (!(delta > 0.0)) throw std::invalid_argument("simulate_path: delta must be positive");
    if (!(omega0 >= 0.0)) throw std::invalid_argument("simulate_path: omega0 must be nonnegative");
    if (!(p.rho > -1.0 && p.rho < 1.0))
        throw std::invalid_argument("simulate_path: rho must be in (-1, 1)");
    if (!(p.sigma_omega >= 0.0))
        throw std::invalid_argument("simulate_path: sigma_omega must be nonnegative");
    if (!(q.alpha_omega >= 0.0))
        throw std::invalid_argument("simulate_path: alpha_omega must be nonnegative");
    if (!(q.lambda0 >= 0.0 && q.lambda1 >= 0.0))
        throw std::invalid_argument("simulate_path: jump intensities must be nonnegative");
    if (!(p.sigma_omega_J >= 0.0 && q.sigma_y_J >= 0.0))
        throw std::invalid_argument("simulate_path: jump size stds must be nonnegative");
    if (!std::isfinite(p.kappa_V) || !std::isfinite(p.theta) || !std::isfinite(p.varsigma_V) ||
        !std::isfinite(p.kappa_omega_P))
        throw std::invalid_argument("simulate_path: non-finite drift parameters");
}

void append_double(std::string& line, double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    line.append(buf, res.ptr);
}

} // namespace

SimulatedPath simulate_path(ModelVariant variant, const PParams& p_in, const QParams& q_in,
                            double y0, double omega0, int T, double delta, std::uint64_t seed,
                            double epsilon_omega) {
    auto [p, q] = apply_variant(variant, p_in, q_in);
    check_simulation_inputs(p, q, omega0, T, delta);

    SimulatedPath path;
    path.T = T;
    path.delta = delta;
    path.seed = seed;
    path.y.assign(T + 2, 0.0);
    path.omega.assign(T + 1, 0.0);
    path.n.assign(T + 2, 0);
    path.j_y.assign(T + 2, 0.0);
    path.j_omega.assign(T + 2, 0.0);
    path.eps_y.assign(T + 2, 0.0);
    path.eps_omega.assign(T + 1, 0.0);
    path.vvix_sq.assign(T + 1, std::numeric_limits<double>::quiet_NaN());

    Rng rng(seed);
    const bool jumps = variant_has_jumps(variant);
    const double rho_c = std::sqrt(1.0 - p.rho * p.rho);

    path.y[0] = y0;
    path.omega[0] = std::max(omega0, epsilon_omega);

    for (int i = 1; i <= T + 1; ++i) {
        const double om_prev = path.omega[i - 1];
        const double z1 = rng.normal();
        const double z2 = rng.normal();
        const double eps_y = z1;
        const double eps_om = p.rho * z1 + rho_c * z2;

        int n_i = 0;
        double jy = 0.0, jom = 0.0;
        if (jumps && i >= 2) {
            double prob = (q.lambda0 + q.lambda1 * om_prev) * delta;
            if (prob > 1.0) {
                prob = 1.0;
                ++path.intensity_clamp_count;
            }
            if (rng.bernoulli(prob)) {
                n_i = 1;
                jy = rng.normal(p.mu_y_JP, q.sigma_y_J);
                if (variant_has_vol_jumps(variant)) jom = rng.normal(p.mu_omega_JP, p.sigma_omega_J);
            }
        }

        const double sq = std::sqrt(om_prev * delta);
        path.y[i] = path.y[i - 1] +
                    (p.kappa_V * p.theta - p.kappa_V * path.y[i - 1] - p.varsigma_V * om_prev) * delta +
                    sq * eps_y + jy * n_i;
        path.eps_y[i] = eps_y;
        path.n[i] = n_i;
        path.j_y[i] = jy;
        path.j_omega[i] = jom;

        if (i <= T) {
            double om = path.omega[i - 1] + (q.alpha_omega - p.kappa_omega_P * om_prev) * delta +
                        p.sigma_omega * sq * eps_om + jom * n_i;
            path.omega[i] = std::max(om, epsilon_omega);
            path.eps_omega[i] = eps_om;
        }
    }
    return path;
}

std::vector<double> observe_vvix(const SimulatedPath& path, const QParams& q, double tau,
                                 double sigma_P, std::uint64_t seed) {
    if (!(sigma_P >= 0.0)) throw std::invalid_argument("observe_vvix: sigma_P must be nonnegative");
    const AffineLoading l = affine_loadings(q, tau);
    Rng rng(seed);
    std::vector<double> v(path.T + 1, std::numeric_limits<double>::quiet_NaN());
    for (int i = 1; i <= path.T; ++i) v[i] = l.A + l.B * path.omega[i] + sigma_P * rng.normal();
    return v;
}

double stationary_omega(const PParams& p, const QParams& q) {
    const double denom = p.kappa_omega_P - q.lambda1 * p.mu_omega_JP;
    if (!(denom > 0.0)) throw std::invalid_argument("stationary_omega: nonpositive effective reversion");
    return (q.alpha_omega + q.lambda0 * p.mu_omega_JP) / denom;
}

double stationary_logvix(const PParams& p, const QParams& q) {
    const double m = stationary_omega(p, q);
    const double jump_drift = (q.lambda0 + q.lambda1 * m) * p.mu_y_JP;
    return p.theta + (-p.varsigma_V * m + jump_drift) / p.kappa_V;
}

void write_path_csv(const SimulatedPath& path, std::ostream& os) {
    os << "index,date_offset,y,omega,n,j_y,j_omega,vvix_sq\n";
    for (int i = 0; i <= path.T + 1; ++i) {
        std::string line;
        append_double(line, static_cast<double>(i));
        line.push_back(',');
        append_double(line, i * path.delta);
        line.push_back(',');
        append_double(line, path.y[i]);
        line.push_back(',');
        if (i <= path.T) append_double(line, path.omega[i]);
        line.push_back(',');
        if (i >= 2) line.append(std::to_string(path.n[i]));
        line.push_back(',');
        if (i >= 2) append_double(line, path.j_y[i]);
        line.push_back(',');
        if (i >= 2) append_double(line, path.j_omega[i]);
        line.push_back(',');
        if (i >= 1 && i <= path.T && !std::isnan(path.vvix_sq[i])) append_double(line, path.vvix_sq[i]);
        line.push_back('\n');
        os << line;
    }
}

} // namespace vvjump
