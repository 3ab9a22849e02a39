#include <doctest.h>

#include <cmath>
#include <sstream>

#include "test_util.hpp"
#include "vvjump/simulator.hpp"
#include "vvjump/stats.hpp"

using namespace vvjump;

namespace {

PParams base_p() {
    PParams p;
    p.kappa_V = 2.1093;
    p.varsigma_V = -0.1538;
    p.theta = 2.3312;
    p.kappa_omega_P = 6.2849;
    p.mu_y_JP = 0.1551;
    p.mu_omega_JP = 0.1430;
    p.sigma_omega_J = 0.1420;
    p.rho = 0.4998;
    p.sigma_omega = 0.8461;
    return p;
}

QParams base_q() {
    QParams q;
    q.alpha_omega = 3.7938;
    q.kappa_omega_Q = 2.5674;
    q.lambda0 = 2.7557;
    q.lambda1 = 1.6086;
    q.mu_y = -0.0960;
    q.mu_omega = -1.2046;
    q.sigma_y_J = 0.1231;
    return q;
}

} // namespace

TEST_SUITE("simulator") {

TEST_CASE("degenerate diffusion pins volatility at the floor") {
    PParams p = base_p();
    p.sigma_omega = 0.0;
    QParams q = base_q();
    q.alpha_omega = 0.0;
    const double eps = 1e-8;
    const auto path = simulate_path(ModelVariant::SV, p, q, 3.0, 0.0, 3000, 1.0 / 252.0, 5, eps);
    for (int i = 0; i <= path.T; ++i) CHECK(path.omega[i] == eps);
    // Y behaves as a near-deterministic AR(1); its tail hugs the fixed point.
    const double fixed_point = p.theta - p.varsigma_V * eps / p.kappa_V;
    CHECK(path.y[path.T + 1] == doctest::Approx(fixed_point).epsilon(1e-3));
}

TEST_CASE("long-run mean matches the discrete AR(1) fixed point") {
    PParams p = base_p();
    p.kappa_V = 8.0;
    p.rho = 0.3;
    QParams q = base_q();
    q.lambda0 = q.lambda1 = 0.0;
    const int T = 40000;
    const double delta = 1.0 / 252.0;
    const auto path = simulate_path(ModelVariant::SV, p, q, 2.4, 0.6, T, delta, 99);

    const double a0 = p.kappa_V * p.theta * delta;
    const double a1 = 1.0 - p.kappa_V * delta;
    const double a2 = -p.varsigma_V * delta;
    double omega_bar = 0.0;
    for (int i = 0; i < T; ++i) omega_bar += path.omega[i];
    omega_bar /= T;
    const double fixed_point = (a0 + a2 * omega_bar) / (1.0 - a1);

    double y_bar = 0.0;
    for (int i = 2; i <= T + 1; ++i) y_bar += path.y[i];
    y_bar /= T;
    CHECK(y_bar == doctest::Approx(fixed_point).epsilon(0.02));
}

TEST_CASE("law of large numbers for the daily jump frequency") {
    const PParams p = base_p();
    const QParams q = base_q();
    const int T = 1989;
    const double delta = 1.0 / 252.0;
    long total_jumps = 0;
    long total_days = 0;
    double intensity_sum = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto path = simulate_path(ModelVariant::SVJJ_S, p, q, 2.8, 0.7, T, delta, 1000 + seed);
        for (int i = 2; i <= T + 1; ++i) {
            total_jumps += path.n[i];
            intensity_sum += std::min(1.0, (q.lambda0 + q.lambda1 * path.omega[i - 1]) * delta);
            ++total_days;
        }
    }
    const double realized = static_cast<double>(total_jumps) / total_days;
    const double expected = intensity_sum / total_days;
    CHECK(realized == doctest::Approx(expected).epsilon(0.06));
}

TEST_CASE("noise-free observation is the exact affine image") {
    const auto path = simulate_path(ModelVariant::SVJJ_S, base_p(), base_q(), 2.8, 0.7, 200,
                                    1.0 / 252.0, 17);
    const double tau = 30.0 / 365.0;
    const auto v = observe_vvix(path, base_q(), tau, 0.0, 3);
    const auto l = affine_loadings(base_q(), tau);
    for (int i = 1; i <= path.T; ++i) CHECK(v[i] == l.A + l.B * path.omega[i]);
    CHECK(std::isnan(v[0]));
}

TEST_CASE("observation noise variance is recovered on a flat path") {
    SimulatedPath path;
    path.T = 10000;
    path.omega.assign(path.T + 1, 0.5);
    const double sigma_P = 0.1;
    const auto v = observe_vvix(path, base_q(), 30.0 / 365.0, sigma_P, 41);
    std::vector<double> noise(v.begin() + 1, v.end());
    CHECK(stats::variance(noise) == doctest::Approx(sigma_P * sigma_P).epsilon(0.05));
}

TEST_CASE("regression of observed VVIX^2 on volatility recovers the loadings") {
    const auto path = simulate_path(ModelVariant::SVJJ_S, base_p(), base_q(), 2.8, 0.7, 5000,
                                    1.0 / 252.0, 23);
    const double tau = 30.0 / 365.0;
    const auto v = observe_vvix(path, base_q(), tau, 0.05, 29);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int T = path.T;
    for (int i = 1; i <= T; ++i) {
        sx += path.omega[i];
        sy += v[i];
        sxx += path.omega[i] * path.omega[i];
        sxy += path.omega[i] * v[i];
    }
    const double slope = (T * sxy - sx * sy) / (T * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / T;
    const auto l = affine_loadings(base_q(), tau);
    CHECK(slope == doctest::Approx(l.B).epsilon(0.02));
    CHECK(intercept == doctest::Approx(l.A).epsilon(0.05));
}

TEST_CASE("standardized increments pass a normality check without jumps") {
    PParams p = base_p();
    p.rho = 0.0;
    QParams q = base_q();
    const double delta = 1.0 / 252.0;
    const int T = 500;
    int passes = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto path = simulate_path(ModelVariant::SV, p, q, 2.8, 0.7, T, delta, 7000 + seed);
        std::vector<double> eps;
        for (int i = 1; i <= T + 1; ++i) {
            const double om = path.omega[i - 1];
            const double drift =
                (p.kappa_V * p.theta - p.kappa_V * path.y[i - 1] - p.varsigma_V * om) * delta;
            eps.push_back((path.y[i] - path.y[i - 1] - drift) / std::sqrt(om * delta));
        }
        if (testutil::jarque_bera(eps) < 9.21) ++passes; // 1% critical value, chi2(2)
    }
    CHECK(passes >= 95);
}

TEST_CASE("lag-1 autocorrelation of logVIX matches the AR coefficient") {
    const double delta = 1.0 / 252.0;
    const int T = 20000;
    for (ModelVariant v : {ModelVariant::SV, ModelVariant::SVJJ_S}) {
        const auto path = simulate_path(v, base_p(), base_q(), 2.8, 0.7, T, delta, 314);
        std::vector<double> head(path.y.begin(), path.y.end() - 1);
        std::vector<double> tail(path.y.begin() + 1, path.y.end());
        const double acf = stats::correlation(head, tail);
        const double a1 = 1.0 - base_p().kappa_V * delta;
        CHECK(std::abs(acf - a1) < 0.02);
    }
}

TEST_CASE("intensity clamping is counted") {
    QParams q = base_q();
    q.lambda0 = 400.0; // lambda*delta > 1 every day
    const auto path = simulate_path(ModelVariant::SVJJ_C, base_p(), q, 2.8, 0.7, 50, 1.0 / 252.0, 3);
    CHECK(path.intensity_clamp_count == 50);
}

TEST_CASE("same seed reproduces the path bit for bit") {
    const auto a = simulate_path(ModelVariant::SVJJ_S, base_p(), base_q(), 2.8, 0.7, 300, 1.0 / 252.0, 8);
    const auto b = simulate_path(ModelVariant::SVJJ_S, base_p(), base_q(), 2.8, 0.7, 300, 1.0 / 252.0, 8);
    CHECK(a.y == b.y);
    CHECK(a.omega == b.omega);
    CHECK(a.n == b.n);
    const auto c = simulate_path(ModelVariant::SVJJ_S, base_p(), base_q(), 2.8, 0.7, 300, 1.0 / 252.0, 9);
    CHECK(a.y != c.y);
}

TEST_CASE("stationary initial conditions are self-consistent") {
    const PParams p = base_p();
    const QParams q = base_q();
    const double m = stationary_omega(p, q);
    CHECK(q.alpha_omega + q.lambda0 * p.mu_omega_JP ==
          doctest::Approx(m * (p.kappa_omega_P - q.lambda1 * p.mu_omega_JP)));
    const int T = 60000;
    const auto path = simulate_path(ModelVariant::SVJJ_S, p, q, stationary_logvix(p, q), m, T,
                                    1.0 / 252.0, 77);
    double om_bar = 0.0;
    for (int i = 0; i <= T; ++i) om_bar += path.omega[i];
    om_bar /= (T + 1);
    CHECK(om_bar == doctest::Approx(m).epsilon(0.08));
}

TEST_CASE("path CSV has the documented layout") {
    auto path = simulate_path(ModelVariant::SVJJ_S, base_p(), base_q(), 2.8, 0.7, 5, 1.0 / 252.0, 2);
    path.vvix_sq = observe_vvix(path, base_q(), 30.0 / 365.0, 0.05, 4);
    std::ostringstream os;
    write_path_csv(path, os);
    const std::string text = os.str();
    CHECK(text.substr(0, text.find('\n')) == "index,date_offset,y,omega,n,j_y,j_omega,vvix_sq");
    // one header plus T+2 rows
    CHECK(std::count(text.begin(), text.end(), '\n') == 8);
    // day 0 has empty jump and vvix cells
    const std::string row0 = text.substr(text.find('\n') + 1);
    CHECK(row0.substr(0, row0.find('\n')).find(",,,,") != std::string::npos);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS((void)simulate_path(ModelVariant::SV, base_p(), base_q(), 2.8, 0.7, 1, 1.0 / 252.0, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)simulate_path(ModelVariant::SV, base_p(), base_q(), 2.8, -0.5, 10, 1.0 / 252.0, 1),
                    std::invalid_argument);
    PParams bad = base_p();
    bad.rho = 1.5;
    CHECK_THROWS_AS((void)simulate_path(ModelVariant::SV, bad, base_q(), 2.8, 0.7, 10, 1.0 / 252.0, 1),
                    std::invalid_argument);
}

} // TEST_SUITE
