#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "vvjump/model.hpp"

namespace vvjump {

// Euler-discretized joint path of logVIX and its latent variance.
//
// Index conventions follow the estimation layout: y holds days 0..T+1,
// omega days 0..T, jump indicators/sizes are meaningful for days 2..T+1
// (zero elsewhere), and vvix_sq is meaningful for days 1..T (NaN elsewhere
// until filled). All vectors are stored full-length and index-aligned.
struct SimulatedPath {
    std::vector<double> y;         // logVIX, 0..T+1
    std::vector<double> omega;     // variance, 0..T
    std::vector<int> n;            // jump indicator per day, 2..T+1
    std::vector<double> j_y;       // applied logVIX jump size per day
    std::vector<double> j_omega;   // applied volatility jump size per day
    std::vector<double> eps_y;     // Brownian shocks of the y equation, 1..T+1
    std::vector<double> eps_omega; // Brownian shocks of the omega equation, 1..T
    std::vector<double> vvix_sq;   // observed decimal VVIX^2, 1..T
    double delta = 0.0;            // step length in years
    std::uint64_t seed = 0;
    int T = 0;
    int intensity_clamp_count = 0; // steps where lambda*delta exceeded 1
};

// Simulates the physical-measure dynamics with correlated shocks, a shared
// Bernoulli jump indicator per day and normal jump sizes. Volatility is
// floored at epsilon_omega after every step.
SimulatedPath simulate_path(ModelVariant variant, const PParams& p, const QParams& q, double y0,
                            double omega0, int T, double delta, std::uint64_t seed,
                            double epsilon_omega = 1e-8);

// Noisy affine observation of the volatility path: A + B*omega_i + N(0, sigma_P^2)
// per day, independent across days. Returned vector is index-aligned (0..T,
// entry 0 is NaN).
std::vector<double> observe_vvix(const SimulatedPath& path, const QParams& q, double tau,
                                 double sigma_P, std::uint64_t seed);

// Stationary means used as default initial conditions.
double stationary_omega(const PParams& p, const QParams& q);
double stationary_logvix(const PParams& p, const QParams& q);

// CSV emission: index, date_offset, y, omega, n, j_y, j_omega, vvix_sq.
// Undefined cells are left empty.
void write_path_csv(const SimulatedPath& path, std::ostream& os);

} // namespace vvjump
