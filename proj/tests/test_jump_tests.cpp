#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "test_util.hpp"
#include "vvjump/jump_tests.hpp"
#include "vvjump/rng.hpp"
#include "vvjump/stats.hpp"

using namespace vvjump;

namespace {

std::vector<double> brownian_levels(int len, double sd, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> x(len);
    x[0] = 0.0;
    for (int t = 1; t < len; ++t) x[t] = x[t - 1] + sd * rng.normal();
    return x;
}

} // namespace

TEST_SUITE("jump_tests") {

TEST_CASE("constant unit returns, window 2") {
    std::vector<double> levels(12);
    for (std::size_t i = 0; i < levels.size(); ++i) levels[i] = static_cast<double>(i);
    const auto stats = rolling_stats(levels, 2);
    REQUIRE(!stats.empty());
    const auto& s = stats.front();
    CHECK(s.rv == doctest::Approx(3.0));
    CHECK(s.bv == doctest::Approx(std::numbers::pi));
    CHECK(s.rj == doctest::Approx((3.0 - std::numbers::pi) / 3.0).epsilon(1e-12));
    CHECK(s.rj == doctest::Approx(-0.0472).epsilon(1e-3));
    CHECK(!s.defined); // tripower quarticity needs n >= 3
}

TEST_CASE("all-zero returns give undefined statistics and no flags") {
    std::vector<double> levels(40, 5.0);
    const auto flagged = detect_jumps(levels, 5, 0.05);
    for (const auto& s : flagged) {
        CHECK(s.rv == 0.0);
        CHECK(std::isnan(s.rj));
        CHECK(!s.defined);
        CHECK(!s.flagged);
    }
}

TEST_CASE("absolute-moment constant matches quadrature") {
    // E|Z|^{4/3} = 2 * integral_0^inf z^{4/3} phi(z) dz, by quadrature.
    const double oracle = 2.0 * testutil::simpson(
                                    [](double z) { return std::pow(z, 4.0 / 3.0) * stats::normal_pdf(z); },
                                    0.0, 12.0, 20000);
    CHECK(mu_four_thirds() == doctest::Approx(oracle).epsilon(1e-8));
    CHECK(mu_four_thirds() == doctest::Approx(0.83091).epsilon(1e-4));
}

TEST_CASE("statistics are scale invariant") {
    const auto base = brownian_levels(300, 1.3, 21);
    std::vector<double> scaled(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) scaled[i] = 7.3 * base[i];
    const auto a = detect_jumps(base, 22, 0.05);
    const auto b = detect_jumps(scaled, 22, 0.05);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].rj == doctest::Approx(b[i].rj).epsilon(1e-12));
        CHECK(a[i].z == doctest::Approx(b[i].z).epsilon(1e-12));
        CHECK(a[i].flagged == b[i].flagged);
    }
    const auto ca = detect_cojumps(base, scaled, 22, 0.05);
    const auto cb = detect_cojumps(scaled, base, 22, 0.05);
    for (std::size_t i = 0; i < ca.size(); ++i)
        CHECK(ca[i].z_cp == doctest::Approx(cb[i].z_cp).epsilon(1e-12));
}

TEST_CASE("statistics are shift equivariant") {
    const auto base = brownian_levels(200, 0.8, 22);
    std::vector<double> shifted(base.size() + 10, base[0]);
    for (std::size_t i = 0; i < base.size(); ++i) shifted[i + 10] = base[i];
    // shifted prepends 10 flat days; beyond the first windows the statistics
    // coincide at offset +10.
    const auto a = rolling_stats(base, 8);
    const auto b = rolling_stats(shifted, 8);
    for (const auto& sa : a) {
        if (sa.t < 20) continue;
        const auto it = std::find_if(b.begin(), b.end(),
                                     [&](const RollingJumpStats& sb) { return sb.t == sa.t + 10; });
        REQUIRE(it != b.end());
        CHECK(it->rv == doctest::Approx(sa.rv).epsilon(1e-12));
        CHECK(it->bv == doctest::Approx(sa.bv).epsilon(1e-12));
    }
}

TEST_CASE("null distribution of z on non-overlapping windows is close to standard normal") {
    // The statistic carries an O(1/n) offset under the null because RV has one
    // more term than BV, so the distributional check uses a longer window than
    // the default detection setting.
    const int n = 88;
    std::vector<double> zs;
    std::uint64_t seed = 100;
    while (zs.size() < 500) {
        const auto levels = brownian_levels(4000, 1.0, seed++);
        const auto st = rolling_stats(levels, n);
        for (std::size_t k = 0; k < st.size(); k += n + 3) {
            if (st[k].defined) zs.push_back(st[k].z);
            if (zs.size() == 500) break;
        }
    }
    const double d = testutil::ks_statistic(zs, [](double x) { return stats::normal_cdf(x); });
    CHECK(d < 0.08);
}

TEST_CASE("flag rate under the null is near the nominal level") {
    const int n = 22;
    long flags = 0, days = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto levels = brownian_levels(2000, 1.0, 500 + seed);
        for (const auto& s : detect_jumps(levels, n, 0.05)) {
            flags += s.flagged ? 1 : 0;
            ++days;
        }
    }
    const double rate = static_cast<double>(flags) / static_cast<double>(days);
    CHECK(rate > 0.03);
    CHECK(rate < 0.08);
}

TEST_CASE("an eight-sigma jump is caught") {
    const int n = 22;
    int caught = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto levels = brownian_levels(400, 1.0, 900 + seed);
        const int jump_day = 200;
        for (std::size_t t = jump_day; t < levels.size(); ++t) levels[t] += 8.0;
        bool hit = false;
        for (const auto& s : detect_jumps(levels, n, 0.05))
            if (s.flagged && s.t >= jump_day && s.t <= jump_day + n) hit = true;
        caught += hit ? 1 : 0;
    }
    CHECK(caught >= 48); // >= 95% of 50 seeds
}

TEST_CASE("alpha near one flags every defined day") {
    const auto levels = brownian_levels(300, 1.0, 77);
    for (const auto& s : detect_jumps(levels, 22, 0.9999))
        if (s.defined) CHECK(s.flagged);
}

TEST_CASE("cojump statistic is studentized by construction") {
    const auto s1 = brownian_levels(600, 1.0, 31);
    const auto c = detect_cojumps(s1, s1, 22, 0.05);
    double m = 0.0, ss = 0.0;
    for (const auto& s : c) {
        CHECK(s.cp >= 0.0); // cp is a realized-variance-like sum here
        m += s.z_cp;
    }
    m /= static_cast<double>(c.size());
    for (const auto& s : c) ss += (s.z_cp - m) * (s.z_cp - m);
    CHECK(std::abs(m) < 1e-12);
    CHECK(std::sqrt(ss / static_cast<double>(c.size())) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("independent series are flagged near the nominal rate") {
    long flags = 0, days = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto s1 = brownian_levels(2000, 1.0, 1500 + seed);
        const auto s2 = brownian_levels(2000, 1.0, 2500 + seed);
        for (const auto& s : detect_cojumps(s1, s2, 22, 0.05)) {
            flags += s.flagged ? 1 : 0;
            ++days;
        }
    }
    const double rate = static_cast<double>(flags) / static_cast<double>(days);
    CHECK(rate > 0.025);
    CHECK(rate < 0.10);
}

TEST_CASE("a common jump in both series is flagged") {
    const int n = 22;
    int caught = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto s1 = brownian_levels(400, 1.0, 3000 + seed);
        auto s2 = brownian_levels(400, 1.0, 4000 + seed);
        const int jump_day = 200;
        for (std::size_t t = jump_day; t < s1.size(); ++t) {
            s1[t] += 8.0;
            s2[t] += 8.0;
        }
        bool hit = false;
        for (const auto& s : detect_cojumps(s1, s2, n, 0.05))
            if (s.flagged && s.t >= jump_day && s.t <= jump_day + n) hit = true;
        caught += hit ? 1 : 0;
    }
    CHECK(caught >= 48);
}

TEST_CASE("degenerate cojump variance yields undefined statistics") {
    std::vector<double> linear(60);
    for (std::size_t i = 0; i < linear.size(); ++i) linear[i] = 2.0 * static_cast<double>(i);
    const auto c = detect_cojumps(linear, linear, 10, 0.05);
    for (const auto& s : c) {
        CHECK(!s.defined);
        CHECK(!s.flagged);
        CHECK(std::isnan(s.z_cp));
    }
}

TEST_CASE("input validation") {
    std::vector<double> tiny(10, 1.0);
    CHECK_THROWS_AS((void)rolling_stats(tiny, 22), std::invalid_argument);
    std::vector<double> ok(100, 1.0);
    CHECK_THROWS_AS((void)detect_jumps(ok, 22, 0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)detect_jumps(ok, 22, 1.0), std::invalid_argument);
    std::vector<double> other(99, 1.0);
    CHECK_THROWS_AS((void)detect_cojumps(ok, other, 22, 0.05), std::invalid_argument);
}

} // TEST_SUITE
