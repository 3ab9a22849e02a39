#include <doctest.h>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "vvjump/config.hpp"
#include "vvjump/data.hpp"
#include "vvjump/pipeline.hpp"

using namespace vvjump;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream is(p);
    REQUIRE(is);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

struct TempDir {
    fs::path path;
    TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("vvjump_test_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

RunConfig tiny_chain_config() {
    RunConfig c = default_run_config();
    c.chain.iterations = 60;
    c.chain.burn_in = 20;
    c.chain.thinning = 2;
    c.chain.seed = 5;
    c.simulation.days = 80;
    c.simulation.seed = 9;
    c.simulation.sigma_P = 0.03;
    return c;
}

} // namespace

TEST_SUITE("pipeline") {

TEST_CASE("ingest validates structure and values") {
    SUBCASE("three clean rows parse") {
        std::istringstream is("date,vix,vvix\n2007-01-03,21.5,87.3\n2007-01-04,20.1,85.0\n"
                              "2007-01-05,19.9,84.2\n");
        const auto s = parse_observations(is, "mem");
        CHECK(s.size() == 3);
        CHECK(s.y[0] == doctest::Approx(std::log(21.5)).epsilon(1e-15));
        CHECK(s.vvix_sq[2] == doctest::Approx(0.842 * 0.842).epsilon(1e-15));
    }
    SUBCASE("nonpositive vix is rejected with its row number") {
        std::istringstream is("date,vix,vvix\n2007-01-03,21.5,87.3\n2007-01-04,-3.0,85.0\n");
        try {
            (void)parse_observations(is, "mem");
            FAIL("expected rejection");
        } catch (const std::exception& e) {
            CHECK(std::string(e.what()).find("row 3") != std::string::npos);
            CHECK(std::string(e.what()).find("positive") != std::string::npos);
        }
    }
    SUBCASE("missing value is rejected with its row number") {
        std::istringstream is("date,vix,vvix\n2007-01-03,21.5,\n");
        try {
            (void)parse_observations(is, "mem");
            FAIL("expected rejection");
        } catch (const std::exception& e) {
            CHECK(std::string(e.what()).find("row 2") != std::string::npos);
        }
    }
    SUBCASE("non-monotone dates are rejected") {
        std::istringstream is("date,vix,vvix\n2007-01-04,21.5,80.0\n2007-01-04,20.0,81.0\n");
        CHECK_THROWS_WITH_AS((void)parse_observations(is, "mem"),
                             doctest::Contains("strictly increasing"), std::runtime_error);
    }
    SUBCASE("malformed number names the row") {
        std::istringstream is("date,vix,vvix\n2007-01-03,21.5,eighty\n");
        CHECK_THROWS_WITH_AS((void)parse_observations(is, "mem"), doctest::Contains("row 2"),
                             std::runtime_error);
    }
}

TEST_CASE("date arithmetic") {
    const Date d = Date::parse("2007-01-03");
    CHECK(d.iso() == "2007-01-03");
    CHECK(d.plus_days(1).iso() == "2007-01-04");
    CHECK(d.plus_days(365).iso() == "2008-01-03");
    CHECK_THROWS_AS((void)Date::parse("2007/01/03"), std::runtime_error);
    CHECK(Date::parse("2007-01-04").serial() - d.serial() == 1);
}

TEST_CASE("config round trip and hash stability") {
    const RunConfig base = default_run_config();
    const std::string text = serialize_run_config(base);
    std::istringstream is(text);
    const RunConfig parsed = parse_run_config(is, "mem");
    CHECK(serialize_run_config(parsed) == text);
    CHECK(config_hash(parsed) == config_hash(base));

    RunConfig changed = base;
    changed.chain.seed = base.chain.seed + 1;
    CHECK(config_hash(changed) != config_hash(base));

    std::istringstream bad("[chain]\nunknown_key = 3\n");
    CHECK_THROWS_WITH_AS((void)parse_run_config(bad, "mem"), doctest::Contains("unknown key"),
                         std::runtime_error);
}

TEST_CASE("simulate emits ingestible observations that re-parse bit for bit") {
    TempDir dir("roundtrip");
    RunConfig config = tiny_chain_config();
    config.output_dir = dir.path.string();
    REQUIRE(run_command("simulate", config) == 0);

    const auto obs_path = dir.path / "sim_observations.csv";
    const ObservedSeries series = ingest_csv(obs_path.string());
    CHECK(series.size() == static_cast<std::size_t>(config.simulation.days));

    // Bit-equality of the round trip: rewrite what was parsed and compare.
    std::ostringstream rewritten;
    rewritten << "date,vix,vvix\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        char vix[32], vvix[32];
        auto r1 = std::to_chars(vix, vix + sizeof vix, series.vix[i]);
        auto r2 = std::to_chars(vvix, vvix + sizeof vvix, series.vvix[i]);
        rewritten << series.dates[i].iso() << ',' << std::string(vix, r1.ptr) << ','
                  << std::string(vvix, r2.ptr) << '\n';
    }
    std::string original = read_file(obs_path);
    original.erase(0, original.find('\n') + 1); // provenance comment
    CHECK(rewritten.str() == original);

    // And estimation consumes the re-parsed series.
    config.input_path = obs_path.string();
    REQUIRE(run_command("estimate", config) == 0);
    CHECK(fs::exists(dir.path / "chain_draws.csv"));
}

TEST_CASE("estimate writes draws and summary with the configured count") {
    TempDir dir("estimate");
    RunConfig config = tiny_chain_config();
    config.output_dir = dir.path.string();
    REQUIRE(run_command("simulate", config) == 0);
    config.input_path = (dir.path / "sim_observations.csv").string();
    REQUIRE(run_command("estimate", config) == 0);

    const std::string draws = read_file(dir.path / "chain_draws.csv");
    const long rows = std::count(draws.begin(), draws.end(), '\n') - 2; // provenance + header
    CHECK(rows == (config.chain.iterations - config.chain.burn_in) / config.chain.thinning);
    CHECK(draws.find("# config_hash=") == 0);

    const std::string summary = read_file(dir.path / "estimate_summary.json");
    CHECK(summary.find("\"retained_draws\": 20") != std::string::npos);
}

TEST_CASE("diagnose before estimate is a dependency error") {
    TempDir dir("deps");
    RunConfig config = tiny_chain_config();
    config.output_dir = dir.path.string();
    REQUIRE(run_command("simulate", config) == 0);
    config.input_path = (dir.path / "sim_observations.csv").string();
    CHECK(run_command("diagnose", config) == 1);
    CHECK(run_command("pvalue-study", config) == 1);
}

TEST_CASE("full synthetic workflow produces the documented artifacts") {
    TempDir dir("workflow");
    RunConfig config = tiny_chain_config();
    config.simulation.days = 120;
    config.chain.iterations = 120;
    config.chain.burn_in = 40;
    config.chain.thinning = 1;
    config.simulation.paths = 40;
    config.output_dir = dir.path.string();
    REQUIRE(run_command("simulate", config) == 0);
    config.input_path = (dir.path / "sim_observations.csv").string();
    REQUIRE(run_command("estimate", config) == 0);
    REQUIRE(run_command("test-jumps", config) == 0);
    REQUIRE(run_command("diagnose", config) == 0);
    REQUIRE(run_command("pvalue-study", config) == 0);
    for (const char* name :
         {"sim_path.csv", "sim_observations.csv", "chain_draws.csv", "estimate_summary.json",
          "jump_stats_vix.csv", "jump_stats_vvix.csv", "cojump_stats.csv", "jump_summary.json",
          "residuals.csv", "qq_vix.csv", "qq_vol.csv", "jump_profile.csv", "diagnose_summary.json",
          "pvalues.csv"})
        CHECK(fs::exists(dir.path / name));

    const std::string pvals = read_file(dir.path / "pvalues.csv");
    CHECK(std::count(pvals.begin(), pvals.end(), '\n') == 15); // provenance + header + 13 stats
    CHECK(pvals.find("maxjump") != std::string::npos);
    CHECK(pvals.find("perc0.99") != std::string::npos);

    // Posterior-draw predictive mode reads the persisted draws back.
    RunConfig draw_mode = config;
    draw_mode.simulation.posterior_draw_predictive = true;
    REQUIRE(run_command("pvalue-study", draw_mode) == 0);
    const std::string pvals_draws = read_file(dir.path / "pvalues.csv");
    CHECK(std::count(pvals_draws.begin(), pvals_draws.end(), '\n') == 15);
    CHECK(pvals_draws != pvals); // different predictive law, same layout
}

TEST_CASE("unknown command and bad input map to the documented exit codes") {
    TempDir dir("codes");
    RunConfig config = tiny_chain_config();
    config.output_dir = dir.path.string();
    CHECK(run_command("frobnicate", config) == 1);
    config.input_path = (dir.path / "does_not_exist.csv").string();
    CHECK(run_command("estimate", config) == 1);
}

TEST_CASE("re-running a command with the same config gives byte-identical outputs") {
    TempDir dir("det");
    RunConfig config = tiny_chain_config();
    config.output_dir = dir.path.string();
    config.input_path = (dir.path / "sim_observations.csv").string();
    REQUIRE(run_command("simulate", config) == 0);
    REQUIRE(run_command("estimate", config) == 0);

    std::map<std::string, std::string> first;
    for (const char* name :
         {"sim_path.csv", "sim_observations.csv", "chain_draws.csv", "estimate_summary.json"})
        first[name] = read_file(dir.path / name);

    REQUIRE(run_command("simulate", config) == 0);
    REQUIRE(run_command("estimate", config) == 0);
    for (const auto& [name, content] : first) CHECK(read_file(dir.path / name) == content);
}

} // TEST_SUITE
