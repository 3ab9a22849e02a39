#include "vvjump/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "vvjump/data.hpp"
#include "vvjump/diagnostics.hpp"
#include "vvjump/jump_tests.hpp"
#include "vvjump/simulator.hpp"
#include "vvjump/stats.hpp"

namespace vvjump {

namespace {

using nlohmann::json;

std::string fmt(double v) {
    if (std::isnan(v)) return "";
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

json json_number_or_null(double v) {
    if (std::isnan(v)) return nullptr;
    return v;
}

std::ofstream open_output(const RunConfig& config, const std::string& name) {
    std::filesystem::create_directories(config.output_dir);
    const auto path = std::filesystem::path(config.output_dir) / name;
    std::ofstream os(path);
    if (!os) throw UserError("cannot open output file '" + path.string() + "'");
    return os;
}

void write_provenance(std::ostream& os, const RunConfig& config, std::uint64_t seed) {
    os << "# config_hash=" << config_hash(config) << " seed=" << seed << "\n";
}

ObservedSeries load_input(const RunConfig& config) {
    if (config.input_path.empty()) throw UserError("no input file given (--input or run.input)");
    try {
        return ingest_csv(config.input_path);
    } catch (const std::exception& e) {
        throw UserError(e.what());
    }
}

json load_estimate_summary(const RunConfig& config) {
    const auto path = std::filesystem::path(config.output_dir) / "estimate_summary.json";
    std::ifstream is(path);
    if (!is)
        throw UserError("missing estimation artifact '" + path.string() +
                        "' (run the estimate command first)");
    json j;
    is >> j;
    return j;
}

PosteriorPointEstimate point_estimate_from_summary(const json& j) {
    PosteriorPointEstimate est;
    const auto& pm = j.at("parameters");
    const auto mean_of = [&](const char* name) { return pm.at(name).at("mean").get<double>(); };
    est.p.kappa_V = mean_of("kappa_V");
    est.p.varsigma_V = mean_of("varsigma_V");
    est.p.theta = mean_of("theta");
    est.p.kappa_omega_P = mean_of("kappa_omega_P");
    est.p.mu_y_JP = mean_of("mu_y_JP");
    est.p.mu_omega_JP = mean_of("mu_omega_JP");
    est.p.sigma_omega_J = mean_of("sigma_omega_J");
    est.p.rho = mean_of("rho");
    est.p.sigma_omega = mean_of("sigma_omega");
    est.q.alpha_omega = mean_of("alpha_omega");
    est.q.kappa_omega_Q = mean_of("kappa_omega_Q");
    est.q.lambda0 = mean_of("lambda0");
    est.q.lambda1 = mean_of("lambda1");
    est.q.mu_y = mean_of("mu_y");
    est.q.mu_omega = mean_of("mu_omega");
    est.q.sigma_y_J = mean_of("sigma_y_J");
    est.omega = j.at("omega_mean").get<std::vector<double>>();
    est.jump_y = j.at("jump_y_mean").get<std::vector<double>>();
    est.jump_omega = j.at("jump_omega_mean").get<std::vector<double>>();
    return est;
}

void write_jump_stats_csv(std::ofstream& os, const RunConfig& config,
                          const std::vector<RollingJumpStats>& stats) {
    write_provenance(os, config, config.chain.seed);
    os << "t,rv,bv,rj,tp,z,flag\n";
    for (const auto& s : stats)
        os << s.t << ',' << fmt(s.rv) << ',' << fmt(s.bv) << ',' << fmt(s.rj) << ',' << fmt(s.tp)
           << ',' << fmt(s.z) << ',' << (s.flagged ? 1 : 0) << '\n';
}

} // namespace

void cmd_simulate(const RunConfig& config) {
    const auto [p, q] = apply_variant(config.variant, config.p_params, config.q_params);
    const int T = config.simulation.days;
    double y0 = config.simulation.y0;
    double omega0 = config.simulation.omega0;
    if (config.simulation.auto_start) {
        y0 = stationary_logvix(p, q);
        omega0 = stationary_omega(p, q);
    }
    auto path = simulate_path(config.variant, p, q, y0, omega0, T, config.chain.delta,
                              config.simulation.seed);
    path.vvix_sq = observe_vvix(path, q, config.chain.tau, config.simulation.sigma_P,
                                Rng::derive_seed(config.simulation.seed, 1));

    {
        auto os = open_output(config, "sim_path.csv");
        write_provenance(os, config, config.simulation.seed);
        write_path_csv(path, os);
    }
    {
        // Observation rows for days 1..T, in the ingestion format.
        auto os = open_output(config, "sim_observations.csv");
        write_provenance(os, config, config.simulation.seed);
        os << "date,vix,vvix\n";
        Date d = Date::parse(config.simulation.start_date);
        for (int i = 1; i <= path.T; ++i) {
            const double vix = std::exp(path.y[i]);
            const double vvix = 100.0 * std::sqrt(path.vvix_sq[i]);
            os << d.iso() << ',' << fmt(vix) << ',' << fmt(vvix) << '\n';
            d = d.plus_days(1);
        }
    }
    std::cout << "simulate: wrote " << path.T + 2 << " path days, "
              << path.intensity_clamp_count << " intensity clamps\n";
}

void cmd_estimate(const RunConfig& config) {
    const ObservedSeries series = load_input(config);
    EstimationData data;
    try {
        data = estimation_data_from_series(series);
        data.validate(config.chain.vvix_enabled);
    } catch (const std::exception& e) {
        throw UserError(e.what());
    }
    const ChainOutput chain = run_chain(config.chain, config.variant, data, config.priors);

    {
        auto os = open_output(config, "chain_draws.csv");
        write_provenance(os, config, config.chain.seed);
        os << "draw,kappa_V,varsigma_V,theta,kappa_omega_P,mu_y_JP,mu_omega_JP,sigma_omega_J,rho,"
              "sigma_omega,alpha_omega,kappa_omega_Q,lambda0,lambda1,mu_y,mu_omega,sigma_y_J,sigma_P\n";
        for (std::size_t k = 0; k < chain.draws.size(); ++k) {
            const ParameterDraw& d = chain.draws[k];
            os << k << ',' << fmt(d.kappa_V) << ',' << fmt(d.varsigma_V) << ',' << fmt(d.theta)
               << ',' << fmt(d.kappa_omega_P) << ',' << fmt(d.mu_y_JP) << ',' << fmt(d.mu_omega_JP)
               << ',' << fmt(d.sigma_omega_J) << ',' << fmt(d.rho) << ',' << fmt(d.sigma_omega)
               << ',' << fmt(d.alpha_omega) << ',' << fmt(d.kappa_omega_Q) << ',' << fmt(d.lambda0)
               << ',' << fmt(d.lambda1) << ',' << fmt(d.mu_y) << ',' << fmt(d.mu_omega) << ','
               << fmt(d.sigma_y_J) << ',' << fmt(d.sigma_P) << '\n';
        }
    }

    json summary;
    summary["config_hash"] = config_hash(config);
    summary["seed"] = config.chain.seed;
    summary["variant"] = variant_name(config.variant);
    summary["T"] = data.T;
    summary["retained_draws"] = chain.draws.size();
    summary["config_echo"] = serialize_run_config(config);
    const auto param_block = [&](const char* name, auto get) {
        std::vector<double> v;
        v.reserve(chain.draws.size());
        for (const auto& d : chain.draws) v.push_back(get(d));
        std::vector<double> sorted = v;
        std::sort(sorted.begin(), sorted.end());
        json b;
        b["mean"] = stats::mean(v);
        b["std"] = stats::stddev(v);
        b["q025"] = sorted[static_cast<std::size_t>(0.025 * sorted.size())];
        b["q975"] = sorted[static_cast<std::size_t>(0.975 * sorted.size())];
        summary["parameters"][name] = b;
    };
    param_block("kappa_V", [](const ParameterDraw& d) { return d.kappa_V; });
    param_block("varsigma_V", [](const ParameterDraw& d) { return d.varsigma_V; });
    param_block("theta", [](const ParameterDraw& d) { return d.theta; });
    param_block("kappa_omega_P", [](const ParameterDraw& d) { return d.kappa_omega_P; });
    param_block("mu_y_JP", [](const ParameterDraw& d) { return d.mu_y_JP; });
    param_block("mu_omega_JP", [](const ParameterDraw& d) { return d.mu_omega_JP; });
    param_block("sigma_omega_J", [](const ParameterDraw& d) { return d.sigma_omega_J; });
    param_block("rho", [](const ParameterDraw& d) { return d.rho; });
    param_block("sigma_omega", [](const ParameterDraw& d) { return d.sigma_omega; });
    param_block("alpha_omega", [](const ParameterDraw& d) { return d.alpha_omega; });
    param_block("kappa_omega_Q", [](const ParameterDraw& d) { return d.kappa_omega_Q; });
    param_block("lambda0", [](const ParameterDraw& d) { return d.lambda0; });
    param_block("lambda1", [](const ParameterDraw& d) { return d.lambda1; });
    param_block("mu_y", [](const ParameterDraw& d) { return d.mu_y; });
    param_block("mu_omega", [](const ParameterDraw& d) { return d.mu_omega; });
    param_block("sigma_y_J", [](const ParameterDraw& d) { return d.sigma_y_J; });
    param_block("sigma_P", [](const ParameterDraw& d) { return d.sigma_P; });
    summary["omega_mean"] = chain.omega_mean;
    summary["omega_std"] = chain.omega_std;
    summary["jump_prob"] = chain.jump_prob;
    summary["jump_y_mean"] = chain.jump_y_mean;
    summary["jump_omega_mean"] = chain.jump_omega_mean;
    summary["acceptance"] = {{"omega_path", chain.acceptance.omega_path},
                             {"alpha_omega", chain.acceptance.alpha_omega},
                             {"kappa_omega_Q", chain.acceptance.kappa_omega_Q},
                             {"lambda0", chain.acceptance.lambda0},
                             {"lambda1", chain.acceptance.lambda1},
                             {"mu_y", chain.acceptance.mu_y},
                             {"mu_omega", chain.acceptance.mu_omega},
                             {"sigma_y_J", chain.acceptance.sigma_y_J},
                             {"rho_sigma_omega", chain.acceptance.rho_sigma_omega}};
    auto os = open_output(config, "estimate_summary.json");
    os << summary.dump(2) << '\n';
    std::cout << "estimate: " << chain.draws.size() << " retained draws, omega acceptance "
              << chain.acceptance.omega_path << "\n";
}

void cmd_test_jumps(const RunConfig& config) {
    const ObservedSeries series = load_input(config);
    const int n = config.jump_test.window;
    const double alpha = config.jump_test.alpha;
    const bool logr = config.jump_test.log_returns;
    if (static_cast<int>(series.size()) <= n + 2)
        throw UserError("series too short for the jump-test window");

    const auto vix_stats = detect_jumps(series.vix, n, alpha, logr);
    const auto vvix_stats = detect_jumps(series.vvix, n, alpha, logr);
    const auto costats = detect_cojumps(series.vix, series.vvix, n, alpha, logr);

    {
        auto os = open_output(config, "jump_stats_vix.csv");
        write_jump_stats_csv(os, config, vix_stats);
    }
    {
        auto os = open_output(config, "jump_stats_vvix.csv");
        write_jump_stats_csv(os, config, vvix_stats);
    }
    {
        auto os = open_output(config, "cojump_stats.csv");
        write_provenance(os, config, config.chain.seed);
        os << "t,cp,z_cp,flag\n";
        for (const auto& s : costats)
            os << s.t << ',' << fmt(s.cp) << ',' << fmt(s.z_cp) << ',' << (s.flagged ? 1 : 0) << '\n';
    }

    long vix_days = std::count_if(vix_stats.begin(), vix_stats.end(),
                                  [](const RollingJumpStats& s) { return s.flagged; });
    long vvix_days = std::count_if(vvix_stats.begin(), vvix_stats.end(),
                                   [](const RollingJumpStats& s) { return s.flagged; });
    long co_days = std::count_if(costats.begin(), costats.end(),
                                 [](const CojumpStats& s) { return s.flagged; });
    long both_steps = 0;
    for (const auto& c : costats) {
        if (!c.flagged) continue;
        const auto flagged_at = [&](const std::vector<RollingJumpStats>& v) {
            const auto it = std::find_if(v.begin(), v.end(),
                                         [&](const RollingJumpStats& s) { return s.t == c.t; });
            return it != v.end() && it->flagged;
        };
        if (flagged_at(vix_stats) && flagged_at(vvix_stats)) ++both_steps;
    }

    json summary;
    summary["config_hash"] = config_hash(config);
    summary["window"] = n;
    summary["alpha"] = alpha;
    summary["observations"] = series.size();
    summary["vix_jump_days"] = vix_days;
    summary["vvix_jump_days"] = vvix_days;
    summary["cojump_days"] = co_days;
    summary["cojump_days_confirmed_by_both_univariate_tests"] = both_steps;
    auto os = open_output(config, "jump_summary.json");
    os << summary.dump(2) << '\n';
    std::cout << "test-jumps: " << vix_days << " VIX days, " << vvix_days << " VVIX days, "
              << co_days << " co-jump days flagged of " << series.size() << " observations\n";
}

void cmd_diagnose(const RunConfig& config) {
    const ObservedSeries series = load_input(config);
    EstimationData data;
    try {
        data = estimation_data_from_series(series);
    } catch (const std::exception& e) {
        throw UserError(e.what());
    }
    const json summary = load_estimate_summary(config);
    PosteriorPointEstimate est;
    try {
        est = point_estimate_from_summary(summary);
    } catch (const std::exception& e) {
        throw UserError(std::string("unusable estimation artifact: ") + e.what());
    }
    if (static_cast<int>(est.omega.size()) != data.T + 1)
        throw UserError("estimation artifact does not match the input length");

    const double delta = config.chain.delta;
    const auto ry = vix_residuals(data, est, delta, config.chain.epsilon_omega);
    const auto ro = vol_residuals(data, est, delta, config.chain.epsilon_omega);

    {
        auto os = open_output(config, "residuals.csv");
        write_provenance(os, config, config.chain.seed);
        os << "i,eps_y,eps_omega\n";
        for (int i = 2; i <= data.T + 1; ++i)
            os << i << ',' << fmt(ry.eps_y[i]) << ',' << (i <= data.T ? fmt(ro.eps_omega[i]) : "")
               << '\n';
    }

    std::vector<double> ey(ry.eps_y.begin() + 2, ry.eps_y.end());
    std::vector<double> eo(ro.eps_omega.begin() + 2, ro.eps_omega.end());
    const auto write_qq = [&](const std::string& name, const std::vector<double>& resid) {
        auto os = open_output(config, name);
        write_provenance(os, config, config.chain.seed);
        os << "theoretical,sample\n";
        for (const auto& pt : qq_points(resid)) os << fmt(pt.theoretical) << ',' << fmt(pt.sample) << '\n';
    };
    write_qq("qq_vix.csv", ey);
    write_qq("qq_vol.csv", eo);

    {
        const auto prob = summary.at("jump_prob").get<std::vector<double>>();
        auto os = open_output(config, "jump_profile.csv");
        write_provenance(os, config, config.chain.seed);
        os << "i,probability,mean_size_y,mean_size_omega\n";
        for (int i = 2; i <= data.T + 1; ++i)
            os << i << ',' << fmt(prob[i]) << ',' << fmt(est.jump_y[i]) << ','
               << fmt(est.jump_omega[i]) << '\n';
    }

    std::vector<double> omega_path(est.omega.begin() + 1, est.omega.end());
    std::vector<double> vvix_levels(series.vvix.begin() + 1, series.vvix.begin() + 1 + data.T);
    const double corr = proxy_correlation(omega_path, vvix_levels);

    json out;
    out["config_hash"] = config_hash(config);
    out["eps_y_mean"] = stats::mean(ey);
    out["eps_y_std"] = stats::stddev(ey);
    out["eps_omega_mean"] = stats::mean(eo);
    out["eps_omega_std"] = stats::stddev(eo);
    out["proxy_correlation"] = json_number_or_null(corr);
    auto os = open_output(config, "diagnose_summary.json");
    os << out.dump(2) << '\n';
    std::cout << "diagnose: eps_y std " << stats::stddev(ey) << ", eps_omega std "
              << stats::stddev(eo) << ", proxy correlation " << corr << "\n";
}

// Retained draws back from the persisted chain CSV, for the posterior-draw
// predictive mode.
static std::vector<ParameterDraw> load_chain_draws(const RunConfig& config) {
    const auto path = std::filesystem::path(config.output_dir) / "chain_draws.csv";
    std::ifstream is(path);
    if (!is)
        throw UserError("missing estimation artifact '" + path.string() +
                        "' (run the estimate command first)");
    std::vector<ParameterDraw> draws;
    std::string line;
    bool header_seen = false;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        std::vector<double> f;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            const auto comma = line.find(',', pos);
            const std::string tok = line.substr(pos, comma == std::string::npos ? comma : comma - pos);
            double v = 0.0;
            auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
            if (res.ec != std::errc()) throw UserError("unusable chain_draws.csv");
            f.push_back(v);
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (f.size() != 18) throw UserError("unusable chain_draws.csv");
        draws.push_back({f[1], f[2], f[3], f[4], f[5], f[6], f[7], f[8], f[9], f[10], f[11], f[12],
                         f[13], f[14], f[15], f[16], f[17]});
    }
    if (draws.empty()) throw UserError("chain_draws.csv holds no draws");
    return draws;
}

void cmd_pvalue_study(const RunConfig& config) {
    const ObservedSeries series = load_input(config);
    const json summary = load_estimate_summary(config);
    PosteriorPointEstimate est;
    try {
        est = point_estimate_from_summary(summary);
    } catch (const std::exception& e) {
        throw UserError(std::string("unusable estimation artifact: ") + e.what());
    }
    PValueStudyResult res;
    try {
        if (config.simulation.posterior_draw_predictive) {
            ChainOutput chain;
            chain.variant = config.variant;
            chain.draws = load_chain_draws(config);
            chain.omega_mean = summary.at("omega_mean").get<std::vector<double>>();
            res = pvalue_study_posterior_draws(chain, series.y, config.simulation.paths,
                                               config.chain.delta, config.simulation.seed);
        } else {
            const auto [p, q] = apply_variant(config.variant, est.p, est.q);
            res = pvalue_study(config.variant, p, q, series.y, config.simulation.paths,
                               config.chain.delta, config.simulation.seed);
        }
    } catch (const UserError&) {
        throw;
    } catch (const std::exception& e) {
        throw UserError(std::string("p-value study failed: ") + e.what());
    }

    auto os = open_output(config, "pvalues.csv");
    write_provenance(os, config, config.simulation.seed);
    os << "statistic,data_value,p_value\n";
    for (int k = 0; k < PredictiveStatistics::count; ++k)
        os << PredictiveStatistics::name(k) << ',' << fmt(res.data_stats.value(k)) << ','
           << fmt(res.p_values[k]) << '\n';
    std::cout << "pvalue-study: " << config.simulation.paths << " simulations of length "
              << series.size() << "\n";
}

int run_command(const std::string& command, const RunConfig& config) {
    try {
        config.validate();
        if (command == "simulate") cmd_simulate(config);
        else if (command == "estimate") cmd_estimate(config);
        else if (command == "test-jumps") cmd_test_jumps(config);
        else if (command == "diagnose") cmd_diagnose(config);
        else if (command == "pvalue-study") cmd_pvalue_study(config);
        else throw UserError("unknown command '" + command + "'");
        return 0;
    } catch (const UserError& e) {
        std::cerr << R"({"error":"user","message":")" << e.what() << "\"}\n";
        return 1;
    } catch (const ChainDivergence& e) {
        std::cerr << R"({"error":"internal","message":")" << e.what() << "\"}\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << R"({"error":"user","message":")" << e.what() << "\"}\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << R"({"error":"internal","message":")" << e.what() << "\"}\n";
        return 2;
    }
}

} // namespace vvjump
