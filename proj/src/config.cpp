#include "vvjump/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace vvjump {

namespace {

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

struct KeyBinding {
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

double to_double(const std::string& s) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw std::runtime_error("malformed number '" + s + "'");
    return v;
}

long long to_int(const std::string& s) {
    long long v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw std::runtime_error("malformed integer '" + s + "'");
    return v;
}

bool to_bool(const std::string& s) {
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw std::runtime_error("malformed boolean '" + s + "'");
}

// One registry drives parsing, serialization and hashing, so the three can
// never drift apart.
const std::map<std::string, KeyBinding>& bindings() {
    static const std::map<std::string, KeyBinding> table = [] {
        std::map<std::string, KeyBinding> m;
        const auto add = [&](const std::string& key, std::function<void(RunConfig&, const std::string&)> set,
                             std::function<std::string(const RunConfig&)> get) {
            m[key] = {std::move(set), std::move(get)};
        };
        const auto dbl = [&](const std::string& key, std::function<double&(RunConfig&)> ref) {
            add(key, [ref](RunConfig& c, const std::string& v) { ref(c) = to_double(v); },
                [ref](const RunConfig& c) { return format_double(ref(const_cast<RunConfig&>(c))); });
        };
        const auto integer = [&](const std::string& key, std::function<int&(RunConfig&)> ref) {
            add(key, [ref](RunConfig& c, const std::string& v) { ref(c) = static_cast<int>(to_int(v)); },
                [ref](const RunConfig& c) { return std::to_string(ref(const_cast<RunConfig&>(c))); });
        };
        const auto boolean = [&](const std::string& key, std::function<bool&(RunConfig&)> ref) {
            add(key, [ref](RunConfig& c, const std::string& v) { ref(c) = to_bool(v); },
                [ref](const RunConfig& c) { return ref(const_cast<RunConfig&>(c)) ? "true" : "false"; });
        };
        const auto text = [&](const std::string& key, std::function<std::string&(RunConfig&)> ref) {
            add(key, [ref](RunConfig& c, const std::string& v) { ref(c) = v; },
                [ref](const RunConfig& c) { return ref(const_cast<RunConfig&>(c)); });
        };

        add("run.variant",
            [](RunConfig& c, const std::string& v) { c.variant = parse_variant(v); },
            [](const RunConfig& c) { return variant_name(c.variant); });
        text("run.input", [](RunConfig& c) -> std::string& { return c.input_path; });
        text("run.output_dir", [](RunConfig& c) -> std::string& { return c.output_dir; });

        integer("chain.iterations", [](RunConfig& c) -> int& { return c.chain.iterations; });
        integer("chain.burn_in", [](RunConfig& c) -> int& { return c.chain.burn_in; });
        integer("chain.thinning", [](RunConfig& c) -> int& { return c.chain.thinning; });
        dbl("chain.delta", [](RunConfig& c) -> double& { return c.chain.delta; });
        dbl("chain.tau", [](RunConfig& c) -> double& { return c.chain.tau; });
        integer("chain.adaptation_window", [](RunConfig& c) -> int& { return c.chain.adaptation_window; });
        dbl("chain.target_accept_low", [](RunConfig& c) -> double& { return c.chain.target_accept_low; });
        dbl("chain.target_accept_high", [](RunConfig& c) -> double& { return c.chain.target_accept_high; });
        add("chain.seed",
            [](RunConfig& c, const std::string& v) { c.chain.seed = static_cast<std::uint64_t>(to_int(v)); },
            [](const RunConfig& c) { return std::to_string(c.chain.seed); });
        boolean("chain.vvix_enabled", [](RunConfig& c) -> bool& { return c.chain.vvix_enabled; });
        boolean("chain.paper_exact_q_targets",
                [](RunConfig& c) -> bool& { return c.chain.paper_exact_q_targets; });
        dbl("chain.epsilon_omega", [](RunConfig& c) -> double& { return c.chain.epsilon_omega; });

        const auto normal_prior = [&](const std::string& name, std::function<NormalPrior&(RunConfig&)> ref) {
            dbl("priors." + name + "_mean",
                [ref](RunConfig& c) -> double& { return ref(c).mean; });
            dbl("priors." + name + "_var", [ref](RunConfig& c) -> double& { return ref(c).var; });
        };
        const auto ig_prior = [&](const std::string& name, std::function<InvGammaPrior&(RunConfig&)> ref) {
            dbl("priors." + name + "_shape",
                [ref](RunConfig& c) -> double& { return ref(c).shape; });
            dbl("priors." + name + "_scale",
                [ref](RunConfig& c) -> double& { return ref(c).scale; });
        };
        normal_prior("theta", [](RunConfig& c) -> NormalPrior& { return c.priors.theta; });
        normal_prior("kappa_V", [](RunConfig& c) -> NormalPrior& { return c.priors.kappa_V; });
        normal_prior("varsigma_V", [](RunConfig& c) -> NormalPrior& { return c.priors.varsigma_V; });
        normal_prior("kappa_omega_P", [](RunConfig& c) -> NormalPrior& { return c.priors.kappa_omega_P; });
        normal_prior("mu_y_JP", [](RunConfig& c) -> NormalPrior& { return c.priors.mu_y_JP; });
        normal_prior("mu_omega_JP", [](RunConfig& c) -> NormalPrior& { return c.priors.mu_omega_JP; });
        normal_prior("alpha_omega", [](RunConfig& c) -> NormalPrior& { return c.priors.alpha_omega; });
        normal_prior("kappa_omega_Q", [](RunConfig& c) -> NormalPrior& { return c.priors.kappa_omega_Q; });
        normal_prior("lambda0", [](RunConfig& c) -> NormalPrior& { return c.priors.lambda0; });
        normal_prior("lambda1", [](RunConfig& c) -> NormalPrior& { return c.priors.lambda1; });
        normal_prior("mu_y", [](RunConfig& c) -> NormalPrior& { return c.priors.mu_y; });
        normal_prior("mu_omega", [](RunConfig& c) -> NormalPrior& { return c.priors.mu_omega; });
        normal_prior("rho", [](RunConfig& c) -> NormalPrior& { return c.priors.rho; });
        normal_prior("sigma_omega", [](RunConfig& c) -> NormalPrior& { return c.priors.sigma_omega; });
        ig_prior("sigma_omega_J_sq", [](RunConfig& c) -> InvGammaPrior& { return c.priors.sigma_omega_J_sq; });
        ig_prior("sigma_y_J_sq", [](RunConfig& c) -> InvGammaPrior& { return c.priors.sigma_y_J_sq; });
        ig_prior("sigma_P_sq", [](RunConfig& c) -> InvGammaPrior& { return c.priors.sigma_P_sq; });

        dbl("proposal_steps.omega", [](RunConfig& c) -> double& { return c.priors.steps.omega; });
        dbl("proposal_steps.alpha_omega", [](RunConfig& c) -> double& { return c.priors.steps.alpha_omega; });
        dbl("proposal_steps.kappa_omega_Q",
            [](RunConfig& c) -> double& { return c.priors.steps.kappa_omega_Q; });
        dbl("proposal_steps.lambda0", [](RunConfig& c) -> double& { return c.priors.steps.lambda0; });
        dbl("proposal_steps.lambda1", [](RunConfig& c) -> double& { return c.priors.steps.lambda1; });
        dbl("proposal_steps.mu_y", [](RunConfig& c) -> double& { return c.priors.steps.mu_y; });
        dbl("proposal_steps.mu_omega", [](RunConfig& c) -> double& { return c.priors.steps.mu_omega; });
        dbl("proposal_steps.sigma_y_J", [](RunConfig& c) -> double& { return c.priors.steps.sigma_y_J; });
        dbl("proposal_steps.rho", [](RunConfig& c) -> double& { return c.priors.steps.rho; });
        dbl("proposal_steps.sigma_omega", [](RunConfig& c) -> double& { return c.priors.steps.sigma_omega; });

        integer("jump_test.window", [](RunConfig& c) -> int& { return c.jump_test.window; });
        dbl("jump_test.alpha", [](RunConfig& c) -> double& { return c.jump_test.alpha; });
        boolean("jump_test.log_returns", [](RunConfig& c) -> bool& { return c.jump_test.log_returns; });

        integer("simulation.paths", [](RunConfig& c) -> int& { return c.simulation.paths; });
        integer("simulation.days", [](RunConfig& c) -> int& { return c.simulation.days; });
        add("simulation.seed",
            [](RunConfig& c, const std::string& v) { c.simulation.seed = static_cast<std::uint64_t>(to_int(v)); },
            [](const RunConfig& c) { return std::to_string(c.simulation.seed); });
        dbl("simulation.y0", [](RunConfig& c) -> double& { return c.simulation.y0; });
        dbl("simulation.omega0", [](RunConfig& c) -> double& { return c.simulation.omega0; });
        boolean("simulation.auto_start", [](RunConfig& c) -> bool& { return c.simulation.auto_start; });
        dbl("simulation.sigma_P", [](RunConfig& c) -> double& { return c.simulation.sigma_P; });
        text("simulation.start_date", [](RunConfig& c) -> std::string& { return c.simulation.start_date; });
        boolean("simulation.posterior_draw_predictive",
                [](RunConfig& c) -> bool& { return c.simulation.posterior_draw_predictive; });

        dbl("p_params.kappa_V", [](RunConfig& c) -> double& { return c.p_params.kappa_V; });
        dbl("p_params.varsigma_V", [](RunConfig& c) -> double& { return c.p_params.varsigma_V; });
        dbl("p_params.theta", [](RunConfig& c) -> double& { return c.p_params.theta; });
        dbl("p_params.kappa_omega_P", [](RunConfig& c) -> double& { return c.p_params.kappa_omega_P; });
        dbl("p_params.mu_y_JP", [](RunConfig& c) -> double& { return c.p_params.mu_y_JP; });
        dbl("p_params.mu_omega_JP", [](RunConfig& c) -> double& { return c.p_params.mu_omega_JP; });
        dbl("p_params.sigma_omega_J", [](RunConfig& c) -> double& { return c.p_params.sigma_omega_J; });
        dbl("p_params.rho", [](RunConfig& c) -> double& { return c.p_params.rho; });
        dbl("p_params.sigma_omega", [](RunConfig& c) -> double& { return c.p_params.sigma_omega; });
        dbl("q_params.alpha_omega", [](RunConfig& c) -> double& { return c.q_params.alpha_omega; });
        dbl("q_params.kappa_omega_Q", [](RunConfig& c) -> double& { return c.q_params.kappa_omega_Q; });
        dbl("q_params.lambda0", [](RunConfig& c) -> double& { return c.q_params.lambda0; });
        dbl("q_params.lambda1", [](RunConfig& c) -> double& { return c.q_params.lambda1; });
        dbl("q_params.mu_y", [](RunConfig& c) -> double& { return c.q_params.mu_y; });
        dbl("q_params.mu_omega", [](RunConfig& c) -> double& { return c.q_params.mu_omega; });
        dbl("q_params.sigma_y_J", [](RunConfig& c) -> double& { return c.q_params.sigma_y_J; });
        return m;
    }();
    return table;
}

} // namespace

void RunConfig::validate() const {
    chain.validate();
    priors.validate();
    if (!(jump_test.window >= 1)) throw std::invalid_argument("jump_test.window must be at least 1");
    if (!(jump_test.alpha > 0.0 && jump_test.alpha < 1.0))
        throw std::invalid_argument("jump_test.alpha must be in (0, 1)");
    if (!(simulation.paths >= 1)) throw std::invalid_argument("simulation.paths must be at least 1");
    if (!(simulation.days >= 4)) throw std::invalid_argument("simulation.days must be at least 4");
    if (!(simulation.sigma_P >= 0.0))
        throw std::invalid_argument("simulation.sigma_P must be nonnegative");
}

RunConfig default_run_config() {
    RunConfig c;
    c.p_params.kappa_V = 2.1093;
    c.p_params.varsigma_V = -0.1538;
    c.p_params.theta = 2.3312;
    c.p_params.kappa_omega_P = 6.2849;
    c.p_params.mu_y_JP = 0.1551;
    c.p_params.mu_omega_JP = 0.1430;
    c.p_params.sigma_omega_J = 0.1420;
    c.p_params.rho = 0.4998;
    c.p_params.sigma_omega = 0.8461;
    c.q_params.alpha_omega = 3.7938;
    c.q_params.kappa_omega_Q = 2.5674;
    c.q_params.lambda0 = 2.7557;
    c.q_params.lambda1 = 1.6086;
    c.q_params.mu_y = -0.0960;
    c.q_params.mu_omega = -1.2046;
    c.q_params.sigma_y_J = 0.1231;
    return c;
}

RunConfig parse_run_config(std::istream& is, const std::string& origin) {
    RunConfig config = default_run_config();
    std::string line;
    std::string section;
    std::size_t row = 0;
    while (std::getline(is, line)) {
        ++row;
        std::string s = line;
        if (const auto pos = s.find('#'); pos != std::string::npos) s.erase(pos);
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.pop_back();
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']')
                throw std::runtime_error(origin + ": line " + std::to_string(row) + ": bad section header");
            section = s.substr(1, s.size() - 2);
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(origin + ": line " + std::to_string(row) + ": expected key=value");
        std::string key = s.substr(0, eq);
        std::string value = s.substr(eq + 1);
        while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
        while (!value.empty() && (value.front() == ' ' || value.front() == '\t')) value.erase(value.begin());
        const std::string full = section.empty() ? key : section + "." + key;
        const auto it = bindings().find(full);
        if (it == bindings().end())
            throw std::runtime_error(origin + ": line " + std::to_string(row) + ": unknown key '" + full + "'");
        try {
            it->second.set(config, value);
        } catch (const std::exception& e) {
            throw std::runtime_error(origin + ": line " + std::to_string(row) + ": " + e.what());
        }
    }
    return config;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config file '" + path + "'");
    return parse_run_config(is, path);
}

std::string serialize_run_config(const RunConfig& config) {
    std::string out;
    std::string section;
    for (const auto& [key, binding] : bindings()) {
        const auto dot = key.find('.');
        const std::string sec = key.substr(0, dot);
        if (sec != section) {
            section = sec;
            out += "[" + section + "]\n";
        }
        out += key.substr(dot + 1) + " = " + binding.get(config) + "\n";
    }
    return out;
}

std::string config_hash(const RunConfig& config) {
    const std::string text = serialize_run_config(config);
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace vvjump
