#include "kapitza/config.hpp"

#include <charconv>
#include <fstream>

#include "kapitza/errors.hpp"

namespace kapitza {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

bool plain_number(std::string_view text, double& v) {
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    return res.ec == std::errc() && res.ptr == text.data() + text.size();
}

}  // namespace

LaserConfig RunConfig::laser() const {
    LaserConfig cfg{e_hat, lambda, eta, setup, 0.0, total_t};
    if (!(lambda > 0.0)) throw ParameterError("wavelength must be positive");
    if (!(delta_t_cycles >= 0.0)) throw ParameterError("delta_t_cycles must be non-negative");
    cfg.delta_t = delta_t_cycles * laser_period(cfg);
    cfg.validate();
    return cfg;
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys{
        "e_hat_au",      "lambda_au",       "eta_rad",       "setup",
        "delta_t_cycles", "total_time_au",  "n_grid",        "steps_per_cycle",
        "sample_stride", "initial_mode",    "initial_spin",  "solver",
        "protocol"};
    return keys;
}

double parse_number(std::string_view text) {
    text = trim(text);
    double v = 0.0;
    if (plain_number(text, v)) return v;

    // [sign][factor][*]pi[/divisor]
    const auto at = text.find("pi");
    if (at != std::string_view::npos) {
        std::string_view head = trim(text.substr(0, at));
        std::string_view tail = trim(text.substr(at + 2));
        double factor = 1.0;
        if (!head.empty() && head.back() == '*') head = trim(head.substr(0, head.size() - 1));
        if (head == "-")
            factor = -1.0;
        else if (!head.empty() && head != "+" && !plain_number(head, factor))
            throw ParameterError("cannot parse number '" + std::string(text) + "'");
        double divisor = 1.0;
        if (!tail.empty()) {
            if (tail.front() != '/' || !plain_number(trim(tail.substr(1)), divisor) || divisor == 0.0)
                throw ParameterError("cannot parse number '" + std::string(text) + "'");
        }
        return factor * pi / divisor;
    }
    throw ParameterError("cannot parse number '" + std::string(text) + "'");
}

int parse_integer(std::string_view text) {
    text = trim(text);
    int v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw ParameterError("cannot parse integer '" + std::string(text) + "'");
    return v;
}

void set_value(RunConfig& cfg, std::string_view key, std::string_view value) {
    key = trim(key);
    value = trim(value);
    if (key == "e_hat_au") cfg.e_hat = parse_number(value);
    else if (key == "lambda_au") cfg.lambda = parse_number(value);
    else if (key == "eta_rad") cfg.eta = parse_number(value);
    else if (key == "setup") cfg.setup = parse_setup(value);
    else if (key == "delta_t_cycles") cfg.delta_t_cycles = parse_number(value);
    else if (key == "total_time_au") cfg.total_t = parse_number(value);
    else if (key == "n_grid") {
        cfg.numerics.n_grid = parse_integer(value);
        cfg.numerics.validate();
    } else if (key == "steps_per_cycle") {
        cfg.numerics.steps_per_cycle = parse_integer(value);
        cfg.numerics.validate();
    } else if (key == "sample_stride") {
        cfg.numerics.sample_stride = parse_integer(value);
        cfg.numerics.validate();
    }
    else if (key == "initial_mode") cfg.initial.n = parse_integer(value);
    else if (key == "initial_spin") cfg.initial.gamma = dirac::parse_label(value);
    else if (key == "solver") cfg.solver = parse_solver(value);
    else if (key == "protocol") cfg.numerics.protocol = dirac::parse_protocol(value);
    else throw ParameterError("unknown configuration key '" + std::string(key) + "'");
}

RunConfig load_config(const std::string& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw IoError(path, "cannot open configuration");
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        std::string_view body = line;
        if (const auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
        body = trim(body);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string_view::npos)
            throw ParameterError(path + ":" + std::to_string(number) + ": expected key = value");
        try {
            set_value(base, body.substr(0, eq), body.substr(eq + 1));
        } catch (const ParameterError& e) {
            throw ParameterError(path + ":" + std::to_string(number) + ": " + e.what());
        }
    }
    if (in.bad()) throw IoError(path, "read failed");
    return base;
}

}  // namespace kapitza
