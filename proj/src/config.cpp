#include "epr/config.hpp"

#include <charconv>
#include <fstream>
#include <string_view>
#include <system_error>

#include "epr/errors.hpp"
#include "epr/report.hpp"

namespace epr {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

double parse_double_text(std::string_view text, const char* what) {
    double value = 0.0;
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), last, value);
    if (ec != std::errc{} || ptr != last)
        throw ConfigError(std::string("cannot parse ") + what + " '" + std::string(text) + "'");
    return value;
}

}  // namespace

double parse_angle(const std::string& text) {
    const std::string_view sv = trim(text);
    if (sv.size() > 3 && sv.substr(sv.size() - 3) == "deg") {
        const double degrees = parse_double_text(trim(sv.substr(0, sv.size() - 3)), "angle");
        return degrees * kPi / 180.0;
    }
    return parse_double_text(sv, "angle");
}

double parse_double(const std::string& text) {
    return parse_double_text(trim(text), "number");
}

std::uint64_t parse_u64(const std::string& text) {
    const std::string_view sv = trim(text);
    std::uint64_t value = 0;
    const char* last = sv.data() + sv.size();
    const auto [ptr, ec] = std::from_chars(sv.data(), last, value);
    if (ec != std::errc{} || ptr != last)
        throw ConfigError("cannot parse integer '" + std::string(sv) + "'");
    return value;
}

void apply_override(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "seed") {
        cfg.seed = parse_u64(value);
    } else if (key == "pairs") {
        cfg.pairs_per_setting = parse_u64(value);
    } else if (key == "steps") {
        const std::uint64_t v = parse_u64(value);
        if (v > 0xFFFFFFFFull) throw ConfigError("steps is out of range");
        cfg.steps = static_cast<std::uint32_t>(v);
    } else if (key == "alpha_start") {
        cfg.alpha_start = parse_angle(value);
    } else if (key == "alpha_end") {
        cfg.alpha_end = parse_angle(value);
    } else if (key == "beta") {
        cfg.beta = parse_angle(value);
    } else if (key == "delta") {
        cfg.delta = parse_angle(value);
    } else if (key == "threshold") {
        cfg.threshold = parse_double(value);
    } else if (key == "eta") {
        cfg.efficiency = parse_double(value);
    } else if (key == "decoherence") {
        cfg.decoherence = parse_double(value);
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

void load_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view sv = line;
        if (const auto hash = sv.find('#'); hash != std::string_view::npos)
            sv = sv.substr(0, hash);
        sv = trim(sv);
        if (sv.empty()) continue;
        const auto eq = sv.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
        const std::string key(trim(sv.substr(0, eq)));
        const std::string value(trim(sv.substr(eq + 1)));
        if (key.empty())
            throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
        try {
            apply_override(cfg, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
}

std::string describe(const RunConfig& cfg) {
    std::string s;
    s += "seed=" + std::to_string(cfg.seed);
    s += " pairs=" + std::to_string(cfg.pairs_per_setting);
    s += " steps=" + std::to_string(cfg.steps);
    s += " alpha_start=" + format_double(cfg.alpha_start);
    s += " alpha_end=" + format_double(cfg.alpha_end);
    s += " beta=" + format_double(cfg.beta);
    s += " delta=" + format_double(cfg.delta);
    s += " threshold=" + format_double(cfg.threshold);
    s += " eta=" + format_double(cfg.efficiency);
    s += " decoherence=" + format_double(cfg.decoherence);
    return s;
}

}  // namespace epr
