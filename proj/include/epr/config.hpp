#pragma once

#include <cstdint>
#include <string>

#include "epr/engine.hpp"

namespace epr {

// "0.3927" or "22.5deg" (case-sensitive suffix) -> radians.
double parse_angle(const std::string& text);

double parse_double(const std::string& text);
std::uint64_t parse_u64(const std::string& text);

// Applies one "key=value" override to cfg. Keys: seed, pairs, steps,
// alpha_start, alpha_end, beta, delta, threshold, eta, decoherence.
// Angle-valued keys accept the deg suffix. Unknown key or bad value throws
// ConfigError.
void apply_override(RunConfig& cfg, const std::string& key, const std::string& value);

// Reads a key=value file ('#' starts a comment, blank lines ignored) and
// applies each line as an override. Errors carry the offending line number.
void load_config_file(RunConfig& cfg, const std::string& path);

// One-line canonical rendering: "seed=42 pairs=1000 ..." in fixed key order.
std::string describe(const RunConfig& cfg);

}  // namespace epr
