#pragma once

#include <string>

#include "farmsched/engine.hpp"
#include "farmsched/sweep.hpp"

namespace farmsched {

/// Everything one invocation needs: the engine setup plus the sweep grid.
struct RunConfig {
    EngineConfig engine;
    SweepGrid sweep = SweepGrid::defaults();

    bool operator==(const RunConfig&) const = default;
};

/// Parses the sectioned key-value config format. Every key is optional;
/// the empty document yields the full default config. Throws ConfigError
/// with a line number for syntax errors, the nearest valid key for unknown
/// keys, and the [section].key path for constraint violations.
RunConfig parse_config(const std::string& text);

/// parse_config over the contents of `path`.
RunConfig load_config_file(const std::string& path);

/// Renders a config document that parses back to exactly `cfg`. Reals are
/// written with shortest round-trip formatting.
std::string dump_config(const RunConfig& cfg);

} // namespace farmsched
