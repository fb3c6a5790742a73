#ifndef LSCAT_CONFIG_HPP
#define LSCAT_CONFIG_HPP

#include <optional>
#include <string>
#include <vector>

#include "lscat/forward.hpp"
#include "lscat/verify.hpp"

namespace lscat {

/// Parsed JSON run configuration. Only `medium` is mandatory; each subcommand
/// checks for the sections it needs.
struct RunConfig {
    SceneConfig scene;
    std::vector<Point> sources;
    std::optional<ReceiverLine> receivers;
    std::optional<BlowupConfig> experiment;
    VerifyOptions verify;
    /// solver.threads; 0 leaves the choice to the environment
    int threads = 0;
};

/// Strict parse: unknown keys, wrong types and inadmissible geometry throw
/// ConfigError (GeometryError for geometry).
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);

/// Shortest decimal string that reads back to the same double.
std::string format_double(double v);

}  // namespace lscat

#endif  // LSCAT_CONFIG_HPP
