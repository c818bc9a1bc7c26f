#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "basket/grid.hpp"
#include "basket/model.hpp"
#include "basket/oracle.hpp"
#include "basket/solver.hpp"
#include "basket/stencil.hpp"

namespace basket {

/// Everything a command needs. Field names double as the config-file keys.
struct RunConfig {
    MarketParams market;
    Bounds bounds;
    std::size_t N = 128;  ///< steps along x1; x2 uses the same spacing
    SolveConfig solve;
    std::vector<std::size_t> study_N{16, 32, 64, 128};
    std::size_t reference_N = 512;
    std::vector<double> study_rho{-0.8, 0.0, 0.8};
    std::vector<Scheme> study_schemes{Scheme::Hoc};
    bool record_timing = false;
    OracleConfig oracle;
    double s1 = 10.0;
    double s2 = 10.0;
    std::string field_csv;
    std::string smooth_csv;
    std::string report_csv = "convergence.csv";
    std::string report_svg = "convergence.svg";

    [[nodiscard]] Grid2 grid() const;
    /// Runs every module-level validation; throws ConfigError naming the key at fault.
    void validate() const;
};

using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

/// Recognised keys in documentation order.
[[nodiscard]] const std::vector<std::string_view>& config_keys();

/// Splits key=value text into entries. Blank lines and '#' comments are skipped.
[[nodiscard]] ConfigEntries parse_key_values(std::string_view text);

/// Builds and validates a config from file entries overridden by flag entries.
/// Unknown keys and malformed values throw ConfigError naming the key.
[[nodiscard]] RunConfig parse_config(const ConfigEntries& file, const ConfigEntries& flags = {});
[[nodiscard]] RunConfig parse_config(std::string_view text);

/// Reads a key=value file; an empty path means no file.
[[nodiscard]] ConfigEntries read_config_file(const std::filesystem::path& path);

/// Commands: price, converge, smooth-check, oracle, "stencil dump".
[[nodiscard]] const std::vector<std::string_view>& commands();

/// Runs one command. Data goes to `out` or to the files named in cfg, diagnostics to `err`.
/// Returns 0 on success, 1 on a failed command and 2 on an unknown command.
int dispatch(std::string_view command, const RunConfig& cfg, std::ostream& out,
             std::ostream& err);

}  // namespace basket
