#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "basket/grid.hpp"
#include "basket/model.hpp"
#include "basket/solver.hpp"
#include "basket/stencil.hpp"

namespace basket {

struct ConvergenceRow {
    std::size_t N = 0;
    double h = 0.0;
    double dtau = 0.0;
    double linf = 0.0;
    double rel_l2 = 0.0;
    double seconds = 0.0;
};

struct ConvergenceReport {
    Scheme scheme = Scheme::Hoc;
    double rho = 0.0;
    std::vector<ConvergenceRow> rows;  ///< sorted by N ascending
    double linf_order = 0.0;           ///< least-squares slope magnitude of log(error) vs log(N)
    double rel_l2_order = 0.0;
};

/// Maximum absolute difference over interior nodes. Throws ConfigError on grid mismatch.
[[nodiscard]] double l_inf_error(const GridField& reference, const GridField& u);

/// ||reference - u||_2 / ||reference||_2 over interior nodes.
/// Throws ConfigError on grid mismatch and NumericalError for a zero reference.
[[nodiscard]] double rel_l2_error(const GridField& reference, const GridField& u);

/// Magnitude of the least-squares slope of log(error) against log(N).
[[nodiscard]] double fit_order(std::span<const double> N, std::span<const double> error);

struct StudyOptions {
    std::vector<std::size_t> Ns{16, 32, 64, 128};
    std::size_t reference_N = 512;
    /// When false the seconds column is written as zero so reports are reproducible.
    bool record_timing = false;
};

/// Self-convergence study for the basket put: every grid in opts.Ns is compared, by
/// injection, with the same scheme on the reference grid.
[[nodiscard]] ConvergenceReport convergence_study(const MarketParams& p, const SolveConfig& cfg,
                                                  const Bounds& bounds, const StudyOptions& opts);

/// As convergence_study but against an already computed reference field.
[[nodiscard]] ConvergenceReport convergence_against(const GridField& reference,
                                                    const MarketParams& p, const SolveConfig& cfg,
                                                    const StudyOptions& opts);

/// Study on the exponential manufactured solution with exact Dirichlet data and exact
/// initial values (no smoothing); errors are taken against the exact solution at tau = T.
[[nodiscard]] ConvergenceReport manufactured_study(const MarketParams& p, const SolveConfig& cfg,
                                                   const Bounds& bounds, const StudyOptions& opts,
                                                   double k1, double k2);

/// Columns scheme,rho,N,h,dtau,linf,rel_l2,seconds with 17 significant digits.
void write_report_csv(std::ostream& os, std::span<const ConvergenceReport> reports);

/// Log-log plot of both error norms against N, one series per report, with the fitted
/// orders in the legend. Output depends only on the reports.
void write_report_svg(std::ostream& os, std::span<const ConvergenceReport> reports);

/// Writes the CSV and SVG files; throws std::runtime_error on I/O failure.
void emit_report(std::span<const ConvergenceReport> reports, const std::filesystem::path& csv,
                 const std::filesystem::path& svg);

}  // namespace basket
