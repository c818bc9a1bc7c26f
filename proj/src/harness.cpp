#include "basket/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>

#include "basket/errors.hpp"

namespace basket {

namespace {

void require_same_grid(const GridField& a, const GridField& b) {
    if (!(a.grid() == b.grid())) throw ConfigError("error norms: fields live on different grids");
}

template <class F>
void for_interior(const Grid2& g, F&& f) {
    for (std::size_t i1 = 1; i1 < g.n1(); ++i1)
        for (std::size_t i2 = 1; i2 < g.n2(); ++i2) f(i1, i2);
}

}  // namespace

double l_inf_error(const GridField& reference, const GridField& u) {
    require_same_grid(reference, u);
    double m = 0.0;
    for_interior(u.grid(), [&](std::size_t i1, std::size_t i2) {
        m = std::max(m, std::abs(reference.at(i1, i2) - u.at(i1, i2)));
    });
    return m;
}

double rel_l2_error(const GridField& reference, const GridField& u) {
    require_same_grid(reference, u);
    double num = 0.0, den = 0.0;
    for_interior(u.grid(), [&](std::size_t i1, std::size_t i2) {
        const double d = reference.at(i1, i2) - u.at(i1, i2);
        num += d * d;
        den += reference.at(i1, i2) * reference.at(i1, i2);
    });
    if (den == 0.0) throw NumericalError("rel_l2_error: reference has zero norm");
    return std::sqrt(num / den);
}

double fit_order(std::span<const double> N, std::span<const double> error) {
    if (N.size() != error.size() || N.size() < 2) {
        throw ConfigError("fit_order: need at least two (N, error) pairs");
    }
    const double n = static_cast<double>(N.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < N.size(); ++i) {
        if (!(N[i] > 0.0) || !(error[i] > 0.0)) {
            throw NumericalError("fit_order: N and errors must be positive");
        }
        sx += std::log(N[i]);
        sy += std::log(error[i]);
    }
    const double mx = sx / n, my = sy / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < N.size(); ++i) {
        const double dx = std::log(N[i]) - mx;
        sxy += dx * (std::log(error[i]) - my);
        sxx += dx * dx;
    }
    return -sxy / sxx;
}

namespace {

void fit_report(ConvergenceReport& rep) {
    std::sort(rep.rows.begin(), rep.rows.end(),
              [](const ConvergenceRow& a, const ConvergenceRow& b) { return a.N < b.N; });
    std::vector<double> n, linf, l2;
    for (const auto& row : rep.rows) {
        n.push_back(static_cast<double>(row.N));
        linf.push_back(row.linf);
        l2.push_back(row.rel_l2);
    }
    if (rep.rows.size() >= 2) {
        rep.linf_order = fit_order(n, linf);
        rep.rel_l2_order = fit_order(n, l2);
    }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Grid2 coarse_grid(const Grid2& reference, std::size_t N) {
    const Grid2& g = reference;
    if (N == 0 || g.n1() % N != 0) {
        throw ConfigError("study: N = " + std::to_string(N) + " does not divide the reference grid");
    }
    const std::size_t m = g.n1() / N;
    if (g.n2() % m != 0) throw ConfigError("study: grids do not nest in x2");
    return Grid2(g.bounds(), N, g.n2() / m);
}

}  // namespace

ConvergenceReport convergence_against(const GridField& reference, const MarketParams& p,
                                      const SolveConfig& cfg, const StudyOptions& opts) {
    ConvergenceReport rep;
    rep.scheme = cfg.scheme;
    rep.rho = p.rho12;
    const std::size_t largest = *std::max_element(opts.Ns.begin(), opts.Ns.end());
    if (reference.grid().n1() < 4 * largest) {
        throw ConfigError("study: reference_N must be at least 4x the largest N");
    }
    for (std::size_t N : opts.Ns) {
        const Grid2 g = coarse_grid(reference.grid(), N);
        const auto t0 = std::chrono::steady_clock::now();
        const GridField u = run(p, g, cfg);
        const double secs = seconds_since(t0);
        const GridField ref = restrict_to(reference, g);
        const std::size_t steps = time_steps(p.T, cfg.mesh_ratio, g.h());
        rep.rows.push_back({N, g.h(), p.T / static_cast<double>(steps), l_inf_error(ref, u),
                            rel_l2_error(ref, u), opts.record_timing ? secs : 0.0});
    }
    fit_report(rep);
    return rep;
}

ConvergenceReport convergence_study(const MarketParams& p, const SolveConfig& cfg,
                                    const Bounds& bounds, const StudyOptions& opts) {
    if (opts.Ns.empty()) throw ConfigError("study: empty N list");
    const std::size_t largest = *std::max_element(opts.Ns.begin(), opts.Ns.end());
    if (opts.reference_N < 4 * largest) {
        throw ConfigError("study: reference_N must be at least 4x the largest N");
    }
    const double w1 = bounds.x1_max - bounds.x1_min, w2 = bounds.x2_max - bounds.x2_min;
    const auto ref_n2 = static_cast<std::size_t>(std::llround(w2 / w1 * opts.reference_N));
    const Grid2 ref_grid(bounds, opts.reference_N, ref_n2);
    const GridField reference = run(p, ref_grid, cfg);
    return convergence_against(reference, p, cfg, opts);
}

ConvergenceReport manufactured_study(const MarketParams& p, const SolveConfig& cfg,
                                     const Bounds& bounds, const StudyOptions& opts, double k1,
                                     double k2) {
    p.validate();
    cfg.validate();
    const ExponentialSolution exact = ExponentialSolution::make(k1, k2, p);
    ConvergenceReport rep;
    rep.scheme = cfg.scheme;
    rep.rho = p.rho12;
    const double w1 = bounds.x1_max - bounds.x1_min, w2 = bounds.x2_max - bounds.x2_min;
    for (std::size_t N : opts.Ns) {
        const Grid2 g(bounds, N, static_cast<std::size_t>(std::llround(w2 / w1 * N)));
        const auto t0 = std::chrono::steady_clock::now();
        const std::size_t n_steps = time_steps(p.T, cfg.mesh_ratio, g.h());
        const double dtau = p.T / static_cast<double>(n_steps);
        const DiscreteSystem sys = assemble(g, make_stencil(cfg.scheme, p, g.h()), dtau, n_steps);
        GridField initial =
            GridField::sample(g, [&](double x1, double x2) { return exact(x1, x2, 0.0); });
        const ExactDirichlet boundary(exact);
        const GridField u = march(sys, std::move(initial), boundary, cfg.linear);
        const double secs = seconds_since(t0);
        const GridField truth =
            GridField::sample(g, [&](double x1, double x2) { return exact(x1, x2, p.T); });
        rep.rows.push_back({N, g.h(), dtau, l_inf_error(truth, u), rel_l2_error(truth, u),
                            opts.record_timing ? secs : 0.0});
    }
    fit_report(rep);
    return rep;
}

void write_report_csv(std::ostream& os, std::span<const ConvergenceReport> reports) {
    os << "scheme,rho,N,h,dtau,linf,rel_l2,seconds\n";
    char buf[256];
    for (const auto& rep : reports) {
        const std::string scheme(to_string(rep.scheme));
        for (const auto& row : rep.rows) {
            std::snprintf(buf, sizeof buf, "%s,%.17g,%zu,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                          scheme.c_str(), rep.rho, row.N, row.h, row.dtau, row.linf, row.rel_l2,
                          row.seconds);
            os << buf;
        }
    }
}

namespace {

constexpr double kPanelW = 420.0, kPanelH = 320.0;
constexpr double kMarginL = 70.0, kMarginT = 40.0, kMarginB = 50.0, kGap = 60.0;
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                   "#8c564b", "#e377c2", "#7f7f7f"};

struct LogRange {
    double lo, hi;  // decades
};

LogRange decade_range(double vmin, double vmax) {
    double lo = std::floor(std::log10(vmin));
    double hi = std::ceil(std::log10(vmax));
    if (hi <= lo) hi = lo + 1.0;
    return {lo, hi};
}

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

void panel(std::ostream& os, std::span<const ConvergenceReport> reports, bool linf, double x0,
           const char* title) {
    double nmin = 1e300, nmax = 0.0, emin = 1e300, emax = 0.0;
    for (const auto& rep : reports) {
        for (const auto& row : rep.rows) {
            const double e = linf ? row.linf : row.rel_l2;
            nmin = std::min(nmin, static_cast<double>(row.N));
            nmax = std::max(nmax, static_cast<double>(row.N));
            if (e > 0.0) {
                emin = std::min(emin, e);
                emax = std::max(emax, e);
            }
        }
    }
    if (emax <= 0.0) emin = 1e-16, emax = 1.0;
    const LogRange xr = decade_range(nmin, nmax), yr = decade_range(emin, emax);
    auto px = [&](double n) { return x0 + (std::log10(n) - xr.lo) / (xr.hi - xr.lo) * kPanelW; };
    auto py = [&](double e) {
        return kMarginT + (yr.hi - std::log10(e)) / (yr.hi - yr.lo) * kPanelH;
    };

    os << "<rect x=\"" << fmt("%.2f", x0) << "\" y=\"" << fmt("%.2f", kMarginT) << "\" width=\""
       << fmt("%.2f", kPanelW) << "\" height=\"" << fmt("%.2f", kPanelH)
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    os << "<text x=\"" << fmt("%.2f", x0 + kPanelW / 2) << "\" y=\"24\" text-anchor=\"middle\">"
       << title << "</text>\n";
    for (double d = xr.lo; d <= xr.hi + 1e-9; d += 1.0) {
        const double x = px(std::pow(10.0, d));
        os << "<line x1=\"" << fmt("%.2f", x) << "\" y1=\"" << fmt("%.2f", kMarginT) << "\" x2=\""
           << fmt("%.2f", x) << "\" y2=\"" << fmt("%.2f", kMarginT + kPanelH)
           << "\" stroke=\"#ddd\"/>\n";
        os << "<text x=\"" << fmt("%.2f", x) << "\" y=\"" << fmt("%.2f", kMarginT + kPanelH + 18)
           << "\" text-anchor=\"middle\" font-size=\"11\">1e" << fmt("%.0f", d) << "</text>\n";
    }
    for (double d = yr.lo; d <= yr.hi + 1e-9; d += 1.0) {
        const double y = py(std::pow(10.0, d));
        os << "<line x1=\"" << fmt("%.2f", x0) << "\" y1=\"" << fmt("%.2f", y) << "\" x2=\""
           << fmt("%.2f", x0 + kPanelW) << "\" y2=\"" << fmt("%.2f", y) << "\" stroke=\"#ddd\"/>\n";
        os << "<text x=\"" << fmt("%.2f", x0 - 6) << "\" y=\"" << fmt("%.2f", y + 4)
           << "\" text-anchor=\"end\" font-size=\"11\">1e" << fmt("%.0f", d) << "</text>\n";
    }
    os << "<text x=\"" << fmt("%.2f", x0 + kPanelW / 2) << "\" y=\""
       << fmt("%.2f", kMarginT + kPanelH + 38)
       << "\" text-anchor=\"middle\" font-size=\"12\">N (points per direction)</text>\n";

    for (std::size_t s = 0; s < reports.size(); ++s) {
        const auto& rep = reports[s];
        const char* color = kColors[s % std::size(kColors)];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
        for (const auto& row : rep.rows) {
            const double e = linf ? row.linf : row.rel_l2;
            if (e <= 0.0) continue;
            os << fmt("%.2f", px(static_cast<double>(row.N))) << ',' << fmt("%.2f", py(e)) << ' ';
        }
        os << "\"/>\n";
        for (const auto& row : rep.rows) {
            const double e = linf ? row.linf : row.rel_l2;
            if (e <= 0.0) continue;
            os << "<circle cx=\"" << fmt("%.2f", px(static_cast<double>(row.N))) << "\" cy=\""
               << fmt("%.2f", py(e)) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        }
        const double ly = kMarginT + kPanelH - 12.0 - 16.0 * static_cast<double>(reports.size() - 1 - s);
        os << "<text x=\"" << fmt("%.2f", x0 + 8) << "\" y=\"" << fmt("%.2f", ly)
           << "\" font-size=\"11\" fill=\"" << color << "\">" << to_string(rep.scheme)
           << " rho=" << fmt("%.3g", rep.rho)
           << " slope=" << fmt("%.2f", linf ? rep.linf_order : rep.rel_l2_order) << "</text>\n";
    }
}

}  // namespace

void write_report_svg(std::ostream& os, std::span<const ConvergenceReport> reports) {
    const double width = kMarginL + 2 * kPanelW + kGap + 20.0;
    const double height = kMarginT + kPanelH + kMarginB + 10.0;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt("%.0f", width)
       << "\" height=\"" << fmt("%.0f", height) << "\" font-family=\"sans-serif\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    panel(os, reports, true, kMarginL, "l-infinity error");
    panel(os, reports, false, kMarginL + kPanelW + kGap, "relative l2 error");
    os << "</svg>\n";
}

void emit_report(std::span<const ConvergenceReport> reports, const std::filesystem::path& csv,
                 const std::filesystem::path& svg) {
    if (reports.empty()) throw ConfigError("emit_report: empty report");
    std::ofstream c(csv, std::ios::binary);
    if (!c) throw std::runtime_error("cannot open " + csv.string());
    write_report_csv(c, reports);
    std::ofstream s(svg, std::ios::binary);
    if (!s) throw std::runtime_error("cannot open " + svg.string());
    write_report_svg(s, reports);
    if (!c || !s) throw std::runtime_error("failed writing convergence report");
}

}  // namespace basket
