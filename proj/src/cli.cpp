#include "basket/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "basket/errors.hpp"
#include "basket/harness.hpp"
#include "basket/smoothing.hpp"

namespace basket {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view why) {
    throw ConfigError("invalid value '" + std::string(value) + "' for key '" + std::string(key) +
                      "': " + std::string(why));
}

double to_double(std::string_view key, std::string_view v) {
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(x)) {
        bad_value(key, v, "expected a finite number");
    }
    return x;
}

std::uint64_t to_unsigned(std::string_view key, std::string_view v) {
    std::uint64_t x = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
        bad_value(key, v, "expected a non-negative integer");
    }
    return x;
}

bool to_bool(std::string_view key, std::string_view v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    bad_value(key, v, "expected true or false");
}

template <class T, class F>
std::vector<T> to_list(std::string_view key, std::string_view v, F&& item) {
    std::vector<T> out;
    while (true) {
        const auto comma = v.find(',');
        const auto part = trim(v.substr(0, comma));
        if (part.empty()) bad_value(key, v, "empty list item");
        out.push_back(item(key, part));
        if (comma == std::string_view::npos) break;
        v.remove_prefix(comma + 1);
    }
    return out;
}

using Setter = std::function<void(RunConfig&, std::string_view key, std::string_view value)>;

const std::vector<std::pair<std::string_view, Setter>>& setters() {
    auto dbl = [](double RunConfig::*field) -> Setter {
        return [field](RunConfig& c, std::string_view k, std::string_view v) {
            c.*field = to_double(k, v);
        };
    };
    auto mkt = [](double MarketParams::*field) -> Setter {
        return [field](RunConfig& c, std::string_view k, std::string_view v) {
            c.market.*field = to_double(k, v);
        };
    };
    auto bnd = [](double Bounds::*field) -> Setter {
        return [field](RunConfig& c, std::string_view k, std::string_view v) {
            c.bounds.*field = to_double(k, v);
        };
    };
    auto str = [](std::string RunConfig::*field) -> Setter {
        return [field](RunConfig& c, std::string_view, std::string_view v) {
            c.*field = std::string(v);
        };
    };
    static const std::vector<std::pair<std::string_view, Setter>> table = {
        {"sigma1", mkt(&MarketParams::sigma1)},
        {"sigma2", mkt(&MarketParams::sigma2)},
        {"r", mkt(&MarketParams::r)},
        {"annual_factor",
         [](RunConfig& c, std::string_view k, std::string_view v) {
             const double f = to_double(k, v);
             if (!(f > 0.0)) bad_value(k, v, "must be > 0");
             c.market.r = std::log(f);
         }},
        {"rho12", mkt(&MarketParams::rho12)},
        {"omega1", mkt(&MarketParams::omega1)},
        {"omega2", mkt(&MarketParams::omega2)},
        {"K", mkt(&MarketParams::K)},
        {"T", mkt(&MarketParams::T)},
        {"gamma", mkt(&MarketParams::gamma)},
        {"x1_min", bnd(&Bounds::x1_min)},
        {"x1_max", bnd(&Bounds::x1_max)},
        {"x2_min", bnd(&Bounds::x2_min)},
        {"x2_max", bnd(&Bounds::x2_max)},
        {"N", [](RunConfig& c, std::string_view k,
                 std::string_view v) { c.N = to_unsigned(k, v); }},
        {"mesh_ratio", [](RunConfig& c, std::string_view k,
                          std::string_view v) { c.solve.mesh_ratio = to_double(k, v); }},
        {"scheme",
         [](RunConfig& c, std::string_view k, std::string_view v) {
             try {
                 c.solve.scheme = parse_scheme(v);
             } catch (const ConfigError&) {
                 bad_value(k, v, "expected hoc or second_order");
             }
         }},
        {"smoothing", [](RunConfig& c, std::string_view k,
                         std::string_view v) { c.solve.smoothing = to_bool(k, v); }},
        {"smoothing_nodes",
         [](RunConfig& c, std::string_view k, std::string_view v) {
             c.solve.smoothing_options.gauss_nodes = to_unsigned(k, v);
         }},
        {"corners",
         [](RunConfig& c, std::string_view k, std::string_view v) {
             if (v == "closed_form") {
                 c.solve.corners = CornerRule::ClosedForm;
             } else if (v == "frozen") {
                 c.solve.corners = CornerRule::Frozen;
             } else {
                 bad_value(k, v, "expected closed_form or frozen");
             }
         }},
        {"tolerance", [](RunConfig& c, std::string_view k,
                         std::string_view v) { c.solve.linear.tolerance = to_double(k, v); }},
        {"max_iterations",
         [](RunConfig& c, std::string_view k, std::string_view v) {
             c.solve.linear.max_iterations = to_unsigned(k, v);
         }},
        {"study_N",
         [](RunConfig& c, std::string_view k, std::string_view v) {
             c.study_N = to_list<std::size_t>(k, v, [](std::string_view kk, std::string_view s) {
                 return static_cast<std::size_t>(to_unsigned(kk, s));
             });
         }},
        {"reference_N", [](RunConfig& c, std::string_view k,
                           std::string_view v) { c.reference_N = to_unsigned(k, v); }},
        {"study_rho",
         [](RunConfig& c, std::string_view k, std::string_view v) {
             c.study_rho = to_list<double>(k, v, to_double);
         }},
        {"study_schemes",
         [](RunConfig& c, std::string_view k, std::string_view v) {
             c.study_schemes = to_list<Scheme>(k, v, [](std::string_view kk, std::string_view s) {
                 try {
                     return parse_scheme(s);
                 } catch (const ConfigError&) {
                     bad_value(kk, s, "expected hoc or second_order");
                 }
             });
         }},
        {"record_timing", [](RunConfig& c, std::string_view k,
                             std::string_view v) { c.record_timing = to_bool(k, v); }},
        {"quad_nodes",
         [](RunConfig& c, std::string_view k, std::string_view v) {
             c.oracle.quadrature_nodes = to_unsigned(k, v);
             c.oracle.max_quadrature_nodes =
                 std::max(c.oracle.max_quadrature_nodes, c.oracle.quadrature_nodes);
         }},
        {"mc_paths", [](RunConfig& c, std::string_view k,
                        std::string_view v) { c.oracle.mc_paths = to_unsigned(k, v); }},
        {"mc_seed", [](RunConfig& c, std::string_view k,
                       std::string_view v) { c.oracle.mc_seed = to_unsigned(k, v); }},
        {"confidence", [](RunConfig& c, std::string_view k,
                          std::string_view v) { c.oracle.confidence = to_double(k, v); }},
        {"s1", dbl(&RunConfig::s1)},
        {"s2", dbl(&RunConfig::s2)},
        {"field_csv", str(&RunConfig::field_csv)},
        {"smooth_csv", str(&RunConfig::smooth_csv)},
        {"report_csv", str(&RunConfig::report_csv)},
        {"report_svg", str(&RunConfig::report_svg)},
    };
    return table;
}

const Setter* find_setter(std::string_view key) {
    for (const auto& [name, setter] : setters()) {
        if (name == key) return &setter;
    }
    return nullptr;
}

// Prefixes a module's ConfigError with the config key it concerns.
template <class F>
void check(std::string_view key, F&& f) {
    try {
        f();
    } catch (const ConfigError& e) {
        throw ConfigError(std::string(key) + ": " + e.what());
    }
}

}  // namespace

Grid2 RunConfig::grid() const {
    const double w1 = bounds.x1_max - bounds.x1_min, w2 = bounds.x2_max - bounds.x2_min;
    if (!(w1 > 0.0) || !(w2 > 0.0)) {
        throw ConfigError("x1_max/x2_max must exceed x1_min/x2_min");
    }
    const double n2 = w2 / w1 * static_cast<double>(N);
    return Grid2(bounds, N, static_cast<std::size_t>(std::llround(n2)));
}

void RunConfig::validate() const {
    market.validate();
    check("N", [&] { (void)grid(); });
    solve.validate();
    if (solve.smoothing_options.gauss_nodes < 2) {
        throw ConfigError("smoothing_nodes must be >= 2");
    }
    oracle.validate();
    if (!(s1 > 0.0)) throw ConfigError("s1 must be > 0");
    if (!(s2 > 0.0)) throw ConfigError("s2 must be > 0");
    if (study_N.empty()) throw ConfigError("study_N must not be empty");
    if (study_rho.empty()) throw ConfigError("study_rho must not be empty");
    if (study_schemes.empty()) throw ConfigError("study_schemes must not be empty");
    const std::size_t largest = *std::max_element(study_N.begin(), study_N.end());
    if (reference_N < 4 * largest) {
        throw ConfigError("reference_N must be at least 4 times the largest study_N");
    }
    for (std::size_t n : study_N) {
        if (n < 4 || reference_N % n != 0) {
            throw ConfigError("study_N entry " + std::to_string(n) +
                              " must be >= 4 and divide reference_N");
        }
    }
    for (double rho : study_rho) {
        MarketParams q = market;
        q.rho12 = rho;
        check("study_rho", [&] { q.validate(); });
    }
}

const std::vector<std::string_view>& config_keys() {
    static const std::vector<std::string_view> keys = [] {
        std::vector<std::string_view> k;
        for (const auto& [name, setter] : setters()) k.push_back(name);
        return k;
    }();
    return keys;
}

ConfigEntries parse_key_values(std::string_view text) {
    ConfigEntries entries;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
        }
        const auto key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        for (const auto& [k, v] : entries) {
            if (k == key) throw ConfigError("duplicate key '" + std::string(key) + "'");
        }
        entries.emplace_back(std::string(key), std::string(trim(line.substr(eq + 1))));
    }
    return entries;
}

RunConfig parse_config(const ConfigEntries& file, const ConfigEntries& flags) {
    // Flags replace file values key by key; the order of application follows the key table
    // so that derived values (annual_factor -> r) do not depend on input order.
    std::map<std::string, std::string, std::less<>> merged;
    for (const auto* source : {&file, &flags}) {
        for (const auto& [k, v] : *source) {
            if (find_setter(k) == nullptr) throw ConfigError("unknown key '" + k + "'");
            merged[k] = v;
        }
    }
    if (merged.count("r") != 0 && merged.count("annual_factor") != 0) {
        throw ConfigError("annual_factor: cannot be combined with r");
    }
    RunConfig cfg;
    for (const auto& [name, setter] : setters()) {
        const auto it = merged.find(name);
        if (it != merged.end()) setter(cfg, name, it->second);
    }
    const bool has1 = merged.count("omega1") != 0, has2 = merged.count("omega2") != 0;
    if (has1 && !has2) cfg.market.omega2 = 1.0 - cfg.market.omega1;
    if (has2 && !has1) cfg.market.omega1 = 1.0 - cfg.market.omega2;
    if (merged.count("K") != 0) {
        if (merged.count("s1") == 0) cfg.s1 = cfg.market.K;
        if (merged.count("s2") == 0) cfg.s2 = cfg.market.K;
    }
    cfg.validate();
    return cfg;
}

RunConfig parse_config(std::string_view text) { return parse_config(parse_key_values(text)); }

ConfigEntries read_config_file(const std::filesystem::path& path) {
    if (path.empty()) return {};
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_key_values(ss.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

const std::vector<std::string_view>& commands() {
    static const std::vector<std::string_view> c = {"price", "converge", "smooth-check", "oracle",
                                                    "stencil dump"};
    return c;
}

namespace {

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void cmd_price(const RunConfig& cfg, std::ostream& out) {
    const Grid2 g = cfg.grid();
    const GridField u = run(cfg.market, g, cfg.solve);
    if (!cfg.field_csv.empty()) {
        std::ofstream f(cfg.field_csv, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open " + cfg.field_csv);
        write_csv(f, u);
    }
    out << "price=" << num(price_at(u, cfg.market, cfg.s1, cfg.s2)) << '\n';
}

void cmd_converge(const RunConfig& cfg, std::ostream& out) {
    StudyOptions opts;
    opts.Ns = cfg.study_N;
    opts.reference_N = cfg.reference_N;
    opts.record_timing = cfg.record_timing;
    std::vector<ConvergenceReport> reports;
    for (Scheme scheme : cfg.study_schemes) {
        for (double rho : cfg.study_rho) {
            MarketParams p = cfg.market;
            p.rho12 = rho;
            SolveConfig sc = cfg.solve;
            sc.scheme = scheme;
            reports.push_back(convergence_study(p, sc, cfg.bounds, opts));
            const auto& rep = reports.back();
            char buf[160];
            std::snprintf(buf, sizeof buf, "%s rho=%g order_linf=%.4f order_rel_l2=%.4f\n",
                          std::string(to_string(scheme)).c_str(), rho, rep.linf_order,
                          rep.rel_l2_order);
            out << buf << std::flush;
        }
    }
    emit_report(reports, cfg.report_csv, cfg.report_svg);
    out << "wrote " << cfg.report_csv << " and " << cfg.report_svg << '\n';
}

void cmd_smooth_check(const RunConfig& cfg, std::ostream& out) {
    const Grid2 g = cfg.grid();
    const GridField raw = payoff_field(g, cfg.market);
    const GridField smooth = smooth_initial_condition(g, cfg.market, cfg.solve.smoothing_options);
    std::ofstream file;
    std::ostream* os = &out;
    if (!cfg.smooth_csv.empty()) {
        file.open(cfg.smooth_csv, std::ios::binary);
        if (!file) throw std::runtime_error("cannot open " + cfg.smooth_csv);
        os = &file;
    }
    *os << "x1,x2,u0,u0_smoothed,delta\n";
    double max_diff = 0.0;
    char buf[160];
    for (std::size_t i1 = 0; i1 <= g.n1(); ++i1) {
        for (std::size_t i2 = 0; i2 <= g.n2(); ++i2) {
            const double a = raw.at(i1, i2), b = smooth.at(i1, i2);
            max_diff = std::max(max_diff, std::abs(b - a));
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", g.x1(i1), g.x2(i2),
                          a, b, b - a);
            *os << buf;
        }
    }
    if (!cfg.smooth_csv.empty()) {
        const auto band = kink_band(g, cfg.market,
                                    cfg.solve.smoothing_options.band_width);
        out << "band_nodes=" << band.size() << '\n'
            << "max_abs_difference=" << num(max_diff) << '\n';
    }
}

void cmd_oracle(const RunConfig& cfg, std::ostream& out) {
    const double q = quadrature_basket_put(cfg.market, cfg.s1, cfg.s2, cfg.oracle);
    const MonteCarloEstimate mc = mc_basket_put(cfg.market, cfg.s1, cfg.s2, cfg.oracle);
    out << "quadrature=" << num(q) << '\n'
        << "mc=" << num(mc.price) << '\n'
        << "mc_std_error=" << num(mc.std_error) << '\n';
}

void cmd_stencil_dump(const RunConfig& cfg, std::ostream& out) {
    write_stencil(out, make_stencil(cfg.solve.scheme, cfg.market, cfg.grid().h()));
}

}  // namespace

int dispatch(std::string_view command, const RunConfig& cfg, std::ostream& out,
             std::ostream& err) {
    const std::map<std::string_view, void (*)(const RunConfig&, std::ostream&)> table = {
        {"price", cmd_price},
        {"converge", cmd_converge},
        {"smooth-check", cmd_smooth_check},
        {"oracle", cmd_oracle},
        {"stencil dump", cmd_stencil_dump},
    };
    const auto it = table.find(command);
    if (it == table.end()) {
        err << "unknown command '" << command << "'\nusage: basket_hoc <command> [options]\n"
            << "commands:";
        for (auto c : commands()) err << "\n  " << c;
        err << '\n';
        return 2;
    }
    try {
        cfg.validate();
        it->second(cfg, out);
    } catch (const std::exception& e) {
        err << command << ": " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace basket
