#include "basket/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "basket/errors.hpp"

namespace basket {

double cubic_bspline(double x) noexcept {
    const double a = std::abs(x);
    if (a < 1.0) return 2.0 / 3.0 - a * a + 0.5 * a * a * a;
    if (a < 2.0) {
        const double t = 2.0 - a;
        return t * t * t / 6.0;
    }
    return 0.0;
}

double phi4(double x) noexcept {
    if (std::abs(x) >= kPhi4Support) return 0.0;
    return 4.0 / 3.0 * cubic_bspline(x) - (cubic_bspline(x - 1.0) + cubic_bspline(x + 1.0)) / 6.0;
}

namespace {

// sin(x)/x and sinh(x)/x with series near zero
double sinc(double x) noexcept {
    if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

double sinhc(double x) noexcept {
    if (std::abs(x) < 1e-4) return 1.0 + x * x / 6.0;
    return std::sinh(x) / x;
}

}  // namespace

double phi4_hat(double w) noexcept {
    const double s = sinc(0.5 * w);
    const double sin_half = std::sin(0.5 * w);
    return s * s * s * s * (1.0 + 2.0 / 3.0 * sin_half * sin_half);
}

double phi4_exponential_moment(double z) noexcept {
    const double s = sinhc(0.5 * z);
    return s * s * s * s * (4.0 / 3.0 - std::cosh(z) / 3.0);
}

PiecewiseSmooth2D basket_put_payoff(const MarketParams& p) {
    const double a1 = p.sigma1 / p.gamma, a2 = p.sigma2 / p.gamma;
    const double w1 = p.omega1, w2 = p.omega2;
    PiecewiseSmooth2D f;
    f.value = [a1, a2, w1, w2](double x1, double x2) {
        return std::max(1.0 - w1 * std::exp(a1 * x1) - w2 * std::exp(a2 * x2), 0.0);
    };
    f.kink_x1 = [a1, w1, a2, w2](double x2) -> std::optional<double> {
        const double c = 1.0 - w2 * std::exp(a2 * x2);
        if (!(c > 0.0)) return std::nullopt;
        return std::log(c / w1) / a1;
    };
    f.kink_x2 = [a1, w1, a2, w2](double x1) -> std::optional<double> {
        const double c = 1.0 - w1 * std::exp(a1 * x1);
        if (!(c > 0.0)) return std::nullopt;
        return std::log(c / w2) / a2;
    };
    return f;
}

SmoothingKernel::SmoothingKernel(const SmoothingOptions& opts)
    : opts_(opts), rule_(gauss_legendre(opts.gauss_nodes)) {
    if (opts.gauss_nodes < 2) throw ConfigError("smoothing: gauss_nodes must be >= 2");
    if (opts.verify_tolerance > 0.0) check_rule_ = gauss_legendre(2 * opts.gauss_nodes);
}

namespace {

// Integer knots of phi4 plus any extra breakpoints strictly inside (-3, 3).
std::vector<double> panel_breaks(std::vector<double> extra) {
    std::vector<double> b{-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0};
    for (double e : extra)
        if (e > -kPhi4Support && e < kPhi4Support) b.push_back(e);
    std::sort(b.begin(), b.end());
    std::vector<double> out;
    for (double v : b)
        if (out.empty() || v - out.back() > 1e-13) out.push_back(v);
    return out;
}

}  // namespace

double SmoothingKernel::convolve_with(const QuadratureRule& gl, const PiecewiseSmooth2D& f,
                                      double x1, double x2, double h) const {
    // Offsets are in units of h: the point (x1 - s h, x2 - t h) carries weight phi4(s) phi4(t).
    std::vector<double> outer_extra;
    if (f.kink_x2) {
        for (int m = -3; m <= 3; ++m) {
            // t at which the kink crosses the inner knot s = m
            if (auto k2 = f.kink_x2(x1 - m * h)) outer_extra.push_back((x2 - *k2) / h);
        }
    }
    const std::vector<double> outer = panel_breaks(std::move(outer_extra));

    auto inner = [&](double t) {
        const double y2 = x2 - t * h;
        std::vector<double> inner_extra;
        if (f.kink_x1) {
            if (auto k1 = f.kink_x1(y2)) inner_extra.push_back((x1 - *k1) / h);
        }
        const std::vector<double> br = panel_breaks(std::move(inner_extra));
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < br.size(); ++i) {
            acc += integrate(gl, br[i], br[i + 1],
                             [&](double s) { return phi4(s) * f.value(x1 - s * h, y2); });
        }
        return acc;
    };

    double total = 0.0;
    for (std::size_t j = 0; j + 1 < outer.size(); ++j) {
        total += integrate(gl, outer[j], outer[j + 1], [&](double t) { return phi4(t) * inner(t); });
    }
    return total;
}

double SmoothingKernel::convolve(const PiecewiseSmooth2D& f, double x1, double x2, double h) const {
    const double v = convolve_with(rule_, f, x1, x2, h);
    if (opts_.verify_tolerance <= 0.0) return v;
    const double fine = convolve_with(check_rule_, f, x1, x2, h);
    if (!(std::abs(fine - v) <= opts_.verify_tolerance)) {
        std::ostringstream os;
        os.precision(17);
        os << "smoothing quadrature did not converge at (" << x1 << ", " << x2 << "), h = " << h
           << ": " << opts_.gauss_nodes << " nodes give " << v << ", " << 2 * opts_.gauss_nodes
           << " nodes give " << fine;
        throw NumericalError(os.str());
    }
    return fine;
}

GridField smooth_everywhere(const PiecewiseSmooth2D& f, const Grid2& grid,
                            const SmoothingOptions& opts) {
    const SmoothingKernel kernel(opts);
    return GridField::sample(grid,
                             [&](double x1, double x2) { return kernel.convolve(f, x1, x2, grid.h()); });
}

std::vector<std::size_t> kink_band(const Grid2& grid, const MarketParams& p, double width) {
    if (!(width >= kPhi4Support)) throw ConfigError("kink_band: width must be >= 3");
    const double d = width * grid.h();
    std::vector<std::size_t> band;
    for (std::size_t i1 = 0; i1 <= grid.n1(); ++i1) {
        for (std::size_t i2 = 0; i2 <= grid.n2(); ++i2) {
            const double x1 = grid.x1(i1), x2 = grid.x2(i2);
            // The payoff argument decreases in both coordinates, so its extremes over the
            // box are at the lower-left and upper-right corners.
            const double hi = payoff_argument({x1 - d, x2 - d}, p);
            const double lo = payoff_argument({x1 + d, x2 + d}, p);
            if (lo <= 0.0 && hi >= 0.0) band.push_back(grid.index(i1, i2));
        }
    }
    return band;
}

GridField smooth_initial_condition(const Grid2& grid, const MarketParams& p,
                                   const SmoothingOptions& opts) {
    p.validate();
    const double h = grid.h();
    const double a1 = p.sigma1 / p.gamma, a2 = p.sigma2 / p.gamma;
    const double m1 = phi4_exponential_moment(a1 * h);
    const double m2 = phi4_exponential_moment(a2 * h);
    const double d = kPhi4Support * h;

    GridField out(grid);
    for (std::size_t i1 = 0; i1 <= grid.n1(); ++i1) {
        for (std::size_t i2 = 0; i2 <= grid.n2(); ++i2) {
            const double x1 = grid.x1(i1), x2 = grid.x2(i2);
            if (payoff_argument({x1 + d, x2 + d}, p) >= 0.0) {
                out.at(i1, i2) = 1.0 - p.omega1 * m1 * std::exp(a1 * x1) -
                                 p.omega2 * m2 * std::exp(a2 * x2);
            }
            // out-of-the-money side stays at zero
        }
    }
    const SmoothingKernel kernel(opts);
    const PiecewiseSmooth2D payoff = basket_put_payoff(p);
    const std::size_t stride = grid.n2() + 1;
    for (std::size_t idx : kink_band(grid, p, opts.band_width)) {
        const std::size_t i1 = idx / stride, i2 = idx % stride;
        out.at(i1, i2) = kernel.convolve(payoff, grid.x1(i1), grid.x2(i2), h);
    }
    return out;
}

GridField payoff_field(const Grid2& grid, const MarketParams& p) {
    return GridField::sample(grid, [&](double x1, double x2) {
        return payoff_transformed({x1, x2}, p);
    });
}

}  // namespace basket
