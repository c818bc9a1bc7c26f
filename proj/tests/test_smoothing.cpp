#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "basket/errors.hpp"
#include "basket/quadrature.hpp"
#include "basket/smoothing.hpp"
#include "support.hpp"

using namespace basket;

namespace {

// Integral of f phi4 over [-3, 3] with Gauss-Legendre panels on the integer knots.
template <class F>
double kernel_integral(F&& f) {
    const QuadratureRule gl = gauss_legendre(20);
    double acc = 0.0;
    for (int k = -3; k < 3; ++k) {
        acc += integrate(gl, k, k + 1, [&](double s) { return f(s) * phi4(s); });
    }
    return acc;
}

double sinc4_factor(double w) {
    if (w == 0.0) return 4.0 / 3.0 - 1.0 / 3.0;
    const double s = std::sin(w / 2) / (w / 2);
    return s * s * s * s * (4.0 / 3.0 - std::cos(w) / 3.0);
}

// phi4(x) = (1/pi) int_0^inf phi4_hat(w) cos(w x) dw, truncated where the tail is below 1e-11.
double fourier_inversion(double x) {
    const QuadratureRule gl = gauss_legendre(16);
    double acc = 0.0;
    for (int k = 0; k < 2000; ++k) {
        acc += integrate(gl, k * std::numbers::pi, (k + 1) * std::numbers::pi,
                         [&](double w) { return sinc4_factor(w) * std::cos(w * x); });
    }
    return acc / std::numbers::pi;
}

}  // namespace

TEST_CASE("phi4 pointwise") {
    CHECK(phi4(4.0) == 0.0);
    CHECK(phi4(3.0) == 0.0);
    CHECK(phi4(-3.5) == 0.0);
    CHECK(phi4(0.0) == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
    test::Gen gen(41);
    for (int i = 0; i < 100; ++i) {
        const double x = gen.uniform(-4, 4);
        CHECK(phi4(-x) == doctest::Approx(phi4(x)).epsilon(1e-15));
    }
}

TEST_CASE("phi4 unit mass and vanishing moments") {
    CHECK(kernel_integral([](double) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-8));
    for (int j = 1; j <= 3; ++j) {
        CHECK(std::abs(kernel_integral([j](double s) { return std::pow(s, j); })) < 1e-8);
    }
    CHECK(std::abs(kernel_integral([](double s) { return std::pow(s, 4); })) > 0.1);
}

TEST_CASE("closed-form kernel matches numerical Fourier inversion") {
    for (int i = 0; i < 100; ++i) {
        const double x = -3.2 + 6.4 * (i + 0.5) / 100.0;
        CAPTURE(x);
        CHECK(std::abs(phi4(x) - fourier_inversion(x)) < 1e-8);
    }
}

TEST_CASE("phi4 transform and exponential moment") {
    for (double w : {0.0, 0.3, 1.0, 2.5, 7.0}) CHECK(phi4_hat(w) == doctest::Approx(sinc4_factor(w)).epsilon(1e-13));
    for (double z : {-1.5, -0.2, 0.0, 0.05, 0.7, 2.0}) {
        const double numeric = kernel_integral([z](double s) { return std::exp(z * s); });
        CHECK(phi4_exponential_moment(z) == doctest::Approx(numeric).epsilon(1e-12));
    }
}

TEST_CASE("smoothing leaves constants and cubics unchanged") {
    const Grid2 g({-1, 1, -1, 1}, 8, 8);
    auto cubic = [](double x, double y) {
        return 0.5 - x + 2 * y + 0.3 * x * y - x * x + 0.7 * x * x * x - 0.4 * x * y * y + y * y * y;
    };
    const PiecewiseSmooth2D constant{[](double, double) { return 2.5; }, {}, {}};
    const PiecewiseSmooth2D poly{cubic, {}, {}};
    const GridField c = smooth_everywhere(constant, g);
    const GridField q = smooth_everywhere(poly, g);
    for (std::size_t i1 = 0; i1 <= g.n1(); ++i1) {
        for (std::size_t i2 = 0; i2 <= g.n2(); ++i2) {
            CHECK(std::abs(c.at(i1, i2) - 2.5) < 1e-12);
            CHECK(std::abs(q.at(i1, i2) - cubic(g.x1(i1), g.x2(i2))) < 1e-8);
        }
    }
}

TEST_CASE("kink band") {
    const MarketParams p = MarketParams::defaults();
    const Grid2 g({-2, 2, -2, 2}, 32, 32);
    const auto band = kink_band(g, p, 3.0);
    CHECK(std::find(band.begin(), band.end(), g.index(16, 16)) != band.end());
    CHECK(std::is_sorted(band.begin(), band.end()));
    // Every band node's box meets the kink; every other node's box does not.
    for (std::size_t i1 = 0; i1 <= g.n1(); ++i1) {
        for (std::size_t i2 = 0; i2 <= g.n2(); ++i2) {
            const double w = 3.0 * g.h();
            const double lo = payoff_argument({g.x1(i1) + w, g.x2(i2) + w}, p);
            const double hi = payoff_argument({g.x1(i1) - w, g.x2(i2) - w}, p);
            const bool meets = lo <= 0.0 && hi >= 0.0;
            const bool in = std::binary_search(band.begin(), band.end(), g.index(i1, i2));
            CHECK(meets == in);
        }
    }
    CHECK(kink_band(Grid2({-10, -8, -10, -8}, 8, 8), p, 3.0).empty());
    CHECK_THROWS_AS((void)kink_band(g, p, 2.0), ConfigError);
}

TEST_CASE("band-restricted smoothing equals smoothing everywhere") {
    const MarketParams p = MarketParams::defaults();
    const Grid2 g({-2, 2, -2, 2}, 32, 32);
    const GridField full = smooth_everywhere(basket_put_payoff(p), g);
    const GridField banded = smooth_initial_condition(g, p);
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        CHECK(std::abs(full.values()[i] - banded.values()[i]) <= 1e-13);
    }
}

TEST_CASE("smoothed payoff on the out-of-the-money side away from the kink is zero") {
    const MarketParams p = MarketParams::defaults();
    const Grid2 g({-2, 2, -2, 2}, 32, 32);
    const GridField raw = payoff_field(g, p);
    const GridField smooth = smooth_initial_condition(g, p);
    const auto band = kink_band(g, p, 3.0);
    std::size_t zeros = 0;
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        if (raw.values()[i] == 0.0 && !std::binary_search(band.begin(), band.end(), i)) {
            CHECK(smooth.values()[i] == 0.0);
            ++zeros;
        }
    }
    CHECK(zeros > 100);
}

TEST_CASE("smoothed payoff converges to the payoff and obeys the norm bound") {
    const MarketParams p = MarketParams::defaults();
    const double abs_mass = kernel_integral([](double s) { return phi4(s) < 0 ? -1.0 : 1.0; });
    double previous = 1e300;
    for (std::size_t n : {16, 32, 64, 128}) {
        const Grid2 g({-2, 2, -2, 2}, n, n);
        const GridField raw = payoff_field(g, p);
        const GridField smooth = smooth_initial_condition(g, p);
        double diff = 0.0;
        for (std::size_t i = 0; i < g.node_count(); ++i)
            diff = std::max(diff, std::abs(raw.values()[i] - smooth.values()[i]));
        CHECK(diff < previous);
        previous = diff;
        CHECK(smooth.max_abs() <= raw.max_abs() * (1 + abs_mass) * (1 + abs_mass));
    }
}

TEST_CASE("quadrature verification failure is reported") {
    SmoothingOptions opts;
    opts.gauss_nodes = 2;
    opts.verify_tolerance = 1e-15;
    const SmoothingKernel kernel(opts);
    const PiecewiseSmooth2D f{[](double x, double y) { return std::exp(3 * x) * std::cos(5 * y); }, {}, {}};
    try {
        (void)kernel.convolve(f, 0.1, 0.2, 0.3);
        FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
        CHECK(std::string(e.what()).find("0.1") != std::string::npos);
    }
}
