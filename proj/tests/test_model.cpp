#include <doctest.h>

#include <cmath>
#include <string>

#include "basket/errors.hpp"
#include "basket/model.hpp"
#include "support.hpp"

using namespace basket;

TEST_CASE("to_log_coords examples") {
    const MarketParams p = MarketParams::defaults();
    const Point2 x0 = to_log_coords({p.K, p.K}, p);
    CHECK(x0[0] == 0.0);
    CHECK(x0[1] == 0.0);
    const Point2 x = to_log_coords({2.0 * p.K, p.K}, p);
    CHECK(x[0] == doctest::Approx(0.6931471805599453).epsilon(1e-15));
    CHECK_THROWS_AS((void)to_log_coords({0.0, 1.0}, p), DomainError);
    CHECK_THROWS_AS((void)to_log_coords({1.0, -1.0}, p), DomainError);
}

TEST_CASE("from_log_coords examples") {
    MarketParams p = MarketParams::defaults();
    const Point2 s0 = from_log_coords({0.0, 0.0}, p);
    CHECK(s0[0] == p.K);
    CHECK(s0[1] == p.K);
    CHECK(from_log_coords({0.0, 0.1}, p)[1] == doctest::Approx(p.K * std::exp(0.14)).epsilon(1e-15));
    p.gamma = p.sigma1;
    CHECK(from_log_coords({0.7, 0.0}, p)[0] == doctest::Approx(p.K * std::exp(0.7)).epsilon(1e-15));
}

TEST_CASE("log-coordinate round trip on [K/100, 100K]") {
    test::Gen gen(11);
    for (int i = 0; i < 1000; ++i) {
        const MarketParams p = gen.params();
        const Point2 s{p.K * std::pow(10.0, gen.uniform(-2, 2)), p.K * std::pow(10.0, gen.uniform(-2, 2))};
        const Point2 back = from_log_coords(to_log_coords(s, p), p);
        CHECK(std::abs(back[0] / s[0] - 1.0) < 1e-12);
        CHECK(std::abs(back[1] / s[1] - 1.0) < 1e-12);
    }
}

TEST_CASE("transformed payoff examples") {
    const MarketParams p = MarketParams::defaults();
    CHECK(payoff_transformed({0.0, 0.0}, p) <= 1e-15);
    CHECK(payoff_transformed({-50.0, -50.0}, p) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(payoff_transformed({-1.0, -1.0}, p) == doctest::Approx(0.710954169027951).epsilon(1e-14));
    CHECK(payoff_transformed({1.0, 1.0}, p) == 0.0);
}

TEST_CASE("transformed and untransformed payoffs agree; payoff non-increasing") {
    test::Gen gen(12);
    for (int i = 0; i < 1000; ++i) {
        const MarketParams p = gen.params();
        const Point2 x{gen.uniform(-3, 3), gen.uniform(-3, 3)};
        const Point2 s = from_log_coords(x, p);
        const double direct = std::max(1.0 - p.omega1 * s[0] / p.K - p.omega2 * s[1] / p.K, 0.0);
        CHECK(std::abs(payoff_transformed(x, p) - direct) < 1e-12);
        const double dx = gen.uniform(0.0, 0.5);
        CHECK(payoff_transformed({x[0] + dx, x[1]}, p) <= payoff_transformed(x, p));
        CHECK(payoff_transformed({x[0], x[1] + dx}, p) <= payoff_transformed(x, p));
    }
}

TEST_CASE("value transform examples") {
    const MarketParams p = MarketParams::defaults();
    CHECK(undo_value_transform(0.0, 1.0, p) == 0.0);
    CHECK(undo_value_transform(0.3, 0.0, p) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(undo_value_transform(0.5, 1.0, p) == doctest::Approx(4.761904761904762).epsilon(1e-14));
    CHECK(apply_value_transform(undo_value_transform(0.42, 0.7, p), 0.7, p) ==
          doctest::Approx(0.42).epsilon(1e-15));
}

TEST_CASE("manufactured growth rate examples") {
    MarketParams p = MarketParams::defaults(0.8);
    CHECK(manufactured_growth_rate(0.0, 0.0, p) == 0.0);
    CHECK(manufactured_growth_rate(1.0, 1.0, p) == doctest::Approx(0.121140281433312).epsilon(1e-14));
    p.gamma = p.sigma1;
    CHECK(manufactured_growth_rate(1.0, 0.0, p) == doctest::Approx(p.r).epsilon(1e-14));
}

TEST_CASE("manufactured solution leaves a vanishing finite-difference residual") {
    // u_tau = (g^2/2)(u11 + u22) + g^2 rho u12 - g (b1 u1 + b2 u2), by central differences.
    test::Gen gen(13);
    for (int trial = 0; trial < 20; ++trial) {
        const MarketParams p = gen.params();
        const double k1 = gen.uniform(-1.5, 1.5), k2 = gen.uniform(-1.5, 1.5);
        const auto u = ExponentialSolution::make(k1, k2, p);
        const double g = p.gamma;
        const double b1 = p.sigma1 / 2 - p.r / p.sigma1, b2 = p.sigma2 / 2 - p.r / p.sigma2;
        const double x1 = gen.uniform(-1, 1), x2 = gen.uniform(-1, 1), t = gen.uniform(0, 1);
        auto residual = [&](double h) {
            const double ut = (u(x1, x2, t + h) - u(x1, x2, t - h)) / (2 * h);
            const double c = u(x1, x2, t);
            const double u1 = (u(x1 + h, x2, t) - u(x1 - h, x2, t)) / (2 * h);
            const double u2 = (u(x1, x2 + h, t) - u(x1, x2 - h, t)) / (2 * h);
            const double u11 = (u(x1 + h, x2, t) - 2 * c + u(x1 - h, x2, t)) / (h * h);
            const double u22 = (u(x1, x2 + h, t) - 2 * c + u(x1, x2 - h, t)) / (h * h);
            const double u12 = (u(x1 + h, x2 + h, t) - u(x1 + h, x2 - h, t) - u(x1 - h, x2 + h, t) +
                                u(x1 - h, x2 - h, t)) / (4 * h * h);
            return std::abs(ut - (g * g / 2 * (u11 + u22) + g * g * p.rho12 * u12 -
                                  g * (b1 * u1 + b2 * u2))) / c;
        };
        const double r1 = residual(1e-2), r2 = residual(5e-3);
        CHECK(r2 < 1e-3);
        if (r1 > 1e-9) CHECK(r2 < 0.3 * r1);
    }
}

TEST_CASE("parameter validation names the field") {
    auto message = [](MarketParams p) {
        try {
            p.validate();
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    MarketParams p = MarketParams::defaults();
    CHECK_NOTHROW(p.validate());
    p.rho12 = 1.2;
    CHECK(message(p).find("rho12") != std::string::npos);
    CHECK(message(p).find("0.95") != std::string::npos);
    p = MarketParams::defaults();
    p.sigma1 = 0.0;
    CHECK(message(p).find("sigma1") != std::string::npos);
    p = MarketParams::defaults();
    p.omega2 = 0.7;
    CHECK(message(p).find("omega") != std::string::npos);
    p = MarketParams::defaults();
    p.omega1 = 0.0;
    p.omega2 = 1.0;
    CHECK(message(p).find("omega1") != std::string::npos);
    p = MarketParams::defaults();
    p.r = -0.01;
    CHECK(message(p).find("r ") != std::string::npos);
    for (double MarketParams::*f : {&MarketParams::K, &MarketParams::T, &MarketParams::gamma}) {
        p = MarketParams::defaults();
        p.*f = 0.0;
        CHECK_FALSE(message(p).empty());
    }
}

TEST_CASE("convection coefficients vanish when sigma^2 = 2r") {
    MarketParams p = MarketParams::defaults();
    p.r = 0.02;
    p.sigma1 = 0.2;
    const auto b = convection_coeffs(p);
    CHECK(std::abs(b.b1) < 1e-16);
    CHECK(b.b2 == doctest::Approx(0.35 / 2 - 0.02 / 0.35));
}
