#include <doctest.h>

#include <cmath>

#include "basket/boundary.hpp"
#include "basket/oracle.hpp"
#include "basket/smoothing.hpp"
#include "basket/solver.hpp"

using namespace basket;

TEST_CASE("normal cdf") {
    CHECK(normal_cdf(0.0) == 0.5);
    CHECK(normal_cdf(1.96) == doctest::Approx(0.9750021048517796).epsilon(1e-15));
    CHECK(normal_cdf(-10.0) == doctest::Approx(7.619853024160526e-24).epsilon(1e-13));
}

TEST_CASE("bs1d_put examples") {
    const double r = std::log(1.05);
    CHECK(bs1d_put(8.0, 10.0, r, 0.3, 0.0) == 2.0);
    CHECK(bs1d_put(12.0, 10.0, r, 0.3, 0.0) == 0.0);
    CHECK(bs1d_put(0.0, 10.0, r, 0.3, 1.0) == doctest::Approx(9.523809523809524).epsilon(1e-15));
    CHECK(std::abs(bs1d_put(10.0, 10.0, r, 0.35, 1.0) - quadrature_vanilla_put(10.0, 10.0, r, 0.35, 1.0)) < 1e-8);
    for (double S : {0.5, 4.0, 9.0, 13.0, 30.0}) {
        for (double tau : {0.01, 0.5, 2.0}) {
            CHECK(std::abs(bs1d_put(S, 10.0, 0.03, 0.25, tau) -
                           quadrature_vanilla_put(S, 10.0, 0.03, 0.25, tau)) < 1e-8);
        }
    }
}

TEST_CASE("edge values at tau = 0 match the payoff") {
    const MarketParams p = MarketParams::defaults(0.8);
    const Grid2 g({-2, 2, -2, 2}, 16, 16);
    const GridField raw = payoff_field(g, p);
    for (Side side : {Side::X1Lower, Side::X1Upper, Side::X2Lower, Side::X2Upper}) {
        const auto v = edge_values(side, 0.0, g, p);
        for (std::size_t j = 0; j < v.size(); ++j) {
            double expected = 0.0;
            switch (side) {
                case Side::X1Lower: expected = raw.at(0, j); break;
                case Side::X1Upper: expected = raw.at(16, j); break;
                case Side::X2Lower: expected = raw.at(j, 0); break;
                case Side::X2Upper: expected = raw.at(j, 16); break;
            }
            CHECK(std::abs(v[j] - expected) < 1e-12);
        }
    }
}

TEST_CASE("boundary reproduces the initial field at tau = 0") {
    const MarketParams p = MarketParams::defaults(0.8);
    const Grid2 g({-2, 2, -2, 2}, 16, 16);
    for (bool smooth : {false, true}) {
        const GridField init = smooth ? smooth_initial_condition(g, p) : payoff_field(g, p);
        const BasketBoundary bc(p, init);
        GridField f(g, -7.0);
        bc.apply(0.0, f);
        for (std::size_t i1 = 0; i1 <= 16; ++i1)
            for (std::size_t i2 = 0; i2 <= 16; ++i2)
                CHECK(f.at(i1, i2) == (g.is_boundary(i1, i2) ? init.at(i1, i2) : -7.0));
    }
}

TEST_CASE("worthless boundary nodes and the double-zero limit") {
    const MarketParams p = MarketParams::defaults(0.0);
    const Grid2 g({-2, 2, -2, 2}, 16, 16);
    const double tau = 0.7;
    // Where both forwards exceed K on their own, each reduced strike is negative.
    const auto hi = edge_values(Side::X1Upper, tau, g, p);
    std::size_t zeros = 0;
    for (std::size_t k = 0; k <= g.n2(); ++k) {
        const Point2 s = from_log_coords({g.x1(g.n1()), g.x2(k)}, p);
        if (p.omega2 * s[1] * std::exp(p.r * tau) >= p.K) {
            CHECK(hi[k] == 0.0);
            ++zeros;
        }
    }
    CHECK(zeros > 3);

    // Far lower x2 range: S2 is negligible at node 1 of the lower x1 edge, and asset 1
    // is deep in the money, so the put is its forward intrinsic value.
    const Grid2 wide({-2, 2, -8, 2}, 8, 20);
    const auto v = edge_values(Side::X1Lower, tau, wide, p);
    const Point2 s = from_log_coords({wide.x1(0), wide.x2(1)}, p);
    const double V = undo_value_transform(v[1], tau, p);
    CHECK(p.omega2 * s[1] < 1e-3);
    CHECK(V == doctest::Approx(p.K * std::exp(-p.r * tau) - p.omega1 * s[0] - p.omega2 * s[1]).epsilon(1e-10));
}

TEST_CASE("reduced put bounds independent baskets from below") {
    // Conditioning on one asset and replacing the other by its forward is Jensen's
    // inequality when the two are independent.
    const MarketParams p = MarketParams::defaults(0.0);
    for (double S1 : {1.5, 6.0, 10.0, 25.0}) {
        for (double S2 : {0.7, 8.0, 12.0, 60.0}) {
            CHECK(reduced_put(S1, S2, p.T, p) <= quadrature_basket_put(p, S1, S2) + 1e-12);
        }
    }
    for (double rho : {-0.8, 0.0, 0.8}) {
        const MarketParams q = MarketParams::defaults(rho);
        for (double S1 : {1.5, 10.0}) {
            for (double S2 : {0.7, 12.0}) {
                CHECK(reduced_put(S1, S2, 0.0, q) ==
                      doctest::Approx(std::max(q.K - q.omega1 * S1 - q.omega2 * S2, 0.0)).epsilon(1e-15));
            }
        }
    }
}

TEST_CASE("reduced put is exact in its limits") {
    MarketParams p = MarketParams::defaults(0.3);
    p.sigma2 = 1e-7;
    for (double S1 : {5.0, 10.0, 15.0}) {
        CHECK(reduced_put(S1, 9.0, p.T, p) == doctest::Approx(quadrature_basket_put(p, S1, 9.0)).epsilon(1e-6));
    }
    // As one asset becomes negligible the reduction error vanishes for any correlation.
    for (double rho : {-0.8, 0.8}) {
        const MarketParams q = MarketParams::defaults(rho);
        for (double S2 : {5.0, 10.0, 20.0}) {
            auto rel = [&](double S1) {
                const double exact = quadrature_basket_put(q, S1, S2);
                return std::abs(reduced_put(S1, S2, q.T, q) - exact) / exact;
            };
            CAPTURE(rho);
            CAPTURE(S2);
            CHECK(rel(0.01) < 1e-3);
            CHECK(rel(0.01) < 0.2 * rel(0.1));
        }
    }
}

TEST_CASE("lower edge values are non-increasing in the free spot") {
    const MarketParams p = MarketParams::defaults(-0.8);
    const Grid2 g({-2, 2, -2, 2}, 32, 32);
    for (Side side : {Side::X1Lower, Side::X2Lower}) {
        for (double tau : {0.0, 0.3, 1.0}) {
            const auto v = edge_values(side, tau, g, p);
            for (std::size_t j = 1; j < v.size(); ++j) CHECK(v[j] <= v[j - 1] + 1e-15);
        }
    }
}

TEST_CASE("edge values are continuous in tau") {
    // Past the initial layer the jump between consecutive levels scales with dtau.
    const MarketParams p = MarketParams::defaults(0.8);
    const Grid2 g({-2, 2, -2, 2}, 32, 32);
    auto max_jump = [&](double dtau) {
        double m = 0.0;
        for (Side side : {Side::X1Lower, Side::X1Upper, Side::X2Lower, Side::X2Upper}) {
            for (double tau = 0.1; tau + dtau <= p.T + 1e-12; tau += dtau) {
                const auto a = edge_values(side, tau, g, p), b = edge_values(side, tau + dtau, g, p);
                for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(b[j] - a[j]));
            }
        }
        return m;
    };
    const double j1 = max_jump(0.01), j2 = max_jump(0.005);
    const double C = j1 / 0.01;
    CHECK(j2 <= C * 0.005 * 1.05);
    CHECK(j2 / j1 == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("corner rules") {
    const MarketParams p = MarketParams::defaults(0.8);
    const Grid2 g({-2, 2, -2, 2}, 16, 16);
    const GridField init = smooth_initial_condition(g, p);
    const auto corners = corner_values(init);
    CHECK(corners[0] == init.at(0, 0));
    CHECK(corners[1] == init.at(0, 16));
    CHECK(corners[2] == init.at(16, 0));
    CHECK(corners[3] == init.at(16, 16));
    CHECK(corners[3] == 0.0);
    // In the money the smoothed field differs from the payoff only at O(h^4).
    CHECK(std::abs(corners[0] - payoff_transformed({-2, -2}, p)) < 1e-4);

    const DiscreteSystem sys = assemble(g, hoc_coefficients(p, g.h()), 0.01, 100);
    const BasketBoundary frozen(p, init, CornerRule::Frozen);
    std::size_t seen = 0;
    (void)march(sys, init, frozen, {}, [&](std::size_t, double, const GridField& u) {
        ++seen;
        CHECK(u.at(0, 0) == corners[0]);
        CHECK(u.at(0, 16) == corners[1]);
        CHECK(u.at(16, 0) == corners[2]);
        CHECK(u.at(16, 16) == corners[3]);
    });
    CHECK(seen == 101);

    // Closed-form corners continue the edge data.
    const BasketBoundary closed(p, init);
    GridField f(g);
    closed.apply(0.5, f);
    const Point2 s = from_log_coords({-2, -2}, p);
    CHECK(f.at(0, 0) == doctest::Approx(std::exp(p.r * 0.5) / p.K * reduced_put(s[0], s[1], 0.5, p)).epsilon(1e-14));
    CHECK(f.at(0, 0) == edge_values(Side::X2Lower, 0.5, g, p)[0]);
    CHECK(f.at(0, 0) != corners[0]);
}
