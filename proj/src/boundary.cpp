#include "basket/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "basket/model.hpp"

namespace basket {

double normal_cdf(double x) noexcept {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double bs1d_put(double S, double strike, double r, double sigma, double tau) noexcept {
    const double df = std::exp(-r * tau);
    if (tau <= 0.0) return std::max(strike - S, 0.0);
    if (S <= 0.0) return strike * df;
    const double vol = sigma * std::sqrt(tau);
    const double d1 = (std::log(S / strike) + (r + 0.5 * sigma * sigma) * tau) / vol;
    const double d2 = d1 - vol;
    return strike * df * normal_cdf(-d2) - S * normal_cdf(-d1);
}

double reduced_put(double S1, double S2, double tau, const MarketParams& p) noexcept {
    // One asset is replaced by its forward. Each reduction is exact when that asset is
    // negligible or riskless, and a lower bound when the two are independent.
    const double growth = std::exp(p.r * tau);
    auto one_random = [&](double S_rand, double w_rand, double sig_rand, double S_fwd, double w_fwd) {
        const double strike = p.K - w_fwd * S_fwd * growth;
        if (strike <= 0.0) return 0.0;
        return w_rand * bs1d_put(S_rand, strike / w_rand, p.r, sig_rand, tau);
    };
    return std::max(one_random(S1, p.omega1, p.sigma1, S2, p.omega2),
                    one_random(S2, p.omega2, p.sigma2, S1, p.omega1));
}

std::vector<double> edge_values(Side side, double tau, const Grid2& grid, const MarketParams& p) {
    const bool along_x2 = side == Side::X1Lower || side == Side::X1Upper;
    const std::size_t n = along_x2 ? grid.n2() : grid.n1();
    const Bounds& b = grid.bounds();
    const double x_fixed = side == Side::X1Lower   ? b.x1_min
                           : side == Side::X1Upper ? b.x1_max
                           : side == Side::X2Lower ? b.x2_min
                                                   : b.x2_max;
    const double to_u = std::exp(p.r * tau) / p.K;
    std::vector<double> u(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        const double x_free = along_x2 ? grid.x2(k) : grid.x1(k);
        const Point2 x = along_x2 ? Point2{x_fixed, x_free} : Point2{x_free, x_fixed};
        if (tau <= 0.0) {
            u[k] = payoff_transformed(x, p);
        } else {
            const Point2 s = from_log_coords(x, p);
            u[k] = to_u * reduced_put(s[0], s[1], tau, p);
        }
    }
    return u;
}

std::array<double, 4> corner_values(const GridField& initial) {
    const Grid2& g = initial.grid();
    return {initial.at(0, 0), initial.at(0, g.n2()), initial.at(g.n1(), 0),
            initial.at(g.n1(), g.n2())};
}

BasketBoundary::BasketBoundary(const MarketParams& p, GridField initial, CornerRule corners)
    : params_(p), initial_(std::move(initial)), rule_(corners), corners_(corner_values(initial_)) {
    params_.validate();
}

void BasketBoundary::apply(double tau, GridField& field) const {
    const Grid2& g = field.grid();
    const std::size_t n1 = g.n1(), n2 = g.n2();
    if (tau <= 0.0) {
        for (std::size_t i1 = 0; i1 <= n1; ++i1)
            for (std::size_t i2 = 0; i2 <= n2; ++i2)
                if (g.is_boundary(i1, i2)) field.at(i1, i2) = initial_.at(i1, i2);
        return;
    }
    const auto x1_lo = edge_values(Side::X1Lower, tau, g, params_);
    const auto x1_hi = edge_values(Side::X1Upper, tau, g, params_);
    const auto x2_lo = edge_values(Side::X2Lower, tau, g, params_);
    const auto x2_hi = edge_values(Side::X2Upper, tau, g, params_);
    for (std::size_t k = 0; k <= n2; ++k) {
        field.at(0, k) = x1_lo[k];
        field.at(n1, k) = x1_hi[k];
    }
    for (std::size_t k = 1; k < n1; ++k) {
        field.at(k, 0) = x2_lo[k];
        field.at(k, n2) = x2_hi[k];
    }
    if (rule_ == CornerRule::ClosedForm) return;
    field.at(0, 0) = corners_[0];
    field.at(0, n2) = corners_[1];
    field.at(n1, 0) = corners_[2];
    field.at(n1, n2) = corners_[3];
}

}  // namespace basket
