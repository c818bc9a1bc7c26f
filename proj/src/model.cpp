#include "basket/model.hpp"

#include <algorithm>
#include <sstream>

#include "basket/errors.hpp"

namespace basket {

namespace {

void require(bool ok, const char* field, const std::string& rule, double value) {
    if (!ok) {
        std::ostringstream os;
        os.precision(17);
        os << "invalid " << field << " = " << value << ": " << rule;
        throw ConfigError(os.str());
    }
}

}  // namespace

void MarketParams::validate() const {
    auto finite = [](double v) { return std::isfinite(v); };
    require(finite(sigma1) && sigma1 > 0.0, "sigma1", "must be > 0", sigma1);
    require(finite(sigma2) && sigma2 > 0.0, "sigma2", "must be > 0", sigma2);
    require(finite(r) && r >= 0.0, "r", "must be >= 0", r);
    require(finite(rho12) && std::abs(rho12) <= kMaxAbsCorrelation, "rho12",
            "must lie in [-0.95, 0.95]", rho12);
    require(finite(omega1) && omega1 > 0.0, "omega1", "must be > 0", omega1);
    require(finite(omega2) && omega2 > 0.0, "omega2", "must be > 0", omega2);
    require(std::abs(omega1 + omega2 - 1.0) <= 1e-12, "omega2", "omega1 + omega2 must equal 1",
            omega2);
    require(finite(K) && K > 0.0, "K", "must be > 0", K);
    require(finite(T) && T > 0.0, "T", "must be > 0", T);
    require(finite(gamma) && gamma > 0.0, "gamma", "must be > 0", gamma);
}

ConvectionCoeffs convection_coeffs(const MarketParams& p) noexcept {
    return {p.sigma1 / 2.0 - p.r / p.sigma1, p.sigma2 / 2.0 - p.r / p.sigma2};
}

Point2 to_log_coords(const Point2& spot, const MarketParams& p) {
    if (!(spot[0] > 0.0) || !(spot[1] > 0.0)) {
        throw DomainError("to_log_coords: spots must be positive");
    }
    return {p.gamma / p.sigma1 * std::log(spot[0] / p.K),
            p.gamma / p.sigma2 * std::log(spot[1] / p.K)};
}

Point2 from_log_coords(const Point2& x, const MarketParams& p) noexcept {
    return {p.K * std::exp(p.sigma1 * x[0] / p.gamma), p.K * std::exp(p.sigma2 * x[1] / p.gamma)};
}

double payoff_argument(const Point2& x, const MarketParams& p) noexcept {
    return 1.0 - p.omega1 * std::exp(p.sigma1 * x[0] / p.gamma) -
           p.omega2 * std::exp(p.sigma2 * x[1] / p.gamma);
}

double payoff_transformed(const Point2& x, const MarketParams& p) noexcept {
    return std::max(payoff_argument(x, p), 0.0);
}

double undo_value_transform(double u, double tau, const MarketParams& p) noexcept {
    return p.K * std::exp(-p.r * tau) * u;
}

double apply_value_transform(double V, double tau, const MarketParams& p) noexcept {
    return std::exp(p.r * tau) * V / p.K;
}

double manufactured_growth_rate(double k1, double k2, const MarketParams& p) noexcept {
    const auto [b1, b2] = convection_coeffs(p);
    const double g = p.gamma;
    return 0.5 * g * g * (k1 * k1 + k2 * k2) + g * g * p.rho12 * k1 * k2 - g * (b1 * k1 + b2 * k2);
}

}  // namespace basket
