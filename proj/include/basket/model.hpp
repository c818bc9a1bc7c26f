#pragma once

#include <array>
#include <cmath>

namespace basket {

/// Market and model parameters of the two-asset basket put.
///
/// Pricing is risk-neutral, so the real-world drifts of the assets never enter.
/// `gamma` is the scaling parameter of the log-coordinate transform
///   x_i = (gamma / sigma_i) ln(S_i / K),  tau = T - t,  u = e^{r tau} V / K.
struct MarketParams {
    double sigma1 = 0.25;
    double sigma2 = 0.35;
    double r = std::log(1.05);
    double rho12 = 0.0;
    double omega1 = 0.35;
    double omega2 = 0.65;
    double K = 10.0;
    double T = 1.0;
    double gamma = 0.25;

    /// Largest admissible |rho12|; at |rho12| = 1 the diffusion matrix is singular.
    static constexpr double kMaxAbsCorrelation = 0.95;

    /// Throws ConfigError naming the first offending field.
    void validate() const;

    [[nodiscard]] static MarketParams defaults(double rho12 = 0.0) {
        MarketParams p;
        p.rho12 = rho12;
        return p;
    }
};

/// Coefficients b_i = sigma_i/2 - r/sigma_i of the first-derivative terms.
struct ConvectionCoeffs {
    double b1;
    double b2;
};

[[nodiscard]] ConvectionCoeffs convection_coeffs(const MarketParams& p) noexcept;

using Point2 = std::array<double, 2>;

/// Spots (S1, S2) -> transformed coordinates. Throws DomainError for non-positive spots.
[[nodiscard]] Point2 to_log_coords(const Point2& spot, const MarketParams& p);

/// Transformed coordinates -> spots S_i = K exp(sigma_i x_i / gamma).
[[nodiscard]] Point2 from_log_coords(const Point2& x, const MarketParams& p) noexcept;

/// Argument of the transformed put payoff, 1 - sum_i omega_i exp(sigma_i x_i / gamma).
/// Its zero level set is the payoff kink; it is strictly decreasing in each coordinate.
[[nodiscard]] double payoff_argument(const Point2& x, const MarketParams& p) noexcept;

/// Transformed payoff u0(x) = max(payoff_argument(x), 0).
[[nodiscard]] double payoff_transformed(const Point2& x, const MarketParams& p) noexcept;

/// Option price V = K e^{-r tau} u.
[[nodiscard]] double undo_value_transform(double u, double tau, const MarketParams& p) noexcept;

/// Transformed value u = e^{r tau} V / K.
[[nodiscard]] double apply_value_transform(double V, double tau, const MarketParams& p) noexcept;

/// Growth rate omega for which u = exp(k1 x1 + k2 x2 + omega tau) solves the transformed PDE.
/// Verification aid only; the pricing path never calls it.
[[nodiscard]] double manufactured_growth_rate(double k1, double k2, const MarketParams& p) noexcept;

/// Exact manufactured solution exp(k1 x1 + k2 x2 + omega tau).
struct ExponentialSolution {
    double k1;
    double k2;
    double omega;

    [[nodiscard]] static ExponentialSolution make(double k1, double k2, const MarketParams& p) noexcept {
        return {k1, k2, manufactured_growth_rate(k1, k2, p)};
    }
    [[nodiscard]] double operator()(double x1, double x2, double tau) const noexcept {
        return std::exp(k1 * x1 + k2 * x2 + omega * tau);
    }
};

}  // namespace basket
