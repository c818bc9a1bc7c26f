#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "basket/grid.hpp"
#include "basket/model.hpp"
#include "basket/quadrature.hpp"

namespace basket {

/// Half-width of the support of phi4.
inline constexpr double kPhi4Support = 3.0;

/// Centred cubic B-spline on [-2, 2]; its Fourier transform is (sin(w/2)/(w/2))^4.
[[nodiscard]] double cubic_bspline(double x) noexcept;

/// Fourth-order smoothing kernel with Fourier transform
///   (sin(w/2)/(w/2))^4 (1 + (2/3) sin^2(w/2)) = (sin(w/2)/(w/2))^4 (4/3 - cos(w)/3),
/// i.e. phi4(x) = (4/3) B(x) - (1/6) [B(x - 1) + B(x + 1)]. Zero for |x| >= 3.
[[nodiscard]] double phi4(double x) noexcept;

/// Fourier transform of phi4.
[[nodiscard]] double phi4_hat(double w) noexcept;

/// Integral of phi4(s) exp(z s) over s, in closed form.
[[nodiscard]] double phi4_exponential_moment(double z) noexcept;

/// A function of two variables that is smooth away from one monotone kink curve.
/// The kink locators may be empty when the function is smooth everywhere.
struct PiecewiseSmooth2D {
    std::function<double(double, double)> value;
    /// x1 at which the kink crosses the line x2 = const, if any.
    std::function<std::optional<double>(double)> kink_x1;
    /// x2 at which the kink crosses the line x1 = const, if any.
    std::function<std::optional<double>(double)> kink_x2;
};

/// The transformed basket-put payoff with its kink curve sum_i omega_i e^{sigma_i x_i / gamma} = 1.
[[nodiscard]] PiecewiseSmooth2D basket_put_payoff(const MarketParams& p);

struct SmoothingOptions {
    std::size_t gauss_nodes = 12;
    /// If positive, every quadrature is repeated with twice the nodes and a
    /// difference above this tolerance raises NumericalError.
    double verify_tolerance = 1e-10;
    /// Band half-width in multiples of h; must be at least the kernel support.
    double band_width = kPhi4Support;
};

/// Evaluates (1/h^2) int int phi4(x/h) phi4(y/h) f(x1 - x, x2 - y) dx dy by
/// Gauss-Legendre panels aligned with the kernel knots and the kink of f.
class SmoothingKernel {
public:
    explicit SmoothingKernel(const SmoothingOptions& opts = {});

    [[nodiscard]] double convolve(const PiecewiseSmooth2D& f, double x1, double x2, double h) const;

private:
    [[nodiscard]] double convolve_with(const QuadratureRule& gl, const PiecewiseSmooth2D& f,
                                       double x1, double x2, double h) const;

    SmoothingOptions opts_;
    QuadratureRule rule_;
    QuadratureRule check_rule_;
};

/// Convolution at every node of the grid.
[[nodiscard]] GridField smooth_everywhere(const PiecewiseSmooth2D& f, const Grid2& grid,
                                          const SmoothingOptions& opts = {});

/// Flat indices of the nodes whose max-norm box of half-width `width` h meets the
/// payoff kink. Throws ConfigError when width < 3.
[[nodiscard]] std::vector<std::size_t> kink_band(const Grid2& grid, const MarketParams& p,
                                                 double width);

/// The smoothed basket-put initial condition.
///
/// Quadrature runs only on kink_band nodes. Elsewhere the kernel sees a single
/// smooth branch of the payoff and the convolution is evaluated in closed form:
/// zero on the out-of-the-money side, 1 - sum_i omega_i M(a_i h) e^{a_i x_i} on the
/// in-the-money side, with a_i = sigma_i / gamma and M the exponential moment of phi4.
[[nodiscard]] GridField smooth_initial_condition(const Grid2& grid, const MarketParams& p,
                                                 const SmoothingOptions& opts = {});

/// The unsmoothed transformed payoff sampled on the grid.
[[nodiscard]] GridField payoff_field(const Grid2& grid, const MarketParams& p);

}  // namespace basket
