#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string_view>

#include "basket/grid.hpp"
#include "basket/model.hpp"

namespace basket {

/// 3x3 compact-stencil coefficients, indexed [d1 + 1][d2 + 1] for offsets d in {-1, 0, 1}^2.
using Stencil3 = std::array<std::array<double, 3>, 3>;

enum class Scheme { Hoc, SecondOrder };

[[nodiscard]] std::string_view to_string(Scheme s) noexcept;
/// Accepts "hoc" and "second_order"; throws ConfigError otherwise.
[[nodiscard]] Scheme parse_scheme(std::string_view s);

/// Spatial (k_hat) and mass (m_hat) coefficients of the semi-discrete scheme
///   sum_d m_hat(d) dU/dtau(i + d) + sum_d k_hat(d) U(i + d) = 0.
struct StencilPair {
    Stencil3 k_hat{};
    Stencil3 m_hat{};
    double h = 0.0;

    [[nodiscard]] double k(int d1, int d2) const noexcept { return k_hat[d1 + 1][d2 + 1]; }
    [[nodiscard]] double m(int d1, int d2) const noexcept { return m_hat[d1 + 1][d2 + 1]; }
};

[[nodiscard]] double stencil_sum(const Stencil3& s) noexcept;
[[nodiscard]] double stencil_max_abs(const Stencil3& s) noexcept;
[[nodiscard]] Stencil3 transpose(const Stencil3& s) noexcept;

/// Fourth-order compact coefficients for the transformed two-asset PDE.
///
/// With a = gamma^2/h^2 the leading part is the compact nine-point Laplacian
/// (5a/3 centre, -a/3 edges, -a/12 corners) scaled by 1/2 and the mass matrix
/// is (2/3 centre, 1/12 edges). Convection and correlation enter both arrays
/// so that the truncation error is O(h^4). Corner signs follow the rule
/// "upper sign for the i1 + 1 column".
[[nodiscard]] StencilPair hoc_coefficients(const MarketParams& p, double h);

/// Standard central differences: 5-point Laplacian, 4-point cross term,
/// central first derivatives, identity mass.
[[nodiscard]] StencilPair second_order_coefficients(const MarketParams& p, double h);

[[nodiscard]] StencilPair make_stencil(Scheme scheme, const MarketParams& p, double h);

enum class StencilPart { K, M };

/// sum_d coeff(d) f(i1 + d1, i2 + d2) at an interior node; throws DomainError otherwise.
[[nodiscard]] double apply_stencil(const StencilPair& s, StencilPart which, const GridField& f,
                                   std::size_t i1, std::size_t i2);

/// Human-readable dump of both arrays (rows d1 = -1, 0, 1; columns d2 = -1, 0, 1),
/// 17 significant digits.
void write_stencil(std::ostream& os, const StencilPair& s);

}  // namespace basket
