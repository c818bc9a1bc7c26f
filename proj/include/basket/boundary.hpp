#pragma once

#include <array>
#include <vector>

#include "basket/grid.hpp"
#include "basket/model.hpp"

namespace basket {

/// Standard normal CDF via erfc; relative accuracy near machine precision in both tails.
[[nodiscard]] double normal_cdf(double x) noexcept;

/// Closed-form European put under one-dimensional Black-Scholes.
/// tau = 0 gives the payoff, S = 0 the discounted strike.
[[nodiscard]] double bs1d_put(double S, double strike, double r, double sigma, double tau) noexcept;

/// Source of Dirichlet values for the boundary nodes of a grid.
class DirichletData {
public:
    virtual ~DirichletData() = default;
    /// Overwrites every boundary node of `field` with its value at time tau.
    virtual void apply(double tau, GridField& field) const = 0;
};

/// Put value from a one-asset reduction: one asset is replaced by its forward
/// S e^{r tau} and the put on the remaining asset, with the strike lowered accordingly,
/// is priced in closed form. The larger of the two reductions is returned. Exact as
/// either asset becomes negligible, a lower bound for independent assets, and equal
/// to the payoff at tau = 0.
[[nodiscard]] double reduced_put(double S1, double S2, double tau, const MarketParams& p) noexcept;

/// Transformed boundary values u = e^{r tau} reduced_put / K on one edge, all N+1 nodes
/// ordered by the free index. At tau = 0 this is the payoff.
[[nodiscard]] std::vector<double> edge_values(Side side, double tau, const Grid2& grid,
                                              const MarketParams& p);

/// The four corner values of the initial field, ordered as CornerId.
[[nodiscard]] std::array<double, 4> corner_values(const GridField& initial);

/// Basket-put boundary: reduced_put on the boundary nodes for tau > 0 and the initial
/// field itself at tau = 0.
enum class CornerRule {
    ClosedForm,  ///< corners take reduced_put like the rest of the boundary
    Frozen,      ///< corners keep their initial values for all tau
};

class BasketBoundary final : public DirichletData {
public:
    BasketBoundary(const MarketParams& p, GridField initial,
                   CornerRule corners = CornerRule::ClosedForm);

    void apply(double tau, GridField& field) const override;

    [[nodiscard]] const GridField& initial() const noexcept { return initial_; }

private:
    MarketParams params_;
    GridField initial_;
    CornerRule rule_;
    std::array<double, 4> corners_;
};

/// Dirichlet data sampled from an exact solution u(x1, x2, tau).
template <class Exact>
class ExactDirichlet final : public DirichletData {
public:
    explicit ExactDirichlet(Exact exact) : exact_(std::move(exact)) {}

    void apply(double tau, GridField& field) const override {
        const Grid2& g = field.grid();
        for (std::size_t i1 = 0; i1 <= g.n1(); ++i1) {
            if (i1 == 0 || i1 == g.n1()) {
                for (std::size_t i2 = 0; i2 <= g.n2(); ++i2)
                    field.at(i1, i2) = exact_(g.x1(i1), g.x2(i2), tau);
            } else {
                field.at(i1, 0) = exact_(g.x1(i1), g.x2(0), tau);
                field.at(i1, g.n2()) = exact_(g.x1(i1), g.x2(g.n2()), tau);
            }
        }
    }

private:
    Exact exact_;
};

}  // namespace basket
