#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "basket/boundary.hpp"
#include "basket/grid.hpp"
#include "basket/model.hpp"
#include "basket/smoothing.hpp"
#include "basket/stencil.hpp"

namespace basket {

/// Constant-coefficient nine-point operator on a grid: the same 3x3 stencil on every
/// interior row, identity rows on the boundary.
class StencilOperator {
public:
    StencilOperator(const Grid2& grid, const Stencil3& interior);

    [[nodiscard]] const Grid2& grid() const noexcept { return grid_; }
    [[nodiscard]] const Stencil3& interior() const noexcept { return coeff_; }
    [[nodiscard]] std::size_t size() const noexcept { return grid_.node_count(); }

    /// Diagonal entry of row (i1, i2).
    [[nodiscard]] double diagonal(std::size_t i1, std::size_t i2) const noexcept;
    /// Entry of row (i1, i2) at column offset (d1, d2); zero off the row's pattern.
    [[nodiscard]] double entry(std::size_t i1, std::size_t i2, int d1, int d2) const noexcept;
    /// Number of structurally nonzero entries in row (i1, i2).
    [[nodiscard]] std::size_t row_nonzeros(std::size_t i1, std::size_t i2) const noexcept;

    /// y = A x.
    void multiply(std::span<const double> x, std::span<double> y) const noexcept;
    /// y = A x on interior rows only; boundary entries of y are left untouched.
    void multiply_interior(std::span<const double> x, std::span<double> y) const noexcept;

    friend bool operator==(const StencilOperator&, const StencilOperator&) = default;

private:
    Grid2 grid_;
    Stencil3 coeff_;
};

/// Crank-Nicolson system [M + (dtau/2) K] U^{k+1} = [M - (dtau/2) K] U^k + dtau g.
struct DiscreteSystem {
    StencilOperator lhs;
    StencilOperator rhs_op;
    double dtau;
    std::size_t n_steps;
};

/// Throws ConfigError if the stencil was built for a different spacing or dtau < 0.
[[nodiscard]] DiscreteSystem assemble(const Grid2& grid, const StencilPair& stencil, double dtau,
                                      std::size_t n_steps = 0);

struct LinearSolverOptions {
    double tolerance = 1e-13;
    std::size_t max_iterations = 500;
};

struct LinearSolveStats {
    std::size_t iterations = 0;
    double relative_residual = 0.0;
};

/// Jacobi-preconditioned BiCGStab with workspace reused across solves of one operator.
class BiCGStab {
public:
    explicit BiCGStab(const StencilOperator& A);

    LinearSolveStats solve(std::span<const double> b, std::span<double> x,
                           const LinearSolverOptions& opts);

private:
    void precondition(std::span<const double> in, std::span<double> out) const noexcept;

    const StencilOperator& A_;
    double inv_center_;
    std::vector<double> r_, r0_, p_, v_, s_, t_, y_, z_;
};

/// Jacobi-preconditioned BiCGStab for A x = b; x holds the initial guess on entry.
/// Stops when ||A x - b||_2 <= tol ||b||_2. Throws NumericalError on breakdown or
/// when max_iterations is exceeded, reporting the last residual.
LinearSolveStats solve_linear(const StencilOperator& A, std::span<const double> b,
                              std::span<double> x, const LinearSolverOptions& opts = {});

/// One Crank-Nicolson step. Boundary nodes of `boundary_next` supply the Dirichlet
/// values at the new time level; its interior is ignored. `forcing`, when given,
/// is the source term g on interior nodes.
[[nodiscard]] GridField step(const DiscreteSystem& sys, const GridField& current,
                             const GridField& boundary_next,
                             const LinearSolverOptions& opts = {},
                             const GridField* forcing = nullptr);

using StepObserver = std::function<void(std::size_t k, double tau, const GridField& U)>;

struct MarchStats {
    std::size_t steps = 0;
    std::size_t linear_iterations = 0;
    double max_relative_residual = 0.0;
};

/// Marches `initial` through sys.n_steps steps of size sys.dtau. The observer, if set,
/// sees U^0 and every later level.
[[nodiscard]] GridField march(const DiscreteSystem& sys, GridField initial,
                              const DirichletData& boundary, const LinearSolverOptions& opts = {},
                              const StepObserver& observer = {}, MarchStats* stats = nullptr,
                              const GridField* forcing = nullptr);

struct SolveConfig {
    Scheme scheme = Scheme::Hoc;
    /// dtau / h^2
    double mesh_ratio = 0.4;
    LinearSolverOptions linear;
    bool smoothing = true;
    SmoothingOptions smoothing_options;
    CornerRule corners = CornerRule::ClosedForm;

    void validate() const;
};

/// N_tau = ceil(T / (mesh_ratio h^2)), so that dtau = T / N_tau <= mesh_ratio h^2.
[[nodiscard]] std::size_t time_steps(double T, double mesh_ratio, double h);

/// Initial field for the basket put, smoothed or raw depending on cfg.
[[nodiscard]] GridField basket_initial_field(const MarketParams& p, const Grid2& grid,
                                             const SolveConfig& cfg);

/// Transformed basket-put field at tau = T.
[[nodiscard]] GridField run(const MarketParams& p, const Grid2& grid, const SolveConfig& cfg,
                            const StepObserver& observer = {}, MarchStats* stats = nullptr);

/// Option price at spots (S1, S2) read off a final transformed field by bicubic interpolation.
[[nodiscard]] double price_at(const GridField& final_field, const MarketParams& p, double S1,
                              double S2);

}  // namespace basket
