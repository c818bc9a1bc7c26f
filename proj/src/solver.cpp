#include "basket/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "basket/errors.hpp"

namespace basket {

StencilOperator::StencilOperator(const Grid2& grid, const Stencil3& interior)
    : grid_(grid), coeff_(interior) {}

double StencilOperator::diagonal(std::size_t i1, std::size_t i2) const noexcept {
    return grid_.is_boundary(i1, i2) ? 1.0 : coeff_[1][1];
}

double StencilOperator::entry(std::size_t i1, std::size_t i2, int d1, int d2) const noexcept {
    if (grid_.is_boundary(i1, i2)) return (d1 == 0 && d2 == 0) ? 1.0 : 0.0;
    if (d1 < -1 || d1 > 1 || d2 < -1 || d2 > 1) return 0.0;
    return coeff_[d1 + 1][d2 + 1];
}

std::size_t StencilOperator::row_nonzeros(std::size_t i1, std::size_t i2) const noexcept {
    if (grid_.is_boundary(i1, i2)) return 1;
    std::size_t n = 0;
    for (const auto& row : coeff_)
        for (double c : row) n += c != 0.0;
    return n;
}

void StencilOperator::multiply_interior(std::span<const double> x,
                                        std::span<double> y) const noexcept {
    const std::size_t n1 = grid_.n1(), n2 = grid_.n2();
    const std::size_t stride = n2 + 1;
    const auto& c = coeff_;
    for (std::size_t i1 = 1; i1 < n1; ++i1) {
        const double* xm = x.data() + (i1 - 1) * stride;
        const double* x0 = x.data() + i1 * stride;
        const double* xp = x.data() + (i1 + 1) * stride;
        double* yr = y.data() + i1 * stride;
        for (std::size_t i2 = 1; i2 < n2; ++i2) {
            yr[i2] = c[0][0] * xm[i2 - 1] + c[0][1] * xm[i2] + c[0][2] * xm[i2 + 1] +
                     c[1][0] * x0[i2 - 1] + c[1][1] * x0[i2] + c[1][2] * x0[i2 + 1] +
                     c[2][0] * xp[i2 - 1] + c[2][1] * xp[i2] + c[2][2] * xp[i2 + 1];
        }
    }
}

void StencilOperator::multiply(std::span<const double> x, std::span<double> y) const noexcept {
    const std::size_t n1 = grid_.n1(), n2 = grid_.n2();
    const std::size_t stride = n2 + 1;
    for (std::size_t i2 = 0; i2 <= n2; ++i2) {
        y[i2] = x[i2];
        y[n1 * stride + i2] = x[n1 * stride + i2];
    }
    for (std::size_t i1 = 1; i1 < n1; ++i1) {
        y[i1 * stride] = x[i1 * stride];
        y[i1 * stride + n2] = x[i1 * stride + n2];
    }
    multiply_interior(x, y);
}

DiscreteSystem assemble(const Grid2& grid, const StencilPair& stencil, double dtau,
                        std::size_t n_steps) {
    if (std::abs(stencil.h - grid.h()) > 1e-12 * grid.h()) {
        throw ConfigError("assemble: stencil was built for a different h");
    }
    if (!(dtau >= 0.0)) throw ConfigError("assemble: dtau must be >= 0");
    Stencil3 lhs{}, rhs{};
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            lhs[a][b] = stencil.m_hat[a][b] + 0.5 * dtau * stencil.k_hat[a][b];
            rhs[a][b] = stencil.m_hat[a][b] - 0.5 * dtau * stencil.k_hat[a][b];
        }
    }
    return {StencilOperator(grid, lhs), StencilOperator(grid, rhs), dtau, n_steps};
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) noexcept {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm2(std::span<const double> a) noexcept { return std::sqrt(dot(a, a)); }

[[noreturn]] void fail(const char* what, std::size_t it, double rel) {
    std::ostringstream os;
    os.precision(6);
    os << "BiCGStab " << what << " after " << it << " iterations, relative residual " << rel;
    throw NumericalError(os.str());
}

}  // namespace

BiCGStab::BiCGStab(const StencilOperator& A)
    : A_(A),
      inv_center_(1.0 / A.interior()[1][1]),
      r_(A.size()),
      r0_(A.size()),
      p_(A.size()),
      v_(A.size()),
      s_(A.size()),
      t_(A.size()),
      y_(A.size()),
      z_(A.size()) {}

void BiCGStab::precondition(std::span<const double> in, std::span<double> out) const noexcept {
    const Grid2& g = A_.grid();
    const std::size_t n1 = g.n1(), n2 = g.n2(), stride = n2 + 1;
    std::copy(in.begin(), in.begin() + stride, out.begin());
    std::copy(in.end() - stride, in.end(), out.end() - stride);
    for (std::size_t i1 = 1; i1 < n1; ++i1) {
        const std::size_t row = i1 * stride;
        out[row] = in[row];
        for (std::size_t i2 = 1; i2 < n2; ++i2) out[row + i2] = inv_center_ * in[row + i2];
        out[row + n2] = in[row + n2];
    }
}

LinearSolveStats BiCGStab::solve(std::span<const double> b, std::span<double> x,
                                 const LinearSolverOptions& opts) {
    const std::size_t n = A_.size();
    const double bnorm = norm2(b);
    if (bnorm == 0.0) {
        std::fill(x.begin(), x.end(), 0.0);
        return {0, 0.0};
    }
    const double target = opts.tolerance * bnorm;
    auto &r = r_, &r0 = r0_, &p = p_, &v = v_, &s = s_, &t = t_, &y = y_, &z = z_;

    A_.multiply(x, r);
    double rr0 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        r[i] = b[i] - r[i];
        rr0 += r[i] * r[i];
    }
    double rnorm = std::sqrt(rr0);
    if (rnorm <= target) return {0, rnorm / bnorm};
    std::copy(r.begin(), r.end(), r0.begin());

    double rho = rr0, alpha = 1.0, omega = 1.0;
    for (std::size_t it = 1; it <= opts.max_iterations; ++it) {
        if (it == 1) {
            std::copy(r.begin(), r.end(), p.begin());
        } else {
            const double rho_new = dot(r0, r);
            if (rho_new == 0.0 || !std::isfinite(rho_new)) {
                fail("breakdown (rho)", it, rnorm / bnorm);
            }
            const double beta = (rho_new / rho) * (alpha / omega);
            rho = rho_new;
            for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
        }
        precondition(p, y);
        A_.multiply(y, v);
        const double r0v = dot(r0, v);
        if (r0v == 0.0 || !std::isfinite(r0v)) fail("breakdown (alpha)", it, rnorm / bnorm);
        alpha = rho / r0v;
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = r[i] - alpha * v[i];
            ss += s[i] * s[i];
        }
        const double snorm = std::sqrt(ss);
        if (snorm <= target) {
            for (std::size_t i = 0; i < n; ++i) x[i] += alpha * y[i];
            return {it, snorm / bnorm};
        }
        precondition(s, z);
        A_.multiply(z, t);
        double tt = 0.0, ts = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            tt += t[i] * t[i];
            ts += t[i] * s[i];
        }
        if (tt == 0.0) fail("breakdown (omega)", it, snorm / bnorm);
        omega = ts / tt;
        double rr = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * y[i] + omega * z[i];
            r[i] = s[i] - omega * t[i];
            rr += r[i] * r[i];
        }
        rnorm = std::sqrt(rr);
        if (!std::isfinite(rnorm)) fail("diverged", it, rnorm);
        if (rnorm <= target) return {it, rnorm / bnorm};
        if (omega == 0.0) fail("breakdown (omega = 0)", it, rnorm / bnorm);
    }
    fail("exceeded max iterations", opts.max_iterations, rnorm / bnorm);
}

LinearSolveStats solve_linear(const StencilOperator& A, std::span<const double> b,
                              std::span<double> x, const LinearSolverOptions& opts) {
    BiCGStab solver(A);
    return solver.solve(b, x, opts);
}

namespace {

template <class F>
void for_each_boundary(const Grid2& g, F&& f) {
    const std::size_t n1 = g.n1(), n2 = g.n2();
    for (std::size_t i2 = 0; i2 <= n2; ++i2) {
        f(g.index(0, i2));
        f(g.index(n1, i2));
    }
    for (std::size_t i1 = 1; i1 < n1; ++i1) {
        f(g.index(i1, 0));
        f(g.index(i1, n2));
    }
}

// Reusable workspace for repeated steps on one system.
class Stepper {
public:
    explicit Stepper(const DiscreteSystem& sys)
        : sys_(sys), solver_(sys.lhs), rhs_(sys.lhs.size()) {}

    LinearSolveStats advance(const GridField& current, const GridField& boundary_next,
                             const GridField* guess, GridField& next,
                             const LinearSolverOptions& opts, const GridField* forcing) {
        const Grid2& g = current.grid();
        auto cur = current.values();
        sys_.rhs_op.multiply_interior(cur, rhs_);
        if (forcing != nullptr) {
            auto f = forcing->values();
            for (std::size_t i1 = 1; i1 < g.n1(); ++i1)
                for (std::size_t i2 = 1; i2 < g.n2(); ++i2) {
                    const std::size_t k = g.index(i1, i2);
                    rhs_[k] += sys_.dtau * f[k];
                }
        }
        // `next` may alias `boundary_next`; read the Dirichlet values before overwriting.
        const auto bnd = boundary_next.values();
        for_each_boundary(g, [&](std::size_t k) { rhs_[k] = bnd[k]; });
        auto out = next.values();
        const auto src = guess != nullptr ? guess->values() : cur;
        std::copy(src.begin(), src.end(), out.begin());
        for_each_boundary(g, [&](std::size_t k) { out[k] = rhs_[k]; });
        return solver_.solve(rhs_, out, opts);
    }

private:
    const DiscreteSystem& sys_;
    BiCGStab solver_;
    std::vector<double> rhs_;
};

}  // namespace

GridField step(const DiscreteSystem& sys, const GridField& current, const GridField& boundary_next,
               const LinearSolverOptions& opts, const GridField* forcing) {
    if (!current.all_finite()) throw NumericalError("step: current field is not finite");
    Stepper stepper(sys);
    GridField next(current.grid());
    stepper.advance(current, boundary_next, nullptr, next, opts, forcing);
    return next;
}

GridField march(const DiscreteSystem& sys, GridField initial, const DirichletData& boundary,
                const LinearSolverOptions& opts, const StepObserver& observer, MarchStats* stats,
                const GridField* forcing) {
    const Grid2 grid = initial.grid();
    if (!initial.all_finite()) throw NumericalError("march: initial field is not finite");
    MarchStats local;
    if (observer) observer(0, 0.0, initial);

    Stepper stepper(sys);
    GridField older = initial;
    GridField previous = initial;
    GridField current = std::move(initial);
    GridField next(grid);
    GridField guess(grid);
    for (std::size_t k = 0; k < sys.n_steps; ++k) {
        const double tau_next = static_cast<double>(k + 1) * sys.dtau;
        boundary.apply(tau_next, next);
        // Polynomial extrapolation in time as the starting iterate.
        const GridField* start = nullptr;
        if (k > 0) {
            auto gv = guess.values();
            auto cv = current.values();
            auto pv = previous.values();
            if (k == 1) {
                for (std::size_t i = 0; i < gv.size(); ++i) gv[i] = 2.0 * cv[i] - pv[i];
            } else {
                auto ov = older.values();
                for (std::size_t i = 0; i < gv.size(); ++i) {
                    gv[i] = 3.0 * (cv[i] - pv[i]) + ov[i];
                }
            }
            start = &guess;
        }
        const LinearSolveStats st = stepper.advance(current, next, start, next, opts, forcing);
        local.linear_iterations += st.iterations;
        local.max_relative_residual = std::max(local.max_relative_residual, st.relative_residual);
        std::swap(older, previous);
        std::swap(previous, current);
        std::swap(current, next);
        ++local.steps;
        if (observer) observer(k + 1, tau_next, current);
    }
    if (stats != nullptr) *stats = local;
    return current;
}

void SolveConfig::validate() const {
    if (!(mesh_ratio > 0.0) || !std::isfinite(mesh_ratio)) {
        throw ConfigError("mesh_ratio must be > 0");
    }
    if (!(linear.tolerance > 0.0)) throw ConfigError("tolerance must be > 0");
    if (linear.max_iterations == 0) throw ConfigError("max_iterations must be > 0");
}

std::size_t time_steps(double T, double mesh_ratio, double h) {
    const double n = std::ceil(T / (mesh_ratio * h * h) * (1.0 - 1e-14));
    return std::max<std::size_t>(1, static_cast<std::size_t>(n));
}

GridField basket_initial_field(const MarketParams& p, const Grid2& grid, const SolveConfig& cfg) {
    return cfg.smoothing ? smooth_initial_condition(grid, p, cfg.smoothing_options)
                         : payoff_field(grid, p);
}

GridField run(const MarketParams& p, const Grid2& grid, const SolveConfig& cfg,
              const StepObserver& observer, MarchStats* stats) {
    p.validate();
    cfg.validate();
    const std::size_t n_steps = time_steps(p.T, cfg.mesh_ratio, grid.h());
    const double dtau = p.T / static_cast<double>(n_steps);
    const DiscreteSystem sys = assemble(grid, make_stencil(cfg.scheme, p, grid.h()), dtau, n_steps);
    GridField initial = basket_initial_field(p, grid, cfg);
    const BasketBoundary boundary(p, initial, cfg.corners);
    return march(sys, std::move(initial), boundary, cfg.linear, observer, stats);
}

double price_at(const GridField& final_field, const MarketParams& p, double S1, double S2) {
    const Point2 x = to_log_coords({S1, S2}, p);
    return undo_value_transform(interpolate_bicubic(final_field, x[0], x[1]), p.T, p);
}

}  // namespace basket
