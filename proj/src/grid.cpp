#include "basket/grid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "basket/errors.hpp"

namespace basket {

namespace {

constexpr double kSpacingRelTol = 1e-12;

}  // namespace

Grid2::Grid2(const Bounds& bounds, std::size_t n1, std::size_t n2)
    : bounds_(bounds), n1_(n1), n2_(n2), h_(0.0) {
    if (n1 < kMinSteps || n2 < kMinSteps) {
        throw ConfigError("grid: N1 and N2 must be at least 4");
    }
    const double w1 = bounds.x1_max - bounds.x1_min;
    const double w2 = bounds.x2_max - bounds.x2_min;
    if (!(w1 > 0.0) || !(w2 > 0.0) || !std::isfinite(w1) || !std::isfinite(w2)) {
        throw ConfigError("grid: bounds must satisfy x_min < x_max");
    }
    const double h1 = w1 / static_cast<double>(n1);
    const double h2 = w2 / static_cast<double>(n2);
    if (std::abs(h1 - h2) > kSpacingRelTol * std::max(h1, h2)) {
        std::ostringstream os;
        os.precision(17);
        os << "grid: spacing mismatch, h1 = " << h1 << " but h2 = " << h2;
        throw ConfigError(os.str());
    }
    h_ = h1;
}

Grid2 build_grid(const Bounds& bounds, std::size_t n1, std::size_t n2) {
    return Grid2(bounds, n1, n2);
}

NodeClass classify(const Grid2& grid, std::size_t i1, std::size_t i2) {
    if (i1 > grid.n1() || i2 > grid.n2()) {
        throw DomainError("classify: node index outside grid");
    }
    const bool lo1 = i1 == 0, hi1 = i1 == grid.n1();
    const bool lo2 = i2 == 0, hi2 = i2 == grid.n2();
    if ((lo1 || hi1) && (lo2 || hi2)) {
        if (lo1) return CornerNode{lo2 ? CornerId::LowerLower : CornerId::LowerUpper};
        return CornerNode{lo2 ? CornerId::UpperLower : CornerId::UpperUpper};
    }
    if (lo1) return EdgeNode{Side::X1Lower};
    if (hi1) return EdgeNode{Side::X1Upper};
    if (lo2) return EdgeNode{Side::X2Lower};
    if (hi2) return EdgeNode{Side::X2Upper};
    return InteriorNode{};
}

GridField::GridField(const Grid2& grid, double fill)
    : grid_(grid), values_(grid.node_count(), fill) {}

GridField::GridField(const Grid2& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.node_count()) {
        throw ConfigError("GridField: value count does not match grid");
    }
}

bool GridField::all_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double GridField::max_abs() const noexcept {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

GridField restrict_to(const GridField& fine, const Grid2& coarse) {
    const Grid2& fg = fine.grid();
    if (!(fg.bounds() == coarse.bounds()) || fg.n1() % coarse.n1() != 0 ||
        fg.n2() % coarse.n2() != 0 || fg.n1() / coarse.n1() != fg.n2() / coarse.n2()) {
        throw ConfigError("restrict: grids are not nested");
    }
    const std::size_t m = fg.n1() / coarse.n1();
    GridField out(coarse);
    for (std::size_t i1 = 0; i1 <= coarse.n1(); ++i1)
        for (std::size_t i2 = 0; i2 <= coarse.n2(); ++i2) out.at(i1, i2) = fine.at(m * i1, m * i2);
    return out;
}

void write_csv(std::ostream& os, const GridField& field) {
    const Grid2& g = field.grid();
    os << "x1,x2,value\n";
    char buf[96];
    for (std::size_t i1 = 0; i1 <= g.n1(); ++i1) {
        for (std::size_t i2 = 0; i2 <= g.n2(); ++i2) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", g.x1(i1), g.x2(i2),
                          field.at(i1, i2));
            os << buf;
        }
    }
}

namespace {

// First index of the 4-point stencil around t (in units of h from the lower bound),
// clamped so the stencil stays on the grid.
std::size_t stencil_start(double t, std::size_t n) {
    const double base = std::floor(t) - 1.0;
    return static_cast<std::size_t>(std::clamp(base, 0.0, static_cast<double>(n - 3)));
}

std::array<double, 4> lagrange_weights(double t, double start) {
    std::array<double, 4> w{};
    for (int j = 0; j < 4; ++j) {
        double num = 1.0, den = 1.0;
        for (int m = 0; m < 4; ++m) {
            if (m == j) continue;
            num *= t - (start + m);
            den *= static_cast<double>(j - m);
        }
        w[j] = num / den;
    }
    return w;
}

}  // namespace

double interpolate_bicubic(const GridField& field, double x1, double x2) {
    const Grid2& g = field.grid();
    const Bounds& b = g.bounds();
    if (!(x1 >= b.x1_min && x1 <= b.x1_max && x2 >= b.x2_min && x2 <= b.x2_max)) {
        throw DomainError("interpolate_bicubic: point outside grid");
    }
    const double t1 = (x1 - b.x1_min) / g.h();
    const double t2 = (x2 - b.x2_min) / g.h();
    const std::size_t s1 = stencil_start(t1, g.n1());
    const std::size_t s2 = stencil_start(t2, g.n2());
    const auto w1 = lagrange_weights(t1, static_cast<double>(s1));
    const auto w2 = lagrange_weights(t2, static_cast<double>(s2));
    double acc = 0.0;
    for (std::size_t a = 0; a < 4; ++a) {
        double row = 0.0;
        for (std::size_t c = 0; c < 4; ++c) row += w2[c] * field.at(s1 + a, s2 + c);
        acc += w1[a] * row;
    }
    return acc;
}

}  // namespace basket
