#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

namespace basket {

/// Rectangle [x1_min, x1_max] x [x2_min, x2_max] in transformed coordinates.
struct Bounds {
    double x1_min = -2.0;
    double x1_max = 2.0;
    double x2_min = -2.0;
    double x2_max = 2.0;

    friend bool operator==(const Bounds&, const Bounds&) = default;
};

/// Uniform tensor grid with a single spacing h in both directions.
///
/// Node (i1, i2) sits at (x1_min + i1 h, x2_min + i2 h), 0 <= ik <= Nk.
class Grid2 {
public:
    static constexpr std::size_t kMinSteps = 4;

    /// Throws ConfigError when the two directions disagree on h or Nk < 4.
    Grid2(const Bounds& bounds, std::size_t n1, std::size_t n2);

    [[nodiscard]] const Bounds& bounds() const noexcept { return bounds_; }
    [[nodiscard]] std::size_t n1() const noexcept { return n1_; }
    [[nodiscard]] std::size_t n2() const noexcept { return n2_; }
    [[nodiscard]] double h() const noexcept { return h_; }

    [[nodiscard]] double x1(std::size_t i1) const noexcept {
        return i1 == n1_ ? bounds_.x1_max : bounds_.x1_min + static_cast<double>(i1) * h_;
    }
    [[nodiscard]] double x2(std::size_t i2) const noexcept {
        return i2 == n2_ ? bounds_.x2_max : bounds_.x2_min + static_cast<double>(i2) * h_;
    }

    [[nodiscard]] std::size_t node_count() const noexcept { return (n1_ + 1) * (n2_ + 1); }
    /// Row-major: i2 runs fastest.
    [[nodiscard]] std::size_t index(std::size_t i1, std::size_t i2) const noexcept {
        return i1 * (n2_ + 1) + i2;
    }
    [[nodiscard]] bool is_boundary(std::size_t i1, std::size_t i2) const noexcept {
        return i1 == 0 || i2 == 0 || i1 == n1_ || i2 == n2_;
    }

    friend bool operator==(const Grid2&, const Grid2&) = default;

private:
    Bounds bounds_;
    std::size_t n1_;
    std::size_t n2_;
    double h_;
};

[[nodiscard]] Grid2 build_grid(const Bounds& bounds, std::size_t n1, std::size_t n2);

enum class Side { X1Lower, X1Upper, X2Lower, X2Upper };
enum class CornerId { LowerLower, LowerUpper, UpperLower, UpperUpper };  // (x1, x2)

struct InteriorNode {};
struct EdgeNode {
    Side side;
};
struct CornerNode {
    CornerId corner;
};
using NodeClass = std::variant<InteriorNode, EdgeNode, CornerNode>;

/// Throws DomainError for indices outside the grid.
[[nodiscard]] NodeClass classify(const Grid2& grid, std::size_t i1, std::size_t i2);

/// Scalar values on all nodes of a grid, row-major by (i1, i2).
class GridField {
public:
    explicit GridField(const Grid2& grid, double fill = 0.0);
    /// Throws ConfigError if the value count does not match the grid.
    GridField(const Grid2& grid, std::vector<double> values);

    template <class F>
    [[nodiscard]] static GridField sample(const Grid2& grid, F&& f) {
        GridField out(grid);
        for (std::size_t i1 = 0; i1 <= grid.n1(); ++i1)
            for (std::size_t i2 = 0; i2 <= grid.n2(); ++i2)
                out.at(i1, i2) = f(grid.x1(i1), grid.x2(i2));
        return out;
    }

    [[nodiscard]] const Grid2& grid() const noexcept { return grid_; }
    [[nodiscard]] double& at(std::size_t i1, std::size_t i2) noexcept {
        return values_[grid_.index(i1, i2)];
    }
    [[nodiscard]] double at(std::size_t i1, std::size_t i2) const noexcept {
        return values_[grid_.index(i1, i2)];
    }
    [[nodiscard]] std::span<double> values() noexcept { return values_; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }

    [[nodiscard]] bool all_finite() const noexcept;
    [[nodiscard]] double max_abs() const noexcept;

private:
    Grid2 grid_;
    std::vector<double> values_;
};

/// Injection from a nested finer grid: coarse node (i1, i2) takes fine node (m i1, m i2).
/// Throws ConfigError unless the bounds agree and N_fine = m N_coarse in both directions.
[[nodiscard]] GridField restrict_to(const GridField& fine, const Grid2& coarse);

/// Writes `x1,x2,value` rows with 17 significant digits.
void write_csv(std::ostream& os, const GridField& field);

/// Tensor-product cubic Lagrange interpolation from the 4x4 node block around (x1, x2).
/// Throws DomainError outside the grid.
[[nodiscard]] double interpolate_bicubic(const GridField& field, double x1, double x2);

}  // namespace basket
