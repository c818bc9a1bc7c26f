#pragma once

#include <cstddef>
#include <vector>

namespace basket {

/// Nodes and weights of an interpolatory quadrature rule.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    [[nodiscard]] std::size_t size() const noexcept { return nodes.size(); }
};

/// n-point Gauss-Legendre rule on [-1, 1].
[[nodiscard]] QuadratureRule gauss_legendre(std::size_t n);

/// n-point Gauss-Hermite rule for the standard normal density: sum w_i f(z_i) ~ E[f(Z)].
[[nodiscard]] QuadratureRule gauss_hermite_normal(std::size_t n);

/// Integrates f over [a, b] with the given Gauss-Legendre rule.
template <class F>
[[nodiscard]] double integrate(const QuadratureRule& gl, double a, double b, F&& f) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (std::size_t i = 0; i < gl.size(); ++i) acc += gl.weights[i] * f(mid + half * gl.nodes[i]);
    return half * acc;
}

}  // namespace basket
