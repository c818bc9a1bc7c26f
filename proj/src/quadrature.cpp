#include "basket/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "basket/errors.hpp"

namespace basket {

QuadratureRule gauss_legendre(std::size_t n) {
    if (n == 0) throw ConfigError("gauss_legendre: n must be positive");
    QuadratureRule rule{std::vector<double>(n), std::vector<double>(n)};
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (std::size_t j = 1; j <= n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / static_cast<double>(j);
            }
            dp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        // Recompute the derivative at the converged root.
        double p0 = 1.0, p1 = 0.0;
        for (std::size_t j = 1; j <= n; ++j) {
            const double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / static_cast<double>(j);
        }
        dp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.nodes[i] = -z;
        rule.nodes[n - 1 - i] = z;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

namespace {

// Eigenvalues of the symmetric tridiagonal matrix with zero diagonal and off-diagonal e
// (e[0] unused on entry), by the implicit QL iteration with Wilkinson shifts.
std::vector<double> tridiagonal_eigenvalues(std::vector<double> e) {
    const std::size_t n = e.size();
    std::vector<double> d(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
            }
            if (m != l) {
                if (++iter > 60) throw NumericalError("gauss_hermite_normal: QL iteration failed");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                std::size_t i = m;
                bool underflow = false;
                while (i-- > l) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
    return d;
}

}  // namespace

QuadratureRule gauss_hermite_normal(std::size_t n) {
    if (n == 0) throw ConfigError("gauss_hermite_normal: n must be positive");
    // Jacobi matrix of the probabilists' Hermite polynomials: nodes are its eigenvalues.
    std::vector<double> off(n, 0.0);
    for (std::size_t k = 1; k < n; ++k) off[k] = std::sqrt(static_cast<double>(k));
    std::vector<double> x = tridiagonal_eigenvalues(std::move(off));
    std::sort(x.begin(), x.end());

    QuadratureRule rule{std::vector<double>(n), std::vector<double>(n)};
    const double nn = static_cast<double>(n);
    // Orthonormal recurrence; values are rescaled when large, which leaves the Newton
    // ratio unchanged and is undone in the Christoffel weight through log_scale.
    auto evaluate = [&](double z, double& pn, double& pn1, double& sum, double& log_scale) {
        double p_prev = 0.0, p = 1.0;
        sum = 1.0;
        log_scale = 0.0;
        for (std::size_t j = 0; j + 1 < n; ++j) {
            const double jj = static_cast<double>(j);
            const double next = (z * p - std::sqrt(jj) * p_prev) / std::sqrt(jj + 1.0);
            p_prev = p;
            p = next;
            sum += p * p;
            if (sum > 1e200) {
                p *= 1e-100;
                p_prev *= 1e-100;
                sum *= 1e-200;
                log_scale += 200.0 * std::numbers::ln10;
            }
        }
        pn1 = p;
        pn = (z * p - std::sqrt(nn - 1.0) * p_prev) / std::sqrt(nn);
    };
    for (std::size_t i = 0; i < n; ++i) {
        double z = x[i], pn, pn1, sum, log_scale;
        for (int polish = 0; polish < 2; ++polish) {
            evaluate(z, pn, pn1, sum, log_scale);
            if (pn1 != 0.0) z -= pn / (std::sqrt(nn) * pn1);
        }
        evaluate(z, pn, pn1, sum, log_scale);
        rule.nodes[i] = z;
        rule.weights[i] = std::exp(-std::log(sum) - log_scale);
    }
    // Symmetrise to remove rounding asymmetry.
    for (std::size_t i = 0; i < n / 2; ++i) {
        const double z = 0.5 * (rule.nodes[n - 1 - i] - rule.nodes[i]);
        const double w = 0.5 * (rule.weights[i] + rule.weights[n - 1 - i]);
        rule.nodes[i] = -z;
        rule.nodes[n - 1 - i] = z;
        rule.weights[i] = rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

}  // namespace basket
