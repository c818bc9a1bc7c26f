#include "basket/stencil.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "basket/errors.hpp"

namespace basket {

std::string_view to_string(Scheme s) noexcept {
    return s == Scheme::Hoc ? "hoc" : "second_order";
}

Scheme parse_scheme(std::string_view s) {
    if (s == "hoc") return Scheme::Hoc;
    if (s == "second_order") return Scheme::SecondOrder;
    throw ConfigError("scheme: expected 'hoc' or 'second_order', got '" + std::string(s) + "'");
}

double stencil_sum(const Stencil3& s) noexcept {
    double acc = 0.0;
    for (const auto& row : s)
        for (double v : row) acc += v;
    return acc;
}

double stencil_max_abs(const Stencil3& s) noexcept {
    double m = 0.0;
    for (const auto& row : s)
        for (double v : row) m = std::max(m, std::abs(v));
    return m;
}

Stencil3 transpose(const Stencil3& s) noexcept {
    Stencil3 t{};
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) t[a][b] = s[b][a];
    return t;
}

StencilPair hoc_coefficients(const MarketParams& p, double h) {
    p.validate();
    if (!(h > 0.0)) throw ConfigError("hoc_coefficients: h must be > 0");

    const auto [b1, b2] = convection_coeffs(p);
    const double g = p.gamma;
    const double rho = p.rho12;
    const double a = g * g / (h * h);
    const double rho2 = rho * rho;

    StencilPair s;
    s.h = h;
    auto K = [&s](int d1, int d2) -> double& { return s.k_hat[d1 + 1][d2 + 1]; };
    auto M = [&s](int d1, int d2) -> double& { return s.m_hat[d1 + 1][d2 + 1]; };

    K(0, 0) = -2.0 * a * rho2 / 3.0 + 5.0 * a / 3.0 + b1 * b1 / 3.0 + b2 * b2 / 3.0;
    for (int sg : {+1, -1}) {
        const double s_ = sg;
        K(sg, 0) = a * rho2 / 3.0 + s_ * g * b1 / (3.0 * h) - s_ * g * b2 * rho / (3.0 * h) -
                   b1 * b1 / 6.0 - a / 3.0;
        K(0, sg) = a * rho2 / 3.0 + s_ * g * b2 / (3.0 * h) - s_ * g * b1 * rho / (3.0 * h) -
                   b2 * b2 / 6.0 - a / 3.0;
        // (i1 +- 1, i2 - 1)
        K(sg, -1) = s_ * b1 * b2 / 12.0 - g * b2 / (12.0 * h) + s_ * g * b1 / (12.0 * h) -
                    g * b1 * rho / (6.0 * h) + s_ * g * b2 * rho / (6.0 * h) - a / 12.0 +
                    s_ * a * rho / 4.0 - a * rho2 / 6.0;
        // (i1 +- 1, i2 + 1)
        K(sg, +1) = g * b2 / (12.0 * h) - s_ * b1 * b2 / 12.0 + s_ * g * b1 / (12.0 * h) +
                    g * b1 * rho / (6.0 * h) + s_ * g * b2 * rho / (6.0 * h) - a / 12.0 -
                    s_ * a * rho / 4.0 - a * rho2 / 6.0;

        M(sg, 0) = 1.0 / 12.0 - s_ * h * b1 / (12.0 * g);
        M(0, sg) = 1.0 / 12.0 - s_ * h * b2 / (12.0 * g);
    }
    M(0, 0) = 2.0 / 3.0;
    M(+1, +1) = rho / 24.0;
    M(-1, -1) = rho / 24.0;
    M(+1, -1) = -rho / 24.0;
    M(-1, +1) = -rho / 24.0;
    return s;
}

StencilPair second_order_coefficients(const MarketParams& p, double h) {
    p.validate();
    if (!(h > 0.0)) throw ConfigError("second_order_coefficients: h must be > 0");

    const auto [b1, b2] = convection_coeffs(p);
    const double g = p.gamma;
    const double a = g * g / (h * h);

    StencilPair s;
    s.h = h;
    auto K = [&s](int d1, int d2) -> double& { return s.k_hat[d1 + 1][d2 + 1]; };

    // -(g^2/2)(u11 + u22) - g^2 rho u12 + g (b1 u1 + b2 u2)
    K(0, 0) = 2.0 * a;
    for (int sg : {+1, -1}) {
        K(sg, 0) = -a / 2.0 + sg * g * b1 / (2.0 * h);
        K(0, sg) = -a / 2.0 + sg * g * b2 / (2.0 * h);
    }
    const double cross = a * p.rho12 / 4.0;
    K(+1, +1) = -cross;
    K(-1, -1) = -cross;
    K(+1, -1) = cross;
    K(-1, +1) = cross;
    s.m_hat[1][1] = 1.0;
    return s;
}

StencilPair make_stencil(Scheme scheme, const MarketParams& p, double h) {
    return scheme == Scheme::Hoc ? hoc_coefficients(p, h) : second_order_coefficients(p, h);
}

double apply_stencil(const StencilPair& s, StencilPart which, const GridField& f, std::size_t i1,
                     std::size_t i2) {
    const Grid2& g = f.grid();
    if (i1 == 0 || i2 == 0 || i1 >= g.n1() || i2 >= g.n2()) {
        throw DomainError("apply_stencil: node is not interior");
    }
    const Stencil3& c = which == StencilPart::K ? s.k_hat : s.m_hat;
    double acc = 0.0;
    for (int d1 = -1; d1 <= 1; ++d1)
        for (int d2 = -1; d2 <= 1; ++d2)
            acc += c[d1 + 1][d2 + 1] * f.at(i1 + d1, i2 + d2);
    return acc;
}

void write_stencil(std::ostream& os, const StencilPair& s) {
    char buf[128];
    auto dump = [&](const char* name, const Stencil3& c) {
        os << name << '\n';
        for (const auto& row : c) {
            std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", row[0] + 0.0, row[1] + 0.0, row[2] + 0.0);
            os << buf;
        }
    };
    std::snprintf(buf, sizeof buf, "h %.17g\n", s.h);
    os << buf;
    dump("k_hat", s.k_hat);
    dump("m_hat", s.m_hat);
}

}  // namespace basket
