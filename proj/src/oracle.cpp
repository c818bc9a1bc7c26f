#include "basket/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "basket/boundary.hpp"
#include "basket/errors.hpp"
#include "basket/quadrature.hpp"

namespace basket {

void OracleConfig::validate() const {
    if (quadrature_nodes < 16) throw ConfigError("quad_nodes must be >= 16");
    if (max_quadrature_nodes < quadrature_nodes) {
        throw ConfigError("max quadrature nodes must be >= quad_nodes");
    }
    if (!(quadrature_tolerance > 0.0)) throw ConfigError("quadrature tolerance must be > 0");
    if (mc_paths < 10'000) throw ConfigError("mc_paths must be >= 10000");
    if (!(confidence > 0.0)) throw ConfigError("confidence must be > 0");
}

Philox4x32::Block Philox4x32::generate(Block c, Key k) noexcept {
    constexpr std::uint64_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
    constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = kM0 * c[0];
        const std::uint64_t p1 = kM1 * c[2];
        c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
        k[0] += kW0;
        k[1] += kW1;
    }
    return c;
}

namespace {

// Black put on a lognormal with mean F and log-volatility v.
double black_put(double F, double strike, double v) {
    if (strike <= 0.0) return 0.0;
    if (v <= 0.0) return std::max(strike - F, 0.0);
    const double d1 = (std::log(F / strike) + 0.5 * v * v) / v;
    return strike * normal_cdf(-(d1 - v)) - F * normal_cdf(-d1);
}

// Outer integral over z = Z1 on [-kZmax, min(z_c, kZmax)], where z_c is the cutoff above which
// omega1 S1(T) alone exceeds K and the put is worthless. The integrand is flat but not analytic
// at z_c, and it bends sharply where the conditional forward basket crosses K when the
// conditional volatility is small. Panels are graded geometrically towards both places.
constexpr double kZmax = 12.0;

std::vector<double> outer_breaks(const MarketParams& p, double S1, double S2) {
    const double sqT = std::sqrt(p.T);
    const double mu1 = (p.r - 0.5 * p.sigma1 * p.sigma1) * p.T;
    const double z_c = (std::log(p.K / (p.omega1 * S1)) - mu1) / (p.sigma1 * sqT);
    std::vector<double> b;
    if (z_c <= -kZmax) return b;
    const double hi = std::min(z_c, kZmax);
    const int uniform = std::max(1, static_cast<int>(std::ceil((hi + kZmax) / 0.5)));
    const double w = (hi + kZmax) / uniform;
    for (int i = 0; i <= uniform; ++i) b.push_back(i == uniform ? hi : -kZmax + i * w);
    auto grade = [&](double at, int sides) {
        for (int j = 1; j <= 40; ++j) {
            const double d = w * std::ldexp(1.0, -j);
            if ((sides & 1) && at - d > -kZmax) b.push_back(at - d);
            if ((sides & 2) && at + d < hi) b.push_back(at + d);
        }
    };
    if (z_c < kZmax) grade(hi, 1);

    const double mu2 = (p.r - 0.5 * p.sigma2 * p.sigma2 * p.rho12 * p.rho12) * p.T;
    auto gap = [&](double z) {
        return p.K - p.omega1 * S1 * std::exp(mu1 + p.sigma1 * sqT * z) -
               p.omega2 * S2 * std::exp(mu2 + p.sigma2 * sqT * p.rho12 * z);
    };
    constexpr int kSamples = 20;
    const double step = w / kSamples;
    double za = -kZmax, ga = gap(za);
    for (int i = 1; i <= uniform * kSamples; ++i) {
        const double zb = i == uniform * kSamples ? hi : -kZmax + i * step, gb = gap(zb);
        if ((ga > 0.0) != (gb > 0.0)) {
            double lo = za, up = zb;
            for (int it = 0; it < 200 && up - lo > 1e-14; ++it) {
                const double mid = 0.5 * (lo + up);
                ((gap(mid) > 0.0) == (ga > 0.0) ? lo : up) = mid;
            }
            const double root = 0.5 * (lo + up);
            b.push_back(root);
            grade(root, 3);
        }
        za = zb;
        ga = gb;
    }
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
}

double conditional_price(const MarketParams& p, double S1, double S2, const QuadratureRule& gl) {
    const double sqT = std::sqrt(p.T);
    const double rho = p.rho12;
    const double v2 = p.sigma2 * sqT * std::sqrt(1.0 - rho * rho);
    const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    auto integrand = [&](double z) {
        const double S1T = S1 * std::exp((p.r - 0.5 * p.sigma1 * p.sigma1) * p.T + p.sigma1 * sqT * z);
        const double reduced = p.K - p.omega1 * S1T;
        if (reduced <= 0.0) return 0.0;
        // S2(T) given z is lognormal with mean F2 and log-volatility v2.
        const double F2 = S2 * std::exp((p.r - 0.5 * p.sigma2 * p.sigma2) * p.T +
                                        p.sigma2 * sqT * rho * z + 0.5 * v2 * v2);
        return inv_sqrt_2pi * std::exp(-0.5 * z * z) * p.omega2 *
               black_put(F2, reduced / p.omega2, v2);
    };
    const std::vector<double> b = outer_breaks(p, S1, S2);
    double acc = 0.0;
    for (std::size_t i = 1; i < b.size(); ++i) acc += integrate(gl, b[i - 1], b[i], integrand);
    return std::exp(-p.r * p.T) * acc;
}

}  // namespace

double quadrature_basket_put(const MarketParams& p, double S1, double S2, const OracleConfig& cfg) {
    p.validate();
    cfg.validate();
    if (!(S1 > 0.0) || !(S2 > 0.0)) throw DomainError("quadrature_basket_put: spots must be > 0");
    std::size_t n = cfg.quadrature_nodes;
    double previous = conditional_price(p, S1, S2, gauss_legendre(n));
    while (2 * n <= cfg.max_quadrature_nodes) {
        n *= 2;
        const double current = conditional_price(p, S1, S2, gauss_legendre(n));
        if (std::abs(current - previous) < cfg.quadrature_tolerance) return current;
        previous = current;
    }
    std::ostringstream os;
    os << "quadrature_basket_put: node doubling did not converge up to " << n << " nodes";
    throw NumericalError(os.str());
}

MonteCarloEstimate mc_basket_put(const MarketParams& p, double S1, double S2,
                                 const OracleConfig& cfg) {
    p.validate();
    cfg.validate();
    if (!(S1 > 0.0) || !(S2 > 0.0)) throw DomainError("mc_basket_put: spots must be > 0");

    const double sqT = std::sqrt(p.T);
    const double drift1 = (p.r - 0.5 * p.sigma1 * p.sigma1) * p.T;
    const double drift2 = (p.r - 0.5 * p.sigma2 * p.sigma2) * p.T;
    const double s1 = p.sigma1 * sqT, s2 = p.sigma2 * sqT;
    const double rho = p.rho12, rho_c = std::sqrt(1.0 - rho * rho);
    auto payoff = [&](double z1, double z2) {
        const double w2 = rho * z1 + rho_c * z2;
        const double basket = p.omega1 * S1 * std::exp(drift1 + s1 * z1) +
                              p.omega2 * S2 * std::exp(drift2 + s2 * w2);
        return std::max(p.K - basket, 0.0);
    };
    auto uniform = [](std::uint32_t u) { return (static_cast<double>(u) + 0.5) * 0x1p-32; };

    // Each generator block yields two (z1, z2) pairs; each pair and its negation form
    // one antithetic sample.
    const Philox4x32 rng(cfg.mc_seed);
    const std::size_t samples = cfg.mc_paths / 2;
    double sum = 0.0, sum_sq = 0.0;
    std::size_t count = 0;
    for (std::uint64_t block = 0; count < samples; ++block) {
        const auto b = rng(block);
        const double ra = std::sqrt(-2.0 * std::log(uniform(b[0])));
        const double rb = std::sqrt(-2.0 * std::log(uniform(b[2])));
        const double ta = 2.0 * std::numbers::pi * uniform(b[1]);
        const double tb = 2.0 * std::numbers::pi * uniform(b[3]);
        const double z[2][2] = {{ra * std::cos(ta), ra * std::sin(ta)},
                                {rb * std::cos(tb), rb * std::sin(tb)}};
        for (int j = 0; j < 2 && count < samples; ++j, ++count) {
            const double y = 0.5 * (payoff(z[j][0], z[j][1]) + payoff(-z[j][0], -z[j][1]));
            sum += y;
            sum_sq += y * y;
        }
    }
    const double n = static_cast<double>(samples);
    const double mean = sum / n;
    const double var = std::max(sum_sq / n - mean * mean, 0.0) * n / (n - 1.0);
    const double df = std::exp(-p.r * p.T);
    return {df * mean, df * std::sqrt(var / n)};
}

double quadrature_vanilla_put(double S, double strike, double r, double sigma, double tau) {
    const double df = std::exp(-r * tau);
    if (tau <= 0.0) return std::max(strike - S, 0.0);
    if (S <= 0.0) return strike * df;
    const double vol = sigma * std::sqrt(tau);
    const double mu = (r - 0.5 * sigma * sigma) * tau;
    // exercise region z < z_star
    const double z_star = (std::log(strike / S) - mu) / vol;
    constexpr double kLower = -12.0;
    if (z_star <= kLower) return 0.0;
    static const QuadratureRule gl = gauss_legendre(20);
    const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    auto integrand = [&](double z) {
        return (strike - S * std::exp(mu + vol * z)) * inv_sqrt_2pi * std::exp(-0.5 * z * z);
    };
    const int panels = static_cast<int>(std::ceil((z_star - kLower) / 0.5));
    const double width = (z_star - kLower) / panels;
    double acc = 0.0;
    for (int k = 0; k < panels; ++k) {
        acc += integrate(gl, kLower + k * width, kLower + (k + 1) * width, integrand);
    }
    return df * acc;
}

}  // namespace basket
