#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

#include "basket/model.hpp"

namespace basket {

struct OracleConfig {
    /// Starting Gauss-Legendre nodes per panel; doubled until successive prices agree.
    std::size_t quadrature_nodes = 32;
    std::size_t max_quadrature_nodes = 1024;
    double quadrature_tolerance = 1e-8;
    std::size_t mc_paths = 1'000'000;
    std::uint64_t mc_seed = 20140517;
    /// Standard-error multiplier used for agreement checks.
    double confidence = 3.0;

    void validate() const;
};

/// Philox4x32-10 counter-based generator: a keyed bijection of a
/// 128-bit counter, so any sub-stream can be produced independently.
class Philox4x32 {
public:
    using Block = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    explicit Philox4x32(std::uint64_t seed) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

    [[nodiscard]] static Block generate(Block counter, Key key) noexcept;
    [[nodiscard]] Block operator()(std::uint64_t index) const noexcept {
        return generate({static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                         0u, 0u},
                        key_);
    }

private:
    Key key_;
};

/// e^{-rT} E[max(K - omega1 S1(T) - omega2 S2(T), 0)] under correlated risk-neutral GBM.
///
/// Cholesky-decorrelated normals; the expectation over the second normal is taken in
/// closed form (a Black put with reduced strike). The outer one is composite Gauss-Legendre
/// over the first normal, cut where omega1 S1(T) reaches K and graded towards that cut.
/// Nodes per panel are doubled until successive prices agree; NumericalError otherwise.
[[nodiscard]] double quadrature_basket_put(const MarketParams& p, double S1, double S2,
                                           const OracleConfig& cfg = {});

struct MonteCarloEstimate {
    double price;
    double std_error;
};

/// Antithetic Monte Carlo estimate; bitwise deterministic for a fixed seed.
[[nodiscard]] MonteCarloEstimate mc_basket_put(const MarketParams& p, double S1, double S2,
                                               const OracleConfig& cfg = {});

/// One-dimensional put by Gauss-Legendre quadrature of the lognormal expectation below the
/// exercise boundary. Independent of the closed form in bs1d_put.
[[nodiscard]] double quadrature_vanilla_put(double S, double strike, double r, double sigma,
                                            double tau);

}  // namespace basket
