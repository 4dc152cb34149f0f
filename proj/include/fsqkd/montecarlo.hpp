#pragma once
// fsqkd/montecarlo.hpp - Pulse-level stochastic oracle for the additive
// click model: per pulse, photon number k ~ Poisson(n), a signal click with
// probability 1 - (1-eta)^k and an independent background click with
// probability Y0. Signal and background click rates are tallied separately
// and summed, mirroring Q_n = Y0 + 1 - exp(-eta n); background clicks err
// with probability e0, signal clicks with probability e_d.
//
// Deterministic: a fixed seed yields bit-identical estimates. Pulses are
// simulated in fixed-size batches with per-batch sub-seeds derived by
// splitmix64, so the merged tallies are independent of thread scheduling.

#include <cstdint>

#include "fsqkd/errors.hpp"

namespace fsqkd {

/// Name of the generator, recorded in validation output metadata.
inline constexpr const char* kMcRngAlgorithm = "splitmix64";

/// splitmix64 (Steele, Lea, Vigna): 64-bit state, one mixing round per draw.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Stateless sub-seed for parallel batch b of a run seeded with `seed`.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t index) {
        SplitMix64 g(seed + (index + 1) * 0x9E3779B97F4A7C15ULL);
        return g.next();
    }

private:
    std::uint64_t state_;
};

struct McConfig {
    std::uint64_t pulses = 10'000'000;
    std::uint64_t seed = 1;
    double eta = 1e-3;              ///< channel efficiency
    double y0 = 0.0;                ///< background click probability
    double mean_photon_number = 0.7;
    double e0 = 0.5;                ///< background error probability
    double e_misalignment = 0.01;   ///< signal error probability

    void validate() const {
        if (pulses < 1) throw ConfigError("montecarlo: need at least 1 pulse");
        if (eta < 0.0 || eta > 1.0) throw ConfigError("montecarlo: eta must lie in [0, 1]");
        if (y0 < 0.0 || y0 > 1.0) throw ConfigError("montecarlo: Y0 must lie in [0, 1]");
        if (mean_photon_number < 0.0)
            throw ConfigError("montecarlo: mean photon number must be >= 0");
        if (e0 < 0.0 || e0 > 1.0 || e_misalignment < 0.0 || e_misalignment > 1.0)
            throw ConfigError("montecarlo: error probabilities must lie in [0, 1]");
    }
};

struct McEstimate {
    double q_hat = 0.0;    ///< estimated gain (signal rate + background rate)
    double e_hat = 0.0;    ///< estimated error rate among clicks
    double stderr_q = 0.0; ///< sample standard error of q_hat
    double stderr_e = 0.0; ///< binomial standard error of e_hat
    std::uint64_t clicks = 0; ///< signal clicks + background clicks
    std::uint64_t pulses = 0;
};

McEstimate simulate(const McConfig& cfg);

} // namespace fsqkd
