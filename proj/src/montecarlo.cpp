#include "fsqkd/montecarlo.hpp"

#include <cmath>
#include <thread>
#include <vector>

#include "fsqkd/parallel.hpp"

namespace fsqkd {

namespace {

constexpr std::uint64_t kBatchPulses = 1u << 16;

// Per-config lookup tables so a pulse costs three uniform draws in the
// common (no-click) case.
struct Tables {
    std::vector<double> poisson_cdf; ///< cdf[k] = P(K <= k)
    std::vector<double> p_click;     ///< 1 - (1-eta)^k, aligned with the cdf

    explicit Tables(const McConfig& cfg) {
        const double n = cfg.mean_photon_number;
        double term = std::exp(-n); // P(K = 0)
        double cum = term;
        double survival = 1.0; // (1-eta)^k
        poisson_cdf.push_back(cum);
        p_click.push_back(1.0 - survival);
        for (int k = 1; k < 4096 && cum < 1.0 - 1e-18; ++k) {
            term *= n / k;
            cum += term;
            survival *= 1.0 - cfg.eta;
            poisson_cdf.push_back(cum);
            p_click.push_back(1.0 - survival);
        }
    }

    std::size_t sample_photon_count(double u) const {
        std::size_t k = 0;
        while (k + 1 < poisson_cdf.size() && u >= poisson_cdf[k]) ++k;
        return k;
    }
};

struct Tally {
    std::uint64_t signal_clicks = 0;
    std::uint64_t background_clicks = 0;
    std::uint64_t both_clicks = 0; ///< pulses where both processes fired
    std::uint64_t errors = 0;

    void merge(const Tally& o) {
        signal_clicks += o.signal_clicks;
        background_clicks += o.background_clicks;
        both_clicks += o.both_clicks;
        errors += o.errors;
    }
};

Tally run_batch(const McConfig& cfg, const Tables& tables, std::uint64_t batch_index,
                std::uint64_t pulses) {
    SplitMix64 rng(SplitMix64::derive(cfg.seed, batch_index));
    Tally t;
    for (std::uint64_t p = 0; p < pulses; ++p) {
        const std::size_t k = tables.sample_photon_count(rng.next_double());
        const bool signal = rng.next_double() < tables.p_click[k];
        const bool background = rng.next_double() < cfg.y0;
        if (signal) {
            ++t.signal_clicks;
            if (rng.next_double() < cfg.e_misalignment) ++t.errors;
        }
        if (background) {
            ++t.background_clicks;
            if (rng.next_double() < cfg.e0) ++t.errors;
        }
        if (signal && background) ++t.both_clicks;
    }
    return t;
}

} // namespace

McEstimate simulate(const McConfig& cfg) {
    cfg.validate();
    const Tables tables(cfg);

    const std::uint64_t batches = (cfg.pulses + kBatchPulses - 1) / kBatchPulses;
    std::vector<Tally> tallies(batches);
    auto batch_size = [&](std::uint64_t b) {
        return b + 1 < batches ? kBatchPulses : cfg.pulses - b * kBatchPulses;
    };

    const unsigned workers = thread_budget(batches);
    if (workers <= 1) {
        for (std::uint64_t b = 0; b < batches; ++b)
            tallies[b] = run_batch(cfg, tables, b, batch_size(b));
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (std::uint64_t b = w; b < batches; b += workers)
                    tallies[b] = run_batch(cfg, tables, b, batch_size(b));
            });
        for (auto& th : pool) th.join();
    }

    Tally total;
    for (const auto& t : tallies) total.merge(t); // fixed order, integer sums

    McEstimate est;
    est.pulses = cfg.pulses;
    est.clicks = total.signal_clicks + total.background_clicks;
    const double n = static_cast<double>(cfg.pulses);
    const double sum_x = static_cast<double>(est.clicks);
    const double sum_x2 = sum_x + 2.0 * static_cast<double>(total.both_clicks);
    est.q_hat = sum_x / n;
    if (cfg.pulses > 1) {
        const double var = (sum_x2 - sum_x * sum_x / n) / (n - 1.0);
        est.stderr_q = std::sqrt(std::max(var, 0.0) / n);
    }
    if (est.clicks > 0) {
        est.e_hat = static_cast<double>(total.errors) / sum_x;
        est.stderr_e = std::sqrt(est.e_hat * (1.0 - est.e_hat) / sum_x);
    }
    return est;
}

} // namespace fsqkd
