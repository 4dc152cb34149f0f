#pragma once
// fsqkd/validate.hpp - Built-in release-gate checks: pinned reference values,
// algebraic identities, Monte Carlo cross-checks, and construction tests on
// the bundled demonstration spectrum. Run by the acceptance test binary and
// by the `validate` CLI subcommand.

#include <cstdint>
#include <string>
#include <vector>

namespace fsqkd {

inline constexpr std::uint64_t kDefaultValidationSeed = 20260809ULL;

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail; ///< computed values, tolerances, failures
};

/// Runs every check; deterministic for a fixed seed.
std::vector<CheckResult> run_acceptance_checks(std::uint64_t mc_seed = kDefaultValidationSeed);

} // namespace fsqkd
