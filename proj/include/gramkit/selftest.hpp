#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gramkit/numeric.hpp"
#include "gramkit/random.hpp"

namespace gramkit {

enum class StabilityTheorem { ThreeOps, Factor, C1, C2, C3, Riesz, Joint };

std::string_view to_string(StabilityTheorem t);
std::vector<StabilityTheorem> all_stability_theorems();

struct StabilityTrial {
    bool passed = false;               // certificate verdict Holds
    bool singular_after_pass = false;  // independent rank check of the perturbed Gram
};

/// One randomized instance of the theorem at dimension n, with a perturbation
/// size drawn log-uniformly so that both verdicts occur. Exceptions from the
/// certificate (a TheoremViolation in particular) propagate.
StabilityTrial stability_trial(StabilityTheorem theorem, Rng& rng, Index n,
                               const TolerancePolicy& pol = {}, Index joint_samples = 10000);

struct SuiteResult {
    std::string name;
    Index passed = 0;
    Index failed = 0;
    std::string first_failure;
};

struct SelftestReport {
    std::uint64_t seed = kDefaultSeed;
    std::vector<SuiteResult> suites;

    bool all_passed() const;
};

/// The invariant suite at n ∈ {2, 4, 8}: trials_per_size instances per suite
/// and size, all drawn from one generator seeded with `seed`.
SelftestReport run_selftest(std::uint64_t seed, const TolerancePolicy& pol = {},
                            Index trials_per_size = 8);

}  // namespace gramkit
