#pragma once

#include <string>
#include <vector>

namespace fas {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ValidateOptions {
    long long mc_max_trials = 10000000;
    std::uint64_t seed = 20250809;
    long mass_pair_budget = 1500000;
};

// Closed form vs quadrature of the same truncated series over the full
// (N, K, mu, c, Theta, Gamma) grid; one result per (N, K, mu) group.
std::vector<CheckResult> validate_oracle(const ValidateOptions& opts = {});

// Exact special-case reductions, zero-SNR limits and the scalar
// special-function identities.
std::vector<CheckResult> validate_special_cases(const ValidateOptions& opts = {});

// Monte-Carlo agreement with the analytic SEP at the headline configuration.
std::vector<CheckResult> validate_mc(const ValidateOptions& opts = {});

// High-SNR asymptote ratio and diversity-order slope checks.
std::vector<CheckResult> validate_asymptotic(const ValidateOptions& opts = {});

} // namespace fas
