#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ordident/distributions.hpp"

namespace ordident {

// Goodness-of-fit target: which characterizing identity the test exercises.
//   Logistic: X_{k,n-1} =d X_{k,n} + Exp(n-k)        (unit scale, location free)
//   ParetoII: Y_{k,n-1} =d Y_{k,n} / U^{1/(n-k)}     (lambda free, scale free)
enum class GofTarget { Logistic, ParetoII };

std::string gof_target_name(GofTarget t);
GofTarget gof_target_from_name(const std::string& name);

struct GofConfig {
    GofTarget target = GofTarget::Logistic;
    int k = 1;
    int n = 2;
    int resamples = 200;       // permutation count, >= 100
    long long mc_block = 10000;  // calibration data length per repetition, >= 1e4
    std::uint64_t seed = 0;
    double level = 0.05;  // in (0, 0.5]

    void validate() const;
};

struct TestReport {
    double statistic = 0.0;  // two-sample sup distance
    double p_value = 1.0;
    bool reject = false;
    int lhs_groups = 0;  // blocks of size n-1
    int rhs_groups = 0;  // blocks of size n
    GofConfig config;
};

// Blocked identity test. Logistic data is centered at the sample median
// first (cosmetic: the identity is location free; centering keeps blocks
// numerically symmetric and happens before the seeded shuffle, so the
// decision is shift invariant). The shuffled data is cut into
// floor(L/(2n-1)) disjoint blocks of size n-1 and as many of size n; the
// LHS sample takes the k-th smallest of each short block, the RHS sample
// the k-th smallest of each long block pushed through the identity's
// randomization. The p-value is a pooled permutation tail with the add-one
// convention; reject iff p <= level. Streams: substream 0 shuffles,
// 1 draws the randomization, 2 drives permutations.
// Requires data.size() >= 40 n, and all-positive data for ParetoII.
TestReport gof_test(const std::vector<double>& data, const GofConfig& cfg);

struct CalibrationSummary {
    int repetitions = 0;
    int rejections = 0;
    double rejection_rate = 0.0;
    double se = 0.0;  // binomial standard error of the rate
    std::string truth_family;
    GofConfig config;
};

// Runs gof_test on `repetitions` fresh datasets of length cfg.mc_block drawn
// from `truth`, each with an independently derived seed. repetitions >= 50.
CalibrationSummary calibration_run(const GofConfig& cfg, const Distribution& truth,
                                   int repetitions);

}  // namespace ordident
