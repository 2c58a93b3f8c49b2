#include "ordident/gof.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>

#include "ordident/rng.hpp"
#include "ordident/verify.hpp"

namespace ordident {

std::string gof_target_name(GofTarget t) {
    return t == GofTarget::Logistic ? "logistic" : "pareto2";
}

GofTarget gof_target_from_name(const std::string& name) {
    if (name == "logistic") return GofTarget::Logistic;
    if (name == "pareto2") return GofTarget::ParetoII;
    throw std::domain_error("unknown gof target: " + name);
}

void GofConfig::validate() const {
    if (!(1 <= k && k <= n - 1)) throw std::domain_error("GofConfig: need 1 <= k <= n-1");
    if (resamples < 100) throw std::domain_error("GofConfig: need resamples >= 100");
    if (mc_block < 10000) throw std::domain_error("GofConfig: need mc_block >= 1e4");
    if (!(level > 0.0 && level <= 0.5)) throw std::domain_error("GofConfig: level outside (0, 0.5]");
}

namespace {

double kth_smallest(std::vector<double>& block, int k) {
    std::nth_element(block.begin(), block.begin() + (k - 1), block.end());
    return block[k - 1];
}

}  // namespace

TestReport gof_test(const std::vector<double>& data, const GofConfig& cfg) {
    cfg.validate();
    const long long L = static_cast<long long>(data.size());
    if (L < 40LL * cfg.n) {
        throw std::domain_error("gof_test: need at least 40 n data points");
    }
    if (cfg.target == GofTarget::ParetoII) {
        for (double x : data) {
            if (!(x > 0.0)) throw std::domain_error("gof_test: ParetoII needs positive data");
        }
    }

    std::vector<double> work = data;
    if (cfg.target == GofTarget::Logistic) {
        std::vector<double> tmp = work;
        const std::size_t mid = tmp.size() / 2;
        std::nth_element(tmp.begin(), tmp.begin() + mid, tmp.end());
        double med = tmp[mid];
        if (tmp.size() % 2 == 0) {
            med = 0.5 * (med + *std::max_element(tmp.begin(), tmp.begin() + mid));
        }
        for (double& x : work) x -= med;
    }

    RngStream root(cfg.seed);
    RngStream shuffler = root.substream(0);
    RngStream aux = root.substream(1);
    RngStream perm = root.substream(2);

    shuffler.shuffle(std::span<double>(work));

    const int groups = static_cast<int>(L / (2 * cfg.n - 1));
    const int short_len = cfg.n - 1;
    std::vector<double> lhs;
    std::vector<double> rhs;
    lhs.reserve(groups);
    rhs.reserve(groups);

    std::size_t pos = 0;
    std::vector<double> block;
    for (int g = 0; g < groups; ++g) {
        block.assign(work.begin() + pos, work.begin() + pos + short_len);
        pos += short_len;
        lhs.push_back(kth_smallest(block, cfg.k));
    }
    const double rate = static_cast<double>(cfg.n - cfg.k);
    for (int g = 0; g < groups; ++g) {
        block.assign(work.begin() + pos, work.begin() + pos + cfg.n);
        pos += cfg.n;
        const double os = kth_smallest(block, cfg.k);
        const double u = aux.uniform01();
        if (cfg.target == GofTarget::Logistic) {
            rhs.push_back(os - std::log1p(-u) / rate);
        } else {
            rhs.push_back(os / std::pow(u, 1.0 / rate));
        }
    }

    TestReport rep;
    rep.config = cfg;
    rep.lhs_groups = groups;
    rep.rhs_groups = groups;
    rep.statistic = ks_two_sample(lhs, rhs);

    std::vector<double> pool = lhs;
    pool.insert(pool.end(), rhs.begin(), rhs.end());
    int at_least = 0;
    std::vector<double> a(groups);
    std::vector<double> b(groups);
    for (int r = 0; r < cfg.resamples; ++r) {
        perm.shuffle(std::span<double>(pool));
        a.assign(pool.begin(), pool.begin() + groups);
        b.assign(pool.begin() + groups, pool.end());
        if (ks_two_sample(a, b) >= rep.statistic) ++at_least;
    }
    rep.p_value = (1.0 + at_least) / (1.0 + cfg.resamples);
    rep.reject = rep.p_value <= cfg.level;
    return rep;
}

CalibrationSummary calibration_run(const GofConfig& cfg, const Distribution& truth,
                                   int repetitions) {
    cfg.validate();
    if (repetitions < 50) throw std::domain_error("calibration_run: need repetitions >= 50");

    RngStream root(cfg.seed);
    CalibrationSummary sum;
    sum.repetitions = repetitions;
    sum.truth_family = truth.family_name();
    sum.config = cfg;

    for (int i = 0; i < repetitions; ++i) {
        RngStream data_stream = root.substream(2 * static_cast<std::uint64_t>(i));
        const std::vector<double> data =
            truth.sample(data_stream, static_cast<std::size_t>(cfg.mc_block));
        GofConfig per = cfg;
        per.seed = root.substream(2 * static_cast<std::uint64_t>(i) + 1).seed();
        if (gof_test(data, per).reject) ++sum.rejections;
    }
    sum.rejection_rate = static_cast<double>(sum.rejections) / repetitions;
    sum.se = std::sqrt(sum.rejection_rate * (1.0 - sum.rejection_rate) / repetitions);
    return sum;
}

}  // namespace ordident
