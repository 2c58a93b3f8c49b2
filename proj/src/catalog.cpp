#include "ordident/catalog.hpp"

#include <stdexcept>

#include "ordident/order_statistics.hpp"

namespace ordident {

std::string identity_family_name(IdentityFamily f) {
    switch (f) {
        case IdentityFamily::ParetoII: return "ParetoII";
        case IdentityFamily::Logistic: return "Logistic";
        case IdentityFamily::ExponentialOrderStat: return "ExponentialOrderStat";
        case IdentityFamily::UniformOrderStat: return "UniformOrderStat";
    }
    return "?";
}

Distribution matching_base(IdentityFamily f) {
    switch (f) {
        case IdentityFamily::ParetoII: return Distribution::pareto2(1.0, 1.0);
        case IdentityFamily::Logistic: return Distribution::logistic(0.0, 1.0);
        case IdentityFamily::ExponentialOrderStat: return Distribution::exponential(1.0);
        case IdentityFamily::UniformOrderStat: return Distribution::uniform01();
    }
    throw std::logic_error("matching_base: bad family");
}

namespace {

RandomExpr os_leaf(const Distribution& base, int k, int n, std::string tag) {
    return RandomExpr::leaf(OrderStatistic(base, k, n), std::move(tag));
}

// Left-deep sum of scaled fresh base draws: sum_{j=1..k} base_j / (n-j+1).
RandomExpr scaled_sum_chain(const IdentityParams& p, const Distribution& base) {
    RandomExpr acc = RandomExpr::scale(RandomExpr::leaf(base, "s1"), 1.0 / p.n);
    for (int j = 2; j <= p.k; ++j) {
        RandomExpr term = RandomExpr::scale(RandomExpr::leaf(base, "s" + std::to_string(j)),
                                            1.0 / (p.n - j + 1));
        acc = RandomExpr::sum(std::move(acc), std::move(term));
    }
    return acc;
}

// Left-deep product of powered fresh base draws: prod_{j=1..k} base_j^{1/(n-j+1)}.
RandomExpr powered_prod_chain(const IdentityParams& p, const Distribution& base) {
    RandomExpr acc = RandomExpr::power(RandomExpr::leaf(base, "u1"), 1.0 / p.n);
    for (int j = 2; j <= p.k; ++j) {
        RandomExpr term = RandomExpr::power(RandomExpr::leaf(base, "u" + std::to_string(j)),
                                            1.0 / (p.n - j + 1));
        acc = RandomExpr::product(std::move(acc), std::move(term));
    }
    return acc;
}

std::vector<IdentityRecord> build_catalog() {
    std::vector<IdentityRecord> recs;

    auto add = [&recs](IdentityRecord r) { recs.push_back(std::move(r)); };

    add({"L6ii", "L6(ii)",
         "X_{k,n} =d sum_{j=1..k} X_j/(n-j+1)",
         "1 <= k <= n",
         IdentityFamily::ExponentialOrderStat, false,
         [](const IdentityParams& p) { return 1 <= p.k && p.k <= p.n; },
         [](const IdentityParams& p, const Distribution& b) { return os_leaf(b, p.k, p.n, "x"); },
         [](const IdentityParams& p, const Distribution& b) { return scaled_sum_chain(p, b); }});

    add({"L6iii", "L6(iii)",
         "X_{m,n} =d X_{m-k,n-k} + X'_{k,n}",
         "1 <= k < m <= n",
         IdentityFamily::ExponentialOrderStat, true,
         [](const IdentityParams& p) { return 1 <= p.k && p.k < p.m && p.m <= p.n; },
         [](const IdentityParams& p, const Distribution& b) { return os_leaf(b, p.m, p.n, "x"); },
         [](const IdentityParams& p, const Distribution& b) {
             return RandomExpr::sum(os_leaf(b, p.m - p.k, p.n - p.k, "a"),
                                    os_leaf(b, p.k, p.n, "b"));
         }});

    add({"L6iv", "L6(iv)",
         "X_{n-k+1,n} =d prod_{j=1..k} X_j^{1/(n-j+1)}",
         "1 <= k <= n",
         IdentityFamily::UniformOrderStat, false,
         [](const IdentityParams& p) { return 1 <= p.k && p.k <= p.n; },
         [](const IdentityParams& p, const Distribution& b) {
             return os_leaf(b, p.n - p.k + 1, p.n, "x");
         },
         [](const IdentityParams& p, const Distribution& b) { return powered_prod_chain(p, b); }});

    add({"L6v", "L6(v)",
         "X_{k,n} =d X_{k,m-1} * X'_{m,n}",
         "1 <= k < m <= n",
         IdentityFamily::UniformOrderStat, true,
         [](const IdentityParams& p) { return 1 <= p.k && p.k < p.m && p.m <= p.n; },
         [](const IdentityParams& p, const Distribution& b) { return os_leaf(b, p.k, p.n, "x"); },
         [](const IdentityParams& p, const Distribution& b) {
             return RandomExpr::product(os_leaf(b, p.k, p.m - 1, "a"),
                                        os_leaf(b, p.m, p.n, "b"));
         }});

    add({"L7i", "L7(i)",
         "1/Y_{k,n} =d Y_{n-k+1,n}",
         "1 <= k <= n",
         IdentityFamily::ParetoII, false,
         [](const IdentityParams& p) { return 1 <= p.k && p.k <= p.n; },
         [](const IdentityParams& p, const Distribution& b) {
             return RandomExpr::power(os_leaf(b, p.k, p.n, "y"), -1.0);
         },
         [](const IdentityParams& p, const Distribution& b) {
             return os_leaf(b, p.n - p.k + 1, p.n, "y");
         }});

    add({"L7ii", "L7(ii)",
         "Y_{k,n-1} =d Y_{k,n} / U^{1/(n-k)}",
         "1 <= k <= n-1",
         IdentityFamily::ParetoII, false,
         [](const IdentityParams& p) { return 1 <= p.k && p.k <= p.n - 1; },
         [](const IdentityParams& p, const Distribution& b) { return os_leaf(b, p.k, p.n - 1, "y"); },
         [](const IdentityParams& p, const Distribution& b) {
             return RandomExpr::product(
                 os_leaf(b, p.k, p.n, "y"),
                 RandomExpr::power(RandomExpr::leaf(Distribution::uniform01(), "u"),
                                   -1.0 / (p.n - p.k)));
         }});

    add({"L7iii", "L7(iii)",
         "Y_{k,n-m} =d Y_{k,n} / U_{n-k-m+1,n-k}",
         "1 <= k <= n-m, m >= 1",
         IdentityFamily::ParetoII, true,
         [](const IdentityParams& p) { return p.m >= 1 && 1 <= p.k && p.k <= p.n - p.m; },
         [](const IdentityParams& p, const Distribution& b) { return os_leaf(b, p.k, p.n - p.m, "y"); },
         [](const IdentityParams& p, const Distribution& b) {
             return RandomExpr::product(
                 os_leaf(b, p.k, p.n, "y"),
                 RandomExpr::power(
                     RandomExpr::leaf(
                         OrderStatistic(Distribution::uniform01(), p.n - p.k - p.m + 1, p.n - p.k), "u"),
                     -1.0));
         }});

    add({"L7iv", "L7(iv)",
         "Y_{k,n-1} =d Y_{k+1,n} * U^{1/k}",
         "1 <= k <= n-1",
         IdentityFamily::ParetoII, false,
         [](const IdentityParams& p) { return 1 <= p.k && p.k <= p.n - 1; },
         [](const IdentityParams& p, const Distribution& b) { return os_leaf(b, p.k, p.n - 1, "y"); },
         [](const IdentityParams& p, const Distribution& b) {
             return RandomExpr::product(
                 os_leaf(b, p.k + 1, p.n, "y"),
                 RandomExpr::power(RandomExpr::leaf(Distribution::uniform01(), "u"), 1.0 / p.k));
         }});

    add({"L7v", "L7(v)",
         "Y_{m-k,n-k} =d Y_{m,n} * U_{m-k,m-1}",
         "2 <= k+1 <= m <= n",
         IdentityFamily::ParetoII, true,
         [](const IdentityParams& p) { return 1 <= p.k && p.k + 1 <= p.m && p.m <= p.n; },
         [](const IdentityParams& p, const Distribution& b) {
             return os_leaf(b, p.m - p.k, p.n - p.k, "y");
         },
         [](const IdentityParams& p, const Distribution& b) {
             return RandomExpr::product(
                 os_leaf(b, p.m, p.n, "y"),
                 RandomExpr::leaf(OrderStatistic(Distribution::uniform01(), p.m - p.k, p.m - 1), "u"));
         }});

    add({"L8i", "L8(i)",
         "X_{k,n-1} =d X_{k,n} + E/(n-k)",
         "1 <= k <= n-1",
         IdentityFamily::Logistic, false,
         [](const IdentityParams& p) { return 1 <= p.k && p.k <= p.n - 1; },
         [](const IdentityParams& p, const Distribution& b) { return os_leaf(b, p.k, p.n - 1, "x"); },
         [](const IdentityParams& p, const Distribution& b) {
             return RandomExpr::sum(
                 os_leaf(b, p.k, p.n, "x"),
                 RandomExpr::scale(RandomExpr::leaf(Distribution::exponential(1.0), "e"),
                                   1.0 / (p.n - p.k)));
         }});

    add({"L8ii", "L8(ii)",
         "X_{k,n-m} =d X_{k,n} + E_{m,n-k}",
         "1 <= k <= n-m, m >= 1",
         IdentityFamily::Logistic, true,
         [](const IdentityParams& p) { return p.m >= 1 && 1 <= p.k && p.k <= p.n - p.m; },
         [](const IdentityParams& p, const Distribution& b) { return os_leaf(b, p.k, p.n - p.m, "x"); },
         [](const IdentityParams& p, const Distribution& b) {
             return RandomExpr::sum(
                 os_leaf(b, p.k, p.n, "x"),
                 RandomExpr::leaf(OrderStatistic(Distribution::exponential(1.0), p.m, p.n - p.k), "e"));
         }});

    add({"L8iii", "L8(iii)",
         "X_{k,n-1} =d X_{k+1,n} - E/k",
         "1 <= k <= n-1",
         IdentityFamily::Logistic, false,
         [](const IdentityParams& p) { return 1 <= p.k && p.k <= p.n - 1; },
         [](const IdentityParams& p, const Distribution& b) { return os_leaf(b, p.k, p.n - 1, "x"); },
         [](const IdentityParams& p, const Distribution& b) {
             return RandomExpr::sum(
                 os_leaf(b, p.k + 1, p.n, "x"),
                 RandomExpr::scale(RandomExpr::leaf(Distribution::exponential(1.0), "e"), -1.0 / p.k));
         }});

    add({"L8iv", "L8(iv)",
         "X_{m-k,n-k} =d X_{m,n} - E_{k,m-1}",
         "2 <= k+1 <= m <= n",
         IdentityFamily::Logistic, true,
         [](const IdentityParams& p) { return 1 <= p.k && p.k + 1 <= p.m && p.m <= p.n; },
         [](const IdentityParams& p, const Distribution& b) {
             return os_leaf(b, p.m - p.k, p.n - p.k, "x");
         },
         [](const IdentityParams& p, const Distribution& b) {
             return RandomExpr::sum(
                 os_leaf(b, p.m, p.n, "x"),
                 RandomExpr::negate(
                     RandomExpr::leaf(OrderStatistic(Distribution::exponential(1.0), p.k, p.m - 1), "e")));
         }});

    add({"P3", "P(3)",
         "Y_{k,k} =d Y_{k,n} / B,  B ~ Beta(1,n-k)",
         "1 <= k <= n-1",
         IdentityFamily::ParetoII, false,
         [](const IdentityParams& p) { return 1 <= p.k && p.k <= p.n - 1; },
         [](const IdentityParams& p, const Distribution& b) { return os_leaf(b, p.k, p.k, "y"); },
         [](const IdentityParams& p, const Distribution& b) {
             return RandomExpr::product(
                 os_leaf(b, p.k, p.n, "y"),
                 RandomExpr::power(
                     RandomExpr::leaf(Distribution::beta(1.0, static_cast<double>(p.n - p.k)), "b"),
                     -1.0));
         }});

    add({"P4", "P(4)",
         "Y_{1,k} =d Y_{n-k+1,n} * B,  B ~ Beta(1,n-k)",
         "1 <= k <= n-1",
         IdentityFamily::ParetoII, false,
         [](const IdentityParams& p) { return 1 <= p.k && p.k <= p.n - 1; },
         [](const IdentityParams& p, const Distribution& b) { return os_leaf(b, 1, p.k, "y"); },
         [](const IdentityParams& p, const Distribution& b) {
             return RandomExpr::product(
                 os_leaf(b, p.n - p.k + 1, p.n, "y"),
                 RandomExpr::leaf(Distribution::beta(1.0, static_cast<double>(p.n - p.k)), "b"));
         }});

    return recs;
}

}  // namespace

const std::vector<IdentityRecord>& catalog() {
    static const std::vector<IdentityRecord> recs = build_catalog();
    return recs;
}

const IdentityRecord& find_identity(const std::string& id) {
    for (const auto& r : catalog()) {
        if (r.id == id) return r;
    }
    throw std::out_of_range("unknown identity id: " + id);
}

std::vector<IdentityParams> enumerate_params(const IdentityRecord& rec, int n_max) {
    if (n_max < 1 || n_max > kMaxOrderStatN) {
        throw std::domain_error("enumerate_params: n_max out of range");
    }
    std::vector<IdentityParams> out;
    for (int k = 1; k <= n_max; ++k) {
        const int m_hi = rec.uses_m ? n_max : 0;
        for (int m = rec.uses_m ? 1 : 0; m <= m_hi; ++m) {
            for (int n = 1; n <= n_max; ++n) {
                IdentityParams p{k, m, n};
                if (rec.constraint(p)) out.push_back(p);
            }
        }
    }
    return out;
}

}  // namespace ordident
