#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "ordident/catalog.hpp"
#include "ordident/distributions.hpp"
#include "ordident/grid.hpp"
#include "ordident/order_statistics.hpp"
#include "ordident/random_expr.hpp"
#include "ordident/verify.hpp"

using namespace ordident;

namespace {
const GridSpec kGrid{0.0, 1.0, 201, GridSpacing::Quantile};
}

TEST_CASE("catalog: exactly 15 records with the documented ids") {
    const auto& recs = catalog();
    CHECK(recs.size() == 15);
    const std::set<std::string> expected{"L6ii", "L6iii", "L6iv", "L6v", "L7i", "L7ii", "L7iii",
                                         "L7iv", "L7v",   "L8i",  "L8ii", "L8iii", "L8iv", "P3",
                                         "P4"};
    std::set<std::string> got;
    for (const auto& r : recs) got.insert(r.id);
    CHECK(got == expected);

    CHECK(find_identity("L8i").family == IdentityFamily::Logistic);
    CHECK(find_identity("L7ii").family == IdentityFamily::ParetoII);
    CHECK(find_identity("L6ii").family == IdentityFamily::ExponentialOrderStat);
    CHECK(find_identity("L6iv").family == IdentityFamily::UniformOrderStat);
    CHECK(find_identity("P3").family == IdentityFamily::ParetoII);
    CHECK_THROWS_AS(find_identity("L9x"), std::out_of_range);
}

TEST_CASE("catalog: constraints gate the parameter space") {
    const auto& l8i = find_identity("L8i");
    CHECK_FALSE(l8i.uses_m);
    CHECK(l8i.constraint({1, 0, 2}));
    CHECK(l8i.constraint({3, 0, 4}));
    CHECK_FALSE(l8i.constraint({2, 0, 2}));
    CHECK_FALSE(l8i.constraint({0, 0, 2}));

    const auto& l7v = find_identity("L7v");
    CHECK(l7v.uses_m);
    CHECK(l7v.constraint({1, 2, 2}));
    CHECK(l7v.constraint({2, 3, 5}));
    CHECK_FALSE(l7v.constraint({2, 2, 5}));  // needs k+1 <= m
    CHECK_FALSE(l7v.constraint({1, 3, 2}));  // needs m <= n

    // enumerate respects the constraint and the ordering contract
    const auto params = enumerate_params(l8i, 5);
    CHECK(params.size() == 10);  // sum over n=2..5 of (n-1)
    for (std::size_t i = 1; i < params.size(); ++i) {
        const auto& a = params[i - 1];
        const auto& b = params[i];
        const bool sorted = a.k < b.k || (a.k == b.k && (a.m < b.m || (a.m == b.m && a.n < b.n)));
        CHECK(sorted);
    }

    std::size_t total4 = 0, total5 = 0;
    for (const auto& r : catalog()) {
        total4 += enumerate_params(r, 4).size();
        total5 += enumerate_params(r, 5).size();
    }
    CHECK(total4 == 126);
    CHECK(total5 == 225);
}

TEST_CASE("matching_base picks the canonical family member") {
    CHECK(matching_base(IdentityFamily::ParetoII).family_name() == "pareto2");
    CHECK(matching_base(IdentityFamily::Logistic).family_name() == "logistic");
    CHECK(matching_base(IdentityFamily::ExponentialOrderStat).family_name() == "exponential");
    CHECK(matching_base(IdentityFamily::UniformOrderStat).family_name() == "uniform01");
}

TEST_CASE("verify_identity: single instantiation with Monte Carlo") {
    const auto& rec = find_identity("L8i");
    McSettings mc;
    mc.size = 100000;
    mc.seed = 20250817;
    const auto rep = verify_identity(rec, {1, 0, 2}, Distribution::logistic(0.0, 1.0), kGrid,
                                     1e-6, mc);
    CHECK(rep.quad_pass);
    CHECK(rep.sup_cdf_distance < 1e-6);
    CHECK(rep.mc_pass);
    CHECK(rep.mc_distance < rep.mc_bound);
    CHECK(rep.mc_bound == doctest::Approx(1.95 * std::sqrt(2.0 / 100000.0)).epsilon(1e-12));
    CHECK(rep.pass());
}

TEST_CASE("verify_identity: constraint violations are domain errors") {
    const auto& rec = find_identity("L8i");
    CHECK_THROWS_AS(
        verify_identity(rec, {2, 0, 2}, Distribution::logistic(0.0, 1.0), kGrid, 1e-6, std::nullopt),
        std::domain_error);
}

TEST_CASE("full catalog at matching bases passes for n <= 4") {
    for (const auto& rec : catalog()) {
        const auto base = matching_base(rec.family);
        for (const auto& p : enumerate_params(rec, 4)) {
            const auto rep = verify_identity(rec, p, base, kGrid, 1e-6, std::nullopt);
            INFO(rec.id, " k=", p.k, " m=", p.m, " n=", p.n);
            CHECK(rep.quad_pass);
            CHECK(rep.sup_cdf_distance < 1e-6);
        }
    }
}

TEST_CASE("Monte Carlo agrees across a catalog cross-section") {
    McSettings mc;
    mc.size = 100000;
    mc.seed = 99;
    const struct {
        const char* id;
        IdentityParams p;
    } picks[] = {
        {"L6ii", {2, 0, 3}}, {"L6v", {1, 2, 3}}, {"L7ii", {1, 0, 3}},
        {"L8iii", {2, 0, 4}}, {"P4", {2, 0, 4}},
    };
    for (const auto& pick : picks) {
        const auto& rec = find_identity(pick.id);
        const auto rep =
            verify_identity(rec, pick.p, matching_base(rec.family), kGrid, 1e-6, mc);
        INFO(pick.id);
        CHECK(rep.pass());
        CHECK(rep.mc_distance < rep.mc_bound);
    }
}

TEST_CASE("location family: L8i passes for every logistic mu") {
    for (double mu : {-3.0, 0.0, 5.0}) {
        const auto rep = verify_identity(find_identity("L8i"), {1, 0, 2},
                                         Distribution::logistic(mu, 1.0), kGrid, 1e-6, std::nullopt);
        INFO("mu = ", mu);
        CHECK(rep.pass());
    }
}

TEST_CASE("power-parameterized Pareto: scaling closes the minimum identity") {
    // With survival 1/(1 + lambda y^{alpha/(n-k)}), the k-th minimum of n-1
    // draws equals the k-th minimum of n draws times U^{-1/alpha}.
    const int k = 1, n = 3;
    for (double alpha : {0.5, 2.0}) {
        for (double lambda : {0.5, 2.0}) {
            const auto base = Distribution::pareto2(lambda, alpha / (n - k));
            const auto lhs = RandomExpr::leaf(OrderStatistic(base, k, n - 1), "l");
            const auto rhs = RandomExpr::product(
                RandomExpr::leaf(OrderStatistic(base, k, n), "r"),
                RandomExpr::power(RandomExpr::leaf(Distribution::uniform01(), "u"), -1.0 / alpha));
            const auto grid = make_grid(kGrid, base);
            const auto rep = verify_exprs(lhs, rhs, grid, 1e-6, std::nullopt);
            INFO("alpha = ", alpha, " lambda = ", lambda);
            CHECK(rep.quad_pass);
            CHECK(rep.sup_cdf_distance < 1e-6);
        }
    }
}

TEST_CASE("discrimination: impostor bases sit far above the pass tolerance") {
    // Floors computed by the quadrature oracle and frozen; see each block.
    {
        // variance-matched normal vs the logistic shift identity: 2.260e-2
        const auto rep =
            verify_identity(find_identity("L8i"), {1, 0, 2},
                            Distribution::normal(0.0, M_PI / std::sqrt(3.0)), kGrid, 1e-6,
                            std::nullopt);
        CHECK(rep.sup_cdf_distance > 2e-2);
        CHECK_FALSE(rep.quad_pass);
    }
    {
        // median-matched exponential vs the Pareto quotient identity: 1.172e-1
        const auto rep = verify_identity(find_identity("L7ii"), {1, 0, 2},
                                         Distribution::exponential(std::log(2.0)), kGrid, 1e-6,
                                         std::nullopt);
        CHECK(rep.sup_cdf_distance > 0.1);
    }
    {
        // logistic with the wrong scale: the identity pins scale = 1 (7.69e-2)
        const auto rep = verify_identity(find_identity("L8i"), {1, 0, 2},
                                         Distribution::logistic(0.0, 1.5), kGrid, 1e-6,
                                         std::nullopt);
        CHECK(rep.sup_cdf_distance > 0.05);
    }
    {
        // uniform base against the Pareto product identity: 3.85e-1
        const auto rep = verify_identity(find_identity("P4"), {1, 0, 3},
                                         Distribution::uniform01(), kGrid, 1e-6, std::nullopt);
        CHECK(rep.sup_cdf_distance > 0.3);
    }
    // the normal impostor fails L8i at every (k,n) with n <= 4 (floor 9.1e-3)
    for (const auto& p : enumerate_params(find_identity("L8i"), 4)) {
        const auto rep =
            verify_identity(find_identity("L8i"), p,
                            Distribution::normal(0.0, M_PI / std::sqrt(3.0)), kGrid, 1e-6,
                            std::nullopt);
        INFO("k=", p.k, " n=", p.n);
        CHECK(rep.sup_cdf_distance > 5e-3);
    }
}

TEST_CASE("shifted and deficit minimum equations have different solution sets") {
    const auto expo = Distribution::exponential(1.0);
    const auto logi = Distribution::logistic(0.0, 1.0);

    // X - Z =d X_{1,2} holds for the reversed exponential X = -2 xi
    // (X_{1,2} = -2 xi_{2,2}), and fails for the logistic law.
    {
        const auto lhs =
            RandomExpr::sum(RandomExpr::scale(RandomExpr::leaf(expo, "x"), -2.0),
                            RandomExpr::negate(RandomExpr::leaf(expo, "z")));
        const auto rhs =
            RandomExpr::scale(RandomExpr::leaf(OrderStatistic(expo, 2, 2), "m"), -2.0);
        const auto grid = make_grid(kGrid, Distribution::logistic(-3.0, 1.5));
        const auto rep = verify_exprs(lhs, rhs, grid, 1e-6, std::nullopt);
        CHECK(rep.sup_cdf_distance < 1e-6);
    }
    {
        const auto lhs = RandomExpr::sum(RandomExpr::leaf(logi, "x"),
                                         RandomExpr::negate(RandomExpr::leaf(expo, "z")));
        const auto rhs = RandomExpr::leaf(OrderStatistic(logi, 1, 2), "m");
        const auto grid = make_grid(kGrid, Distribution::logistic(-0.5, 1.2));
        const auto rep = verify_exprs(lhs, rhs, grid, 1e-6, std::nullopt);
        // frozen floor 7.81e-2
        CHECK(rep.sup_cdf_distance > 0.05);
    }

    // X =d X_{1,2} + Z holds for the logistic law (catalog L8i) and fails
    // for the reversed exponential.
    {
        const auto rep = verify_identity(find_identity("L8i"), {1, 0, 2}, logi, kGrid, 1e-6,
                                         std::nullopt);
        CHECK(rep.pass());
    }
    {
        const auto lhs = RandomExpr::scale(RandomExpr::leaf(expo, "x"), -2.0);
        const auto rhs = RandomExpr::sum(
            RandomExpr::scale(RandomExpr::leaf(OrderStatistic(expo, 2, 2), "m"), -2.0),
            RandomExpr::leaf(expo, "z"));
        const auto grid = make_grid(kGrid, Distribution::logistic(-2.0, 1.0));
        const auto rep = verify_exprs(lhs, rhs, grid, 1e-6, std::nullopt);
        // frozen floor 1.64e-1
        CHECK(rep.sup_cdf_distance > 0.1);
    }
}

TEST_CASE("ks_two_sample: exact values on small samples") {
    CHECK(ks_two_sample({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}) == 0.0);
    CHECK(ks_two_sample({1.0, 2.0}, {10.0, 20.0}) == 1.0);
    // {1,3} vs {2,4}: ecdfs disagree by 1/2 between the interleaved points
    CHECK(ks_two_sample({1.0, 3.0}, {2.0, 4.0}) == doctest::Approx(0.5).epsilon(1e-15));
    // ties collapse: identical pooled values cannot separate the samples
    CHECK(ks_two_sample({1.0, 1.0}, {1.0, 1.0}) == 0.0);
    CHECK(two_sample_bound(100000, 100000) ==
          doctest::Approx(1.95 * std::sqrt(2.0 / 100000.0)).epsilon(1e-12));
}
