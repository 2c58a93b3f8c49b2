#include "ordident/verify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ordident/rng.hpp"

namespace ordident {

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) {
        throw std::domain_error("ks_two_sample: empty sample");
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());

    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        // Advance past ties in lockstep so the gap is measured between, not
        // inside, equal-value runs.
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::fabs(i / na - j / nb));
    }
    return d;
}

double two_sample_bound(std::size_t n1, std::size_t n2) {
    return 1.95 * std::sqrt(1.0 / static_cast<double>(n1) + 1.0 / static_cast<double>(n2));
}

VerificationReport verify_exprs(const RandomExpr& lhs, const RandomExpr& rhs,
                                const std::vector<double>& grid, double tol,
                                const std::optional<McSettings>& mc,
                                const QuadSettings& quad) {
    if (!(tol > 0.0)) {
        throw std::domain_error("verify_exprs: tolerance must be positive");
    }
    VerificationReport rep;
    rep.tol = tol;

    ExprDistribution dl(lhs, quad);
    ExprDistribution dr(rhs, quad);
    double sup = 0.0;
    for (double x : grid) {
        sup = std::max(sup, std::fabs(dl.cdf(x) - dr.cdf(x)));
    }
    rep.sup_cdf_distance = sup;
    rep.quad_pass = sup < tol;

    if (mc && mc->size > 0) {
        rep.mc_size = mc->size;
        rep.seed = mc->seed;
        RngStream root(mc->seed);
        RngStream sl = root.substream(0);
        RngStream sr = root.substream(1);
        const auto xs = expr_sample(lhs, sl, static_cast<std::size_t>(mc->size));
        const auto ys = expr_sample(rhs, sr, static_cast<std::size_t>(mc->size));
        rep.mc_distance = ks_two_sample(xs, ys);
        rep.mc_bound = two_sample_bound(xs.size(), ys.size());
        rep.mc_pass = rep.mc_distance < rep.mc_bound;
    }
    return rep;
}

VerificationReport verify_identity(const IdentityRecord& rec, const IdentityParams& params,
                                   const Distribution& base, const GridSpec& grid, double tol,
                                   const std::optional<McSettings>& mc,
                                   const QuadSettings& quad) {
    if (!rec.constraint(params)) {
        throw std::domain_error("verify_identity: params violate constraint for " + rec.id +
                                " (" + rec.constraint_text + ")");
    }
    const std::vector<double> xs = make_grid(grid, base);
    VerificationReport rep =
        verify_exprs(rec.lhs(params, base), rec.rhs(params, base), xs, tol, mc, quad);
    rep.id = rec.id;
    rep.params = params;
    if (!rec.uses_m) rep.params.m = 0;
    rep.base_family = base.family_name();
    rep.grid = grid;
    return rep;
}

}  // namespace ordident
