#pragma once

#include <span>
#include <vector>

#include "ordident/distributions.hpp"
#include "ordident/rng.hpp"

namespace ordident {

inline constexpr int kMaxOrderStatN = 60;

// k-th smallest of n iid draws from a base distribution. Everything routes
// through the beta composition
//   F_{k,n}(x) = I_{F(x)}(k, n-k+1),
// so no combinatorial sums appear and n up to 60 stays at full accuracy.
class OrderStatistic {
public:
    // 1 <= k <= n <= kMaxOrderStatN; throws std::domain_error otherwise.
    OrderStatistic(Distribution base, int k, int n);

    double cdf(double x) const;

    // beta_pdf(k, n-k+1, F(x)) * f(x); 0 outside the base's open support.
    double pdf(double x) const;

    // base.quantile(BetaInv(k, n-k+1, p)), p in (0,1).
    double quantile(double p) const;

    // One draw per beta-quantile composition: quantile(u). Deterministic in
    // the stream; never materializes or sorts an n-sample.
    void sample(RngStream& rng, std::span<double> out) const;
    std::vector<double> sample(RngStream& rng, std::size_t count) const;

    const Distribution& base() const noexcept { return base_; }
    int k() const noexcept { return k_; }
    int n() const noexcept { return n_; }

private:
    Distribution base_;
    int k_;
    int n_;
};

// Laplace transform E[exp(-s X_{k,n})] for X standard exponential:
// the product over j = 1..k of (n-j+1) / (n-j+1+s). s >= 0.
double exp_order_laplace(int k, int n, double s);

}  // namespace ordident
