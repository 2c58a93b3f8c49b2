#include "ordident/order_statistics.hpp"

#include <cmath>
#include <stdexcept>

#include "ordident/special.hpp"

namespace ordident {

OrderStatistic::OrderStatistic(Distribution base, int k, int n)
    : base_(std::move(base)), k_(k), n_(n) {
    if (k < 1 || n < k || n > kMaxOrderStatN) {
        throw std::domain_error("OrderStatistic: need 1 <= k <= n <= 60");
    }
}

double OrderStatistic::cdf(double x) const {
    const double u = base_.cdf(x);
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    return reg_inc_beta(static_cast<double>(k_), static_cast<double>(n_ - k_ + 1), u);
}

double OrderStatistic::pdf(double x) const {
    const double u = base_.cdf(x);
    if (u <= 0.0 || u >= 1.0) return 0.0;
    const double dens = base_.pdf(x);
    if (dens == 0.0) return 0.0;
    return beta_pdf(static_cast<double>(k_), static_cast<double>(n_ - k_ + 1), u) * dens;
}

double OrderStatistic::quantile(double p) const {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("OrderStatistic::quantile: p outside (0,1)");
    }
    const double u = reg_inc_beta_inv(static_cast<double>(k_), static_cast<double>(n_ - k_ + 1), p);
    // The beta quantile is interior for p interior, but guard the base call.
    if (u <= 0.0) return base_.support().first;
    if (u >= 1.0) return base_.support().second;
    return base_.quantile(u);
}

void OrderStatistic::sample(RngStream& rng, std::span<double> out) const {
    for (double& v : out) {
        v = quantile(rng.uniform01());
    }
}

std::vector<double> OrderStatistic::sample(RngStream& rng, std::size_t count) const {
    if (count < 1) {
        throw std::domain_error("OrderStatistic::sample: count must be >= 1");
    }
    std::vector<double> out(count);
    sample(rng, std::span<double>(out));
    return out;
}

double exp_order_laplace(int k, int n, double s) {
    if (k < 1 || n < k || n > kMaxOrderStatN) {
        throw std::domain_error("exp_order_laplace: need 1 <= k <= n <= 60");
    }
    if (!(s >= 0.0)) {
        throw std::domain_error("exp_order_laplace: need s >= 0");
    }
    double prod = 1.0;
    for (int j = 1; j <= k; ++j) {
        const double c = static_cast<double>(n - j + 1);
        prod *= c / (c + s);
    }
    return prod;
}

}  // namespace ordident
