#pragma once

// Reference implementations used only by tests. Each takes the slow or
// obvious route the library avoids (binomial sums, sorting, RK4), so
// agreement is evidence rather than a tautology.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "ordident/distributions.hpp"
#include "ordident/rng.hpp"

namespace oracle {

// Pascal's triangle, independent of the library's multiplicative scheme.
inline double pascal_binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    std::vector<double> row{1.0};
    for (int i = 1; i <= n; ++i) {
        std::vector<double> next(i + 1, 1.0);
        for (int j = 1; j < i; ++j) next[j] = row[j - 1] + row[j];
        row = std::move(next);
    }
    return row[k];
}

// P(X_{k,n} <= x) = sum_{j=k}^{n} C(n,j) F^j (1-F)^{n-j} with F = base cdf(x).
inline double os_cdf_binomial_sum(double base_cdf, int k, int n) {
    double total = 0.0;
    for (int j = k; j <= n; ++j) {
        total += pascal_binomial(n, j) * std::pow(base_cdf, j) *
                 std::pow(1.0 - base_cdf, n - j);
    }
    return total;
}

// Draws n fresh variates, sorts, keeps the k-th smallest. The library
// samples through the beta-quantile composition instead.
inline std::vector<double> os_sample_sorting(const ordident::Distribution& base, int k, int n,
                                             ordident::RngStream& rng, std::size_t count) {
    std::vector<double> out(count);
    std::vector<double> block(n);
    for (std::size_t i = 0; i < count; ++i) {
        for (int j = 0; j < n; ++j) block[j] = base.quantile(rng.uniform01());
        std::sort(block.begin(), block.end());
        out[i] = block[k - 1];
    }
    return out;
}

// RK4 on dF/du = theta F (1 - F^r), the separable ODE in the variable
// u = log x (a = 1) or u = sign(x)|x|^{1-a}/(1-a) (a < 1). Anchored at
// u = 0 where the integration constant fixes F^r/(1-F^r) = lambda; from
// there the solver never touches the closed-form branches.
inline double ode_cdf_rk4(double r, double theta, double a, double lambda, double x,
                          int steps = 4000) {
    double u;
    if (a == 1.0) {
        if (x <= 0.0) return 0.0;
        u = std::log(x);
    } else {
        u = (x >= 0.0 ? 1.0 : -1.0) * std::pow(std::fabs(x), 1.0 - a) / (1.0 - a);
    }
    double f = std::pow(lambda / (1.0 + lambda), 1.0 / r);
    const double h = u / steps;
    const auto rhs = [&](double v) { return theta * v * (1.0 - std::pow(v, r)); };
    for (int i = 0; i < steps; ++i) {
        const double k1 = rhs(f);
        const double k2 = rhs(f + 0.5 * h * k1);
        const double k3 = rhs(f + 0.5 * h * k2);
        const double k4 = rhs(f + h * k3);
        f += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return std::clamp(f, 0.0, 1.0);
}

// Composite Simpson on [a, b] with n subintervals (n even).
template <class F>
double simpson(F&& f, double a, double b, int n) {
    if (n % 2 != 0) throw std::invalid_argument("simpson: n must be even");
    const double h = (b - a) / n;
    double total = f(a) + f(b);
    for (int i = 1; i < n; ++i) {
        total += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    }
    return total * h / 3.0;
}

// sup_x |ecdf(x) - F(x)| over the sample, both one-sided gaps.
inline double ks_one_sample(std::vector<double> sample, const ordident::Distribution& dist) {
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = dist.cdf(sample[i]);
        d = std::max(d, std::fabs((i + 1) / n - f));
        d = std::max(d, std::fabs(f - i / n));
    }
    return d;
}

inline double sample_mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

}  // namespace oracle
