#include "ordident/characterization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ordident/errors.hpp"
#include "ordident/order_statistics.hpp"
#include "ordident/quadrature.hpp"
#include "ordident/special.hpp"

namespace ordident {

void OdeParams::validate() const {
    if (!(r > 0.0) || !std::isfinite(r)) throw std::domain_error("OdeParams: r must be positive");
    if (!(theta > 0.0) || !std::isfinite(theta)) {
        throw std::domain_error("OdeParams: theta must be positive");
    }
    if (!(a >= 0.0 && a <= 1.0)) throw std::domain_error("OdeParams: a must lie in [0,1]");
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw std::domain_error("OdeParams: lambda must be positive");
    }
}

namespace {

double log_sigma(double w) {
    return w >= 0.0 ? -std::log1p(std::exp(-w)) : w - std::log1p(std::exp(w));
}

double sigma(double w) {
    if (w >= 0.0) return 1.0 / (1.0 + std::exp(-w));
    const double e = std::exp(w);
    return e / (1.0 + e);
}

// s(x) of the closed form; log x on the a = 1 branch.
double ode_s(const OdeParams& p, double x) {
    if (p.a == 1.0) return std::log(x);
    const double s = std::pow(std::fabs(x), 1.0 - p.a) / (1.0 - p.a);
    return x < 0.0 ? -s : s;
}

double ode_arg(const OdeParams& p, double x) {
    return std::log(p.lambda) + p.r * p.theta * ode_s(p, x);
}

}  // namespace

double ode_cdf(const OdeParams& p, double x) {
    p.validate();
    if (p.a == 1.0 && x <= 0.0) return 0.0;
    return std::exp(log_sigma(ode_arg(p, x)) / p.r);
}

double ode_pdf(const OdeParams& p, double x) {
    p.validate();
    if (p.a == 1.0 && x <= 0.0) return 0.0;
    const double w = ode_arg(p, x);
    const double f = std::exp(log_sigma(w) / p.r);
    // F' = theta F sigma(-w) |x|^{-a}; the last factor diverges at 0 for a > 0.
    return p.theta * f * sigma(-w) * std::pow(std::fabs(x), -p.a);
}

double ode_quantile(const OdeParams& p, double q) {
    p.validate();
    if (!(q > 0.0 && q < 1.0)) throw std::domain_error("ode_quantile: q outside (0,1)");
    const double h = std::pow(q, p.r);
    const double w = p.r * std::log(q) - std::log1p(-h);
    const double s = (w - std::log(p.lambda)) / (p.r * p.theta);
    if (p.a == 1.0) return std::exp(s);
    const double mag = std::pow((1.0 - p.a) * std::fabs(s), 1.0 / (1.0 - p.a));
    return s < 0.0 ? -mag : mag;
}

double ode_lhs(const OdeParams& p, double x) {
    p.validate();
    if (p.a == 1.0 && !(x > 0.0)) {
        throw std::domain_error("ode_lhs: the a = 1 branch needs x > 0");
    }
    const double w = ode_arg(p, x);
    return p.theta * std::exp(log_sigma(w) / p.r) * sigma(-w);
}

double ode_residual_max(const OdeParams& p, const GridSpec& grid) {
    p.validate();
    if (grid.points < 3) throw std::domain_error("ode_residual_max: need at least 3 points");

    std::vector<double> xs;
    xs.reserve(grid.points);
    if (grid.spacing == GridSpacing::Quantile) {
        const double eps = kQuantileGridEps;
        for (int i = 0; i < grid.points; ++i) {
            const double q = eps + (1.0 - 2.0 * eps) * i / (grid.points - 1);
            xs.push_back(ode_quantile(p, q));
        }
    } else {
        if (!(grid.lower < grid.upper)) {
            throw std::domain_error("ode_residual_max: need lower < upper");
        }
        for (int i = 0; i < grid.points; ++i) {
            xs.push_back(grid.lower + (grid.upper - grid.lower) * i / (grid.points - 1));
        }
    }
    if (p.a == 1.0) {
        for (double x : xs) {
            if (!(x > 0.0)) {
                throw std::domain_error("ode_residual_max: grid leaves the a = 1 support (0,inf)");
            }
        }
    }

    double worst = 0.0;
    for (double x : xs) {
        const double f = ode_cdf(p, x);
        const double rhs = p.theta * f * (1.0 - std::pow(f, p.r));
        worst = std::max(worst, std::fabs(ode_lhs(p, x) - rhs));
    }
    return worst;
}

std::string funceq_name(FuncEq eq) {
    switch (eq) {
        case FuncEq::DerivBalance: return "deriv-balance";
        case FuncEq::MaxScaleMix: return "max-scale-mix";
        case FuncEq::TrimmedScaleMix: return "trimmed-scale-mix";
    }
    return "?";
}

FuncEq funceq_from_name(const std::string& name) {
    if (name == "deriv-balance") return FuncEq::DerivBalance;
    if (name == "max-scale-mix") return FuncEq::MaxScaleMix;
    if (name == "trimmed-scale-mix") return FuncEq::TrimmedScaleMix;
    throw std::domain_error("unknown functional equation: " + name);
}

namespace {

void validate_funceq_params(FuncEq eq, const FuncEqParams& p) {
    if (!(p.lambda > 0.0) || !std::isfinite(p.lambda)) {
        throw std::domain_error("FuncEqParams: lambda must be positive");
    }
    switch (eq) {
        case FuncEq::DerivBalance:
        case FuncEq::MaxScaleMix:
            if (!(1 <= p.k && p.k <= p.n - 1)) {
                throw std::domain_error("FuncEqParams: need 1 <= k <= n-1");
            }
            break;
        case FuncEq::TrimmedScaleMix:
            if (p.m < 1) throw std::domain_error("FuncEqParams: need m >= 1");
            if (!(1 <= p.k && p.k <= p.n - p.m)) {
                throw std::domain_error("FuncEqParams: need 1 <= k <= n-m");
            }
            break;
    }
}

void check_mixing_law(FuncEq eq, const FuncEqParams& p, const std::optional<Distribution>& mix) {
    if (!mix) return;
    if (eq == FuncEq::DerivBalance) {
        throw std::invalid_argument("deriv-balance takes no mixing law");
    }
    const Distribution expected = funceq_mixing_law(eq, p);
    const auto* got = std::get_if<BetaLaw>(&mix->law());
    const auto* want = std::get_if<BetaLaw>(&expected.law());
    if (!got || got->alpha != want->alpha || got->beta != want->beta) {
        throw std::invalid_argument("mixing law must be " + expected.family_name() + "(" +
                                    std::to_string(want->alpha) + "," + std::to_string(want->beta) +
                                    ") for " + funceq_name(eq));
    }
}

}  // namespace

Distribution funceq_mixing_law(FuncEq eq, const FuncEqParams& p) {
    validate_funceq_params(eq, p);
    switch (eq) {
        case FuncEq::MaxScaleMix:
            return Distribution::beta(1.0, static_cast<double>(p.n - p.k));
        case FuncEq::TrimmedScaleMix:
            return Distribution::beta(static_cast<double>(p.n - p.m - p.k + 1),
                                      static_cast<double>(p.m));
        case FuncEq::DerivBalance: break;
    }
    throw std::invalid_argument("deriv-balance has no mixing law");
}

GridFunction::GridFunction(std::vector<double> nodes, std::vector<double> values)
    : nodes_(std::move(nodes)), values_(std::move(values)) {
    if (nodes_.size() != values_.size()) {
        throw std::domain_error("GridFunction: nodes/values length mismatch");
    }
    if (nodes_.size() < 2) throw std::domain_error("GridFunction: need at least 2 nodes");
    if (!(nodes_.front() > 0.0)) throw std::domain_error("GridFunction: nodes must be positive");
    for (std::size_t i = 1; i < nodes_.size(); ++i) {
        if (!(nodes_[i] > nodes_[i - 1])) {
            throw std::domain_error("GridFunction: nodes must increase strictly");
        }
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw std::domain_error("GridFunction: values must be finite");
    }
}

double GridFunction::operator()(double y) const {
    if (y <= 0.0) return 0.0;
    if (y >= nodes_.back()) return y == nodes_.back() ? values_.back() : 1.0;
    if (y <= nodes_.front()) return values_.front() * (y / nodes_.front());
    const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), y);
    const std::size_t i = static_cast<std::size_t>(it - nodes_.begin());
    const double t = (y - nodes_[i - 1]) / (nodes_[i] - nodes_[i - 1]);
    return values_[i - 1] + t * (values_[i] - values_[i - 1]);
}

bool GridFunction::is_cdf() const {
    double prev = 0.0;
    for (double v : values_) {
        if (!(v >= prev && v <= 1.0)) return false;
        prev = v;
    }
    return true;
}

namespace {

// E[ B_{k,n-k+1}(F(y u)) ] against the Beta(alpha,beta) mixing density, for a
// piecewise-linear F: the integrand is polynomial between F's kinks, so one
// K15 panel per piece is exact at the degrees used here.
template <class FEval>
double scale_mix_rhs_kinked(FEval&& f, const std::vector<double>& nodes, double y, int k, int n,
                            double alpha, double beta_, double lbc) {
    const double bk = static_cast<double>(n - k + 1);
    auto integrand = [&](double u) {
        const double lw = (alpha - 1.0) * std::log(u) + (beta_ - 1.0) * std::log1p(-u) - lbc;
        return reg_inc_beta(static_cast<double>(k), bk, f(y * u)) * std::exp(lw);
    };

    double total = 0.0;
    double prev = 0.0;
    for (double node : nodes) {
        if (!(node < y)) break;
        const double cut = node / y;
        if (cut > prev && cut < 1.0) {
            total += gk15_panel(integrand, prev, cut).value;
            prev = cut;
        }
    }
    total += gk15_panel(integrand, prev, 1.0).value;
    return total;
}

double scale_mix_rhs_adaptive(const Distribution& F, double y, int k, int n, double alpha,
                              double beta_) {
    auto integrand = [&](double u) {
        return reg_inc_beta(static_cast<double>(k), static_cast<double>(n - k + 1), F.cdf(y * u)) *
               beta_pdf(alpha, beta_, u);
    };
    const QuadResult res = integrate_gk(integrand, 0.0, 1.0, 1e-10, 2000);
    if (!res.converged) {
        throw NumericalError("functional_eq_residual: mixing integral did not converge", res.error);
    }
    return res.value;
}

}  // namespace

double functional_eq_residual(FuncEq eq, const Distribution& F, const FuncEqParams& params,
                              const std::optional<Distribution>& mix, const GridSpec& grid) {
    validate_funceq_params(eq, params);
    check_mixing_law(eq, params, mix);

    const std::vector<double> ys = make_grid(grid, F);
    for (double y : ys) {
        if (!(y > 0.0)) {
            throw std::domain_error("functional_eq_residual: grid must be positive");
        }
    }

    const int k = params.k;
    const int n = params.n;
    double worst = 0.0;

    if (eq == FuncEq::DerivBalance) {
        const OrderStatistic trimmed(F, k, n - 1);
        const OrderStatistic full(F, k, n);
        for (double y : ys) {
            const double res = y * trimmed.pdf(y) - (n - k) * (full.cdf(y) - trimmed.cdf(y));
            worst = std::max(worst, std::fabs(res));
        }
        return worst;
    }

    const Distribution law = funceq_mixing_law(eq, params);
    const auto& bl = std::get<BetaLaw>(law.law());
    for (double y : ys) {
        const double rhs = scale_mix_rhs_adaptive(F, y, k, n, bl.alpha, bl.beta);
        const double fy = F.cdf(y);
        const double lhs = eq == FuncEq::MaxScaleMix
                               ? std::pow(fy, k)
                               : reg_inc_beta(k, static_cast<double>(n - params.m - k + 1), fy);
        worst = std::max(worst, std::fabs(lhs - rhs));
    }
    return worst;
}

double functional_eq_residual(FuncEq eq, const GridFunction& F, const FuncEqParams& params,
                              const std::optional<Distribution>& mix) {
    validate_funceq_params(eq, params);
    check_mixing_law(eq, params, mix);
    if (!F.is_cdf()) {
        throw std::domain_error("functional_eq_residual: grid function is not a CDF");
    }

    const auto& ys = F.nodes();
    const auto& vs = F.values();
    const int k = params.k;
    const int n = params.n;
    double worst = 0.0;

    if (eq == FuncEq::DerivBalance) {
        // central differences need both neighbors; endpoints are skipped
        for (std::size_t i = 1; i + 1 < ys.size(); ++i) {
            const double fp = (vs[i + 1] - vs[i - 1]) / (ys[i + 1] - ys[i - 1]);
            const double u = vs[i];
            const double dens =
                (u > 0.0 && u < 1.0) ? beta_pdf(k, static_cast<double>(n - k), u) * fp : 0.0;
            const double gap = reg_inc_beta(k, static_cast<double>(n - k + 1), u) -
                               reg_inc_beta(k, static_cast<double>(n - k), u);
            worst = std::max(worst, std::fabs(ys[i] * dens - (n - k) * gap));
        }
        return worst;
    }

    const Distribution law = funceq_mixing_law(eq, params);
    const auto& bl = std::get<BetaLaw>(law.law());
    const double lbc = lbeta(bl.alpha, bl.beta);
    for (std::size_t i = 0; i < ys.size(); ++i) {
        const double rhs = scale_mix_rhs_kinked(F, ys, ys[i], k, n, bl.alpha, bl.beta, lbc);
        const double lhs = eq == FuncEq::MaxScaleMix
                               ? std::pow(vs[i], k)
                               : reg_inc_beta(k, static_cast<double>(n - params.m - k + 1), vs[i]);
        worst = std::max(worst, std::fabs(lhs - rhs));
    }
    return worst;
}

std::vector<double> fixed_point_grid(double lambda, int points) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw std::domain_error("fixed_point_grid: lambda must be positive");
    }
    if (points < 3) throw std::domain_error("fixed_point_grid: need at least 3 points");
    std::vector<double> nodes;
    nodes.reserve(points);
    for (int i = 1; i <= points; ++i) {
        // Smoothstep ladder: quadratic near s = 0 so the first node sits at
        // y ~ 1/points^2 and the pinned head value lands within O(y^2) of any
        // CDF with slope lambda at 0, flattened near s = 1 so per-gap
        // interpolation error stays bounded as the quantiles run off to
        // infinity. A uniform ladder leaks its O(y_1^2) pin error into the
        // solved fixed point, amplified by the scale-mix cascade.
        const double s = static_cast<double>(i) / points;
        const double p = (1.0 - 1e-3) * s * s * (3.0 - 2.0 * s);
        nodes.push_back(p / (lambda * (1.0 - p)));
    }
    return nodes;
}

GridFunction pareto_start(double lambda, const std::vector<double>& nodes) {
    std::vector<double> vals;
    vals.reserve(nodes.size());
    for (double y : nodes) {
        const double t = lambda * y;
        vals.push_back(t / (1.0 + t));
    }
    return GridFunction(nodes, vals);
}

GridFunction clamped_linear_start(double lambda, const std::vector<double>& nodes) {
    std::vector<double> vals;
    vals.reserve(nodes.size());
    for (double y : nodes) vals.push_back(std::min(lambda * y, 1.0));
    return GridFunction(nodes, vals);
}

FixedPointResult fixed_point_solve(FuncEq eq, const FuncEqParams& params, const GridSpec& grid,
                                   const GridFunction& init, int max_iter, double tol) {
    if (eq == FuncEq::DerivBalance) {
        throw std::invalid_argument("fixed_point_solve: deriv-balance is not a scale mix");
    }
    validate_funceq_params(eq, params);
    if (grid.spacing != GridSpacing::Quantile) {
        throw std::domain_error("fixed_point_solve: grid spacing must be quantile");
    }
    if (max_iter < 1) throw std::domain_error("fixed_point_solve: max_iter must be >= 1");
    if (!(tol > 0.0)) throw std::domain_error("fixed_point_solve: tol must be positive");

    const std::vector<double> nodes = fixed_point_grid(params.lambda, grid.points);
    const double pin = std::min(params.lambda * nodes.front(), 1.0);

    std::vector<double> v;
    v.reserve(nodes.size());
    for (double y : nodes) v.push_back(std::clamp(init(y), 0.0, 1.0));
    v.front() = pin;
    for (std::size_t i = 1; i < v.size(); ++i) v[i] = std::max(v[i], v[i - 1]);

    const int k = params.k;
    const int n = params.n;
    const Distribution law = funceq_mixing_law(eq, params);
    const auto& bl = std::get<BetaLaw>(law.law());
    const double lbc = lbeta(bl.alpha, bl.beta);

    // interpolation identical to GridFunction's without re-validating per sweep
    auto interp = [&nodes, &v](double y) {
        if (y <= 0.0) return 0.0;
        if (y >= nodes.back()) return v.back();
        if (y <= nodes.front()) return v.front() * (y / nodes.front());
        const auto it = std::upper_bound(nodes.begin(), nodes.end(), y);
        const std::size_t i = static_cast<std::size_t>(it - nodes.begin());
        const double t = (y - nodes[i - 1]) / (nodes[i] - nodes[i - 1]);
        return v[i - 1] + t * (v[i] - v[i - 1]);
    };

    FixedPointResult out{GridFunction(nodes, v), {}, false, 0};
    std::vector<double> next(v.size());
    double prev_delta = std::numeric_limits<double>::infinity();
    int rising = 0;

    for (int sweep = 0; sweep < max_iter; ++sweep) {
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const double integral = std::clamp(
                scale_mix_rhs_kinked(interp, nodes, nodes[i], k, n, bl.alpha, bl.beta, lbc), 0.0,
                1.0);
            next[i] = eq == FuncEq::MaxScaleMix
                          ? std::pow(integral, 1.0 / k)
                          : reg_inc_beta_inv(k, static_cast<double>(n - params.m - k + 1), integral);
        }
        next.front() = pin;
        for (std::size_t i = 1; i < next.size(); ++i) next[i] = std::max(next[i], next[i - 1]);

        double delta = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) delta = std::max(delta, std::fabs(next[i] - v[i]));
        v.swap(next);
        out.trace.push_back(delta);
        out.sweeps = sweep + 1;

        if (delta < tol) {
            out.converged = true;
            break;
        }
        rising = delta > prev_delta ? rising + 1 : 0;
        prev_delta = delta;
        if (rising >= 5) {
            throw NonConvergenceError("fixed_point_solve: sweep deltas rising", out.trace);
        }
    }

    out.solution = GridFunction(nodes, v);
    return out;
}

}  // namespace ordident
