#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ordident/distributions.hpp"
#include "ordident/grid.hpp"

namespace ordident {

// Parameters of the separable ODE  |x|^a F'(x) = theta F(x) (1 - F(x)^r).
// Two closed-form branches:
//   a = 1: support (0, inf), F(x) = (lambda x^{r theta} / (1 + lambda x^{r theta}))^{1/r};
//   a < 1: support all of R,  F(x)^r / (1 - F(x)^r) = lambda exp(r theta s(x))
//          with s(x) = sign(x) |x|^{1-a} / (1-a).
// Both reduce to F = sigma(w)^{1/r} with w = log lambda + r theta s(x), where
// sigma is the standard logistic function and s(x) = log x on the a = 1 branch.
struct OdeParams {
    double r = 1.0;
    double theta = 1.0;
    double a = 1.0;
    double lambda = 1.0;

    // r, theta, lambda > 0; a in [0, 1]. Throws std::domain_error.
    void validate() const;
};

double ode_cdf(const OdeParams& p, double x);

// Density by mechanical differentiation of the closed form. Unbounded at
// x = 0 when 0 < a < 1 (returns +inf there); zero off the support.
double ode_pdf(const OdeParams& p, double x);

double ode_quantile(const OdeParams& p, double q);

// |x|^a F'(x), with the |x|^{-a} factor of F' cancelled analytically so the
// value is finite at x = 0. The a = 1 branch requires x > 0.
double ode_lhs(const OdeParams& p, double x);

// Max over the grid of |ode_lhs(x) - theta F(x)(1 - F(x)^r)|. Quantile
// spacing places the grid by ode_quantile; uniform grids must stay inside
// the branch support (x = 0 included only when a < 1).
double ode_residual_max(const OdeParams& p, const GridSpec& grid);

// The three functional equations in the unknown CDF F, all on y > 0:
//   DerivBalance:    y F_{k,n-1}'(y) = (n-k) [F_{k,n}(y) - F_{k,n-1}(y)]
//   MaxScaleMix:     F(y)^k = E[ F_{k,n}(y B) ],              B ~ Beta(1, n-k)
//   TrimmedScaleMix: F_{k,n-m}(y) = E[ F_{k,n}(y B1) ],       B1 ~ Beta(n-m-k+1, m)
// where F_{k,n} is the CDF of the k-th order statistic of n draws from F.
enum class FuncEq { DerivBalance, MaxScaleMix, TrimmedScaleMix };

std::string funceq_name(FuncEq eq);
FuncEq funceq_from_name(const std::string& name);

struct FuncEqParams {
    int k = 1;
    int m = 0;  // TrimmedScaleMix only
    int n = 2;
    double lambda = 1.0;  // fixed-point grid scale; residuals ignore it
};

// The mixing law the equation integrates against. DerivBalance has none and
// throws std::invalid_argument.
Distribution funceq_mixing_law(FuncEq eq, const FuncEqParams& p);

// CDF-like function on positive nodes: 0 at and below 0, linear from (0,0)
// to the first node, linear between nodes, 1 beyond the last node.
class GridFunction {
public:
    // nodes strictly increasing and positive; values same length, finite.
    GridFunction(std::vector<double> nodes, std::vector<double> values);

    double operator()(double y) const;

    const std::vector<double>& nodes() const noexcept { return nodes_; }
    const std::vector<double>& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return nodes_.size(); }

    // values in [0,1] and nondecreasing.
    bool is_cdf() const;

private:
    std::vector<double> nodes_;
    std::vector<double> values_;
};

// Max absolute residual of `eq` over a grid built from F (quantile spacing
// uses F's own quantiles; the grid must be positive). `mix`, when given,
// must equal funceq_mixing_law(eq, params); it exists so callers can state
// the law explicitly and be checked, not to change the equation.
double functional_eq_residual(FuncEq eq, const Distribution& F, const FuncEqParams& params,
                              const std::optional<Distribution>& mix, const GridSpec& grid);

// Same residual with F a discretized CDF, evaluated on F's own nodes.
// DerivBalance differentiates by central differences (interior nodes only);
// the scale-mix integrals split at F's kinks and are exact per piece.
double functional_eq_residual(FuncEq eq, const GridFunction& F, const FuncEqParams& params,
                              const std::optional<Distribution>& mix);

// Quantile nodes of ParetoII(lambda, 1) at probabilities on a smoothstep
// ladder p_i = (1-1e-3) s^2 (3-2s), s = i/points. The quadratic head keeps
// the pinned slope condition accurate; the flattened tail keeps per-gap
// interpolation error uniform. Downward-closed under scaling by u in (0,1)
// up to interpolation, which is what the scale-mix equations need.
std::vector<double> fixed_point_grid(double lambda, int points);

// Exact target values lambda y / (1 + lambda y) on the nodes.
GridFunction pareto_start(double lambda, const std::vector<double>& nodes);

// min(lambda y, 1) on the nodes: valid CDF, correct slope at 0, far from
// the fixed point elsewhere.
GridFunction clamped_linear_start(double lambda, const std::vector<double>& nodes);

struct FixedPointResult {
    GridFunction solution;
    std::vector<double> trace;  // sup |F_{t+1} - F_t| per sweep
    bool converged = false;
    int sweeps = 0;
};

// Sweeps F <- equation's right side (inverted through the left side's outer
// map) on fixed_point_grid(params.lambda, grid.points); grid.spacing must be
// Quantile. init is resampled onto that grid, clamped, monotonized, and
// pinned to F(y0) = lambda y0 each sweep (left-boundary slope condition).
// Stops when the sweep delta drops below tol or after max_iter sweeps.
// Five consecutive delta increases throw NonConvergenceError with the trace.
// Only MaxScaleMix and TrimmedScaleMix are solvable this way. Convergence
// for TrimmedScaleMix is observed, not proven; its hypotheses (analyticity,
// a second-order boundary condition) are not representable on a grid.
FixedPointResult fixed_point_solve(FuncEq eq, const FuncEqParams& params, const GridSpec& grid,
                                   const GridFunction& init, int max_iter, double tol);

}  // namespace ordident
