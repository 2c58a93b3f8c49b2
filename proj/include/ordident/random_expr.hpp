#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "ordident/distributions.hpp"
#include "ordident/order_statistics.hpp"
#include "ordident/rng.hpp"

namespace ordident {

// Expression tree over independent random leaves. Immutable; subtrees are
// shared. Leaves carry independence tags: distinct tags draw independently,
// and one expression must not reuse a tag (checked by validate()).
//
// Node semantics: Negate(e) = -e, Scale(e,c) = c*e, Power(e,p) = e^p,
// Sum(a,b) = a+b, Product(a,b) = a*b. Power and Product require operands
// provably supported on (0, inf); differences and quotients are spelled
// Sum(a, Negate(b)) and Product(a, Power(b, -1)).

class RandomExpr;

struct LeafNode {
    std::variant<Distribution, OrderStatistic> law;
    std::string tag;
};

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct NegateNode { ExprPtr child; };
struct ScaleNode { ExprPtr child; double factor; };
struct PowerNode { ExprPtr child; double exponent; };
struct SumNode { ExprPtr lhs; ExprPtr rhs; };
struct ProductNode { ExprPtr lhs; ExprPtr rhs; };

struct ExprNode {
    std::variant<LeafNode, NegateNode, ScaleNode, PowerNode, SumNode, ProductNode> node;
};

inline constexpr int kMaxExprDepth = 8;

class RandomExpr {
public:
    static RandomExpr leaf(Distribution dist, std::string tag);
    static RandomExpr leaf(OrderStatistic os, std::string tag);
    static RandomExpr negate(RandomExpr e);
    static RandomExpr scale(RandomExpr e, double factor);      // factor != 0
    static RandomExpr power(RandomExpr e, double exponent);    // exponent != 0; e positive
    static RandomExpr sum(RandomExpr a, RandomExpr b);
    static RandomExpr product(RandomExpr a, RandomExpr b);     // both positive

    // Leaf count of the longest root-to-leaf chain; builders reject trees
    // deeper than kMaxExprDepth (the quadrature nesting budget).
    int depth() const noexcept { return depth_; }

    // True when the expression is provably supported on (0, inf): a leaf
    // whose support's lower end is >= 0, or a positivity-closed composition.
    bool positive() const;

    // Re-checks structural invariants including tag distinctness; throws
    // std::invalid_argument on violation. Builders validate their local
    // constraints eagerly, so this mainly guards hand-assembled trees.
    void validate() const;

    std::vector<std::string> tags() const;

    const ExprPtr& root() const noexcept { return root_; }

private:
    explicit RandomExpr(ExprPtr root, int depth) : root_(std::move(root)), depth_(depth) {}

    ExprPtr root_;
    int depth_;
};

// Quadrature/evaluation settings for expression CDFs.
//
// abs_tol/max_panels govern each adaptive integral; total_budget is the
// shared function-evaluation budget per public cdf call (nested integrals
// draw from one pool). cache_points controls the resolution of cached
// intermediate CDFs: when a Sum or Product operand has no closed form (a
// nested convolution), it is tabulated once on that many nodes with a
// monotone cubic interpolant instead of being re-integrated inside the
// outer quadrature.
struct QuadSettings {
    double abs_tol = 1e-9;
    int max_panels = 4000;
    long long total_budget = 40'000'000;
    int cache_points = 4097;
    double support_eps = 1e-12;  // effective support = quantiles at [eps, 1-eps]
};

// Compiled evaluator. Construction validates the expression, builds the
// evaluation plan, and tabulates any nested-convolution caches.
class ExprDistribution {
public:
    explicit ExprDistribution(const RandomExpr& expr, QuadSettings settings = {});
    ~ExprDistribution();
    ExprDistribution(ExprDistribution&&) noexcept;
    ExprDistribution& operator=(ExprDistribution&&) noexcept;
    ExprDistribution(const ExprDistribution&) = delete;
    ExprDistribution& operator=(const ExprDistribution&) = delete;

    // P(expr <= x). Throws NumericalError when the shared budget or panel
    // limit is exhausted before reaching tolerance.
    double cdf(double x) const;

    // Effective support bounds (quantile-eps range), finite.
    std::pair<double, double> effective_support() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// One-shot convenience wrapper around ExprDistribution.
double expr_cdf(const RandomExpr& expr, double x, const QuadSettings& settings = {});

// Samples the expression: every leaf draws independently from `rng` in
// deterministic depth-first order (lhs before rhs), then nodes combine
// values per their semantics. count >= 1.
std::vector<double> expr_sample(const RandomExpr& expr, RngStream& rng, std::size_t count);

}  // namespace ordident
