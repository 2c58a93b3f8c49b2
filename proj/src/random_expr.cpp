#include "ordident/random_expr.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <stdexcept>
#include <utility>

#include "ordident/errors.hpp"
#include "ordident/quadrature.hpp"
#include "ordident/special.hpp"

namespace ordident {

// ---------------------------------------------------------------------------
// Tree construction and validation
// ---------------------------------------------------------------------------

namespace {

bool node_positive(const ExprNode& n);

bool child_positive(const ExprPtr& p) { return node_positive(*p); }

bool node_positive(const ExprNode& n) {
    return std::visit(
        [](const auto& v) -> bool {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, LeafNode>) {
                if (std::holds_alternative<Distribution>(v.law)) {
                    return std::get<Distribution>(v.law).positive_support();
                }
                return std::get<OrderStatistic>(v.law).base().positive_support();
            } else if constexpr (std::is_same_v<T, NegateNode>) {
                return false;
            } else if constexpr (std::is_same_v<T, ScaleNode>) {
                return v.factor > 0.0 && child_positive(v.child);
            } else if constexpr (std::is_same_v<T, PowerNode>) {
                return child_positive(v.child);
            } else if constexpr (std::is_same_v<T, SumNode>) {
                return child_positive(v.lhs) && child_positive(v.rhs);
            } else {
                return child_positive(v.lhs) && child_positive(v.rhs);
            }
        },
        n.node);
}

void collect_tags(const ExprNode& n, std::vector<std::string>& out) {
    std::visit(
        [&out](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, LeafNode>) {
                out.push_back(v.tag);
            } else if constexpr (std::is_same_v<T, NegateNode> ||
                                 std::is_same_v<T, ScaleNode> ||
                                 std::is_same_v<T, PowerNode>) {
                collect_tags(*v.child, out);
            } else {
                collect_tags(*v.lhs, out);
                collect_tags(*v.rhs, out);
            }
        },
        n.node);
}

void require_distinct_tags(const RandomExpr& a, const RandomExpr& b) {
    std::vector<std::string> ta = a.tags();
    std::vector<std::string> tb = b.tags();
    std::set<std::string> seen(ta.begin(), ta.end());
    for (const auto& t : tb) {
        if (!seen.insert(t).second) {
            throw std::invalid_argument("RandomExpr: duplicate independence tag '" + t + "'");
        }
    }
}

void require_depth(int depth) {
    if (depth > kMaxExprDepth) {
        throw std::invalid_argument("RandomExpr: tree depth exceeds the quadrature nesting budget");
    }
}

}  // namespace

RandomExpr RandomExpr::leaf(Distribution dist, std::string tag) {
    if (tag.empty()) {
        throw std::invalid_argument("RandomExpr::leaf: empty independence tag");
    }
    auto node = std::make_shared<const ExprNode>(ExprNode{LeafNode{std::move(dist), std::move(tag)}});
    return RandomExpr(std::move(node), 1);
}

RandomExpr RandomExpr::leaf(OrderStatistic os, std::string tag) {
    if (tag.empty()) {
        throw std::invalid_argument("RandomExpr::leaf: empty independence tag");
    }
    auto node = std::make_shared<const ExprNode>(ExprNode{LeafNode{std::move(os), std::move(tag)}});
    return RandomExpr(std::move(node), 1);
}

RandomExpr RandomExpr::negate(RandomExpr e) {
    const int d = e.depth_ + 1;
    require_depth(d);
    auto node = std::make_shared<const ExprNode>(ExprNode{NegateNode{std::move(e.root_)}});
    return RandomExpr(std::move(node), d);
}

RandomExpr RandomExpr::scale(RandomExpr e, double factor) {
    if (factor == 0.0 || !std::isfinite(factor)) {
        throw std::invalid_argument("RandomExpr::scale: factor must be nonzero and finite");
    }
    const int d = e.depth_ + 1;
    require_depth(d);
    auto node = std::make_shared<const ExprNode>(ExprNode{ScaleNode{std::move(e.root_), factor}});
    return RandomExpr(std::move(node), d);
}

RandomExpr RandomExpr::power(RandomExpr e, double exponent) {
    if (exponent == 0.0 || !std::isfinite(exponent)) {
        throw std::invalid_argument("RandomExpr::power: exponent must be nonzero and finite");
    }
    if (!e.positive()) {
        throw std::invalid_argument("RandomExpr::power: operand must be positive-supported");
    }
    const int d = e.depth_ + 1;
    require_depth(d);
    auto node = std::make_shared<const ExprNode>(ExprNode{PowerNode{std::move(e.root_), exponent}});
    return RandomExpr(std::move(node), d);
}

RandomExpr RandomExpr::sum(RandomExpr a, RandomExpr b) {
    require_distinct_tags(a, b);
    const int d = 1 + std::max(a.depth_, b.depth_);
    require_depth(d);
    auto node = std::make_shared<const ExprNode>(ExprNode{SumNode{std::move(a.root_), std::move(b.root_)}});
    return RandomExpr(std::move(node), d);
}

RandomExpr RandomExpr::product(RandomExpr a, RandomExpr b) {
    if (!a.positive() || !b.positive()) {
        throw std::invalid_argument("RandomExpr::product: operands must be positive-supported");
    }
    require_distinct_tags(a, b);
    const int d = 1 + std::max(a.depth_, b.depth_);
    require_depth(d);
    auto node = std::make_shared<const ExprNode>(ExprNode{ProductNode{std::move(a.root_), std::move(b.root_)}});
    return RandomExpr(std::move(node), d);
}

bool RandomExpr::positive() const { return node_positive(*root_); }

std::vector<std::string> RandomExpr::tags() const {
    std::vector<std::string> out;
    collect_tags(*root_, out);
    return out;
}

void RandomExpr::validate() const {
    std::vector<std::string> all = tags();
    std::set<std::string> seen;
    for (const auto& t : all) {
        if (t.empty()) {
            throw std::invalid_argument("RandomExpr: empty independence tag");
        }
        if (!seen.insert(t).second) {
            throw std::invalid_argument("RandomExpr: duplicate independence tag '" + t + "'");
        }
    }
    require_depth(depth_);

    // Re-walk structural constraints for hand-assembled trees.
    std::function<void(const ExprNode&)> walk = [&](const ExprNode& n) {
        std::visit(
            [&](const auto& v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, ScaleNode>) {
                    if (v.factor == 0.0 || !std::isfinite(v.factor)) {
                        throw std::invalid_argument("RandomExpr: zero or non-finite scale factor");
                    }
                    walk(*v.child);
                } else if constexpr (std::is_same_v<T, PowerNode>) {
                    if (v.exponent == 0.0 || !std::isfinite(v.exponent)) {
                        throw std::invalid_argument("RandomExpr: zero or non-finite exponent");
                    }
                    if (!node_positive(*v.child)) {
                        throw std::invalid_argument("RandomExpr: power of sign-indefinite expression");
                    }
                    walk(*v.child);
                } else if constexpr (std::is_same_v<T, NegateNode>) {
                    walk(*v.child);
                } else if constexpr (std::is_same_v<T, SumNode>) {
                    walk(*v.lhs);
                    walk(*v.rhs);
                } else if constexpr (std::is_same_v<T, ProductNode>) {
                    if (!node_positive(*v.lhs) || !node_positive(*v.rhs)) {
                        throw std::invalid_argument("RandomExpr: product of sign-indefinite expression");
                    }
                    walk(*v.lhs);
                    walk(*v.rhs);
                }
            },
            n.node);
    };
    walk(*root_);
}

// ---------------------------------------------------------------------------
// Evaluation plan
// ---------------------------------------------------------------------------
//
// Every subexpression compiles to a "marginal": something with a CDF and
// finite effective support. Marginals that additionally expose a parametric
// form (map, weight, range) can serve as the integration side of a
// convolution:
//
//   P(A + B <= x) = Integral over s in range_B of A.cdf(x - B.map(s)) * B.weight(s) ds
//
// Leaves parameterize by probability (map = quantile, weight = 1) except
// beta-family leaves, which integrate in value space against their density,
// and order-statistic leaves, which substitute u = F_base(value) so that the
// weight is the Beta(k, n-k+1) density and the map is the base quantile --
// no root-finding inside integrands. Monotone wrappers transform map and
// leave weight alone. Products go through logs: Product(a,b) compiles to
// Exp(Conv(Log(a), Log(b))), and Log(Exp(M)) collapses back to M so nested
// products stay one convolution deep per level.
//
// A convolution operand that itself needs quadrature (a nested convolution)
// is tabulated once on a uniform grid with a monotone cubic interpolant
// (a "cache"), turning the outer integrand back into an O(1) evaluation.

namespace {

struct EvalCtx {
    QuadBudget budget;
    const QuadSettings* settings;
};

class Marginal {
public:
    virtual ~Marginal() = default;

    virtual double cdf_raw(double x, EvalCtx& ctx) const = 0;

    // Effective support bounds: quantiles at [eps, 1-eps]; always finite.
    virtual double lo() const = 0;
    virtual double hi() const = 0;

    // Parametric integration-side form.
    virtual bool has_param() const { return false; }
    virtual double map(double) const { throw std::logic_error("no param form"); }
    virtual double weight(double) const { return 1.0; }
    virtual std::pair<double, double> param_range() const { throw std::logic_error("no param form"); }

    // True when cdf_raw costs O(1) (no quadrature): eligible to sit inside
    // an outer integrand without caching.
    virtual bool cheap() const { return true; }

    // Non-null when this marginal is Exp(inner); lets Log(Exp(M)) collapse.
    virtual const std::shared_ptr<const Marginal>* exp_inner() const { return nullptr; }
};

using MarginalPtr = std::shared_ptr<const Marginal>;

// ----- leaves -----

class DistLeaf : public Marginal {
public:
    DistLeaf(Distribution d, double eps) : dist_(std::move(d)) {
        lo_ = dist_.quantile(eps);
        hi_ = dist_.quantile(1.0 - eps);
        is_beta_ = std::holds_alternative<BetaLaw>(dist_.law());
        if (is_beta_) {
            // value-space integration against the density
            range_ = {lo_, hi_};
        } else {
            range_ = {eps, 1.0 - eps};
        }
    }

    double cdf_raw(double x, EvalCtx&) const override { return dist_.cdf(x); }
    double lo() const override { return lo_; }
    double hi() const override { return hi_; }
    bool has_param() const override { return true; }

    double map(double s) const override { return is_beta_ ? s : dist_.quantile(s); }

    double weight(double s) const override { return is_beta_ ? dist_.pdf(s) : 1.0; }

    std::pair<double, double> param_range() const override { return range_; }

private:
    Distribution dist_;
    double lo_, hi_;
    bool is_beta_;
    std::pair<double, double> range_;
};

class OrderStatLeaf : public Marginal {
public:
    OrderStatLeaf(OrderStatistic os, double eps) : os_(std::move(os)) {
        a_ = static_cast<double>(os_.k());
        b_ = static_cast<double>(os_.n() - os_.k() + 1);
        // u-space cut points carrying all but 2*eps of the beta mass
        u_lo_ = reg_inc_beta_inv(a_, b_, eps);
        u_hi_ = reg_inc_beta_inv(a_, b_, 1.0 - eps);
        lo_ = os_.base().quantile(u_lo_);
        hi_ = os_.base().quantile(u_hi_);
    }

    double cdf_raw(double x, EvalCtx&) const override { return os_.cdf(x); }
    double lo() const override { return lo_; }
    double hi() const override { return hi_; }
    bool has_param() const override { return true; }

    // Substituting u = F_base(value): value = Q_base(u), weight = the
    // Beta(k, n-k+1) density. Quantiles of the base are closed-form for
    // every family except Beta, so integrands stay root-find-free.
    double map(double u) const override { return os_.base().quantile(u); }
    double weight(double u) const override { return beta_pdf(a_, b_, u); }
    std::pair<double, double> param_range() const override { return {u_lo_, u_hi_}; }

private:
    OrderStatistic os_;
    double a_, b_;
    double u_lo_, u_hi_;
    double lo_, hi_;
};

// ----- monotone wrappers -----

enum class WrapKind { Negate, Scale, Power, Log, Exp };

class WrapMarginal : public Marginal {
public:
    WrapMarginal(WrapKind kind, MarginalPtr child, double c)
        : kind_(kind), child_(std::move(child)), c_(c) {
        const double clo = child_->lo();
        const double chi = child_->hi();
        double a = fwd(clo);
        double b = fwd(chi);
        if (a > b) std::swap(a, b);
        lo_ = a;
        hi_ = b;
    }

    double cdf_raw(double x, EvalCtx& ctx) const override {
        switch (kind_) {
            case WrapKind::Negate:
                return 1.0 - child_->cdf_raw(-x, ctx);
            case WrapKind::Scale:
                if (c_ > 0.0) return child_->cdf_raw(x / c_, ctx);
                return 1.0 - child_->cdf_raw(x / c_, ctx);
            case WrapKind::Power: {
                if (x <= 0.0) return 0.0;
                const double y = std::pow(x, 1.0 / c_);
                if (c_ > 0.0) return child_->cdf_raw(y, ctx);
                return 1.0 - child_->cdf_raw(y, ctx);
            }
            case WrapKind::Log:
                return child_->cdf_raw(std::exp(x), ctx);
            case WrapKind::Exp:
                if (x <= 0.0) return 0.0;
                return child_->cdf_raw(std::log(x), ctx);
        }
        return 0.0;
    }

    double lo() const override { return lo_; }
    double hi() const override { return hi_; }

    bool has_param() const override { return child_->has_param(); }
    double map(double s) const override { return fwd(child_->map(s)); }
    double weight(double s) const override { return child_->weight(s); }
    std::pair<double, double> param_range() const override { return child_->param_range(); }

    bool cheap() const override { return child_->cheap(); }

    const std::shared_ptr<const Marginal>* exp_inner() const override {
        return kind_ == WrapKind::Exp ? &child_ : nullptr;
    }

private:
    double fwd(double v) const {
        switch (kind_) {
            case WrapKind::Negate: return -v;
            case WrapKind::Scale: return c_ * v;
            case WrapKind::Power: return std::pow(v, c_);
            case WrapKind::Log: return std::log(v);
            case WrapKind::Exp: return std::exp(v);
        }
        return v;
    }

    WrapKind kind_;
    MarginalPtr child_;
    double c_;
    double lo_, hi_;
};

// ----- monotone cubic tabulation (Fritsch-Carlson) -----

class CachedMarginal : public Marginal {
public:
    CachedMarginal(const Marginal& source, int points, double eps, EvalCtx& build_ctx) {
        if (points < 16) points = 16;
        x_.resize(static_cast<std::size_t>(points));
        y_.resize(static_cast<std::size_t>(points));
        const double a = source.lo();
        const double b = source.hi();
        h_ = (b - a) / (points - 1);
        if (!(h_ > 0.0)) {
            throw NumericalError("cache tabulation: degenerate support", 0.0);
        }
        for (int i = 0; i < points; ++i) {
            x_[static_cast<std::size_t>(i)] = a + h_ * i;
        }
        x_.back() = b;
        double prev = 0.0;
        for (int i = 0; i < points; ++i) {
            double v = source.cdf_raw(x_[static_cast<std::size_t>(i)], build_ctx);
            v = std::clamp(v, prev, 1.0);  // re-monotonize against quadrature noise
            y_[static_cast<std::size_t>(i)] = v;
            prev = v;
        }
        build_slopes();
        eps_ = eps;
    }

    double cdf_raw(double x, EvalCtx&) const override { return value_at(x); }

    double lo() const override { return x_.front(); }
    double hi() const override { return x_.back(); }

    bool has_param() const override { return true; }
    double map(double s) const override { return quantile(s); }
    std::pair<double, double> param_range() const override {
        return {std::max(eps_, y_.front()), std::min(1.0 - eps_, y_.back())};
    }

private:
    void build_slopes() {
        const std::size_t n = x_.size();
        std::vector<double> delta(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            delta[i] = (y_[i + 1] - y_[i]) / h_;
        }
        d_.assign(n, 0.0);
        d_[0] = delta[0];
        d_[n - 1] = delta[n - 2];
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (delta[i - 1] <= 0.0 || delta[i] <= 0.0) {
                d_[i] = 0.0;  // flat or limiter region keeps monotonicity
            } else {
                d_[i] = 2.0 * delta[i - 1] * delta[i] / (delta[i - 1] + delta[i]);
            }
        }
    }

    double value_at(double x) const {
        if (x <= x_.front()) return y_.front();
        if (x >= x_.back()) return y_.back();
        const std::size_t i = cell_of(x);
        const double t = (x - x_[i]) / h_;
        return hermite(y_[i], y_[i + 1], d_[i] * h_, d_[i + 1] * h_, t);
    }

    std::size_t cell_of(double x) const {
        double pos = (x - x_.front()) / h_;
        auto i = static_cast<std::size_t>(pos);
        if (i >= x_.size() - 1) i = x_.size() - 2;
        // guard rounding at cell edges
        while (i > 0 && x < x_[i]) --i;
        while (i + 2 < x_.size() && x >= x_[i + 1]) ++i;
        return i;
    }

    static double hermite(double y0, double y1, double m0, double m1, double t) {
        const double t2 = t * t;
        const double t3 = t2 * t;
        return (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + t) * m0 +
               (-2.0 * t3 + 3.0 * t2) * y1 + (t3 - t2) * m1;
    }

    double quantile(double p) const {
        if (p <= y_.front()) return x_.front();
        if (p >= y_.back()) return x_.back();
        std::size_t lo = 0, hi = y_.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            if (y_[mid] <= p) lo = mid; else hi = mid;
        }
        // solve the cubic on [x_lo, x_hi] by safeguarded Newton
        double a = x_[lo], b = x_[lo + 1];
        double x = a + (b - a) * (y_[lo + 1] > y_[lo] ? (p - y_[lo]) / (y_[lo + 1] - y_[lo]) : 0.5);
        for (int it = 0; it < 60; ++it) {
            const double f = value_at(x) - p;
            if (f > 0.0) b = x; else a = x;
            const double t = (x - x_[lo]) / h_;
            const double dv = hermite_deriv(y_[lo], y_[lo + 1], d_[lo] * h_, d_[lo + 1] * h_, t) / h_;
            double next = (dv > 0.0) ? x - f / dv : 0.5 * (a + b);
            if (!(next > a && next < b)) next = 0.5 * (a + b);
            if (std::fabs(next - x) < 1e-13 * (1.0 + std::fabs(x))) return next;
            x = next;
        }
        return x;
    }

    static double hermite_deriv(double y0, double y1, double m0, double m1, double t) {
        const double t2 = t * t;
        return (6.0 * t2 - 6.0 * t) * y0 + (3.0 * t2 - 4.0 * t + 1.0) * m0 +
               (-6.0 * t2 + 6.0 * t) * y1 + (3.0 * t2 - 2.0 * t) * m1;
    }

    std::vector<double> x_, y_, d_;
    double h_ = 0.0;
    double eps_ = 1e-12;
};

// ----- convolution -----

class ConvMarginal : public Marginal {
public:
    ConvMarginal(MarginalPtr cdf_side, MarginalPtr int_side)
        : a_(std::move(cdf_side)), b_(std::move(int_side)) {
        lo_ = a_->lo() + b_->lo();
        hi_ = a_->hi() + b_->hi();
    }

    double cdf_raw(double x, EvalCtx& ctx) const override {
        if (x <= lo_) return 0.0;
        if (x >= hi_) return 1.0;
        const auto [s0, s1] = b_->param_range();
        // The cdf factor is constant except where x - map(s) crosses the
        // cdf side's support. Near the edge of the identity's range that
        // transition squeezes into a layer far narrower than the first
        // panel's node spacing, so the error estimate would see a flat
        // integrand and accept a wrong value. Cutting panels at the layer
        // edges keeps the estimate honest.
        std::vector<double> cuts{s0, s1};
        map_crossing(x - a_->hi(), s0, s1, cuts);
        map_crossing(x - a_->lo(), s0, s1, cuts);
        std::sort(cuts.begin(), cuts.end());
        const auto f = [&](double s) {
            return a_->cdf_raw(x - b_->map(s), ctx) * b_->weight(s);
        };
        QuadResult r = integrate_gk(f, cuts, ctx.settings->abs_tol,
                                    ctx.settings->max_panels, &ctx.budget);
        if (!r.converged) {
            throw NumericalError("expression cdf: convolution quadrature did not converge",
                                 r.error);
        }
        return std::clamp(r.value, 0.0, 1.0);
    }

    double lo() const override { return lo_; }
    double hi() const override { return hi_; }
    bool cheap() const override { return false; }

private:
    // Bisects the monotone map for map(s) == target and appends the root
    // when it lies strictly inside (s0, s1). No-op when target is outside
    // the map's range over the interval.
    void map_crossing(double target, double s0, double s1, std::vector<double>& cuts) const {
        const double f0 = b_->map(s0) - target;
        const double f1 = b_->map(s1) - target;
        if (f0 == 0.0 || f1 == 0.0) return;
        if ((f0 < 0.0) == (f1 < 0.0)) return;
        double lo = s0, hi = s1;
        const double width_tol = 1e-9 * (s1 - s0);
        for (int i = 0; i < 90 && hi - lo > width_tol; ++i) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            if ((b_->map(mid) - target < 0.0) == (f0 < 0.0)) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        const double c = 0.5 * (lo + hi);
        if (c > s0 && c < s1) cuts.push_back(c);
    }

    MarginalPtr a_, b_;
    double lo_, hi_;
};

MarginalPtr make_log(MarginalPtr m) {
    if (const auto* inner = m->exp_inner()) {
        return *inner;
    }
    return std::make_shared<WrapMarginal>(WrapKind::Log, std::move(m), 0.0);
}

MarginalPtr maybe_cache(MarginalPtr m, const QuadSettings& s, EvalCtx& build_ctx) {
    if (m->cheap()) return m;
    return std::make_shared<CachedMarginal>(*m, s.cache_points, s.support_eps, build_ctx);
}

MarginalPtr make_conv(MarginalPtr a, MarginalPtr b, const QuadSettings& s, EvalCtx& build_ctx) {
    // Integration side must expose a parametric form; the CDF side must be
    // cheap enough to sit inside the integrand.
    if (!b->has_param()) {
        if (a->has_param()) {
            std::swap(a, b);
        } else {
            b = maybe_cache(std::move(b), s, build_ctx);
        }
    }
    a = maybe_cache(std::move(a), s, build_ctx);
    return std::make_shared<ConvMarginal>(std::move(a), std::move(b));
}

MarginalPtr build_marginal(const ExprNode& n, const QuadSettings& s, EvalCtx& build_ctx) {
    return std::visit(
        [&](const auto& v) -> MarginalPtr {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, LeafNode>) {
                if (std::holds_alternative<Distribution>(v.law)) {
                    return std::make_shared<DistLeaf>(std::get<Distribution>(v.law), s.support_eps);
                }
                return std::make_shared<OrderStatLeaf>(std::get<OrderStatistic>(v.law), s.support_eps);
            } else if constexpr (std::is_same_v<T, NegateNode>) {
                return std::make_shared<WrapMarginal>(WrapKind::Negate,
                                                      build_marginal(*v.child, s, build_ctx), 0.0);
            } else if constexpr (std::is_same_v<T, ScaleNode>) {
                return std::make_shared<WrapMarginal>(WrapKind::Scale,
                                                      build_marginal(*v.child, s, build_ctx), v.factor);
            } else if constexpr (std::is_same_v<T, PowerNode>) {
                return std::make_shared<WrapMarginal>(WrapKind::Power,
                                                      build_marginal(*v.child, s, build_ctx), v.exponent);
            } else if constexpr (std::is_same_v<T, SumNode>) {
                return make_conv(build_marginal(*v.lhs, s, build_ctx),
                                 build_marginal(*v.rhs, s, build_ctx), s, build_ctx);
            } else {
                MarginalPtr la = make_log(build_marginal(*v.lhs, s, build_ctx));
                MarginalPtr lb = make_log(build_marginal(*v.rhs, s, build_ctx));
                MarginalPtr conv = make_conv(std::move(la), std::move(lb), s, build_ctx);
                return std::make_shared<WrapMarginal>(WrapKind::Exp, std::move(conv), 0.0);
            }
        },
        n.node);
}

}  // namespace

// ---------------------------------------------------------------------------
// ExprDistribution
// ---------------------------------------------------------------------------

struct ExprDistribution::Impl {
    QuadSettings settings;
    MarginalPtr root;
};

ExprDistribution::ExprDistribution(const RandomExpr& expr, QuadSettings settings)
    : impl_(std::make_unique<Impl>()) {
    expr.validate();
    impl_->settings = settings;
    EvalCtx build_ctx{QuadBudget{settings.total_budget}, &impl_->settings};
    impl_->root = build_marginal(*expr.root(), impl_->settings, build_ctx);
}

ExprDistribution::~ExprDistribution() = default;
ExprDistribution::ExprDistribution(ExprDistribution&&) noexcept = default;
ExprDistribution& ExprDistribution::operator=(ExprDistribution&&) noexcept = default;

double ExprDistribution::cdf(double x) const {
    EvalCtx ctx{QuadBudget{impl_->settings.total_budget}, &impl_->settings};
    return impl_->root->cdf_raw(x, ctx);
}

std::pair<double, double> ExprDistribution::effective_support() const {
    return {impl_->root->lo(), impl_->root->hi()};
}

double expr_cdf(const RandomExpr& expr, double x, const QuadSettings& settings) {
    return ExprDistribution(expr, settings).cdf(x);
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

namespace {

// Tabulated beta quantile for bulk sampling: monotone linear-in-p nodes
// with direct root-find fallback outside the covered range. Accuracy is
// far below the MC resolution (~1/sqrt(N)); exactness is not required.
class BetaQuantileTable {
public:
    BetaQuantileTable(double a, double b, int points = 2049) : a_(a), b_(b) {
        p_lo_ = 1e-6;
        p_hi_ = 1.0 - 1e-6;
        q_.resize(static_cast<std::size_t>(points));
        for (int i = 0; i < points; ++i) {
            const double p = p_lo_ + (p_hi_ - p_lo_) * i / (points - 1);
            q_[static_cast<std::size_t>(i)] = reg_inc_beta_inv(a_, b_, p);
        }
    }

    double operator()(double p) const {
        if (p < p_lo_ || p > p_hi_) {
            return reg_inc_beta_inv(a_, b_, p);
        }
        const double pos = (p - p_lo_) / (p_hi_ - p_lo_) * (q_.size() - 1);
        auto i = static_cast<std::size_t>(pos);
        if (i >= q_.size() - 1) i = q_.size() - 2;
        const double t = pos - static_cast<double>(i);
        return q_[i] + t * (q_[i + 1] - q_[i]);
    }

private:
    double a_, b_;
    double p_lo_, p_hi_;
    std::vector<double> q_;
};

struct LeafSampler {
    const LeafNode* leaf;
    std::unique_ptr<BetaQuantileTable> table;  // for order-stat / beta leaves at bulk counts

    double draw(RngStream& rng) const {
        const double u = rng.uniform01();
        if (std::holds_alternative<Distribution>(leaf->law)) {
            const auto& d = std::get<Distribution>(leaf->law);
            if (table) return (*table)(u);
            return d.quantile(u);
        }
        const auto& os = std::get<OrderStatistic>(leaf->law);
        if (table) {
            return os.base().quantile((*table)(u));
        }
        return os.quantile(u);
    }
};

// Collect leaves in depth-first order (lhs before rhs), matching the draw
// order documented in the header.
void collect_leaves(const ExprNode& n, std::vector<const LeafNode*>& out) {
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, LeafNode>) {
                out.push_back(&v);
            } else if constexpr (std::is_same_v<T, NegateNode> ||
                                 std::is_same_v<T, ScaleNode> ||
                                 std::is_same_v<T, PowerNode>) {
                collect_leaves(*v.child, out);
            } else {
                collect_leaves(*v.lhs, out);
                collect_leaves(*v.rhs, out);
            }
        },
        n.node);
}

double eval_node(const ExprNode& n, const double* leaf_values, std::size_t& idx) {
    return std::visit(
        [&](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, LeafNode>) {
                return leaf_values[idx++];
            } else if constexpr (std::is_same_v<T, NegateNode>) {
                return -eval_node(*v.child, leaf_values, idx);
            } else if constexpr (std::is_same_v<T, ScaleNode>) {
                return v.factor * eval_node(*v.child, leaf_values, idx);
            } else if constexpr (std::is_same_v<T, PowerNode>) {
                return std::pow(eval_node(*v.child, leaf_values, idx), v.exponent);
            } else if constexpr (std::is_same_v<T, SumNode>) {
                const double a = eval_node(*v.lhs, leaf_values, idx);
                const double b = eval_node(*v.rhs, leaf_values, idx);
                return a + b;
            } else {
                const double a = eval_node(*v.lhs, leaf_values, idx);
                const double b = eval_node(*v.rhs, leaf_values, idx);
                return a * b;
            }
        },
        n.node);
}

}  // namespace

std::vector<double> expr_sample(const RandomExpr& expr, RngStream& rng, std::size_t count) {
    if (count < 1) {
        throw std::domain_error("expr_sample: count must be >= 1");
    }
    expr.validate();

    std::vector<const LeafNode*> leaves;
    collect_leaves(*expr.root(), leaves);

    constexpr std::size_t kTableThreshold = 4096;
    std::vector<LeafSampler> samplers;
    samplers.reserve(leaves.size());
    for (const LeafNode* l : leaves) {
        LeafSampler s{l, nullptr};
        if (count >= kTableThreshold) {
            if (std::holds_alternative<OrderStatistic>(l->law)) {
                const auto& os = std::get<OrderStatistic>(l->law);
                s.table = std::make_unique<BetaQuantileTable>(
                    static_cast<double>(os.k()), static_cast<double>(os.n() - os.k() + 1));
            } else if (std::holds_alternative<BetaLaw>(std::get<Distribution>(l->law).law())) {
                const auto& bl = std::get<BetaLaw>(std::get<Distribution>(l->law).law());
                s.table = std::make_unique<BetaQuantileTable>(bl.alpha, bl.beta);
            }
        }
        samplers.push_back(std::move(s));
    }

    std::vector<double> out(count);
    std::vector<double> leaf_values(leaves.size());
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t j = 0; j < samplers.size(); ++j) {
            leaf_values[j] = samplers[j].draw(rng);
        }
        std::size_t idx = 0;
        out[i] = eval_node(*expr.root(), leaf_values.data(), idx);
    }
    return out;
}

}  // namespace ordident
