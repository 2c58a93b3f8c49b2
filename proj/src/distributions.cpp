#include "ordident/distributions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ordident/special.hpp"

namespace ordident {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const char* msg) {
    if (!ok) throw std::domain_error(msg);
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

Distribution::Distribution(DistLaw law) : law_(std::move(law)) {
    std::visit(
        [](const auto& l) {
            using L = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<L, ExponentialLaw>) {
                require(finite(l.rate) && l.rate > 0.0, "Exponential: rate must be positive");
            } else if constexpr (std::is_same_v<L, LogisticLaw>) {
                require(finite(l.mu), "Logistic: mu must be finite");
                require(finite(l.scale) && l.scale > 0.0, "Logistic: scale must be positive");
            } else if constexpr (std::is_same_v<L, ParetoIILaw>) {
                require(finite(l.lambda) && l.lambda > 0.0, "ParetoII: lambda must be positive");
                require(finite(l.power) && l.power > 0.0, "ParetoII: power must be positive");
            } else if constexpr (std::is_same_v<L, BetaLaw>) {
                require(finite(l.alpha) && l.alpha > 0.0, "Beta: alpha must be positive");
                require(finite(l.beta) && l.beta > 0.0, "Beta: beta must be positive");
            } else if constexpr (std::is_same_v<L, NormalLaw>) {
                require(finite(l.mu), "Normal: mu must be finite");
                require(finite(l.sigma) && l.sigma > 0.0, "Normal: sigma must be positive");
            }
        },
        law_);
}

double Distribution::cdf(double x) const {
    return std::visit(
        [x](const auto& l) -> double {
            using L = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<L, Uniform01Law>) {
                if (x <= 0.0) return 0.0;
                if (x >= 1.0) return 1.0;
                return x;
            } else if constexpr (std::is_same_v<L, ExponentialLaw>) {
                if (x <= 0.0) return 0.0;
                return -std::expm1(-l.rate * x);
            } else if constexpr (std::is_same_v<L, LogisticLaw>) {
                const double z = (x - l.mu) / l.scale;
                return 1.0 / (1.0 + std::exp(-z));
            } else if constexpr (std::is_same_v<L, ParetoIILaw>) {
                if (x <= 0.0) return 0.0;
                const double t = l.lambda * std::pow(x, l.power);
                if (std::isinf(t)) return 1.0;
                return t / (1.0 + t);
            } else if constexpr (std::is_same_v<L, BetaLaw>) {
                if (x <= 0.0) return 0.0;
                if (x >= 1.0) return 1.0;
                return reg_inc_beta(l.alpha, l.beta, x);
            } else {
                return std_normal_cdf((x - l.mu) / l.sigma);
            }
        },
        law_);
}

double Distribution::survival(double x) const {
    return std::visit(
        [x, this](const auto& l) -> double {
            using L = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<L, ExponentialLaw>) {
                if (x <= 0.0) return 1.0;
                return std::exp(-l.rate * x);
            } else if constexpr (std::is_same_v<L, LogisticLaw>) {
                const double z = (x - l.mu) / l.scale;
                return 1.0 / (1.0 + std::exp(z));
            } else if constexpr (std::is_same_v<L, ParetoIILaw>) {
                if (x <= 0.0) return 1.0;
                const double t = l.lambda * std::pow(x, l.power);
                if (std::isinf(t)) return 0.0;
                return 1.0 / (1.0 + t);
            } else if constexpr (std::is_same_v<L, BetaLaw>) {
                if (x <= 0.0) return 1.0;
                if (x >= 1.0) return 0.0;
                return reg_inc_beta(l.beta, l.alpha, 1.0 - x);
            } else if constexpr (std::is_same_v<L, NormalLaw>) {
                return std_normal_cdf((l.mu - x) / l.sigma);
            } else {
                return 1.0 - cdf(x);
            }
        },
        law_);
}

double Distribution::pdf(double x) const {
    return std::visit(
        [x](const auto& l) -> double {
            using L = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<L, Uniform01Law>) {
                return (x > 0.0 && x < 1.0) ? 1.0 : 0.0;
            } else if constexpr (std::is_same_v<L, ExponentialLaw>) {
                if (x <= 0.0) return 0.0;
                return l.rate * std::exp(-l.rate * x);
            } else if constexpr (std::is_same_v<L, LogisticLaw>) {
                // e^{-|z|} / (s (1+e^{-|z|})^2): symmetric, no overflow.
                const double z = std::fabs((x - l.mu) / l.scale);
                const double e = std::exp(-z);
                return e / (l.scale * (1.0 + e) * (1.0 + e));
            } else if constexpr (std::is_same_v<L, ParetoIILaw>) {
                if (x <= 0.0) return 0.0;
                const double t = l.lambda * std::pow(x, l.power);
                if (std::isinf(t)) return 0.0;
                const double s = 1.0 / (1.0 + t);
                return l.power * t * s * s / x;
            } else if constexpr (std::is_same_v<L, BetaLaw>) {
                if (x <= 0.0 || x >= 1.0) return 0.0;
                return beta_pdf(l.alpha, l.beta, x);
            } else {
                const double z = (x - l.mu) / l.sigma;
                constexpr double kInvSqrt2Pi = 0.3989422804014327;
                return kInvSqrt2Pi * std::exp(-0.5 * z * z) / l.sigma;
            }
        },
        law_);
}

double Distribution::quantile(double p) const {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("Distribution::quantile: p outside (0,1)");
    }
    return std::visit(
        [p](const auto& l) -> double {
            using L = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<L, Uniform01Law>) {
                return p;
            } else if constexpr (std::is_same_v<L, ExponentialLaw>) {
                return -std::log1p(-p) / l.rate;
            } else if constexpr (std::is_same_v<L, LogisticLaw>) {
                return l.mu + l.scale * (std::log(p) - std::log1p(-p));
            } else if constexpr (std::is_same_v<L, ParetoIILaw>) {
                // y with lambda y^power = p/(1-p)
                return std::pow(p / ((1.0 - p) * l.lambda), 1.0 / l.power);
            } else if constexpr (std::is_same_v<L, BetaLaw>) {
                return reg_inc_beta_inv(l.alpha, l.beta, p);
            } else {
                return l.mu + l.sigma * std_normal_quantile(p);
            }
        },
        law_);
}

std::pair<double, double> Distribution::support() const {
    return std::visit(
        [](const auto& l) -> std::pair<double, double> {
            using L = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<L, Uniform01Law>) {
                return {0.0, 1.0};
            } else if constexpr (std::is_same_v<L, ExponentialLaw>) {
                return {0.0, kInf};
            } else if constexpr (std::is_same_v<L, LogisticLaw>) {
                return {-kInf, kInf};
            } else if constexpr (std::is_same_v<L, ParetoIILaw>) {
                return {0.0, kInf};
            } else if constexpr (std::is_same_v<L, BetaLaw>) {
                return {0.0, 1.0};
            } else {
                return {-kInf, kInf};
            }
        },
        law_);
}

void Distribution::sample(RngStream& rng, std::span<double> out) const {
    for (double& v : out) {
        v = quantile(rng.uniform01());
    }
}

std::vector<double> Distribution::sample(RngStream& rng, std::size_t count) const {
    if (count < 1) {
        throw std::domain_error("Distribution::sample: count must be >= 1");
    }
    std::vector<double> out(count);
    sample(rng, std::span<double>(out));
    return out;
}

std::string Distribution::family_name() const {
    return std::visit(
        [](const auto& l) -> std::string {
            using L = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<L, Uniform01Law>) return "uniform01";
            else if constexpr (std::is_same_v<L, ExponentialLaw>) return "exponential";
            else if constexpr (std::is_same_v<L, LogisticLaw>) return "logistic";
            else if constexpr (std::is_same_v<L, ParetoIILaw>) return "pareto2";
            else if constexpr (std::is_same_v<L, BetaLaw>) return "beta";
            else return "normal";
        },
        law_);
}

}  // namespace ordident
