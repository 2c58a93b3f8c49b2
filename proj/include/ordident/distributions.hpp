#pragma once

#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ordident/rng.hpp"

namespace ordident {

// Parameter structs are plain carriers; Distribution's constructor is the
// single validation point.

struct Uniform01Law {};

struct ExponentialLaw {
    double rate;  // > 0
};

struct LogisticLaw {
    double mu;
    double scale;  // > 0
};

// ParetoIILaw is the log-logistic form G(y) = lambda y^power / (1 + lambda y^power)
// on y > 0; exp of a Logistic(mu, 1/power) variable with lambda = exp(-mu*power).
struct ParetoIILaw {
    double lambda;  // > 0
    double power;   // > 0
};

struct BetaLaw {
    double alpha;  // > 0
    double beta;   // > 0
};

struct NormalLaw {
    double mu;
    double sigma;  // > 0
};

using DistLaw = std::variant<Uniform01Law, ExponentialLaw, LogisticLaw,
                             ParetoIILaw, BetaLaw, NormalLaw>;

class Distribution {
public:
    // Validates parameters eagerly; throws std::domain_error on violation.
    explicit Distribution(DistLaw law);

    static Distribution uniform01() { return Distribution(Uniform01Law{}); }
    static Distribution exponential(double rate) { return Distribution(ExponentialLaw{rate}); }
    static Distribution logistic(double mu, double scale) { return Distribution(LogisticLaw{mu, scale}); }
    static Distribution pareto2(double lambda, double power) { return Distribution(ParetoIILaw{lambda, power}); }
    static Distribution beta(double alpha, double beta_) { return Distribution(BetaLaw{alpha, beta_}); }
    static Distribution normal(double mu, double sigma) { return Distribution(NormalLaw{mu, sigma}); }

    double cdf(double x) const;
    double survival(double x) const;

    // Density on the open support; 0 outside it.
    double pdf(double x) const;

    // p in (0,1). Strictly increasing on the support.
    double quantile(double p) const;

    // Closed support endpoints; infinities where unbounded.
    std::pair<double, double> support() const;

    bool positive_support() const { return support().first >= 0.0; }

    // Inversion sampling: out[i] = quantile(u_i) with u_i drawn from rng in
    // order. Fully determined by the stream state.
    void sample(RngStream& rng, std::span<double> out) const;
    std::vector<double> sample(RngStream& rng, std::size_t count) const;

    const DistLaw& law() const noexcept { return law_; }
    std::string family_name() const;

private:
    DistLaw law_;
};

}  // namespace ordident
