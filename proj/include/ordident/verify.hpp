#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ordident/catalog.hpp"
#include "ordident/grid.hpp"
#include "ordident/random_expr.hpp"

namespace ordident {

// Monte Carlo check settings. Two samples of `size` draws each are compared
// by the two-sample Kolmogorov statistic; the verdict threshold is the
// asymptotic 5% bound 1.95*sqrt(1/n1 + 1/n2).
struct McSettings {
    int size = 100000;
    std::uint64_t seed = 0;
};

struct VerificationReport {
    std::string id;
    IdentityParams params;
    std::string base_family;
    GridSpec grid;
    double tol = 1e-6;

    double sup_cdf_distance = 0.0;
    bool quad_pass = false;

    // Monte Carlo block; distances are meaningful only when mc_size > 0.
    int mc_size = 0;
    std::uint64_t seed = 0;
    double mc_distance = 0.0;
    double mc_bound = 0.0;
    bool mc_pass = true;

    bool pass() const { return quad_pass && mc_pass; }
};

// Two-sample Kolmogorov statistic sup_x |F1(x) - F2(x)| over the pooled
// sample. Both inputs must be nonempty; they are copied and sorted here.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

double two_sample_bound(std::size_t n1, std::size_t n2);

// Sup over `grid` of |P(lhs <= x) - P(rhs <= x)|, plus the optional
// two-sample check with lhs drawing from substream 0 and rhs from
// substream 1 of the seed. The report's id/params/family fields echo the
// arguments. Quadrature failures propagate as NumericalError.
VerificationReport verify_exprs(const RandomExpr& lhs, const RandomExpr& rhs,
                                const std::vector<double>& grid, double tol,
                                const std::optional<McSettings>& mc,
                                const QuadSettings& quad = {});

// Instantiates the record's two sides at (params, base) and compares them on
// a grid built from the base. Params violating the record's constraint are a
// domain error. A base from a different family is allowed; the resulting
// distance is the point (that is what discrimination tests measure).
VerificationReport verify_identity(const IdentityRecord& rec, const IdentityParams& params,
                                   const Distribution& base, const GridSpec& grid, double tol,
                                   const std::optional<McSettings>& mc,
                                   const QuadSettings& quad = {});

}  // namespace ordident
