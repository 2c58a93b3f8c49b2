#pragma once

#include <string>
#include <vector>

#include "ordident/distributions.hpp"

namespace ordident {

enum class GridSpacing { Uniform, Quantile };

// Evaluation grid for CDF comparisons. Uniform spacing uses [lower, upper]
// directly; quantile spacing ignores lower/upper and places points at base
// quantiles of equispaced probabilities in (eps, 1-eps), eps = 1e-4, which
// concentrates points where the distribution actually lives.
struct GridSpec {
    double lower = 0.0;
    double upper = 1.0;
    int points = 201;
    GridSpacing spacing = GridSpacing::Quantile;
};

inline constexpr double kQuantileGridEps = 1e-4;

// Validates (points >= 3; lower < upper for uniform spacing) and builds the
// strictly increasing grid. Quantile spacing requires the base's quantile
// to be strictly increasing, which every family here satisfies.
std::vector<double> make_grid(const GridSpec& spec, const Distribution& base);

std::string spacing_name(GridSpacing s);
GridSpacing spacing_from_name(const std::string& name);

}  // namespace ordident
