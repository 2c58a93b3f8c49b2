#include "ordident/grid.hpp"

#include <stdexcept>

namespace ordident {

std::vector<double> make_grid(const GridSpec& spec, const Distribution& base) {
    if (spec.points < 3) {
        throw std::domain_error("GridSpec: need at least 3 points");
    }
    std::vector<double> grid(static_cast<std::size_t>(spec.points));
    const int last = spec.points - 1;

    if (spec.spacing == GridSpacing::Uniform) {
        if (!(spec.lower < spec.upper)) {
            throw std::domain_error("GridSpec: need lower < upper");
        }
        const double step = (spec.upper - spec.lower) / last;
        for (int i = 0; i <= last; ++i) {
            grid[static_cast<std::size_t>(i)] = spec.lower + step * i;
        }
        grid.back() = spec.upper;
        return grid;
    }

    const double eps = kQuantileGridEps;
    const double span = 1.0 - 2.0 * eps;
    for (int i = 0; i <= last; ++i) {
        const double p = eps + span * static_cast<double>(i) / last;
        grid[static_cast<std::size_t>(i)] = base.quantile(p);
    }
    return grid;
}

std::string spacing_name(GridSpacing s) {
    return s == GridSpacing::Uniform ? "uniform" : "quantile";
}

GridSpacing spacing_from_name(const std::string& name) {
    if (name == "uniform") return GridSpacing::Uniform;
    if (name == "quantile") return GridSpacing::Quantile;
    throw std::domain_error("unknown grid spacing: " + name);
}

}  // namespace ordident
