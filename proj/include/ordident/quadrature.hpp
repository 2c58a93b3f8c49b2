#pragma once

#include <cmath>
#include <queue>
#include <utility>
#include <vector>

namespace ordident {

// Adaptive Gauss-Kronrod 7-15 on a finite interval. Panels are kept in a
// priority queue and the worst one is bisected until the summed error
// estimate drops below abs_tol. `converged` is false when the panel or
// evaluation budget ran out first; `value` is still the best estimate.

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    int panels = 0;
    bool converged = false;
};

// Shared evaluation budget. Nested integrals (a quadrature whose integrand
// itself integrates) draw from one budget so a pathological inner call
// cannot starve the rest of the computation unnoticed.
struct QuadBudget {
    long long evals;
    bool take(long long n) {
        if (evals < n) return false;
        evals -= n;
        return true;
    }
};

namespace gk {

// 15-point Kronrod abscissae (positive half) and weights; the embedded
// 7-point Gauss rule sits at the odd-indexed abscissae.
inline constexpr double xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr double wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

}  // namespace gk

struct PanelEval {
    double value;  // K15 estimate
    double error;  // QUADPACK-scaled |K15 - G7|
};

template <class F>
PanelEval gk15_panel(F&& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);

    const double fc = f(c);
    double resg = gk::wg[3] * fc;
    double resk = gk::wgk[7] * fc;

    double fv1[7], fv2[7];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * gk::xgk[j];
        fv1[j] = f(c - dx);
        fv2[j] = f(c + dx);
        const double fsum = fv1[j] + fv2[j];
        resk += gk::wgk[j] * fsum;
        if (j % 2 == 1) {
            resg += gk::wg[j / 2] * fsum;
        }
    }

    const double reskh = resk * 0.5;
    double resasc = gk::wgk[7] * std::fabs(fc - reskh);
    for (int j = 0; j < 7; ++j) {
        resasc += gk::wgk[j] * (std::fabs(fv1[j] - reskh) + std::fabs(fv2[j] - reskh));
    }
    resasc *= h;

    double err = std::fabs((resk - resg) * h);
    if (resasc != 0.0 && err != 0.0) {
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    }
    return {resk * h, err};
}

// `cuts` seeds the initial panels: one per adjacent pair. Pass interior
// breakpoints wherever the integrand has a known edge or layer the error
// estimator could miss from a single spanning panel.
template <class F>
QuadResult integrate_gk(F&& f, const std::vector<double>& cuts, double abs_tol,
                        int max_panels, QuadBudget* budget = nullptr) {
    struct Panel {
        double a, b, value, error;
        bool operator<(const Panel& o) const { return error < o.error; }
    };

    QuadResult res;

    auto eval = [&](double lo, double hi) -> Panel {
        PanelEval pe = gk15_panel(f, lo, hi);
        return Panel{lo, hi, pe.value, pe.error};
    };

    std::priority_queue<Panel> heap;
    double total_value = 0.0;
    double total_error = 0.0;
    for (std::size_t i = 1; i < cuts.size(); ++i) {
        if (!(cuts[i] > cuts[i - 1])) continue;
        if (budget && !budget->take(15)) {
            res.converged = false;
            return res;
        }
        Panel p = eval(cuts[i - 1], cuts[i]);
        total_value += p.value;
        total_error += p.error;
        heap.push(p);
        res.panels += 1;
    }
    if (heap.empty()) {
        res.converged = true;
        return res;
    }

    while (total_error > abs_tol && res.panels < max_panels) {
        if (budget && !budget->take(30)) break;
        Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // interval at floating-point resolution; cannot split further
            heap.push(worst);
            break;
        }
        Panel left = eval(worst.a, mid);
        Panel right = eval(mid, worst.b);
        total_value += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        res.panels += 2;
    }

    res.value = total_value;
    res.error = total_error;
    res.converged = total_error <= abs_tol;
    return res;
}

template <class F>
QuadResult integrate_gk(F&& f, double a, double b, double abs_tol,
                        int max_panels, QuadBudget* budget = nullptr) {
    return integrate_gk(std::forward<F>(f), std::vector<double>{a, b}, abs_tol,
                        max_panels, budget);
}

}  // namespace ordident
