// Batch front end for the identity catalog, the ODE and functional-equation
// residuals, the fixed-point solver, and the goodness-of-fit test.
//
// Exit codes: 0 all verdicts pass / command completed; 1 a verdict failed;
// 2 usage, configuration, or parameter-constraint error; 3 numerical failure
// (a partial report is still written when one exists).

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ordident/catalog.hpp"
#include "ordident/characterization.hpp"
#include "ordident/errors.hpp"
#include "ordident/gof.hpp"
#include "ordident/json_io.hpp"
#include "ordident/verify.hpp"

namespace {

using namespace ordident;

std::string out_path(const std::string& name) {
    std::filesystem::path p(name);
    if (!p.is_absolute()) {
        const char* dir = std::getenv("ORDIDENT_OUT_DIR");
        if (dir && *dir) p = std::filesystem::path(dir) / p;
    }
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    return p.string();
}

void write_report(const std::string& name, const std::string& content) {
    const std::string path = out_path(name);
    write_text_atomic(path, content);
    std::cout << "wrote " << path << "\n";
}

Distribution resolve_base(const std::string& spec, const IdentityRecord& rec) {
    if (spec == "matching") return matching_base(rec.family);
    return dist_from_json(ordered_json::parse(spec));
}

struct VerifyArgs {
    std::string identity = "all";
    int k = 0;
    int m = 0;
    int n = 0;
    int n_max = 4;
    std::string base = "matching";
    double tol = 1e-6;
    int grid_points = 201;
    std::string spacing = "quantile";
    double lower = 0.0;
    double upper = 1.0;
    std::uint64_t seed = 0;
    bool has_seed = false;
    bool has_kn = false;
    long long mc_size = 100000;
    std::string out = "verify_report";
};

int run_verify(const VerifyArgs& a) {
    const GridSpec grid{a.lower, a.upper, a.grid_points, spacing_from_name(a.spacing)};

    std::vector<std::pair<const IdentityRecord*, IdentityParams>> tasks;
    if (a.identity == "all") {
        for (const auto& rec : catalog()) {
            for (const auto& p : enumerate_params(rec, a.n_max)) tasks.emplace_back(&rec, p);
        }
    } else {
        const IdentityRecord& rec = find_identity(a.identity);
        if (a.has_kn) {
            tasks.emplace_back(&rec, IdentityParams{a.k, rec.uses_m ? a.m : 0, a.n});
        } else {
            for (const auto& p : enumerate_params(rec, a.n_max)) tasks.emplace_back(&rec, p);
        }
    }
    std::sort(tasks.begin(), tasks.end(), [](const auto& x, const auto& y) {
        if (x.first->id != y.first->id) return x.first->id < y.first->id;
        const auto& p = x.second;
        const auto& q = y.second;
        return std::tie(p.k, p.m, p.n) < std::tie(q.k, q.m, q.n);
    });

    ordered_json doc;
    doc["command"] = "verify";
    doc["identity"] = a.identity;
    if (!a.has_kn) doc["n_max"] = a.n_max;
    doc["base"] = a.base == "matching" ? ordered_json("matching") : ordered_json::parse(a.base);
    doc["tol"] = a.tol;
    doc["grid"] = grid_to_json(grid);
    if (a.has_seed) {
        doc["seed"] = a.seed;
        doc["mc_size"] = a.mc_size;
    } else {
        doc["seed"] = nullptr;
    }

    const RngStream root(a.seed);
    std::vector<std::string> csv{verification_csv_header()};
    ordered_json reports = ordered_json::array();
    bool all_pass = true;
    double worst = 0.0;
    std::optional<NumericalError> failure;

    for (std::size_t i = 0; i < tasks.size(); ++i) {
        const auto& [rec, params] = tasks[i];
        std::optional<McSettings> mc;
        if (a.has_seed && a.mc_size > 0) {
            mc = McSettings{static_cast<int>(a.mc_size), root.substream(i).seed()};
        }
        try {
            const VerificationReport rep =
                verify_identity(*rec, params, resolve_base(a.base, *rec), grid, a.tol, mc);
            all_pass = all_pass && rep.pass();
            worst = std::max(worst, rep.sup_cdf_distance);
            reports.push_back(report_to_json(rep));
            csv.push_back(verification_csv_row(rep));
        } catch (const NumericalError& e) {
            ordered_json err;
            err["id"] = rec->id;
            err["k"] = params.k;
            err["m"] = rec->uses_m ? params.m : 0;
            err["n"] = params.n;
            err["error"] = e.what();
            err["achieved"] = e.achieved();
            reports.push_back(err);
            failure = e;
            break;
        }
    }
    doc["reports"] = reports;
    doc["all_pass"] = all_pass && !failure;

    write_report(a.out + ".json", doc.dump(2) + "\n");
    std::string csv_text;
    for (const auto& line : csv) csv_text += line + "\n";
    write_report(a.out + ".csv", csv_text);

    if (failure) {
        std::cerr << "numerical failure: " << failure->what() << "\n";
        return 3;
    }
    std::cout << "verify: " << tasks.size() << " instantiations, "
              << (all_pass ? "all pass" : "FAILURES") << ", max sup distance " << fmt17(worst)
              << "\n";
    return all_pass ? 0 : 1;
}

int run_catalog() {
    for (const auto& rec : catalog()) {
        std::cout << rec.id << "  [" << rec.source_tag << "]  "
                  << identity_family_name(rec.family) << "\n    " << rec.statement
                  << "\n    valid: " << rec.constraint_text << "\n";
    }
    std::cout << catalog().size() << " identities\n";
    return 0;
}

struct SampleArgs {
    std::string identity;
    std::string side = "lhs";
    int k = 1;
    int m = 0;
    int n = 2;
    std::string base = "matching";
    long long count = 100000;
    std::uint64_t seed = 0;
    std::string out = "samples.txt";
};

int run_sample(const SampleArgs& a) {
    const IdentityRecord& rec = find_identity(a.identity);
    const IdentityParams p{a.k, rec.uses_m ? a.m : 0, a.n};
    if (!rec.constraint(p)) {
        throw std::domain_error("params violate constraint for " + rec.id + " (" +
                                rec.constraint_text + ")");
    }
    const Distribution base = resolve_base(a.base, rec);
    const RandomExpr expr = a.side == "lhs" ? rec.lhs(p, base) : rec.rhs(p, base);
    RngStream rng(a.seed);
    const std::vector<double> xs = expr_sample(expr, rng, static_cast<std::size_t>(a.count));

    std::string text;
    text.reserve(xs.size() * 20);
    for (double x : xs) text += fmt17(x) + "\n";
    write_report(a.out, text);
    std::cout << "sample: " << xs.size() << " draws of " << rec.id << " " << a.side << "\n";
    return 0;
}

struct OdeArgs {
    double r = 1.0;
    double theta = 1.0;
    double a = 1.0;
    double lambda = 1.0;
    int grid_points = 201;
    std::string spacing = "quantile";
    double lower = 0.0;
    double upper = 1.0;
    double tol = 0.0;
    bool has_tol = false;
    std::string out = "ode_check";
};

int run_ode_check(const OdeArgs& a) {
    const OdeParams p{a.r, a.theta, a.a, a.lambda};
    const GridSpec grid{a.lower, a.upper, a.grid_points, spacing_from_name(a.spacing)};
    const double res = ode_residual_max(p, grid);

    ordered_json doc;
    doc["command"] = "ode-check";
    doc["r"] = p.r;
    doc["theta"] = p.theta;
    doc["a"] = p.a;
    doc["lambda"] = p.lambda;
    doc["grid"] = grid_to_json(grid);
    doc["max_residual"] = res;
    bool pass = true;
    if (a.has_tol) {
        pass = res < a.tol;
        doc["tol"] = a.tol;
        doc["pass"] = pass;
    }
    write_report(a.out + ".json", doc.dump(2) + "\n");
    std::cout << "ode-check: max residual " << fmt17(res) << "\n";
    return pass ? 0 : 1;
}

struct ResidualArgs {
    std::string eq = "max-scale-mix";
    int k = 1;
    int m = 0;
    int n = 2;
    double lambda = 1.0;
    std::string base;
    std::string grid_csv;
    std::string mix;
    int grid_points = 201;
    std::string spacing = "quantile";
    double lower = 0.0;
    double upper = 1.0;
    double tol = 0.0;
    bool has_tol = false;
    std::string out = "residual";
};

int run_residual(const ResidualArgs& a) {
    const FuncEq eq = funceq_from_name(a.eq);
    const FuncEqParams params{a.k, a.m, a.n, a.lambda};
    std::optional<Distribution> mix;
    if (!a.mix.empty()) mix = dist_from_json(ordered_json::parse(a.mix));

    ordered_json doc;
    doc["command"] = "residual";
    doc["eq"] = a.eq;
    doc["k"] = a.k;
    doc["m"] = a.m;
    doc["n"] = a.n;
    doc["lambda"] = a.lambda;

    double res = 0.0;
    if (!a.grid_csv.empty()) {
        const GridFunction f = grid_function_from_csv(read_text_file(a.grid_csv));
        doc["cdf"] = "grid:" + a.grid_csv;
        res = functional_eq_residual(eq, f, params, mix);
    } else {
        const Distribution f = a.base.empty() ? Distribution::pareto2(a.lambda, 1.0)
                                              : dist_from_json(ordered_json::parse(a.base));
        doc["cdf"] = dist_to_json(f);
        const GridSpec grid{a.lower, a.upper, a.grid_points, spacing_from_name(a.spacing)};
        doc["grid"] = grid_to_json(grid);
        res = functional_eq_residual(eq, f, params, mix, grid);
    }
    doc["max_residual"] = res;
    bool pass = true;
    if (a.has_tol) {
        pass = res < a.tol;
        doc["tol"] = a.tol;
        doc["pass"] = pass;
    }
    write_report(a.out + ".json", doc.dump(2) + "\n");
    std::cout << "residual: " << a.eq << " max residual " << fmt17(res) << "\n";
    return pass ? 0 : 1;
}

struct SolveArgs {
    std::string eq = "max-scale-mix";
    int k = 1;
    int m = 0;
    int n = 3;
    double lambda = 1.0;
    int points = 400;
    int max_iter = 200;
    double tol = 1e-7;
    std::string init = "clamped-linear";
    std::string out = "solve_fp";
};

int run_solve_fp(const SolveArgs& a) {
    const FuncEq eq = funceq_from_name(a.eq);
    const FuncEqParams params{a.k, a.m, a.n, a.lambda};
    const GridSpec grid{0.0, 1.0, a.points, GridSpacing::Quantile};

    const std::vector<double> nodes = fixed_point_grid(a.lambda, a.points);
    std::optional<GridFunction> init;
    if (a.init == "clamped-linear") {
        init = clamped_linear_start(a.lambda, nodes);
    } else if (a.init == "pareto") {
        init = pareto_start(a.lambda, nodes);
    } else {
        init = grid_function_from_csv(read_text_file(a.init));
    }

    ordered_json doc;
    doc["command"] = "solve-fp";
    doc["eq"] = a.eq;
    doc["k"] = a.k;
    doc["m"] = a.m;
    doc["n"] = a.n;
    doc["lambda"] = a.lambda;
    doc["points"] = a.points;
    doc["max_iter"] = a.max_iter;
    doc["tol"] = a.tol;
    doc["init"] = a.init;

    try {
        const FixedPointResult res = fixed_point_solve(eq, params, grid, *init, a.max_iter, a.tol);
        doc["converged"] = res.converged;
        doc["sweeps"] = res.sweeps;
        doc["trace"] = res.trace;
        write_report(a.out + ".json", doc.dump(2) + "\n");
        write_report(a.out + ".csv", grid_function_csv(res.solution));
        std::cout << "solve-fp: " << (res.converged ? "converged" : "stopped") << " after "
                  << res.sweeps << " sweeps\n";
        return 0;
    } catch (const NonConvergenceError& e) {
        doc["converged"] = false;
        doc["error"] = e.what();
        doc["trace"] = e.trace();
        write_report(a.out + ".json", doc.dump(2) + "\n");
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
}

struct GofArgs {
    std::string data;
    std::string target = "logistic";
    int k = 1;
    int n = 2;
    int resamples = 200;
    long long mc_block = 10000;
    double level = 0.05;
    std::uint64_t seed = 0;
    std::string out = "gof";
};

GofConfig make_gof_config(const GofArgs& a) {
    GofConfig cfg;
    cfg.target = gof_target_from_name(a.target);
    cfg.k = a.k;
    cfg.n = a.n;
    cfg.resamples = a.resamples;
    cfg.mc_block = a.mc_block;
    cfg.seed = a.seed;
    cfg.level = a.level;
    return cfg;
}

int run_gof(const GofArgs& a) {
    const std::vector<double> data = parse_value_lines(read_text_file(a.data));
    const TestReport rep = gof_test(data, make_gof_config(a));
    write_report(a.out + ".json", report_to_json(rep).dump(2) + "\n");
    std::cout << "gof: statistic " << fmt17(rep.statistic) << ", p " << fmt17(rep.p_value) << ", "
              << (rep.reject ? "reject" : "retain") << "\n";
    return rep.reject ? 1 : 0;
}

struct CalibrateArgs {
    GofArgs gof;
    std::string truth = "matching";
    int repetitions = 200;
    std::string out = "calibrate";
};

int run_calibrate(const CalibrateArgs& a) {
    const GofConfig cfg = make_gof_config(a.gof);
    const Distribution truth =
        a.truth == "matching"
            ? (cfg.target == GofTarget::Logistic ? Distribution::logistic(0.0, 1.0)
                                                 : Distribution::pareto2(1.0, 1.0))
            : dist_from_json(ordered_json::parse(a.truth));
    const CalibrationSummary sum = calibration_run(cfg, truth, a.repetitions);
    write_report(a.out + ".json", report_to_json(sum).dump(2) + "\n");
    std::cout << "calibrate: rejection rate " << fmt17(sum.rejection_rate) << " (se "
              << fmt17(sum.se) << ") over " << sum.repetitions << " repetitions\n";
    return 0;
}

void add_grid_flags(CLI::App* sub, int& points, std::string& spacing, double& lower,
                    double& upper) {
    sub->add_option("--grid-points", points, "grid size")->check(CLI::PositiveNumber);
    sub->add_option("--spacing", spacing, "grid spacing")
        ->check(CLI::IsMember({"quantile", "uniform"}));
    sub->add_option("--lower", lower, "uniform grid lower edge");
    sub->add_option("--upper", upper, "uniform grid upper edge");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"order-statistic distributional identities: verify, invert, test"};
    app.require_subcommand(1);

    auto* cat = app.add_subcommand("catalog", "list the identity catalog");

    VerifyArgs va;
    auto* ver = app.add_subcommand("verify", "compare both sides of catalog identities");
    ver->add_option("--identity", va.identity, "catalog id or 'all'")->required();
    auto* vk = ver->add_option("--k", va.k, "order index k");
    auto* vn = ver->add_option("--n", va.n, "sample size n");
    ver->add_option("--m", va.m, "second index m (identities that use it)");
    ver->add_option("--n-max", va.n_max, "enumerate all valid (k,m,n) up to this n");
    ver->add_option("--base", va.base, "'matching' or a distribution as JSON");
    ver->add_option("--tol", va.tol, "sup-distance pass tolerance")->check(CLI::PositiveNumber);
    add_grid_flags(ver, va.grid_points, va.spacing, va.lower, va.upper);
    auto* vseed = ver->add_option("--seed", va.seed, "enables the Monte Carlo check");
    ver->add_option("--mc-size", va.mc_size, "two-sample size (0 disables)");
    ver->add_option("--out", va.out, "report basename");
    vn->needs(vk);
    vk->needs(vn);

    SampleArgs sa;
    auto* smp = app.add_subcommand("sample", "draw from one side of an identity");
    smp->add_option("--identity", sa.identity, "catalog id")->required();
    smp->add_option("--side", sa.side, "lhs or rhs")->check(CLI::IsMember({"lhs", "rhs"}));
    smp->add_option("--k", sa.k, "order index k")->required();
    smp->add_option("--m", sa.m, "second index m");
    smp->add_option("--n", sa.n, "sample size n")->required();
    smp->add_option("--base", sa.base, "'matching' or a distribution as JSON");
    smp->add_option("--count", sa.count, "number of draws")->check(CLI::PositiveNumber);
    smp->add_option("--seed", sa.seed, "rng seed")->required();
    smp->add_option("--out", sa.out, "output file, one value per line");

    OdeArgs oa;
    auto* ode = app.add_subcommand("ode-check", "closed-form ODE solution residual");
    ode->add_option("--r", oa.r, "exponent r");
    ode->add_option("--theta", oa.theta, "rate theta");
    ode->add_option("--a", oa.a, "weight exponent a in [0,1]");
    ode->add_option("--lambda", oa.lambda, "scale lambda");
    add_grid_flags(ode, oa.grid_points, oa.spacing, oa.lower, oa.upper);
    auto* otol = ode->add_option("--tol", oa.tol, "fail when residual exceeds this");
    ode->add_option("--out", oa.out, "report basename");

    ResidualArgs ra;
    auto* res = app.add_subcommand("residual", "functional-equation residual for a CDF");
    res->add_option("--eq", ra.eq, "equation")
        ->check(CLI::IsMember({"deriv-balance", "max-scale-mix", "trimmed-scale-mix"}));
    res->add_option("--k", ra.k, "order index k");
    res->add_option("--m", ra.m, "trim count m");
    res->add_option("--n", ra.n, "sample size n");
    res->add_option("--lambda", ra.lambda, "scale for the default Pareto CDF");
    res->add_option("--base", ra.base, "CDF as a distribution JSON (default Pareto(lambda,1))");
    res->add_option("--grid-csv", ra.grid_csv, "CDF as a grid-function CSV file");
    res->add_option("--mix", ra.mix, "expected mixing law as JSON (checked, not applied)");
    add_grid_flags(res, ra.grid_points, ra.spacing, ra.lower, ra.upper);
    auto* rtol = res->add_option("--tol", ra.tol, "fail when residual exceeds this");
    res->add_option("--out", ra.out, "report basename");

    SolveArgs fa;
    auto* fp = app.add_subcommand("solve-fp", "fixed-point inversion of a scale-mix equation");
    fp->add_option("--eq", fa.eq, "equation")
        ->check(CLI::IsMember({"max-scale-mix", "trimmed-scale-mix"}));
    fp->add_option("--k", fa.k, "order index k");
    fp->add_option("--m", fa.m, "trim count m");
    fp->add_option("--n", fa.n, "sample size n");
    fp->add_option("--lambda", fa.lambda, "target slope at 0");
    fp->add_option("--points", fa.points, "grid size")->check(CLI::PositiveNumber);
    fp->add_option("--max-iter", fa.max_iter, "sweep limit")->check(CLI::PositiveNumber);
    fp->add_option("--tol", fa.tol, "stop when the sweep delta drops below this");
    fp->add_option("--init", fa.init, "clamped-linear, pareto, or a grid CSV path");
    fp->add_option("--out", fa.out, "report basename");

    GofArgs ga;
    auto* gof = app.add_subcommand("gof", "goodness-of-fit test against a characterized law");
    gof->add_option("--data", ga.data, "data file, one value per line")->required();
    gof->add_option("--target", ga.target, "logistic or pareto2")
        ->check(CLI::IsMember({"logistic", "pareto2"}));
    gof->add_option("--k", ga.k, "order index k");
    gof->add_option("--n", ga.n, "block size n");
    gof->add_option("--resamples", ga.resamples, "permutation count");
    gof->add_option("--level", ga.level, "test level");
    gof->add_option("--seed", ga.seed, "rng seed")->required();
    gof->add_option("--out", ga.out, "report basename");

    CalibrateArgs ca;
    auto* cal = app.add_subcommand("calibrate", "empirical size/power of the gof test");
    cal->add_option("--target", ca.gof.target, "logistic or pareto2")
        ->check(CLI::IsMember({"logistic", "pareto2"}));
    cal->add_option("--k", ca.gof.k, "order index k");
    cal->add_option("--n", ca.gof.n, "block size n");
    cal->add_option("--resamples", ca.gof.resamples, "permutation count");
    cal->add_option("--mc-block", ca.gof.mc_block, "data length per repetition");
    cal->add_option("--level", ca.gof.level, "test level");
    cal->add_option("--seed", ca.gof.seed, "rng seed")->required();
    cal->add_option("--truth", ca.truth, "'matching' or a distribution as JSON");
    cal->add_option("--repetitions", ca.repetitions, "number of datasets");
    cal->add_option("--out", ca.out, "report basename");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    va.has_seed = vseed->count() > 0;
    va.has_kn = vk->count() > 0;
    oa.has_tol = otol->count() > 0;
    ra.has_tol = rtol->count() > 0;

    try {
        if (*cat) return run_catalog();
        if (*ver) return run_verify(va);
        if (*smp) return run_sample(sa);
        if (*ode) return run_ode_check(oa);
        if (*res) return run_residual(ra);
        if (*fp) return run_solve_fp(fa);
        if (*gof) return run_gof(ga);
        if (*cal) return run_calibrate(ca);
    } catch (const NonConvergenceError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << " (achieved " << e.achieved() << ")\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
