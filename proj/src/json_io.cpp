#include "ordident/json_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ordident {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

ordered_json dist_to_json(const Distribution& d) {
    ordered_json j;
    j["family"] = d.family_name();
    std::visit(
        [&j](const auto& law) {
            using T = std::decay_t<decltype(law)>;
            if constexpr (std::is_same_v<T, ExponentialLaw>) {
                j["rate"] = law.rate;
            } else if constexpr (std::is_same_v<T, LogisticLaw>) {
                j["mu"] = law.mu;
                j["scale"] = law.scale;
            } else if constexpr (std::is_same_v<T, ParetoIILaw>) {
                j["lambda"] = law.lambda;
                j["power"] = law.power;
            } else if constexpr (std::is_same_v<T, BetaLaw>) {
                j["alpha"] = law.alpha;
                j["beta"] = law.beta;
            } else if constexpr (std::is_same_v<T, NormalLaw>) {
                j["mu"] = law.mu;
                j["sigma"] = law.sigma;
            }
        },
        d.law());
    return j;
}

Distribution dist_from_json(const ordered_json& j) {
    if (!j.is_object() || !j.contains("family")) {
        throw std::domain_error("distribution json needs a \"family\" key");
    }
    const std::string fam = j.at("family").get<std::string>();
    if (fam == "uniform01") return Distribution::uniform01();
    if (fam == "exponential") return Distribution::exponential(j.at("rate").get<double>());
    if (fam == "logistic") {
        return Distribution::logistic(j.at("mu").get<double>(), j.at("scale").get<double>());
    }
    if (fam == "pareto2") {
        return Distribution::pareto2(j.at("lambda").get<double>(), j.at("power").get<double>());
    }
    if (fam == "beta") {
        return Distribution::beta(j.at("alpha").get<double>(), j.at("beta").get<double>());
    }
    if (fam == "normal") {
        return Distribution::normal(j.at("mu").get<double>(), j.at("sigma").get<double>());
    }
    throw std::domain_error("unknown family: " + fam);
}

ordered_json grid_to_json(const GridSpec& g) {
    ordered_json j;
    j["spacing"] = spacing_name(g.spacing);
    j["points"] = g.points;
    if (g.spacing == GridSpacing::Uniform) {
        j["lower"] = g.lower;
        j["upper"] = g.upper;
    }
    return j;
}

ordered_json report_to_json(const VerificationReport& r) {
    ordered_json j;
    j["id"] = r.id;
    j["k"] = r.params.k;
    j["m"] = r.params.m;
    j["n"] = r.params.n;
    j["family"] = r.base_family;
    j["grid"] = grid_to_json(r.grid);
    j["tol"] = r.tol;
    j["sup_cdf_distance"] = r.sup_cdf_distance;
    j["quad_pass"] = r.quad_pass;
    if (r.mc_size > 0) {
        ordered_json mc;
        mc["size"] = r.mc_size;
        mc["seed"] = r.seed;
        mc["distance"] = r.mc_distance;
        mc["bound"] = r.mc_bound;
        mc["pass"] = r.mc_pass;
        j["mc"] = mc;
    } else {
        j["mc"] = nullptr;
    }
    j["verdict"] = r.pass() ? "pass" : "fail";
    return j;
}

std::string verification_csv_header() { return "id,k,m,n,family,sup_dist,mc_dist,verdict"; }

std::string verification_csv_row(const VerificationReport& r) {
    std::ostringstream os;
    os << r.id << ',' << r.params.k << ',' << r.params.m << ',' << r.params.n << ','
       << r.base_family << ',' << fmt17(r.sup_cdf_distance) << ',';
    if (r.mc_size > 0) os << fmt17(r.mc_distance);
    os << ',' << (r.pass() ? "pass" : "fail");
    return os.str();
}

ordered_json report_to_json(const TestReport& r) {
    ordered_json j;
    j["target"] = gof_target_name(r.config.target);
    j["k"] = r.config.k;
    j["n"] = r.config.n;
    j["resamples"] = r.config.resamples;
    j["mc_block"] = r.config.mc_block;
    j["seed"] = r.config.seed;
    j["level"] = r.config.level;
    j["statistic"] = r.statistic;
    j["p_value"] = r.p_value;
    j["decision"] = r.reject ? "reject" : "retain";
    j["lhs_groups"] = r.lhs_groups;
    j["rhs_groups"] = r.rhs_groups;
    return j;
}

ordered_json report_to_json(const CalibrationSummary& s) {
    ordered_json j;
    j["target"] = gof_target_name(s.config.target);
    j["k"] = s.config.k;
    j["n"] = s.config.n;
    j["resamples"] = s.config.resamples;
    j["mc_block"] = s.config.mc_block;
    j["seed"] = s.config.seed;
    j["level"] = s.config.level;
    j["truth"] = s.truth_family;
    j["repetitions"] = s.repetitions;
    j["rejections"] = s.rejections;
    j["rejection_rate"] = s.rejection_rate;
    j["se"] = s.se;
    return j;
}

std::string grid_function_csv(const GridFunction& f) {
    std::ostringstream os;
    os << "y,F\n";
    for (std::size_t i = 0; i < f.size(); ++i) {
        os << fmt17(f.nodes()[i]) << ',' << fmt17(f.values()[i]) << '\n';
    }
    return os.str();
}

GridFunction grid_function_from_csv(const std::string& text) {
    std::vector<double> ys;
    std::vector<double> vs;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        double y = 0.0;
        double v = 0.0;
        if (std::sscanf(line.c_str(), "%lf,%lf", &y, &v) != 2) {
            if (first) {
                first = false;
                continue;  // header
            }
            throw std::domain_error("grid function csv: bad line: " + line);
        }
        first = false;
        ys.push_back(y);
        vs.push_back(v);
    }
    return GridFunction(std::move(ys), std::move(vs));
}

std::vector<double> parse_value_lines(const std::string& text) {
    std::vector<double> out;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        char* end = nullptr;
        const double v = std::strtod(line.c_str(), &end);
        const bool parsed = end != line.c_str() && (*end == '\0' || *end == ',');
        if (!parsed) {
            if (first) {
                first = false;
                continue;  // header
            }
            throw std::domain_error("data file: bad line: " + line);
        }
        first = false;
        out.push_back(v);
    }
    return out;
}

void write_text_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for write: " + tmp);
        out << content;
        if (!out.flush()) throw std::runtime_error("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace ordident
