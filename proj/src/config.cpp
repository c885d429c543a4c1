#include "nll/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace nll {

using json = nlohmann::json;

const std::vector<std::string> kScenarios = {
    "operator-eval", "cutoff-verify", "pairing-check", "mass-scan", "classify",
    "iterate",       "critical-split", "sharpness",    "full-suite"};

namespace {

template <typename T>
void read_field(const json& j, const std::string& block, const char* key, T& out,
                bool required) {
    const std::string path = block.empty() ? key : block + "." + key;
    if (!j.contains(key)) {
        if (required) throw config_error(path, "missing required field " + path);
        return;
    }
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw config_error(path, "field " + path + " has the wrong type");
    }
}

std::vector<std::pair<double, double>> load_profile_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("kernel.profile_csv", "cannot open profile table " + path);
    std::vector<std::pair<double, double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        double angle, value;
        if (ls >> angle >> value) rows.emplace_back(angle, value);
    }
    if (rows.size() < 2)
        throw config_error("kernel.profile_csv", "profile table needs at least 2 rows");
    std::sort(rows.begin(), rows.end());
    return rows;
}

}  // namespace

void RunConfig::validate() const {
    if (std::find(kScenarios.begin(), kScenarios.end(), scenario) == kScenarios.end())
        throw config_error("scenario", "unknown scenario '" + scenario + "'");
    if (problem.n < 1 || problem.n > 3)
        throw config_error("problem.n", "problem.n must be 1, 2, or 3");
    if (!(problem.s > 0.0 && problem.s < 1.0))
        throw config_error("problem.s", "problem.s must lie in (0,1)");
    if (!(problem.q > 1.0)) throw config_error("problem.q", "problem.q must exceed 1");
    try {
        quadrature.validate();
    } catch (const parameter_error& e) {
        throw config_error("quadrature", e.what());
    }
    if (kernel.kind != "fractional" && kernel.kind != "anisotropic" &&
        kernel.kind != "custom-table")
        throw config_error("kernel.kind", "kernel.kind must be fractional, anisotropic, "
                                          "or custom-table");
    if (kernel.kind == "custom-table") {
        if (problem.n != 2)
            throw config_error("kernel.kind", "custom-table kernels require n = 2");
        if (kernel.profile_csv.empty())
            throw config_error("kernel.profile_csv", "custom-table kernels need a table");
    }
    if (mass_scan.doublings < 1)
        throw config_error("mass_scan.doublings", "doublings must be >= 1");
    if (mass_scan.k_max < 1) throw config_error("mass_scan.k_max", "k_max must be >= 1");
    if (!(sharpness.safety > 0.0 && sharpness.safety < 1.0))
        throw config_error("sharpness.safety", "safety must lie in (0,1)");
    if (iterate.max_steps < 1)
        throw config_error("iterate.max_steps", "max_steps must be >= 1");
    for (double r : cutoff_scales)
        if (!(r > 0.0)) throw config_error("cutoff_scales", "scales must be positive");
}

Kernel RunConfig::build_kernel() const {
    KernelParams params{problem.n, problem.s, kernel.lambda.value_or(1.0),
                        kernel.Lambda.value_or(1.0)};
    if (kernel.kind == "fractional") return make_fractional_kernel(params);
    if (kernel.kind == "anisotropic") {
        const double w = kernel.wobble;
        params.lambda = kernel.lambda.value_or(1.0);
        params.Lambda = kernel.Lambda.value_or(1.0 + w);
        auto profile = [w](const Vec3& th) {
            return 1.0 + w * th[0] * th[0];  // even by construction
        };
        return make_anisotropic_kernel(params, profile);
    }
    // custom-table: periodic piecewise-linear a(theta), n = 2.
    auto rows = load_profile_csv(kernel.profile_csv);
    double lo = rows.front().second, hi = rows.front().second;
    for (auto& [a, v] : rows) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    params.lambda = kernel.lambda.value_or(lo);
    params.Lambda = kernel.Lambda.value_or(hi);
    auto profile = [rows](const Vec3& th) {
        double angle = std::atan2(th[1], th[0]);
        const double span = rows.back().first - rows.front().first;
        while (angle < rows.front().first) angle += span;
        while (angle > rows.back().first) angle -= span;
        auto it = std::lower_bound(rows.begin(), rows.end(),
                                   std::make_pair(angle, -1e300));
        if (it == rows.begin()) return it->second;
        if (it == rows.end()) return rows.back().second;
        auto prev = std::prev(it);
        const double t = (angle - prev->first) / (it->first - prev->first);
        return prev->second + t * (it->second - prev->second);
    };
    return make_anisotropic_kernel(params, profile);
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw config_error(origin, std::string("config is not valid JSON: ") + e.what());
    }

    RunConfig cfg;
    if (j.contains("problem")) {
        const json& p = j["problem"];
        read_field(p, "problem", "n", cfg.problem.n, true);
        read_field(p, "problem", "s", cfg.problem.s, true);
        read_field(p, "problem", "q", cfg.problem.q, true);
    }
    if (j.contains("kernel")) {
        const json& kj = j["kernel"];
        read_field(kj, "kernel", "kind", cfg.kernel.kind, false);
        if (kj.contains("lambda")) cfg.kernel.lambda = kj["lambda"].get<double>();
        if (kj.contains("Lambda")) cfg.kernel.Lambda = kj["Lambda"].get<double>();
        read_field(kj, "kernel", "profile_csv", cfg.kernel.profile_csv, false);
        read_field(kj, "kernel", "wobble", cfg.kernel.wobble, false);
    }
    if (j.contains("quadrature")) {
        const json& qj = j["quadrature"];
        read_field(qj, "quadrature", "tol", cfg.quadrature.tol, false);
        read_field(qj, "quadrature", "r_in", cfg.quadrature.r_in, false);
        read_field(qj, "quadrature", "R_out", cfg.quadrature.R_out, false);
        read_field(qj, "quadrature", "depth", cfg.quadrature.depth, false);
        read_field(qj, "quadrature", "angular", cfg.quadrature.angular, false);
    }
    read_field(j, "", "scenario", cfg.scenario, false);
    read_field(j, "", "out", cfg.out_dir, false);
    read_field(j, "", "seed", cfg.seed, false);
    read_field(j, "", "jobs", cfg.jobs, false);
    if (j.contains("mass_scan")) {
        const json& m = j["mass_scan"];
        read_field(m, "mass_scan", "base_radius", cfg.mass_scan.base_radius, false);
        read_field(m, "mass_scan", "doublings", cfg.mass_scan.doublings, false);
        read_field(m, "mass_scan", "k_max", cfg.mass_scan.k_max, false);
        read_field(m, "mass_scan", "field_beta", cfg.mass_scan.field_beta, false);
    }
    if (j.contains("sharpness")) {
        const json& sj = j["sharpness"];
        read_field(sj, "sharpness", "safety", cfg.sharpness.safety, false);
        read_field(sj, "sharpness", "radii_lo", cfg.sharpness.radii_lo, false);
        read_field(sj, "sharpness", "radii_hi", cfg.sharpness.radii_hi, false);
        read_field(sj, "sharpness", "radii_count", cfg.sharpness.radii_count, false);
        read_field(sj, "sharpness", "radii", cfg.sharpness.radii, false);
    }
    if (j.contains("iterate")) {
        const json& ij = j["iterate"];
        read_field(ij, "iterate", "c0", cfg.iterate.c0, false);
        read_field(ij, "iterate", "cbar", cfg.iterate.cbar, false);
        read_field(ij, "iterate", "max_steps", cfg.iterate.max_steps, false);
    }
    if (j.contains("cutoff_scales")) {
        try {
            cfg.cutoff_scales = j["cutoff_scales"].get<std::vector<double>>();
        } catch (const json::exception&) {
            throw config_error("cutoff_scales", "cutoff_scales must be a number array");
        }
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("config", "cannot open config file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path);
}

}  // namespace nll
