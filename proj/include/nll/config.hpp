#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nll/kernel.hpp"
#include "nll/quadrature.hpp"

namespace nll {

// One structured config file drives every scenario; any field can be
// overridden from the command line (flag wins).
struct RunConfig {
    // Defaults sit in the supercritical 1D setting where every scenario has
    // something to show.
    struct Problem {
        int n = 1;
        double s = 0.25;
        double q = 4.0;
    } problem;

    struct KernelSpec {
        std::string kind = "fractional";  // fractional | anisotropic | custom-table
        std::optional<double> lambda;     // anisotropic bounds
        std::optional<double> Lambda;
        std::string profile_csv;          // (angle, value) rows for custom-table
        double wobble = 0.5;              // built-in anisotropic profile amplitude
    } kernel;

    QuadratureConfig quadrature;

    std::string scenario = "classify";
    std::string out_dir = "nll-out";
    long seed = 0;
    int jobs = 0;  // 0 = auto

    struct MassScan {
        double base_radius = 1.0;
        int doublings = 6;
        int k_max = 40;
        double field_beta = 2.0;  // u = (1+|x|)^{-beta}
    } mass_scan;

    struct SharpnessOpts {
        double safety = 0.9;
        double radii_lo = 0.1;
        double radii_hi = 100.0;
        int radii_count = 24;
        std::vector<double> radii;  // explicit sample radii; wins when nonempty
    } sharpness;

    struct IterateOpts {
        double c0 = 1.0;
        double cbar = 1.0;
        int max_steps = 200;
    } iterate;

    std::vector<double> cutoff_scales{1.0, 2.0, 4.0, 8.0, 16.0};

    // Throws config_error naming the offending field path.
    void validate() const;

    Kernel build_kernel() const;
};

extern const std::vector<std::string> kScenarios;

// Loads and validates a JSON config file. Unknown scenarios, missing
// problem fields, and domain violations throw config_error.
RunConfig load_config(const std::string& path);

// Parses a JSON string (same schema as the file).
RunConfig parse_config(const std::string& text, const std::string& origin);

}  // namespace nll
