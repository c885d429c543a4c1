#include "nll/sharpness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nll/iteration.hpp"
#include "nll/parallel.hpp"

namespace nll {

SharpnessProfile make_sharpness_profile(int n, double s, double q, double c) {
    RegimeInput input{n, s, q};
    input.validate();
    if (!(n > 2.0 * s))
        throw regime_error("sharpness profile requires n > 2s");
    const double qs = n / (n - 2.0 * s);
    if (!(q > qs))
        throw regime_error("sharpness profile requires the supercritical range q > n/(n-2s)");
    if (!(c > 0.0)) throw parameter_error("sharpness scale c must be positive");

    SharpnessProfile profile;
    profile.n = n;
    profile.s = s;
    profile.q = q;
    profile.c = c;
    profile.alpha = 2.0 * s / (q - 1.0);
    profile.field = fields::power_decay(profile.alpha, n, c);
    profile.field.label = "sharpness_profile";
    return profile;
}

std::vector<MarginRow> pointwise_margin(const SharpnessProfile& profile,
                                        const Kernel& k,
                                        const std::vector<double>& radii,
                                        const QuadratureConfig& cfg) {
    if (k.params.n != profile.n)
        throw precondition_error("kernel dimension does not match the profile");
    std::vector<MarginRow> rows(radii.size());
    parallel_for(radii.size(), [&](std::size_t i) {
        MarginRow row;
        row.radius = radii[i];
        const Vec3 x{radii[i]};
        try {
            QuadResult op = pv_integrate(profile.field, k, x, cfg);
            row.operator_value = op.value;
            row.error_budget = op.error_estimate;
        } catch (const accuracy_error& e) {
            row.operator_value = e.best.value;
            row.error_budget = e.best.error_estimate;
            row.converged = false;
        }
        row.reaction_value = std::pow(profile.field(x), profile.q);
        row.margin = row.operator_value - row.reaction_value;
        rows[i] = row;
    });
    return rows;
}

double calibrate_c(int n, double s, double q, const Kernel& k,
                   const std::vector<double>& radii, double safety,
                   const QuadratureConfig& cfg) {
    if (!(safety > 0.0 && safety < 1.0))
        throw parameter_error("calibration safety factor must lie in (0,1)");
    if (radii.empty()) throw precondition_error("calibration needs at least one radius");

    // Unit profile: margins scale as c L(r) - c^q u0(r)^q, so the largest
    // admissible c at each radius is (L(r)/u0(r)^q)^{1/(q-1)}.
    const SharpnessProfile unit = make_sharpness_profile(n, s, q, 1.0);
    std::vector<MarginRow> base = pointwise_margin(unit, k, radii, cfg);

    double best = std::numeric_limits<double>::infinity();
    for (const MarginRow& row : base) {
        if (!row.converged)
            throw precondition_error("calibration: quadrature failed at radius " +
                                     std::to_string(row.radius));
        if (!(row.operator_value > 0.0))
            throw precondition_error(
                "calibration impossible: nonpositive operator value at radius " +
                std::to_string(row.radius));
        best = std::min(best,
                        std::pow(row.operator_value / row.reaction_value, 1.0 / (q - 1.0)));
    }
    return safety * best;
}

std::vector<double> default_sharpness_radii(double lo, double hi, int count) {
    std::vector<double> radii{0.0};
    for (double r : log_spaced(lo, hi, count)) radii.push_back(r);
    return radii;
}

}  // namespace nll
