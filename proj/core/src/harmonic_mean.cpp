#include <cmath>

#include "sah/errors.hpp"
#include "sah/oracle.hpp"

namespace sah {

namespace {

double mean_reciprocal(const CoefficientExpansion& c, double gamma, int nodes)
{
    std::vector<double> vals(static_cast<std::size_t>(nodes));
    Eigen::VectorXd y(1);
    for (int i = 0; i < nodes; ++i) {
        y[0] = static_cast<double>(i) / nodes;
        const double a = c.evaluate(gamma, y)(0, 0);
        if (!(a > 0.0)) throw EllipticityError(gamma, a, 0.0);
        vals[static_cast<std::size_t>(i)] = 1.0 / a;
    }
    return tree_sum(vals, 0.0) / nodes;
}

} // namespace

HarmonicMean harmonic_mean_1d_detail(const CoefficientExpansion& c, double gamma, int panels)
{
    require(c.dim() == 1, "dimension", "harmonic mean oracle is one-dimensional");
    require(panels >= 4096, "quadrature", "at least 4096 panels are required");
    check_ellipticity(c, gamma);
    const double coarse = mean_reciprocal(c, gamma, panels);
    const double fine = mean_reciprocal(c, gamma, 2 * panels);
    HarmonicMean h;
    h.value = 1.0 / fine;
    h.richardson_delta = std::abs(coarse - fine) / fine;
    h.panels = 2 * panels;
    if (h.richardson_delta > 1e-12)
        throw NumericalFailure("quadrature", "harmonic mean quadrature did not settle under refinement");
    return h;
}

double harmonic_mean_1d(const CoefficientExpansion& c, double gamma)
{
    return harmonic_mean_1d_detail(c, gamma).value;
}

} // namespace sah
