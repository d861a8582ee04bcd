#include <algorithm>
#include <cmath>
#include <set>

#include <Eigen/Dense>

#include "sah/errors.hpp"
#include "sah/oracle.hpp"

namespace sah {

const char* to_string(OracleMethod m) { return m == OracleMethod::cell ? "cell" : "harmonic1d"; }

std::vector<double> default_gamma_grid()
{
    return {-0.06, -0.045, -0.03, -0.015, 0.0, 0.015, 0.03, 0.045, 0.06};
}

GammaFit gamma_fit(const CoefficientExpansion& c, const std::vector<double>& gammas,
                   const GammaFitOptions& opts)
{
    require(opts.degree >= 1, "fit-degree", "fit degree must be positive");
    const std::set<double> distinct(gammas.begin(), gammas.end());
    require(static_cast<int>(distinct.size()) >= opts.degree + 2, "gamma-grid",
            "need at least degree+2 distinct gamma samples");
    require(opts.method == OracleMethod::cell || c.dim() == 1, "dimension",
            "harmonic-mean oracle needs a one-dimensional expansion");

    const int d = c.dim();
    int refinements = 0;
    const bool refine = opts.K_solver <= 0;
    int K_solver = refine ? default_solver_truncation(c) : opts.K_solver;
    auto unknowns = [d](int K) {
        std::int64_t n = 1;
        for (int i = 0; i < d; ++i) n *= 2 * K + 1;
        return n - 1;
    };

    GammaFit fit;
    for (;;) {
        fit = GammaFit{};
        fit.gammas = gammas;
        fit.K_solver = K_solver;
        for (double g : gammas) {
            if (opts.method == OracleMethod::harmonic1d) {
                Eigen::MatrixXd A(1, 1);
                A(0, 0) = harmonic_mean_1d(c, g);
                fit.tensors.push_back(A);
            } else {
                const CellSolution s = cell_solve(c, g, K_solver, opts.cell);
                fit.tensors.push_back(s.A_eff);
                fit.max_cell_residual = std::max(fit.max_cell_residual, s.residual);
                fit.all_converged = fit.all_converged && s.converged;
            }
        }
        if (fit.all_converged || !refine || opts.method != OracleMethod::cell ||
            unknowns(2 * K_solver) > opts.max_unknowns)
            break;
        K_solver *= 2;
        ++refinements;
    }
    fit.refinements = refinements;
    if (opts.method != OracleMethod::cell) fit.K_solver = 0;

    // Fit in t = gamma / scale so the Vandermonde columns are O(1).
    double scale = 0.0;
    for (double g : gammas) scale = std::max(scale, std::abs(g));
    const auto rows = static_cast<Eigen::Index>(gammas.size());
    const Eigen::Index cols = opts.degree + 1;
    Eigen::MatrixXd V(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const double t = gammas[static_cast<std::size_t>(r)] / scale;
        double pw = 1.0;
        for (Eigen::Index j = 0; j < cols; ++j, pw *= t) V(r, j) = pw;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(V, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    fit.condition = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1)
                                            : std::numeric_limits<double>::infinity();
    if (!(fit.condition <= opts.max_condition))
        throw NumericalFailure("ill-conditioned-fit",
                               "Vandermonde condition number " + std::to_string(fit.condition) +
                                   " exceeds " + std::to_string(opts.max_condition));

    Eigen::MatrixXd Y(rows, d * d);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) Y(r, i * d + j) = fit.tensors[static_cast<std::size_t>(r)](i, j);
    const Eigen::MatrixXd B = svd.solve(Y);
    fit.fit_residual = (V * B - Y).cwiseAbs().maxCoeff();

    double sp = 1.0;
    for (Eigen::Index p = 0; p < cols; ++p, sp *= scale) {
        Eigen::MatrixXd C(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) C(i, j) = B(p, i * d + j) / sp;
        fit.coefficients.push_back(C);
    }
    fit.sentinel = fit.coefficients.back().norm();
    return fit;
}

} // namespace sah
