#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sah/expansion.hpp"
#include "sah/hmeasure.hpp"

namespace sah {

// ---------------------------------------------------------------------------
// Periodic cell problem
// ---------------------------------------------------------------------------

struct CellSolverOptions {
    /// Non-converged when the relative residual exceeds this.
    double tolerance = 1e-8;
    /// Dense LU up to this many unknowns, preconditioned Krylov above.
    int dense_limit = 2000;
    /// A_gamma(y) must keep min eigenvalue >= fraction * alpha(A0) on the check grid.
    double ellipticity_fraction = 0.5;
    /// Relative tolerance of the Krylov solver.
    double krylov_tolerance = 1e-14;
};

/// Galerkin solution of -div(A_gamma (grad chi_j + e_j)) = 0 on the modes
/// 0 < |k|_inf <= K_solver.
struct CellSolution {
    double gamma = 0.0;
    int K_solver = 0;
    std::vector<TrigPoly> correctors;  // chi_j, zero-mean scalar polynomials
    Eigen::MatrixXd A_eff;             // column j = mean(A_gamma (e_j + grad chi_j))
    double A_eff_max_imag = 0.0;
    /// Relative residual of the PDE, including the part that falls outside
    /// the Galerkin box; decreases as K_solver grows.
    double residual = 0.0;
    bool converged = true;
    std::string method;                // "dense-lu", "cg", "bicgstab"
    int iterations = 0;
};

/// Throws EllipticityError if min_y lambda_min(A_gamma(y)) < fraction * alpha on a dense grid.
void check_ellipticity(const CoefficientExpansion& c, double gamma, double fraction = 0.5);

CellSolution cell_solve(const CoefficientExpansion& c, double gamma, int K_solver,
                        const CellSolverOptions& opts = {});

/// Default solver truncation: four times the data support.
int default_solver_truncation(const CoefficientExpansion& c);

// ---------------------------------------------------------------------------
// One-dimensional harmonic mean
// ---------------------------------------------------------------------------

struct HarmonicMean {
    double value = 0.0;
    /// |I_N - I_2N| / I_2N for the trapezoid estimates of the mean of 1/A_gamma.
    double richardson_delta = 0.0;
    int panels = 0;
};

/// (integral_0^1 dy / A_gamma(y))^{-1}, d = 1 only. Periodic trapezoid rule
/// with `panels` and 2*`panels` nodes; the finer estimate is returned.
HarmonicMean harmonic_mean_1d_detail(const CoefficientExpansion& c, double gamma, int panels = 4096);
double harmonic_mean_1d(const CoefficientExpansion& c, double gamma);

// ---------------------------------------------------------------------------
// Polynomial fit in gamma
// ---------------------------------------------------------------------------

enum class OracleMethod { cell, harmonic1d };

const char* to_string(OracleMethod m);

struct GammaFitOptions {
    OracleMethod method = OracleMethod::cell;
    /// 0 selects default_solver_truncation and doubles it while any cell
    /// solve misses the residual tolerance (up to max_unknowns).
    int K_solver = 0;
    std::int64_t max_unknowns = 20000;
    /// The top coefficient is a truncation sentinel, not a result.
    int degree = 7;
    double max_condition = 1e8;
    CellSolverOptions cell{};
};

struct GammaFit {
    std::vector<double> gammas;
    std::vector<Eigen::MatrixXd> tensors;
    /// C_0 .. C_degree; C_i approximates the order-i correction.
    std::vector<Eigen::MatrixXd> coefficients;
    /// 2-norm condition number of the scaled Vandermonde matrix.
    double condition = 0.0;
    /// Largest least-squares residual over all entries.
    double fit_residual = 0.0;
    /// ||C_degree||_F; the top term only absorbs truncation, its size estimates fit error.
    double sentinel = 0.0;
    double max_cell_residual = 0.0;
    bool all_converged = true;
    /// Cell truncation actually used, and how many doublings it took.
    int K_solver = 0;
    int refinements = 0;
};

/// Symmetric grid 0, +-0.015, +-0.03, +-0.045, +-0.06.
std::vector<double> default_gamma_grid();

GammaFit gamma_fit(const CoefficientExpansion& c, const std::vector<double>& gammas,
                   const GammaFitOptions& opts = {});

// ---------------------------------------------------------------------------
// Finite-n oscillatory quadrature
// ---------------------------------------------------------------------------

/// Smooth radial bump exp(1 - 1/(1 - |x-c|^2/r^2)) supported in |x - c| < r.
struct BumpWindow {
    Eigen::VectorXd center;
    double radius = 0.25;

    double operator()(const Eigen::VectorXd& x) const;
};

struct QuadratureOptions {
    /// Periodic box [0, L]^d; every window must sit strictly inside.
    double box_length = 1.0;
    /// Samples per unit length. Must be >= 8 * max(n) * K.
    int samples_per_unit = 0;  // 0 selects 8 * max(n) * K rounded up to a power of two
};

struct QuadratureRun {
    std::vector<int> n_values;
    std::vector<cplx> estimates;
    cplx closed_form{};
    cplx phi_integral{};
    std::vector<double> abs_errors;
    std::vector<double> rel_errors;
    /// Denominator used for rel_errors (|closed_form|, or a magnitude bound when that vanishes).
    double error_scale = 0.0;
    int samples_per_unit = 0;
    int grid_points_per_axis = 0;
};

/// Integral over the box of prod_i A_{psi_i}(phi_i u^i(n .)) for each n, by
/// sampling, discrete transforms and the trapezoid rule, alongside the
/// closed-form periodic limit.
QuadratureRun finite_n_limit(const LimitSpec& spec, const std::vector<BumpWindow>& windows,
                             const std::vector<int>& n_values, const QuadratureOptions& opts = {});

} // namespace sah
