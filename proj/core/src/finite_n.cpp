#include <cmath>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include "sah/errors.hpp"
#include "sah/oracle.hpp"
#include "sah/spectral_grid.hpp"

namespace sah {

namespace {

// Plain in-place FFT on an M^d box; kept separate from the torus machinery
// of fourier-core so the quadrature does not share code with what it checks.
void box_fft(std::vector<cplx>& data, int dim, int M, int sign)
{
    static std::mutex planner;
    int dims[3] = {M, M, M};
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner);
        plan = fftw_plan_dft(dim, dims, p, p, sign, FFTW_ESTIMATE);
    }
    if (!plan) throw NumericalFailure("fft", "FFTW failed to create a plan");
    fftw_execute(plan);
    std::lock_guard<std::mutex> lock(planner);
    fftw_destroy_plan(plan);
}

} // namespace

double BumpWindow::operator()(const Eigen::VectorXd& x) const
{
    const double r2 = (x - center).squaredNorm() / (radius * radius);
    if (r2 >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - r2));
}

QuadratureRun finite_n_limit(const LimitSpec& spec, const std::vector<BumpWindow>& windows,
                             const std::vector<int>& n_values, const QuadratureOptions& opts)
{
    const std::size_t p = spec.factors.size();
    require(p >= 2 && p <= static_cast<std::size_t>(max_product_order), "product-order",
            "finite-n quadrature supports 2 to 6 factors");
    require(windows.size() == p || windows.size() == 1, "window",
            "give one window per factor or a single shared window");
    require(!n_values.empty(), "n-values", "at least one oscillation scale is needed");
    const int d = spec.factors.front().sequence.dim();
    int K = 1;
    for (const auto& f : spec.factors) {
        require(f.sequence.shape() == Shape::scalar, "shape-mismatch",
                "finite-n quadrature handles scalar sequences");
        require(f.sequence.dim() == d && f.symbol.dim() == d, "dimension-mismatch",
                "all factors must share the dimension");
        require(f.symbol.kind() == Symbol::Kind::scalar, "shape-mismatch",
                "finite-n quadrature handles scalar symbols");
        K = std::max(K, f.sequence.support_radius());
    }
    int n_max = 0;
    for (int n : n_values) {
        require(n >= 1, "n-values", "oscillation scales must be positive");
        n_max = std::max(n_max, n);
    }

    const double L = opts.box_length;
    const int spu = opts.samples_per_unit > 0 ? opts.samples_per_unit : next_pow2(8 * n_max * K);
    require(spu >= 8 * n_max * K, "grid",
            "grid too coarse: need at least 8 * n * K samples per unit length");
    const double Mreal = L * spu;
    const int M = static_cast<int>(std::lround(Mreal));
    require(std::abs(Mreal - M) < 1e-9 && M >= 8, "grid", "box length times resolution must be an integer");
    std::int64_t points = 1;
    for (int i = 0; i < d; ++i) points *= M;
    require(points <= (std::int64_t{1} << 24), "grid", "quadrature grid exceeds 2^24 points");

    for (const auto& w : windows) {
        require(w.center.size() == d, "window", "window centre has wrong dimension");
        for (int i = 0; i < d; ++i)
            require(w.center[i] - w.radius > 0.0 && w.center[i] + w.radius < L, "window",
                    "window support must lie strictly inside the box");
    }

    const double h = L / M;
    const double cell = std::pow(h, d);
    const auto np = static_cast<std::size_t>(points);
    std::vector<Eigen::VectorXd> xs(np, Eigen::VectorXd(d));
    for (std::size_t pt = 0; pt < np; ++pt) {
        std::size_t rem = pt;
        for (int i = d - 1; i >= 0; --i) {
            xs[pt][i] = static_cast<double>(rem % static_cast<std::size_t>(M)) * h;
            rem /= static_cast<std::size_t>(M);
        }
    }
    auto window = [&](std::size_t i) -> const BumpWindow& { return windows.size() == 1 ? windows[0] : windows[i]; };

    std::vector<std::vector<double>> phi(p, std::vector<double>(np));
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t pt = 0; pt < np; ++pt) phi[i][pt] = window(i)(xs[pt]);

    std::vector<double> prod_phi(np, 1.0), abs_prod_phi(np, 1.0);
    for (std::size_t pt = 0; pt < np; ++pt)
        for (std::size_t i = 0; i < p; ++i) {
            prod_phi[pt] *= phi[i][pt];
            abs_prod_phi[pt] *= std::abs(phi[i][pt]);
        }

    QuadratureRun run;
    run.n_values = n_values;
    run.samples_per_unit = spu;
    run.grid_points_per_axis = M;
    run.phi_integral = tree_sum(prod_phi, 0.0) * cell;
    run.closed_form = p_product_limit(spec, run.phi_integral)(0, 0);

    double bound = tree_sum(abs_prod_phi, 0.0) * cell;
    for (const auto& f : spec.factors) {
        double wiener = 0.0;
        for (const auto& [k, v] : f.sequence.coeffs()) wiener += std::abs(v(0, 0));
        bound *= wiener;
    }
    run.error_scale = std::abs(run.closed_form) >= 1e-3 * bound ? std::abs(run.closed_form) : bound;

    // Symbol values on the frequency grid, zero bin set to 0.
    std::vector<std::vector<cplx>> symbol_bins(p, std::vector<cplx>(np));
    for (std::size_t pt = 0; pt < np; ++pt) {
        Eigen::VectorXd xi(d);
        std::size_t rem = pt;
        for (int i = d - 1; i >= 0; --i) {
            const int idx = static_cast<int>(rem % static_cast<std::size_t>(M));
            rem /= static_cast<std::size_t>(M);
            xi[i] = (idx < M / 2 ? idx : idx - M) / L;
        }
        for (std::size_t f = 0; f < p; ++f)
            symbol_bins[f][pt] = xi.isZero(0.0) ? cplx{} : spec.factors[f].symbol.at(xi)(0, 0);
    }

    for (int n : n_values) {
        std::vector<cplx> product(np, cplx(1.0, 0.0));
        for (std::size_t f = 0; f < p; ++f) {
            const TrigPoly& u = spec.factors[f].sequence;
            std::vector<cplx> g(np);
            for (std::size_t pt = 0; pt < np; ++pt) {
                if (phi[f][pt] == 0.0) continue;
                cplx s{};
                for (const auto& [k, v] : u.coeffs()) {
                    double phase = 0.0;
                    for (int i = 0; i < d; ++i) phase += k[i] * xs[pt][i];
                    s += v(0, 0) * std::polar(1.0, 2.0 * std::numbers::pi * n * phase);
                }
                g[pt] = phi[f][pt] * s;
            }
            box_fft(g, d, M, FFTW_FORWARD);
            for (std::size_t pt = 0; pt < np; ++pt) g[pt] *= symbol_bins[f][pt] / static_cast<double>(np);
            box_fft(g, d, M, FFTW_BACKWARD);
            for (std::size_t pt = 0; pt < np; ++pt) product[pt] *= g[pt];
        }
        const cplx I = tree_sum(product, cplx{}) * cell;
        run.estimates.push_back(I);
        run.abs_errors.push_back(std::abs(I - run.closed_form));
        run.rel_errors.push_back(run.abs_errors.back() / run.error_scale);
    }
    return run;
}

} // namespace sah
