#include "sah/oracle.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <set>

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>

#include "sah/errors.hpp"
#include "sah/spectral_grid.hpp"

namespace sah {

namespace {

struct SupportEntry {
    Mode k;
    Eigen::MatrixXcd A;  // coefficient of A_gamma at k
};

std::vector<SupportEntry> gamma_support(const CoefficientExpansion& c, double gamma)
{
    std::set<Mode> modes{Mode{}};
    for (const auto& [i, p] : c.orders())
        for (const auto& [k, v] : p.coeffs())
            if (!v.isZero(0.0)) modes.insert(k);
    std::vector<SupportEntry> out;
    for (const Mode& k : modes) {
        Eigen::MatrixXcd A = c.gamma_coeff(gamma, k);
        if (!k.is_zero() && A.isZero(0.0)) continue;
        out.push_back({k, std::move(A)});
    }
    return out;
}

class BoxIndex {
public:
    BoxIndex(int dim, int R) : dim_(dim), R_(R)
    {
        const Lattice lat(dim, R);
        slot_.assign(static_cast<std::size_t>(lat.size()), -1);
        for (const Mode& m : lat.modes()) {
            if (m.is_zero()) continue;
            slot_[flat(m)] = static_cast<int>(modes_.size());
            modes_.push_back(m);
        }
    }
    int find(const Mode& m) const { return m.max_norm() > R_ ? -1 : slot_[flat(m)]; }
    const std::vector<Mode>& modes() const { return modes_; }

private:
    std::size_t flat(const Mode& m) const
    {
        std::int64_t idx = 0;
        for (int i = 0; i < dim_; ++i) idx = idx * (2 * R_ + 1) + (m[i] + R_);
        return static_cast<std::size_t>(idx);
    }
    int dim_;
    int R_;
    std::vector<int> slot_;
    std::vector<Mode> modes_;
};

cplx bilinear(const Mode& a, const Eigen::MatrixXcd& A, const Mode& b, int d)
{
    cplx s{};
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) s += static_cast<double>(a[i]) * A(i, j) * static_cast<double>(b[j]);
    return s;
}

} // namespace

int default_solver_truncation(const CoefficientExpansion& c)
{
    return 4 * std::max(1, c.support_radius());
}

void check_ellipticity(const CoefficientExpansion& c, double gamma, double fraction)
{
    const int d = c.dim();
    const int R = std::max(1, c.support_radius());
    const SpectralGrid grid(d, next_pow2(std::max(16, 4 * (2 * R + 1))));
    std::vector<GridField> fields;
    std::vector<double> powers;
    for (const auto& [i, p] : c.orders()) {
        fields.push_back(grid.to_values(p));
        powers.push_back(std::pow(gamma, i));
    }
    const double required = fraction * c.alpha();
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t pt = 0; pt < static_cast<std::size_t>(grid.points()); ++pt) {
        Eigen::MatrixXd A = c.A0();
        for (std::size_t f = 0; f < fields.size(); ++f) A += powers[f] * fields[f].at(pt).real();
        const Eigen::MatrixXd S = 0.5 * (A + A.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
        worst = std::min(worst, es.eigenvalues().minCoeff());
    }
    if (worst < required) throw EllipticityError(gamma, worst, required);
}

CellSolution cell_solve(const CoefficientExpansion& c, double gamma, int K_solver,
                        const CellSolverOptions& opts)
{
    require(K_solver >= 1, "truncation", "solver truncation must be at least 1");
    check_ellipticity(c, gamma, opts.ellipticity_fraction);

    const int d = c.dim();
    const auto support = gamma_support(c, gamma);
    const BoxIndex box(d, K_solver);
    const auto n = static_cast<Eigen::Index>(box.modes().size());

    // Unknowns c_l = 2 pi i chi^(l). Row m: sum_l (m . A(m-l) l) c_l = -m . A(m) e_j.
    std::vector<Eigen::Triplet<cplx>> triplets;
    bool hermitian = true;
    for (const auto& s : support)
        if (!(s.A - s.A.transpose()).isZero(1e-14 * std::max(1.0, s.A.norm()))) hermitian = false;
    for (Eigen::Index r = 0; r < n; ++r) {
        const Mode& m = box.modes()[static_cast<std::size_t>(r)];
        for (const auto& s : support) {
            const int col = box.find(m - s.k);
            if (col < 0) continue;
            triplets.emplace_back(r, col, bilinear(m, s.A, m - s.k, d));
        }
    }
    Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(n, d);
    for (const auto& s : support) {
        const int r = box.find(s.k);
        if (r < 0) continue;
        for (int j = 0; j < d; ++j) {
            cplx v{};
            for (int i = 0; i < d; ++i) v += static_cast<double>(s.k[i]) * s.A(i, j);
            rhs(r, j) = -v;
        }
    }

    CellSolution sol;
    sol.gamma = gamma;
    sol.K_solver = K_solver;
    Eigen::MatrixXcd coef(n, d);
    bool solver_ok = true;
    if (n <= opts.dense_limit) {
        Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(n, n);
        for (const auto& t : triplets) S(t.row(), t.col()) += t.value();
        coef = Eigen::PartialPivLU<Eigen::MatrixXcd>(S).solve(rhs);
        sol.method = "dense-lu";
    } else {
        Eigen::SparseMatrix<cplx> S(n, n);
        S.setFromTriplets(triplets.begin(), triplets.end());
        if (hermitian) {
            Eigen::ConjugateGradient<Eigen::SparseMatrix<cplx>, Eigen::Lower | Eigen::Upper> cg;
            cg.setTolerance(opts.krylov_tolerance);
            cg.setMaxIterations(10000);
            cg.compute(S);
            for (int j = 0; j < d; ++j) {
                coef.col(j) = cg.solve(rhs.col(j));
                solver_ok = solver_ok && cg.info() == Eigen::Success;
                sol.iterations = std::max(sol.iterations, static_cast<int>(cg.iterations()));
            }
            sol.method = "cg";
        } else {
            Eigen::BiCGSTAB<Eigen::SparseMatrix<cplx>> bi;
            bi.setTolerance(opts.krylov_tolerance);
            bi.setMaxIterations(10000);
            bi.compute(S);
            for (int j = 0; j < d; ++j) {
                coef.col(j) = bi.solve(rhs.col(j));
                solver_ok = solver_ok && bi.info() == Eigen::Success;
                sol.iterations = std::max(sol.iterations, static_cast<int>(bi.iterations()));
            }
            sol.method = "bicgstab";
        }
    }

    // Flux coefficients F_j(m) = sum_l A(m-l) l c_l + A(m) e_j on the enlarged box.
    std::map<Mode, Eigen::MatrixXcd> flux;  // column j per direction
    for (Eigen::Index col = 0; col < n; ++col) {
        const Mode& l = box.modes()[static_cast<std::size_t>(col)];
        Eigen::VectorXcd lv = l.vec(d).cast<cplx>();
        for (const auto& s : support) {
            auto& F = flux.try_emplace(l + s.k, Eigen::MatrixXcd::Zero(d, d)).first->second;
            const Eigen::VectorXcd Al = s.A * lv;
            for (int j = 0; j < d; ++j) F.col(j) += Al * coef(col, j);
        }
    }
    for (const auto& s : support) {
        auto& F = flux.try_emplace(s.k, Eigen::MatrixXcd::Zero(d, d)).first->second;
        F += s.A;
    }

    const Eigen::MatrixXcd Aeff = flux.at(Mode{});
    sol.A_eff = Aeff.real();
    sol.A_eff_max_imag = Aeff.imag().cwiseAbs().maxCoeff();

    double res2 = 0.0;
    for (const auto& [m, F] : flux) {
        if (m.is_zero()) continue;
        const Eigen::RowVectorXcd mv = m.vec(d).transpose().cast<cplx>();
        res2 += (mv * F).squaredNorm();
    }
    const double bnorm = rhs.norm();
    sol.residual = std::sqrt(res2) / (bnorm > 0.0 ? bnorm : 1.0);
    sol.converged = solver_ok && sol.residual <= opts.tolerance;

    for (int j = 0; j < d; ++j) {
        TrigPoly chi(Lattice(d, K_solver), Shape::scalar, TrigPoly::zero_mean);
        const cplx scale = 1.0 / cplx(0.0, 2.0 * std::numbers::pi);
        for (Eigen::Index col = 0; col < n; ++col)
            if (coef(col, j) != cplx{}) chi.set(box.modes()[static_cast<std::size_t>(col)], coef(col, j) * scale);
        sol.correctors.push_back(std::move(chi));
    }
    return sol;
}

} // namespace sah
