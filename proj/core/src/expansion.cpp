#include "sah/expansion.hpp"

#include <Eigen/Eigenvalues>

#include "sah/errors.hpp"

namespace sah {

CoefficientExpansion::CoefficientExpansion(Eigen::MatrixXd A0, std::map<int, TrigPoly> orders,
                                           bool symmetric_required)
    : A0_(std::move(A0)), orders_(std::move(orders)), symmetric_required_(symmetric_required)
{
    const auto d = A0_.rows();
    require(d >= 1 && d <= 3 && A0_.cols() == d, "A0-shape", "A0 must be a square matrix of size 1, 2 or 3");
    require((A0_ - A0_.transpose()).norm() <= 1e-12 * std::max(1.0, A0_.norm()), "A0-symmetric",
            "A0 must be symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A0_);
    alpha_ = es.eigenvalues().minCoeff();
    require(alpha_ > 0.0, "A0-ellipticity", "A0 must be positive definite");

    for (const auto& [i, p] : orders_) {
        const std::string tag = "order " + std::to_string(i) + ": ";
        require(i >= 1 && i <= max_order, "order-range", tag + "orders must be 1, 2 or 3");
        require(p.dim() == d, "dimension-mismatch", tag + "dimension differs from A0");
        require(p.shape() == Shape::matrix, "shape-mismatch", tag + "coefficients must be d x d matrices");
        require(p.is_zero_mean(), "zero-mean", tag + "mode-0 coefficient must vanish");
        require(p.is_real(1e-12), "hermitian", tag + "coeff(-k) must equal conj(coeff(k))");
        if (symmetric_required_)
            for (const auto& [k, v] : p.coeffs())
                require((v - v.transpose()).norm() <= 1e-12 * std::max(1.0, v.norm()),
                        "symmetric-coefficients", tag + "coefficient at " + k.str(d) + " is not symmetric");
    }
    for (auto& [i, p] : orders_) p.set_flags(TrigPoly::real | TrigPoly::zero_mean);
}

TrigPoly CoefficientExpansion::order(int i) const
{
    auto it = orders_.find(i);
    if (it != orders_.end()) return it->second;
    return TrigPoly(Lattice(dim(), truncation()), Shape::matrix, TrigPoly::real | TrigPoly::zero_mean);
}

int CoefficientExpansion::truncation() const
{
    int K = 1;
    for (const auto& [i, p] : orders_) K = std::max(K, p.K());
    return K;
}

int CoefficientExpansion::support_radius() const
{
    int r = 0;
    for (const auto& [i, p] : orders_) r = std::max(r, p.support_radius());
    return r;
}

Eigen::MatrixXd CoefficientExpansion::evaluate(double gamma, const Eigen::VectorXd& y) const
{
    Eigen::MatrixXd A = A0_;
    double g = 1.0;
    for (int i = 1; i <= max_order; ++i) {
        g *= gamma;
        auto it = orders_.find(i);
        if (it != orders_.end()) A += g * it->second.evaluate(y).real();
    }
    return A;
}

Eigen::MatrixXcd CoefficientExpansion::gamma_coeff(double gamma, const Mode& k) const
{
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(dim(), dim());
    if (k.is_zero()) A = A0_.cast<cplx>();
    double g = 1.0;
    for (int i = 1; i <= max_order; ++i) {
        g *= gamma;
        auto it = orders_.find(i);
        if (it != orders_.end() && it->second.has(k)) A += g * it->second.coeff(k);
    }
    return A;
}

CoefficientExpansion CoefficientExpansion::scaled(double c) const
{
    std::map<int, TrigPoly> o;
    for (const auto& [i, p] : orders_) o.emplace(i, p.scaled(c));
    return CoefficientExpansion(c * A0_, std::move(o), symmetric_required_);
}

CoefficientExpansion CoefficientExpansion::with_truncation(int K) const
{
    std::map<int, TrigPoly> o;
    for (const auto& [i, p] : orders_) o.emplace(i, p.with_lattice(Lattice(dim(), K)));
    return CoefficientExpansion(A0_, std::move(o), symmetric_required_);
}

} // namespace sah
