#include "sah/symbol.hpp"

#include <Eigen/Eigenvalues>

#include "sah/errors.hpp"

namespace sah {

Symbol::Symbol(Kind kind, int dim, Evaluator eval, std::string name)
    : kind_(kind), dim_(dim), eval_(std::move(eval)), name_(std::move(name))
{
    require(dim >= 1 && dim <= 3, "dimension", "symbol dimension must be 1, 2 or 3");
    const int n = kind == Kind::scalar ? 1 : dim;
    zero_value_ = Tensor::Zero(n, n);
}

Tensor Symbol::operator()(const Mode& k) const
{
    if (k.is_zero()) return zero_value_;
    return eval_(k.vec(dim_));
}

Tensor Symbol::at(const Eigen::VectorXd& xi) const
{
    require(xi.size() == dim_, "dimension-mismatch", "frequency has wrong dimension for symbol");
    if (xi.isZero(0.0)) return zero_value_;
    return eval_(xi);
}

Symbol Symbol::with_zero_value(const Tensor& z) const
{
    require(z.rows() == zero_value_.rows() && z.cols() == zero_value_.cols(), "shape-mismatch",
            "zero-mode value has the wrong shape");
    Symbol s = *this;
    s.zero_value_ = z;
    return s;
}

Symbol Symbol::constant(int dim, cplx c)
{
    return Symbol(
        Kind::scalar, dim,
        [c](const Eigen::VectorXd&) {
            Tensor t(1, 1);
            t(0, 0) = c;
            return t;
        },
        "constant");
}

namespace {

void check_spd(const Eigen::MatrixXd& A, const char* what)
{
    require(A.rows() == A.cols(), "shape-mismatch", std::string(what) + " must be square");
    require((A - A.transpose()).norm() <= 1e-12 * std::max(1.0, A.norm()), "symmetric",
            std::string(what) + " must be symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    require(es.eigenvalues().minCoeff() > 0.0, "positive-definite",
            std::string(what) + " must be positive definite");
}

} // namespace

Symbol Symbol::psi(const Eigen::MatrixXd& A0)
{
    check_spd(A0, "A0");
    return Symbol(
        Kind::matrix, static_cast<int>(A0.rows()),
        [A0](const Eigen::VectorXd& xi) {
            const double q = xi.dot(A0 * xi);
            return Tensor((xi * xi.transpose() / q).cast<cplx>());
        },
        "psi");
}

Symbol Symbol::psi_contracted(const Eigen::MatrixXd& A0, const Eigen::VectorXd& a,
                              const Eigen::VectorXd& b)
{
    check_spd(A0, "A0");
    require(a.size() == A0.rows() && b.size() == A0.rows(), "dimension-mismatch",
            "contraction vectors must have length d");
    return Symbol(
        Kind::scalar, static_cast<int>(A0.rows()),
        [A0, a, b](const Eigen::VectorXd& xi) {
            Tensor t(1, 1);
            t(0, 0) = a.dot(xi) * b.dot(xi) / xi.dot(A0 * xi);
            return t;
        },
        "psi0");
}

Symbol Symbol::quadratic_ratio(const Eigen::MatrixXd& N, const Eigen::MatrixXd& D)
{
    check_spd(D, "denominator matrix");
    require(N.rows() == D.rows() && N.cols() == D.cols(), "shape-mismatch",
            "numerator and denominator matrices differ in shape");
    return Symbol(
        Kind::scalar, static_cast<int>(D.rows()),
        [N, D](const Eigen::VectorXd& xi) {
            Tensor t(1, 1);
            t(0, 0) = xi.dot(N * xi) / xi.dot(D * xi);
            return t;
        },
        "ratio");
}

} // namespace sah
