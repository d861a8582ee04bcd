#pragma once

#include <functional>
#include <string>

#include <Eigen/Core>

#include "sah/trig_poly.hpp"

namespace sah {

/// Multiplier symbol, homogeneous of degree zero: its value at a frequency
/// xi depends only on xi/|xi|. The value at xi = 0 is a separate convention
/// (`zero_value`, zero unless stated), which is what the multiplier applies
/// to the mean of a periodic function.
class Symbol {
public:
    enum class Kind { scalar, matrix };
    using Evaluator = std::function<Tensor(const Eigen::VectorXd& xi)>;

    Symbol(Kind kind, int dim, Evaluator eval, std::string name);

    Kind kind() const { return kind_; }
    int dim() const { return dim_; }
    const std::string& name() const { return name_; }

    /// Value at a lattice mode; k = 0 returns zero_value().
    Tensor operator()(const Mode& k) const;
    /// Value at an arbitrary real frequency; xi = 0 returns zero_value().
    Tensor at(const Eigen::VectorXd& xi) const;

    const Tensor& zero_value() const { return zero_value_; }
    Symbol with_zero_value(const Tensor& z) const;

    /// s(xi) = c.
    static Symbol constant(int dim, cplx c);
    /// Psi(xi) = (xi (x) xi) / (A0 xi . xi).
    static Symbol psi(const Eigen::MatrixXd& A0);
    /// a . Psi(xi) b.
    static Symbol psi_contracted(const Eigen::MatrixXd& A0, const Eigen::VectorXd& a,
                                 const Eigen::VectorXd& b);
    /// (xi^T N xi) / (xi^T D xi) with D positive definite.
    static Symbol quadratic_ratio(const Eigen::MatrixXd& N, const Eigen::MatrixXd& D);

private:
    Kind kind_;
    int dim_;
    Evaluator eval_;
    std::string name_;
    Tensor zero_value_;
};

} // namespace sah
