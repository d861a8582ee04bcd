#pragma once

#include <map>

#include <Eigen/Core>

#include "sah/trig_poly.hpp"

namespace sah {

/// Coefficient field A_gamma(y) = A0 + gamma A1(y) + gamma^2 A2(y) + gamma^3 A3(y)
/// on the unit torus (the physical tensor is A_gamma(n x)).
///
/// Every stored order is a matrix-valued, zero-mean polynomial with
/// coeff(-k) = conj(coeff(k)); by default each coefficient must also be a
/// symmetric matrix. Missing orders are the zero polynomial.
class CoefficientExpansion {
public:
    static constexpr int max_order = 3;

    CoefficientExpansion(Eigen::MatrixXd A0, std::map<int, TrigPoly> orders,
                         bool symmetric_required = true);

    int dim() const { return static_cast<int>(A0_.rows()); }
    const Eigen::MatrixXd& A0() const { return A0_; }
    /// Smallest eigenvalue of A0 (the ellipticity constant alpha).
    double alpha() const { return alpha_; }

    bool has_order(int i) const { return orders_.count(i) != 0; }
    /// Order i polynomial, or the zero polynomial on the common lattice.
    TrigPoly order(int i) const;
    const std::map<int, TrigPoly>& orders() const { return orders_; }

    /// Largest lattice truncation over the stored orders (1 if none).
    int truncation() const;
    /// Largest |k|_inf carrying a non-zero coefficient.
    int support_radius() const;

    /// Real matrix A_gamma(y).
    Eigen::MatrixXd evaluate(double gamma, const Eigen::VectorXd& y) const;
    /// Coefficient of A_gamma at mode k (A0 at k = 0).
    Eigen::MatrixXcd gamma_coeff(double gamma, const Mode& k) const;

    /// (c A0, c A1, c A2, c A3).
    CoefficientExpansion scaled(double c) const;
    /// Same data on a larger box.
    CoefficientExpansion with_truncation(int K) const;

private:
    Eigen::MatrixXd A0_;
    std::map<int, TrigPoly> orders_;
    double alpha_ = 0.0;
    bool symmetric_required_ = true;
};

} // namespace sah
