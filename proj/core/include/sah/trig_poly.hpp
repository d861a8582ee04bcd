#pragma once

#include <map>
#include <string>

#include <Eigen/Core>

#include "sah/lattice.hpp"

namespace sah {

using Tensor = Eigen::MatrixXcd;

enum class Shape { scalar, vector, matrix };

const char* to_string(Shape s);
int shape_rows(Shape s, int dim);
int shape_cols(Shape s, int dim);

/// Truncated tensor-valued trigonometric polynomial on the unit torus,
///   u(y) = sum_k coeff(k) exp(2 pi i k.y),   |k|_inf <= K.
///
/// Coefficients are stored sparsely; absent modes are zero. The `real` and
/// `zero_mean` flags are claims that `validate()` checks, not structural
/// constraints, so complex data is first-class.
class TrigPoly {
public:
    enum Flag : unsigned { none = 0u, real = 1u, zero_mean = 2u };

    TrigPoly() = default;
    TrigPoly(Lattice lattice, Shape shape, unsigned flags = none);

    const Lattice& lattice() const { return lattice_; }
    int dim() const { return lattice_.dim; }
    int K() const { return lattice_.K; }
    Shape shape() const { return shape_; }
    int rows() const { return shape_rows(shape_, lattice_.dim); }
    int cols() const { return shape_cols(shape_, lattice_.dim); }

    unsigned flags() const { return flags_; }
    bool has_flag(Flag f) const { return (flags_ & f) != 0; }
    void set_flags(unsigned flags) { flags_ = flags; }

    /// Replaces the coefficient at k. Modes outside the box are rejected.
    void set(const Mode& k, const Tensor& value);
    void set(const Mode& k, cplx value);
    /// Adds to the coefficient at k.
    void add(const Mode& k, const Tensor& value);
    /// Coefficient at k, zero if absent (or outside the box).
    Tensor coeff(const Mode& k) const;
    cplx scalar_coeff(const Mode& k) const;
    bool has(const Mode& k) const { return coeffs_.count(k) != 0; }

    const std::map<Mode, Tensor>& coeffs() const { return coeffs_; }
    Tensor zero_tensor() const { return Tensor::Zero(rows(), cols()); }

    /// Largest |k|_inf among non-zero stored coefficients (0 for the zero polynomial).
    int support_radius() const;
    /// Drops exactly-zero coefficients.
    void prune();

    bool is_real(double tol = 1e-12) const;
    bool is_zero_mean(double tol = 0.0) const;
    /// Throws ContractViolation ("real" or "zero-mean") if a set flag does not hold.
    void validate(double tol = 1e-12) const;

    /// Adds conj(coeff(k)) at -k wherever -k is absent.
    TrigPoly hermitian_completion() const;
    /// Same coefficients on a larger (or equal) box.
    TrigPoly with_lattice(const Lattice& lattice) const;

    TrigPoly scaled(cplx c) const;
    TrigPoly operator+(const TrigPoly& other) const;

    /// Point value u(y) (y has length d).
    Tensor evaluate(const Eigen::VectorXd& y) const;

private:
    Lattice lattice_{};
    Shape shape_ = Shape::scalar;
    unsigned flags_ = none;
    std::map<Mode, Tensor> coeffs_;
};

} // namespace sah
