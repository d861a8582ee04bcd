#include "sah/trig_poly.hpp"

#include <cmath>
#include <numbers>

#include "sah/errors.hpp"

namespace sah {

const char* to_string(Shape s)
{
    switch (s) {
    case Shape::scalar: return "scalar";
    case Shape::vector: return "vector";
    case Shape::matrix: return "matrix";
    }
    return "?";
}

int shape_rows(Shape s, int dim) { return s == Shape::scalar ? 1 : dim; }
int shape_cols(Shape s, int dim) { return s == Shape::matrix ? dim : 1; }

TrigPoly::TrigPoly(Lattice lattice, Shape shape, unsigned flags)
    : lattice_(lattice), shape_(shape), flags_(flags)
{
}

void TrigPoly::set(const Mode& k, const Tensor& value)
{
    require(lattice_.contains(k), "out-of-lattice",
            "mode " + k.str(dim()) + " outside |k|_inf <= " + std::to_string(K()));
    for (int i = dim(); i < 3; ++i)
        require(k[i] == 0, "out-of-lattice", "mode has components beyond the lattice dimension");
    require(value.rows() == rows() && value.cols() == cols(), "shape-mismatch",
            std::string("coefficient shape does not match ") + to_string(shape_));
    coeffs_[k] = value;
}

void TrigPoly::set(const Mode& k, cplx value)
{
    require(shape_ == Shape::scalar, "shape-mismatch", "scalar coefficient on a tensor polynomial");
    Tensor t(1, 1);
    t(0, 0) = value;
    set(k, t);
}

void TrigPoly::add(const Mode& k, const Tensor& value)
{
    auto it = coeffs_.find(k);
    if (it == coeffs_.end()) {
        set(k, value);
        return;
    }
    require(value.rows() == rows() && value.cols() == cols(), "shape-mismatch",
            "coefficient shape mismatch in add");
    it->second += value;
}

Tensor TrigPoly::coeff(const Mode& k) const
{
    auto it = coeffs_.find(k);
    return it == coeffs_.end() ? zero_tensor() : it->second;
}

cplx TrigPoly::scalar_coeff(const Mode& k) const
{
    require(shape_ == Shape::scalar, "shape-mismatch", "scalar_coeff on a tensor polynomial");
    auto it = coeffs_.find(k);
    return it == coeffs_.end() ? cplx{} : it->second(0, 0);
}

int TrigPoly::support_radius() const
{
    int r = 0;
    for (const auto& [k, v] : coeffs_)
        if (!v.isZero(0.0)) r = std::max(r, k.max_norm());
    return r;
}

void TrigPoly::prune()
{
    std::erase_if(coeffs_, [](const auto& kv) { return kv.second.isZero(0.0); });
}

bool TrigPoly::is_real(double tol) const
{
    for (const auto& [k, v] : coeffs_) {
        const Tensor w = coeff(-k).conjugate();
        const double scale = std::max(1.0, v.norm());
        if ((v - w).norm() > tol * scale) return false;
    }
    return true;
}

bool TrigPoly::is_zero_mean(double tol) const
{
    auto it = coeffs_.find(Mode{});
    return it == coeffs_.end() || it->second.norm() <= tol;
}

void TrigPoly::validate(double tol) const
{
    if (has_flag(zero_mean) && !is_zero_mean())
        contract_fail("zero-mean", "polynomial flagged zero-mean has a non-zero mode-0 coefficient");
    if (has_flag(real) && !is_real(tol))
        contract_fail("real", "polynomial flagged real violates coeff(-k) = conj(coeff(k))");
}

TrigPoly TrigPoly::hermitian_completion() const
{
    TrigPoly out = *this;
    for (const auto& [k, v] : coeffs_)
        if (!has(-k)) out.coeffs_[-k] = v.conjugate();
    return out;
}

TrigPoly TrigPoly::with_lattice(const Lattice& lattice) const
{
    require(lattice.dim == dim(), "dimension-mismatch", "with_lattice cannot change dimension");
    require(lattice.K >= support_radius(), "out-of-lattice",
            "with_lattice would truncate non-zero coefficients");
    TrigPoly out(lattice, shape_, flags_);
    for (const auto& [k, v] : coeffs_)
        if (lattice.contains(k)) out.coeffs_[k] = v;
    return out;
}

TrigPoly TrigPoly::scaled(cplx c) const
{
    TrigPoly out = *this;
    for (auto& [k, v] : out.coeffs_) v *= c;
    if (c.imag() != 0.0) out.flags_ &= ~static_cast<unsigned>(real);
    return out;
}

TrigPoly TrigPoly::operator+(const TrigPoly& other) const
{
    require(dim() == other.dim() && shape_ == other.shape_, "shape-mismatch",
            "sum of polynomials with different dimension or shape");
    TrigPoly out(Lattice(dim(), std::max(K(), other.K())), shape_, flags_ & other.flags_);
    out.coeffs_ = coeffs_;
    for (const auto& [k, v] : other.coeffs_) out.add(k, v);
    return out;
}

Tensor TrigPoly::evaluate(const Eigen::VectorXd& y) const
{
    Tensor acc = zero_tensor();
    for (const auto& [k, v] : coeffs_) {
        double phase = 0.0;
        for (int i = 0; i < dim(); ++i) phase += k[i] * y[i];
        acc += v * std::polar(1.0, 2.0 * std::numbers::pi * phase);
    }
    return acc;
}

} // namespace sah
