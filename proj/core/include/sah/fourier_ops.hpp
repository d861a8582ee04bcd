#pragma once

#include <span>
#include <vector>

#include "sah/symbol.hpp"
#include "sah/trig_poly.hpp"

namespace sah {

/// How the tensor coefficients of several factors are combined.
///  - chain:    ordinary matrix product t1 * t2 * ... * tp (scalars are 1x1);
///              inner dimensions must agree.
///  - hadamard: entrywise product of equally-shaped tensors.
enum class Contraction { chain, hadamard };

enum class Path { fft, direct };

const char* to_string(Path p);

/// Combines one coefficient per factor according to `c`.
Tensor contract(std::span<const Tensor> factors, Contraction c);

/// Shape of contract() applied to factors with the given polynomial shapes.
/// Throws ContractViolation("contraction") when incompatible.
std::pair<int, int> contracted_shape(std::span<const TrigPoly> factors, Contraction c);

/// (A_s u)^(k) = s(k) u^(k) for k != 0 and s.zero_value() u^(0) at k = 0.
/// A matrix symbol left-multiplies vector or matrix coefficients.
TrigPoly multiplier_apply(const Symbol& s, const TrigPoly& u);

/// Exact product of two polynomials: coeff(m) = sum_{j+k=m} contract(u^(j), v^(k)).
/// The result lives on the box K_u + K_v.
TrigPoly poly_product(const TrigPoly& u, const TrigPoly& v, Contraction c = Contraction::chain,
                      Path path = Path::fft);

/// Zero Fourier mode of the p-fold product,
///   sum_{k1+...+kp=0} contract(coeff1(k1), ..., coeffp(kp)).
/// The FFT path zero-pads every axis to next_pow2(p*2K+1).
Tensor constrained_sum(std::span<const TrigPoly> factors, Contraction c = Contraction::chain,
                       Path path = Path::fft);

inline Tensor constrained_sum(const std::vector<TrigPoly>& factors,
                              Contraction c = Contraction::chain, Path path = Path::fft)
{
    return constrained_sum(std::span<const TrigPoly>(factors), c, path);
}

/// Grid side used by the FFT paths for a p-fold product of factors with truncation K.
int padded_grid_size(int p, int K);

} // namespace sah
