#pragma once

#include <random>

#include "sah/expansion.hpp"

namespace bench {

inline sah::TrigPoly dense_scalar(int d, int K, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    sah::TrigPoly u(sah::Lattice(d, K), sah::Shape::scalar, sah::TrigPoly::zero_mean);
    for (const sah::Mode& k : sah::Lattice(d, K).modes())
        if (!k.is_zero()) u.set(k, sah::cplx(U(rng), U(rng)));
    return u;
}

// Full-support symmetric matrix coefficients with Hermitian pairs.
inline sah::CoefficientExpansion dense_expansion(int d, int K, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::map<int, sah::TrigPoly> orders;
    for (int i = 1; i <= 3; ++i) {
        sah::TrigPoly p(sah::Lattice(d, K), sah::Shape::matrix, sah::TrigPoly::zero_mean | sah::TrigPoly::real);
        for (const sah::Mode& k : sah::Lattice(d, K).modes()) {
            if (k.is_zero() || !((-k) < k)) continue;
            sah::Tensor v(d, d);
            for (int a = 0; a < d; ++a)
                for (int b = a; b < d; ++b) v(a, b) = v(b, a) = sah::cplx(U(rng), U(rng));
            v *= 0.1 / v.norm();
            p.set(k, v);
            p.set(-k, v.conjugate());
        }
        orders.emplace(i, std::move(p));
    }
    return sah::CoefficientExpansion(Eigen::MatrixXd::Identity(d, d), std::move(orders));
}

} // namespace bench
