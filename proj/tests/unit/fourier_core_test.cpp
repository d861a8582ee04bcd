#include <cmath>
#include <numbers>

#include "doctest.h"
#include "generators.hpp"
#include "sah/fourier_ops.hpp"
#include "sah/spectral_grid.hpp"
#include "test_util.hpp"

using namespace sah;
using namespace sah::testing;

namespace {

TrigPoly two_cos_1d()
{
    TrigPoly u(Lattice(1, 1), Shape::scalar, TrigPoly::real | TrigPoly::zero_mean);
    u.set(Mode(1), 1.0);
    u.set(Mode(-1), 1.0);
    return u;
}

double max_abs(const Tensor& t) { return t.size() ? t.cwiseAbs().maxCoeff() : 0.0; }

double poly_distance(const TrigPoly& a, const TrigPoly& b)
{
    double worst = 0.0;
    for (const auto& [k, v] : a.coeffs()) worst = std::max(worst, max_abs(v - b.coeff(k)));
    for (const auto& [k, v] : b.coeffs()) worst = std::max(worst, max_abs(v - a.coeff(k)));
    return worst;
}

} // namespace

TEST_CASE("lattice invariants and lexicographic enumeration")
{
    CHECK(violation_name([] { Lattice(0, 1); }) == "dimension");
    CHECK(violation_name([] { Lattice(4, 1); }) == "dimension");
    CHECK(violation_name([] { Lattice(2, 0); }) == "truncation");

    const Lattice lat(2, 1);
    CHECK(lat.size() == 9);
    const auto modes = lat.modes();
    REQUIRE(modes.size() == 9);
    CHECK(modes.front() == Mode(-1, -1));
    CHECK(modes[1] == Mode(-1, 0));
    CHECK(modes[4] == Mode(0, 0));
    CHECK(modes.back() == Mode(1, 1));
    CHECK(std::is_sorted(modes.begin(), modes.end()));

    CHECK(Mode(4, -6).reduced() == Mode(2, -3));
    CHECK(Mode(0, 3).reduced() == Mode(0, 1));
    CHECK(Mode(-5).reduced() == Mode(-1));
}

TEST_CASE("tree_sum is a fixed pairwise reduction")
{
    Rng rng(7);
    std::vector<double> xs(1000);
    for (auto& x : xs) x = uniform(rng, -1, 1) * std::pow(10.0, uniform_int(rng, -8, 8));
    const double a = tree_sum(xs, 0.0);
    const double b = tree_sum(xs, 0.0);
    CHECK(a == b);
    double naive = 0.0;
    for (double x : xs) naive += x;
    CHECK(std::abs(a - naive) <= 1e-6 * std::abs(naive) + 1e-6);
    CHECK(tree_sum(std::vector<double>{}, 5.0) == 5.0);
    CHECK(tree_sum(std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11}, 0) == 66);
}

TEST_CASE("trig poly storage and flags")
{
    TrigPoly u(Lattice(2, 1), Shape::scalar, TrigPoly::real | TrigPoly::zero_mean);
    CHECK(violation_name([&] { u.set(Mode(2, 0), 1.0); }) == "out-of-lattice");
    CHECK(violation_name([&] { u.set(Mode(1, 0), Tensor::Ones(2, 2)); }) == "shape-mismatch");
    u.set(Mode(1, 0), cplx(1.0, 2.0));
    CHECK(u.coeff(Mode(0, 1)).isZero());
    CHECK(u.scalar_coeff(Mode(1, 0)) == cplx(1.0, 2.0));
    CHECK(violation_name([&] { u.validate(); }) == "real");

    const TrigPoly full = u.hermitian_completion();
    CHECK(full.scalar_coeff(Mode(-1, 0)) == cplx(1.0, -2.0));
    CHECK(full.is_real(0.0));
    CHECK_NOTHROW(full.validate());

    TrigPoly w = full;
    w.set(Mode(0, 0), 0.5);
    CHECK(violation_name([&] { w.validate(); }) == "zero-mean");

    CHECK(full.support_radius() == 1);
    CHECK(TrigPoly(Lattice(3, 2), Shape::matrix).support_radius() == 0);

    // evaluate matches the explicit series
    const Eigen::Vector2d y(0.3, 0.7);
    const cplx want = cplx(1, 2) * std::exp(cplx(0, 2 * std::numbers::pi * 0.3)) +
                      cplx(1, -2) * std::exp(cplx(0, -2 * std::numbers::pi * 0.3));
    CHECK(std::abs(full.evaluate(y)(0, 0) - want) < 1e-14);
}

TEST_CASE("Psi symbol: definition, evenness, symmetry, homogeneity")
{
    Eigen::Matrix2d A0;
    A0 << 2.0, 0.3, 0.3, 1.0;
    const Symbol psi = Symbol::psi(A0);
    Rng rng(11);
    for (int n = 0; n < 100; ++n) {
        const Mode k(uniform_int(rng, -5, 5), uniform_int(rng, -5, 5));
        if (k.is_zero()) continue;
        const Eigen::Vector2d kv = k.vec(2);
        const Eigen::Matrix2d want = kv * kv.transpose() / kv.dot(A0 * kv);
        const Tensor got = psi(k);
        CHECK(max_abs(got - want.cast<cplx>()) < 1e-15);
        CHECK(max_abs(psi(-k) - got) == 0.0);
        CHECK(max_abs(got - got.transpose()) == 0.0);
        const Mode k3 = k + k + k;
        CHECK(max_abs(psi(k3) - got) < 1e-15);
    }
    CHECK(psi(Mode(0, 0)).isZero());
    CHECK(Symbol::psi(Eigen::MatrixXd::Identity(1, 1))(Mode(3))(0, 0) == cplx(1.0));

    Eigen::Matrix2d bad;
    bad << 1.0, 0.0, 0.0, -1.0;
    CHECK(violation_name([&] { Symbol::psi(bad); }) == "positive-definite");
}

TEST_CASE("multiplier_apply: worked examples")
{
    Rng rng(3);
    const TrigPoly u = random_scalar(rng, 2, 2);
    const TrigPoly same = multiplier_apply(Symbol::constant(2, 1.0), u);
    CHECK(poly_distance(same, u) == 0.0);

    // d = 1, A0 = 1: Psi = 1 off zero
    const TrigPoly c = two_cos_1d();
    const TrigPoly pc = multiplier_apply(Symbol::psi(Eigen::MatrixXd::Identity(1, 1)), c.scaled(1.0));
    CHECK(poly_distance(pc, c) == 0.0);

    // d = 2, A0 = I, k = e1: (a, b) -> (a, 0)
    TrigPoly v(Lattice(2, 1), Shape::vector);
    Tensor ab(2, 1);
    ab << cplx(0.7, 0.1), cplx(-1.3, 0.4);
    v.set(Mode(1, 0), ab);
    const TrigPoly pv = multiplier_apply(Symbol::psi(Eigen::MatrixXd::Identity(2, 2)), v);
    CHECK(pv.coeff(Mode(1, 0))(0, 0) == ab(0, 0));
    CHECK(pv.coeff(Mode(1, 0))(1, 0) == cplx(0.0));

    // zero mode uses the symbol's zero value
    TrigPoly m(Lattice(1, 1), Shape::scalar);
    m.set(Mode(0), 3.0);
    CHECK(multiplier_apply(Symbol::constant(1, 2.0), m).scalar_coeff(Mode(0)) == cplx(0.0));
    const Symbol z = Symbol::constant(1, 2.0).with_zero_value(Tensor::Constant(1, 1, 0.5));
    CHECK(multiplier_apply(z, m).scalar_coeff(Mode(0)) == cplx(1.5));

    CHECK(violation_name([&] { multiplier_apply(Symbol::psi(Eigen::MatrixXd::Identity(2, 2)), u); }) ==
          "shape-mismatch");
}

TEST_CASE("multiplier homogeneity: symbol at 2k equals symbol at k")
{
    Rng rng(5);
    Eigen::Matrix3d N = Eigen::Matrix3d::Random();
    const Symbol s = Symbol::quadratic_ratio(N, random_spd(rng, 3));
    for (int n = 0; n < 100; ++n) {
        Mode k(uniform_int(rng, -2, 2), uniform_int(rng, -2, 2), uniform_int(rng, -2, 2));
        if (k.is_zero()) k = Mode(1, 0, 0);
        const cplx a = random_cplx(rng, 1.0);
        TrigPoly u(Lattice(3, 4), Shape::scalar), u2(Lattice(3, 4), Shape::scalar);
        u.set(k, a);
        u2.set(k + k, a);
        const cplx r1 = multiplier_apply(s, u).scalar_coeff(k);
        const cplx r2 = multiplier_apply(s, u2).scalar_coeff(k + k);
        CHECK(std::abs(r1 - r2) <= 1e-14 * std::abs(r1));
    }
}

TEST_CASE("poly_product: worked examples")
{
    const TrigPoly u = two_cos_1d();
    const TrigPoly sq = poly_product(u, u);
    CHECK(sq.K() == 2);
    CHECK(std::abs(sq.scalar_coeff(Mode(-2)) - 1.0) < 1e-15);
    CHECK(std::abs(sq.scalar_coeff(Mode(0)) - 2.0) < 1e-15);
    CHECK(std::abs(sq.scalar_coeff(Mode(2)) - 1.0) < 1e-15);
    CHECK(std::abs(sq.scalar_coeff(Mode(1))) < 1e-15);

    const TrigPoly zero(Lattice(1, 1), Shape::scalar);
    for (Path p : {Path::fft, Path::direct}) {
        const TrigPoly z = poly_product(u, zero, Contraction::chain, p);
        for (const auto& [k, v] : z.coeffs()) CHECK(max_abs(v) == 0.0);
    }

    TrigPoly mat(Lattice(2, 1), Shape::matrix), vec(Lattice(2, 1), Shape::vector), sc(Lattice(2, 1), Shape::scalar);
    CHECK(poly_product(mat, vec).shape() == Shape::vector);
    CHECK(poly_product(mat, mat).shape() == Shape::matrix);
    CHECK(violation_name([&] { poly_product(vec, mat); }) == "contraction");
    CHECK(violation_name([&] { poly_product(mat, vec, Contraction::hadamard); }) == "contraction");
    CHECK(violation_name([&] { poly_product(sc, TrigPoly(Lattice(1, 1), Shape::scalar)); }) == "dimension-mismatch");
}

TEST_CASE("poly_product: FFT path equals direct double sum (property, 120 cases)")
{
    Rng rng(17);
    double worst = 0.0;
    for (int n = 0; n < 120; ++n) {
        const int d = uniform_int(rng, 1, 3);
        const int Ku = uniform_int(rng, 1, d == 3 ? 2 : 3), Kv = uniform_int(rng, 1, d == 3 ? 2 : 3);
        const int kind = uniform_int(rng, 0, 2);
        TrigPoly u, v;
        if (kind == 0) {
            u = random_scalar(rng, d, Ku, 1.0, false);
            v = random_scalar(rng, d, Kv, 1.0, false);
        } else if (kind == 1) {
            u = random_tensor(rng, d, Ku, Shape::matrix, 1.0, false);
            v = random_tensor(rng, d, Kv, Shape::vector, 1.0, false);
        } else {
            u = random_tensor(rng, d, Ku, Shape::matrix, 1.0, false);
            v = random_tensor(rng, d, Kv, Shape::matrix, 1.0, false);
        }
        const TrigPoly f = poly_product(u, v, Contraction::chain, Path::fft);
        const TrigPoly g = poly_product(u, v, Contraction::chain, Path::direct);
        CHECK(f.K() == Ku + Kv);
        CHECK(g.K() == Ku + Kv);
        double scale = 0.0;
        for (const auto& [k, t] : g.coeffs()) scale = std::max(scale, max_abs(t));
        const double err = poly_distance(f, g) / std::max(scale, 1e-300);
        worst = std::max(worst, err);
        CHECK(err <= 1e-12);
    }
    MESSAGE("worst relative FFT/direct product gap " << worst);
}

TEST_CASE("constrained_sum: worked examples")
{
    const TrigPoly u = two_cos_1d();
    for (Path p : {Path::fft, Path::direct}) {
        CHECK(std::abs(constrained_sum({u, u}, Contraction::chain, p)(0, 0) - 2.0) < 1e-14);
        CHECK(std::abs(constrained_sum({u, u, u}, Contraction::chain, p)(0, 0)) < 1e-14);
        CHECK(std::abs(constrained_sum({u, u, u, u}, Contraction::chain, p)(0, 0) - 6.0) < 1e-14);
    }
    CHECK(violation_name([&] { constrained_sum({u}); }) == "contraction");
    CHECK(padded_grid_size(2, 1) == 8);
    CHECK(padded_grid_size(4, 3) == 32);
    CHECK(padded_grid_size(3, 2) == 16);
}

TEST_CASE("constrained_sum: FFT equals direct for d<=3, K<=3, p<=4 (property, 120 cases)")
{
    Rng rng(23);
    double worst = 0.0;
    for (int n = 0; n < 120; ++n) {
        const int d = 1 + n % 3;
        const int K = 1 + (n / 3) % 3;
        const int p = 2 + (n / 9) % 3;
        std::vector<TrigPoly> fs;
        const bool tensors = n % 2 == 1;
        for (int i = 0; i < p; ++i)
            fs.push_back(tensors ? random_tensor(rng, d, K, Shape::matrix, 1.0, false, 0.5)
                                 : random_scalar(rng, d, K, 1.0, false, 0.5));
        const Tensor a = constrained_sum(fs, Contraction::chain, Path::fft);
        const Tensor b = constrained_sum(fs, Contraction::chain, Path::direct);
        // exact zeros are common for sparse data; floor the scale at 1e-3 of the term bound
        const double scale = std::max(b.cwiseAbs().maxCoeff(), std::max(1e-3 * wiener_product(fs), 1e-300));
        const double err = (a - b).cwiseAbs().maxCoeff() / scale;
        worst = std::max(worst, err);
        CHECK(err <= 1e-12);
    }
    MESSAGE("worst relative FFT/direct constrained-sum gap " << worst);
}

TEST_CASE("constrained_sum is multilinear (property, 100 cases)")
{
    Rng rng(29);
    for (int n = 0; n < 100; ++n) {
        const int d = uniform_int(rng, 1, 3);
        const int K = uniform_int(rng, 1, 2);
        const int p = uniform_int(rng, 2, 4);
        std::vector<TrigPoly> fs;
        for (int i = 0; i < p; ++i) fs.push_back(random_scalar(rng, d, K, 1.0, false));
        const auto slot = static_cast<std::size_t>(uniform_int(rng, 0, p - 1));
        const TrigPoly other = random_scalar(rng, d, K, 1.0, false);
        const cplx a = random_cplx(rng, 2.0), b = random_cplx(rng, 2.0);

        std::vector<TrigPoly> mix = fs, alt = fs;
        mix[slot] = fs[slot].scaled(a) + other.scaled(b);
        alt[slot] = other;
        const cplx lhs = constrained_sum(mix)(0, 0);
        const cplx rhs = a * constrained_sum(fs)(0, 0) + b * constrained_sum(alt)(0, 0);
        double others = 1.0;
        for (std::size_t i = 0; i < fs.size(); ++i)
            if (i != slot) others *= wiener(fs[i]);
        const double bound = others * (std::abs(a) * wiener(fs[slot]) + 2.0 * std::abs(b) * wiener(other));
        CHECK(std::abs(lhs - rhs) <= 1e-13 * std::max(1.0, bound));
    }
}

TEST_CASE("hadamard contraction and spectral grid round trip")
{
    Rng rng(31);
    const TrigPoly a = random_tensor(rng, 2, 2, Shape::matrix, 1.0, false);
    const TrigPoly b = random_tensor(rng, 2, 2, Shape::matrix, 1.0, false);
    const Tensor h = constrained_sum({a, b}, Contraction::hadamard, Path::fft);
    Tensor want = Tensor::Zero(2, 2);
    for (const auto& [k, v] : a.coeffs()) want += v.cwiseProduct(b.coeff(-k));
    CHECK((h - want).cwiseAbs().maxCoeff() < 1e-13);

    const SpectralGrid grid(2, 8);
    const GridField f = grid.to_values(a);
    const TrigPoly back = grid.to_poly(f, 2, Shape::matrix);
    CHECK(poly_distance(back, a) < 1e-14);
    CHECK(violation_name([&] { SpectralGrid(2, 4).to_values(a); }) == "grid");
}
