#include <cmath>
#include <numbers>

#include "doctest.h"
#include "generators.hpp"
#include "sah/corrections.hpp"
#include "test_util.hpp"

using namespace sah;
using namespace sah::testing;

namespace {

TrigPoly matrix_1d(std::initializer_list<std::pair<int, double>> modes, int K)
{
    TrigPoly u(Lattice(1, K), Shape::matrix, TrigPoly::real | TrigPoly::zero_mean);
    for (const auto& [k, v] : modes) {
        u.set(Mode(k), Tensor::Constant(1, 1, v));
        u.set(Mode(-k), Tensor::Constant(1, 1, v));
    }
    return u;
}

CoefficientExpansion expansion_1d(double A0, std::map<int, TrigPoly> orders)
{
    return CoefficientExpansion(Eigen::MatrixXd::Constant(1, 1, A0), std::move(orders));
}

// Mean of f over the unit period by the trapezoid rule on N points; exact for
// trigonometric polynomials of degree < N.
template <typename F>
double period_mean(F&& f, int N = 256)
{
    std::vector<double> v(static_cast<std::size_t>(N));
    for (int j = 0; j < N; ++j) v[static_cast<std::size_t>(j)] = f(static_cast<double>(j) / N);
    return tree_sum(v, 0.0) / N;
}

double at(const TrigPoly& p, double y) { return p.evaluate(Eigen::VectorXd::Constant(1, y))(0, 0).real(); }

CoefficientExpansion cosine() { return expansion_1d(1.0, {{1, matrix_1d({{1, 1.0}}, 1)}}); }

TrigPoly random_1d(Rng& rng, int K, double amp)
{
    TrigPoly u(Lattice(1, K), Shape::matrix, TrigPoly::real | TrigPoly::zero_mean);
    for (int k = 1; k <= K; ++k) {
        const cplx v = random_cplx(rng, amp);
        u.set(Mode(k), Tensor::Constant(1, 1, v));
        u.set(Mode(-k), Tensor::Constant(1, 1, std::conj(v)));
    }
    return u;
}

double rel(double x, double want, double floor) { return std::abs(x - want) / std::max(std::abs(want), floor); }

} // namespace

TEST_CASE("expansion invariants are named")
{
    Rng rng(1);
    const TrigPoly A = random_coefficient(rng, 2, 1, 0.3);
    Eigen::Matrix2d nonsym;
    nonsym << 1.0, 0.5, 0.0, 1.0;
    CHECK(violation_name([&] { CoefficientExpansion(nonsym, {{1, A}}); }) == "A0-symmetric");
    CHECK(violation_name([&] { CoefficientExpansion(-Eigen::Matrix2d::Identity(), {{1, A}}); }) == "A0-ellipticity");
    CHECK(violation_name([&] { CoefficientExpansion(Eigen::Matrix2d::Identity(), {{4, A}}); }) == "order-range");
    CHECK(violation_name([&] { CoefficientExpansion(Eigen::Matrix3d::Identity(), {{1, A}}); }) == "dimension-mismatch");
    CHECK(violation_name([&] {
              CoefficientExpansion(Eigen::Matrix2d::Identity(), {{1, random_scalar(rng, 2, 1)}});
          }) == "shape-mismatch");

    TrigPoly biased = A;
    biased.set(Mode(0, 0), Tensor::Identity(2, 2));
    CHECK(violation_name([&] { CoefficientExpansion(Eigen::Matrix2d::Identity(), {{1, biased}}); }) == "zero-mean");

    TrigPoly complex_only(Lattice(2, 1), Shape::matrix);
    complex_only.set(Mode(1, 0), Tensor::Identity(2, 2));
    CHECK(violation_name([&] { CoefficientExpansion(Eigen::Matrix2d::Identity(), {{1, complex_only}}); }) == "hermitian");

    TrigPoly skew(Lattice(2, 1), Shape::matrix);
    Tensor s(2, 2);
    s << 0.0, 1.0, 0.0, 0.0;
    skew.set(Mode(1, 0), s);
    skew.set(Mode(-1, 0), s);
    CHECK(violation_name([&] { CoefficientExpansion(Eigen::Matrix2d::Identity(), {{1, skew}}); }) ==
          "symmetric-coefficients");
    CHECK_NOTHROW(CoefficientExpansion(Eigen::Matrix2d::Identity(), {{1, skew}}, false));

    const CoefficientExpansion c(Eigen::Matrix2d::Identity(), {{2, A}});
    CHECK(c.order(1).coeffs().empty());
    CHECK(c.truncation() == 1);
}

TEST_CASE("a2: worked examples on both routes")
{
    const CoefficientExpansion zero(Eigen::Matrix2d::Identity(), {});
    CHECK(a2_direct(zero).isZero());
    CHECK(a2_via_measure(zero).isZero());

    const CoefficientExpansion c = cosine();
    CHECK(std::abs(a2_direct(c)(0, 0) - (-2.0)) < 1e-15);
    CHECK(std::abs(a2_via_measure(c)(0, 0) - (-2.0)) < 1e-15);

    TrigPoly A(Lattice(2, 1), Shape::matrix, TrigPoly::real | TrigPoly::zero_mean);
    A.set(Mode(1, 0), Tensor::Identity(2, 2));
    A.set(Mode(-1, 0), Tensor::Identity(2, 2));
    const CoefficientExpansion e1(Eigen::Matrix2d::Identity(), {{1, A}});
    Eigen::Matrix2d want;
    want << -2.0, 0.0, 0.0, 0.0;
    CHECK((a2_direct(e1).real() - want).norm() < 1e-15);
    CHECK((a2_via_measure(e1).real() - want).norm() < 1e-15);
}

TEST_CASE("a2_direct equals a2_via_measure (property, 100 cases)")
{
    Rng rng(2);
    for (int n = 0; n < 100; ++n) {
        const int d = uniform_int(rng, 1, 3);
        const auto c = random_expansion(rng, d, uniform_int(rng, 1, 3), uniform(rng, 0.01, 1.0), {1, 2});
        const Eigen::MatrixXcd a = a2_direct(c), b = a2_via_measure(c);
        CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("a3 and a4: worked examples")
{
    const CoefficientExpansion c = cosine();
    for (Path p : {Path::fft, Path::direct}) {
        CHECK(std::abs(a3_correction(c, p)(0, 0)) < 1e-15);
        CHECK(std::abs(a4_correction(c, p)(0, 0) - (-2.0)) < 1e-14);
    }

    // a1 = 2 cos 2 pi y + 2 cos 4 pi y: A3 = mean(a1^3)
    const TrigPoly two = matrix_1d({{1, 1.0}, {2, 1.0}}, 2);
    const CoefficientExpansion c2 = expansion_1d(1.0, {{1, two}});
    const double m3 = period_mean([&](double y) { return std::pow(at(two, y), 3); });
    CHECK(std::abs(m3 - 6.0) < 1e-12);
    for (Path p : {Path::fft, Path::direct}) CHECK(std::abs(a3_correction(c2, p)(0, 0) - m3) < 1e-13);

    Rng rng(3);
    const CoefficientExpansion only2(random_spd(rng, 2), {{2, random_coefficient(rng, 2, 2, 0.5)}});
    CHECK(a3_correction(only2).cwiseAbs().maxCoeff() == 0.0);
    const CoefficientExpansion only3(random_spd(rng, 3), {{3, random_coefficient(rng, 3, 2, 0.5)}});
    CHECK(a4_correction(only3).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a3_correction(only3).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("1-D identities with order-1 data only (property, 100 cases)")
{
    Rng rng(4);
    for (int n = 0; n < 100; ++n) {
        const int K = uniform_int(rng, 1, 4);
        const double A0 = uniform(rng, 0.5, 2.0);
        const TrigPoly a1 = random_1d(rng, K, uniform(rng, 0.05, 1.0));
        const auto c = expansion_1d(A0, {{1, a1}});
        auto m = [&](int j) { return period_mean([&](double y) { return std::pow(at(a1, y), j); }); };
        const double m2 = m(2), m3 = m(3), m4 = m(4);
        const double s = m2;  // natural magnitude of a1^2
        CHECK(rel(a2_direct(c)(0, 0).real(), -m2 / A0, 1e-3 * s / A0) <= 1e-8);
        CHECK(rel(a3_correction(c)(0, 0).real(), m3 / (A0 * A0), 1e-3 * std::pow(s, 1.5) / (A0 * A0)) <= 1e-8);
        CHECK(rel(a4_correction(c)(0, 0).real(), (m2 * m2 - m4) / std::pow(A0, 3), 1e-3 * s * s / std::pow(A0, 3)) <= 1e-8);
    }
}

TEST_CASE("1-D harmonic-mean expansion with all three orders (property, 100 cases)")
{
    // 1/mean(1/(A0 + g a1 + g^2 a2 + g^3 a3)) expanded to fourth order.
    Rng rng(5);
    for (int n = 0; n < 100; ++n) {
        const double A0 = uniform(rng, 0.5, 2.0);
        const TrigPoly a1 = random_1d(rng, uniform_int(rng, 1, 3), 0.5);
        const TrigPoly a2 = random_1d(rng, uniform_int(rng, 1, 3), 0.5);
        const TrigPoly a3 = random_1d(rng, uniform_int(rng, 1, 3), 0.5);
        const auto c = expansion_1d(A0, {{1, a1}, {2, a2}, {3, a3}});
        auto mean = [&](auto f) { return period_mean(f); };
        const double m11 = mean([&](double y) { return std::pow(at(a1, y), 2); });
        const double m12 = mean([&](double y) { return at(a1, y) * at(a2, y); });
        const double m111 = mean([&](double y) { return std::pow(at(a1, y), 3); });
        const double m22 = mean([&](double y) { return std::pow(at(a2, y), 2); });
        const double m13 = mean([&](double y) { return at(a1, y) * at(a3, y); });
        const double m112 = mean([&](double y) { return std::pow(at(a1, y), 2) * at(a2, y); });
        const double m1111 = mean([&](double y) { return std::pow(at(a1, y), 4); });

        const double want2 = -m11 / A0;
        const double want3 = -2.0 * m12 / A0 + m111 / (A0 * A0);
        const double want4 = -(m22 + 2.0 * m13) / A0 + 3.0 * m112 / (A0 * A0) + (m11 * m11 - m1111) / std::pow(A0, 3);
        const double scale = 1.0 / A0;
        for (Path p : {Path::fft, Path::direct}) {
            CHECK(rel(a2_direct(c)(0, 0).real(), want2, 1e-3 * scale) <= 1e-10);
            CHECK(rel(a3_correction(c, p)(0, 0).real(), want3, 1e-3 * scale) <= 1e-10);
            CHECK(rel(a4_correction(c, p)(0, 0).real(), want4, 1e-3 * scale) <= 1e-10);
        }
    }
}

TEST_CASE("chain_mean: FFT equals direct for general matrix factors (property, 120 cases)")
{
    Rng rng(6);
    for (int n = 0; n < 120; ++n) {
        const int d = 1 + n % 3;
        const int K = 1 + (n / 3) % (d == 3 ? 2 : 3);
        const int p = 2 + (n / 9) % 3;
        std::vector<TrigPoly> fs;
        for (int i = 0; i < p; ++i) fs.push_back(random_tensor(rng, d, K, Shape::matrix, 1.0, false, 0.6));
        const Eigen::MatrixXd A0 = random_spd(rng, d);
        const Eigen::MatrixXcd a = chain_mean(A0, fs, Path::fft);
        const Eigen::MatrixXcd b = chain_mean(A0, fs, Path::direct);
        const double alpha = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(A0).eigenvalues().minCoeff();
        const double floor = std::max(1e-3 * wiener_product(fs) / std::pow(alpha, p - 1), 1e-300);
        CHECK(rel_diff(a, b, floor) <= 1e-12);

        // partial sums over a split of the first-factor modes add up
        std::vector<Mode> left, right;
        for (const auto& [k, v] : fs[0].coeffs()) (k < Mode{} ? left : right).push_back(k);
        for (Path path : {Path::fft, Path::direct}) {
            const Eigen::MatrixXcd parts = chain_mean_partial(A0, fs, left, path) + chain_mean_partial(A0, fs, right, path);
            CHECK(rel_diff(parts, b, floor) <= 1e-12);
        }
    }
}

TEST_CASE("correction_report: worked examples and metadata")
{
    CorrectionOptions two;
    two.max_order = 2;
    const auto r2 = correction_report(cosine(), two);
    CHECK(r2.A3 == std::nullopt);
    CHECK(r2.A4 == std::nullopt);
    CHECK(r2.order(3) == nullptr);
    CHECK(r2.A2(0, 0) == doctest::Approx(-2.0).epsilon(1e-15));

    const auto r = correction_report(cosine());
    CHECK(r.A1.isZero(0.0));
    CHECK(r.A2(0, 0) == doctest::Approx(-2.0).epsilon(1e-15));
    CHECK(std::abs((*r.A3)(0, 0)) < 1e-15);
    CHECK((*r.A4)(0, 0) == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(r.path == "fft");
    REQUIRE(r.checks.size() == 4);  // A2 vs measure and direct, A3 and A4 vs direct
    CHECK(r.checks[0].reference == "measure");
    CHECK(r.checks[1].reference == "direct");
    CHECK(r.worst_cross_check() <= 1e-14);
    for (double m : r.max_imag) CHECK(m <= 1e-15);

    const auto z = correction_report(CoefficientExpansion(Eigen::Matrix3d::Identity(), {}));
    CHECK(z.A2.isZero(0.0));
    CHECK(z.A3->isZero(0.0));
    CHECK(z.A4->isZero(0.0));

    // support beyond the full-check radius switches to sampled checks
    Rng rng(7);
    const auto wide = random_expansion(rng, 1, 5, 0.3, {1, 2}, 1.0);
    REQUIRE(wide.support_radius() > 3);
    CorrectionOptions so;
    so.sampled_modes = 3;
    const auto rs = correction_report(wide, so);
    bool sampled = false;
    for (const auto& cc : rs.checks)
        if (cc.reference == "direct-sampled") {
            sampled = true;
            CHECK(cc.sampled_modes == 3);
            CHECK(cc.rel_delta <= 1e-12);
        }
    CHECK(sampled);

    CorrectionOptions bad;
    bad.max_order = 5;
    CHECK(violation_name([&] { correction_report(cosine(), bad); }) == "order-range");
}

TEST_CASE("correction_report is reproducible bit for bit")
{
    Rng rng(8);
    const auto c = random_expansion(rng, 3, 2, 0.3, {1, 2, 3});
    const auto a = correction_report(c), b = correction_report(c);
    for (int i = 1; i <= 4; ++i) CHECK((*a.order(i) - *b.order(i)).cwiseAbs().maxCoeff() == 0.0);
}
