#pragma once

#include <array>
#include <compare>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace sah {

using cplx = std::complex<double>;

/// Integer wave vector k in Z^d, d <= 3. Unused trailing components are zero,
/// so comparison is the lexicographic order on (k0, k1, k2).
struct Mode {
    std::array<int, 3> c{0, 0, 0};

    constexpr Mode() = default;
    constexpr Mode(int a) : c{a, 0, 0} {}
    constexpr Mode(int a, int b) : c{a, b, 0} {}
    constexpr Mode(int a, int b, int d) : c{a, b, d} {}

    constexpr int operator[](int i) const { return c[static_cast<std::size_t>(i)]; }
    constexpr int& operator[](int i) { return c[static_cast<std::size_t>(i)]; }

    constexpr bool is_zero() const { return c[0] == 0 && c[1] == 0 && c[2] == 0; }
    constexpr int max_norm() const
    {
        int m = 0;
        for (int v : c) m = std::max(m, v < 0 ? -v : v);
        return m;
    }

    friend constexpr Mode operator+(Mode a, const Mode& b)
    {
        for (int i = 0; i < 3; ++i) a.c[i] += b.c[i];
        return a;
    }
    friend constexpr Mode operator-(Mode a, const Mode& b)
    {
        for (int i = 0; i < 3; ++i) a.c[i] -= b.c[i];
        return a;
    }
    friend constexpr Mode operator-(Mode a)
    {
        for (int& v : a.c) v = -v;
        return a;
    }
    friend constexpr auto operator<=>(const Mode&, const Mode&) = default;
    friend constexpr bool operator==(const Mode&, const Mode&) = default;

    /// k as a real vector of length d.
    Eigen::VectorXd vec(int d) const;
    /// k divided by the gcd of its components (k/|k| without rounding).
    Mode reduced() const;
    std::string str(int d) const;
};

/// Box of modes |k|_inf <= K in dimension d.
struct Lattice {
    int dim = 1;
    int K = 1;

    Lattice() = default;
    Lattice(int d, int k);

    std::int64_t side() const { return 2 * K + 1; }
    std::int64_t size() const;
    bool contains(const Mode& m) const { return m.max_norm() <= K; }

    /// All modes of the box in lexicographic order.
    std::vector<Mode> modes() const;

    friend bool operator==(const Lattice&, const Lattice&) = default;
};

/// Fixed-shape pairwise (tree) reduction. The tree depends only on the
/// length of the input, so results are reproducible bit for bit.
template <typename T>
T tree_sum(std::span<const T> xs, T zero)
{
    if (xs.empty()) return zero;
    if (xs.size() == 1) return xs[0];
    if (xs.size() <= 8) {
        T acc = xs[0];
        for (std::size_t i = 1; i < xs.size(); ++i) acc = acc + xs[i];
        return acc;
    }
    const std::size_t half = xs.size() / 2;
    T lhs = tree_sum(xs.first(half), zero);
    T rhs = tree_sum(xs.subspan(half), zero);
    return lhs + rhs;
}

template <typename T>
T tree_sum(const std::vector<T>& xs, T zero)
{
    return tree_sum(std::span<const T>(xs), zero);
}

} // namespace sah
