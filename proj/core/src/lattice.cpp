#include "sah/lattice.hpp"

#include <numeric>
#include <sstream>

#include "sah/errors.hpp"

namespace sah {

Eigen::VectorXd Mode::vec(int d) const
{
    Eigen::VectorXd v(d);
    for (int i = 0; i < d; ++i) v[i] = c[static_cast<std::size_t>(i)];
    return v;
}

Mode Mode::reduced() const
{
    int g = 0;
    for (int v : c) g = std::gcd(g, v);
    if (g == 0) return *this;
    Mode r = *this;
    for (int& v : r.c) v /= g;
    return r;
}

std::string Mode::str(int d) const
{
    std::ostringstream os;
    os << '(';
    for (int i = 0; i < d; ++i) os << (i ? "," : "") << c[static_cast<std::size_t>(i)];
    os << ')';
    return os.str();
}

Lattice::Lattice(int d, int k) : dim(d), K(k)
{
    require(d >= 1 && d <= 3, "dimension", "lattice dimension must be 1, 2 or 3");
    require(k >= 1, "truncation", "lattice truncation must be at least 1");
}

std::int64_t Lattice::size() const
{
    std::int64_t n = 1;
    for (int i = 0; i < dim; ++i) n *= side();
    return n;
}

std::vector<Mode> Lattice::modes() const
{
    std::vector<Mode> out;
    out.reserve(static_cast<std::size_t>(size()));
    const int k1 = dim > 1 ? K : 0;
    const int k2 = dim > 2 ? K : 0;
    for (int a = -K; a <= K; ++a)
        for (int b = -k1; b <= k1; ++b)
            for (int c = -k2; c <= k2; ++c) out.emplace_back(a, b, c);
    return out;
}

} // namespace sah
