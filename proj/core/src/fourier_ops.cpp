#include "sah/fourier_ops.hpp"

#include <algorithm>
#include <map>

#include "sah/errors.hpp"
#include "sah/spectral_grid.hpp"

namespace sah {

const char* to_string(Path p) { return p == Path::fft ? "fft" : "direct"; }

namespace {

Tensor combine(const Tensor& acc, const Tensor& next, Contraction c)
{
    if (c == Contraction::chain) return acc * next;
    return acc.cwiseProduct(next);
}

// In d = 1 every shape is 1x1, so the factor shapes decide.
Shape shape_from(int rows, int cols, int dim, const TrigPoly& u, const TrigPoly& v)
{
    if (dim == 1) {
        if (u.shape() == Shape::scalar && v.shape() == Shape::scalar) return Shape::scalar;
        return v.shape() == Shape::vector ? Shape::vector : Shape::matrix;
    }
    if (rows == 1 && cols == 1) return Shape::scalar;
    if (rows == dim && cols == 1) return Shape::vector;
    if (rows == dim && cols == dim) return Shape::matrix;
    contract_fail("contraction", "product has a shape that is not scalar, vector or matrix");
}

int common_dim(std::span<const TrigPoly> factors)
{
    require(!factors.empty(), "contraction", "no factors given");
    const int d = factors.front().dim();
    for (const auto& f : factors)
        require(f.dim() == d, "dimension-mismatch", "factors live on tori of different dimension");
    return d;
}

int max_K(std::span<const TrigPoly> factors)
{
    int K = 1;
    for (const auto& f : factors) K = std::max(K, f.K());
    return K;
}

// Recursive enumeration of k_1 + ... + k_p = 0. Each level tree-sums the
// contributions of its children in lexicographic order of the chosen mode.
Tensor direct_level(std::span<const TrigPoly> factors, std::size_t level, const Mode& partial,
                    const Tensor& acc, Contraction c, const Tensor& zero)
{
    const TrigPoly& f = factors[level];
    if (level + 1 == factors.size()) {
        const Mode last = -partial;
        auto it = f.coeffs().find(last);
        if (it == f.coeffs().end()) return zero;
        return combine(acc, it->second, c);
    }
    std::vector<Tensor> parts;
    parts.reserve(f.coeffs().size());
    for (const auto& [k, v] : f.coeffs())
        parts.push_back(direct_level(factors, level + 1, partial + k, combine(acc, v, c), c, zero));
    return tree_sum(parts, zero);
}

} // namespace

std::pair<int, int> contracted_shape(std::span<const TrigPoly> factors, Contraction c)
{
    require(!factors.empty(), "contraction", "no factors given");
    if (c == Contraction::hadamard) {
        for (const auto& f : factors)
            require(f.rows() == factors.front().rows() && f.cols() == factors.front().cols(),
                    "contraction", "hadamard contraction needs equally shaped factors");
        return {factors.front().rows(), factors.front().cols()};
    }
    for (std::size_t i = 0; i + 1 < factors.size(); ++i)
        require(factors[i].cols() == factors[i + 1].rows(), "contraction",
                "chain contraction: inner tensor dimensions disagree between factors " +
                    std::to_string(i) + " and " + std::to_string(i + 1));
    return {factors.front().rows(), factors.back().cols()};
}

Tensor contract(std::span<const Tensor> factors, Contraction c)
{
    require(!factors.empty(), "contraction", "no factors given");
    Tensor acc = factors[0];
    for (std::size_t i = 1; i < factors.size(); ++i) {
        if (c == Contraction::chain)
            require(acc.cols() == factors[i].rows(), "contraction", "chain dimension mismatch");
        else
            require(acc.rows() == factors[i].rows() && acc.cols() == factors[i].cols(),
                    "contraction", "hadamard shape mismatch");
        acc = combine(acc, factors[i], c);
    }
    return acc;
}

TrigPoly multiplier_apply(const Symbol& s, const TrigPoly& u)
{
    require(s.dim() == u.dim(), "dimension-mismatch", "symbol and polynomial dimensions differ");
    // in d = 1 a matrix symbol is 1x1 and acts on scalars like a scalar symbol
    const bool matrix = s.kind() == Symbol::Kind::matrix && !(u.shape() == Shape::scalar && u.dim() == 1);
    require(!matrix || u.shape() != Shape::scalar, "shape-mismatch",
            "matrix symbol cannot act on a scalar polynomial");
    unsigned flags = TrigPoly::none;
    if (u.has_flag(TrigPoly::zero_mean) || s.zero_value().isZero(0.0)) flags |= TrigPoly::zero_mean;
    TrigPoly out(u.lattice(), u.shape(), flags);
    for (const auto& [k, v] : u.coeffs()) {
        const Tensor sk = s(k);
        Tensor w = matrix ? Tensor(sk * v) : Tensor(v * sk(0, 0));
        if (k.is_zero() && w.isZero(0.0)) continue;
        out.set(k, w);
    }
    return out;
}

int padded_grid_size(int p, int K) { return next_pow2(p * 2 * K + 1); }

TrigPoly poly_product(const TrigPoly& u, const TrigPoly& v, Contraction c, Path path)
{
    const TrigPoly pair[2] = {u, v};
    const int d = common_dim(pair);
    const auto [rows, cols] = contracted_shape(pair, c);
    const Shape shape = shape_from(rows, cols, d, u, v);
    const Lattice out_lat(d, u.K() + v.K());

    if (path == Path::direct) {
        std::map<Mode, std::vector<Tensor>> terms;
        for (const auto& [j, a] : u.coeffs())
            for (const auto& [k, b] : v.coeffs()) terms[j + k].push_back(combine(a, b, c));
        TrigPoly out(out_lat, shape);
        const Tensor zero = Tensor::Zero(rows, cols);
        for (const auto& [m, ts] : terms) out.set(m, tree_sum(ts, zero));
        return out;
    }

    const SpectralGrid grid(d, padded_grid_size(2, std::max(u.K(), v.K())));
    const GridField fu = grid.to_values(u);
    const GridField fv = grid.to_values(v);
    GridField prod;
    prod.rows = rows;
    prod.cols = cols;
    prod.channels.assign(static_cast<std::size_t>(rows * cols),
                         std::vector<cplx>(static_cast<std::size_t>(grid.points())));
    for (std::size_t p = 0; p < static_cast<std::size_t>(grid.points()); ++p) {
        const Tensor t = combine(fu.at(p), fv.at(p), c);
        for (int r = 0; r < rows; ++r)
            for (int q = 0; q < cols; ++q) prod.channels[static_cast<std::size_t>(r * cols + q)][p] = t(r, q);
    }
    return grid.to_poly(prod, out_lat.K, shape);
}

Tensor constrained_sum(std::span<const TrigPoly> factors, Contraction c, Path path)
{
    require(factors.size() >= 2, "contraction", "constrained sum needs at least two factors");
    const int d = common_dim(factors);
    const auto [rows, cols] = contracted_shape(factors, c);
    const Tensor zero = Tensor::Zero(rows, cols);

    if (path == Path::direct) {
        const Tensor seed = c == Contraction::chain
                                ? Tensor(Tensor::Identity(factors.front().rows(), factors.front().rows()))
                                : Tensor(Tensor::Ones(rows, cols));
        return direct_level(factors, 0, Mode{}, seed, c, zero);
    }

    const int p = static_cast<int>(factors.size());
    const SpectralGrid grid(d, padded_grid_size(p, max_K(factors)));
    std::vector<GridField> fields;
    fields.reserve(factors.size());
    for (const auto& f : factors) fields.push_back(grid.to_values(f));

    GridField prod;
    prod.rows = rows;
    prod.cols = cols;
    prod.channels.assign(static_cast<std::size_t>(rows * cols),
                         std::vector<cplx>(static_cast<std::size_t>(grid.points())));
    for (std::size_t pt = 0; pt < static_cast<std::size_t>(grid.points()); ++pt) {
        Tensor acc = fields[0].at(pt);
        for (std::size_t i = 1; i < fields.size(); ++i) acc = combine(acc, fields[i].at(pt), c);
        for (int r = 0; r < rows; ++r)
            for (int q = 0; q < cols; ++q) prod.channels[static_cast<std::size_t>(r * cols + q)][pt] = acc(r, q);
    }
    return grid.mean(prod);
}

} // namespace sah
