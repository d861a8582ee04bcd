#include "sah/hmeasure.hpp"

#include "sah/errors.hpp"

namespace sah {

namespace {

int shape_rank(Shape s)
{
    switch (s) {
    case Shape::scalar: return 0;
    case Shape::vector: return 1;
    case Shape::matrix: return 2;
    }
    return 0;
}

int rank_of(int rows, int cols) { return (rows > 1 ? 1 : 0) + (cols > 1 ? 1 : 0); }

Eigen::VectorXcd flatten(const Tensor& t)
{
    Eigen::VectorXcd v(t.size());
    for (Eigen::Index r = 0; r < t.rows(); ++r)
        for (Eigen::Index c = 0; c < t.cols(); ++c) v[r * t.cols() + c] = t(r, c);
    return v;
}

void require_zero_mean(const TrigPoly& u, const char* who)
{
    require(u.is_zero_mean(), "zero-mean", std::string(who) + ": sequence must have zero mean");
}

} // namespace

Eigen::VectorXd Atom::unit_direction(int dim) const
{
    Eigen::VectorXd v = direction.vec(dim);
    return v / v.norm();
}

PeriodicHMeasure::PeriodicHMeasure(int dim, int rank, int rows, int cols)
    : dim_(dim), rank_(rank), rows_(rows), cols_(cols)
{
}

std::vector<Atom> PeriodicHMeasure::atoms() const
{
    std::vector<Atom> out;
    out.reserve(atoms_.size());
    for (const auto& [dir, w] : atoms_) out.push_back({dir, w});
    return out;
}

Tensor PeriodicHMeasure::weight(const Mode& direction) const
{
    auto it = atoms_.find(direction.reduced());
    return it == atoms_.end() ? Tensor(Tensor::Zero(rows_, cols_)) : it->second;
}

Tensor PeriodicHMeasure::total_mass() const
{
    std::vector<Tensor> ws;
    for (const auto& [dir, w] : atoms_) ws.push_back(w);
    return tree_sum(ws, Tensor(Tensor::Zero(rows_, cols_)));
}

void PeriodicHMeasure::add(const Mode& k, const Tensor& w)
{
    require(!k.is_zero(), "zero-direction", "an atom needs a non-zero direction");
    require(w.rows() == rows_ && w.cols() == cols_, "shape-mismatch", "atom weight has wrong shape");
    pending_[k.reduced()].push_back(w);
}

void PeriodicHMeasure::finalize()
{
    const Tensor zero = Tensor::Zero(rows_, cols_);
    for (auto& [dir, ws] : pending_) {
        Tensor w = tree_sum(ws, zero);
        auto it = atoms_.find(dir);
        if (it != atoms_.end()) w += it->second;
        if (w.isZero(0.0))
            atoms_.erase(dir);
        else
            atoms_[dir] = w;
    }
    pending_.clear();
}

PeriodicHMeasure h_measure_scalar(const TrigPoly& u)
{
    require(u.shape() == Shape::scalar, "shape-mismatch", "h_measure_scalar needs a scalar sequence");
    require_zero_mean(u, "h_measure_scalar");
    PeriodicHMeasure m(u.dim(), 0, 1, 1);
    for (const auto& [k, v] : u.coeffs()) {
        if (k.is_zero()) continue;
        Tensor w(1, 1);
        w(0, 0) = std::norm(v(0, 0));
        m.add(k, w);
    }
    m.finalize();
    return m;
}

PeriodicHMeasure h_measure_pair(const TrigPoly& u, const TrigPoly& v)
{
    require(u.dim() == v.dim(), "dimension-mismatch", "h_measure_pair: dimensions differ");
    require_zero_mean(u, "h_measure_pair");
    require_zero_mean(v, "h_measure_pair");
    const int rows = u.rows() * u.cols();
    const int cols = v.rows() * v.cols();
    PeriodicHMeasure m(u.dim(), shape_rank(u.shape()) + shape_rank(v.shape()), rows, cols);
    for (const auto& [k, a] : u.coeffs()) {
        if (k.is_zero() || !v.has(-k)) continue;
        m.add(k, flatten(a) * flatten(v.coeff(-k)).transpose());
    }
    m.finalize();
    return m;
}

Tensor measure_pairing(const PeriodicHMeasure& m, const Symbol& s, cplx x_weight)
{
    require(s.dim() == m.dim(), "dimension-mismatch", "measure_pairing: symbol dimension differs");
    const int d = m.dim();
    std::vector<Tensor> terms;
    int out_rows = m.weight_rows();
    int out_cols = m.weight_cols();

    if (s.kind() == Symbol::Kind::scalar) {
        for (const Atom& a : m.atoms()) terms.push_back(a.weight * s.at(a.unit_direction(d))(0, 0));
    } else if (m.rank() == 2 && m.weight_rows() * m.weight_cols() == d * d) {
        out_rows = out_cols = 1;
        for (const Atom& a : m.atoms()) {
            const Tensor S = s.at(a.unit_direction(d));
            Tensor t(1, 1);
            t(0, 0) = a.weight.cwiseProduct(S).sum();
            terms.push_back(t);
        }
    } else if (m.rank() == 4 && m.weight_rows() == d * d && m.weight_cols() == d * d) {
        out_rows = out_cols = d;
        for (const Atom& a : m.atoms()) {
            const Tensor S = s.at(a.unit_direction(d));
            Tensor R = Tensor::Zero(d, d);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    for (int k = 0; k < d; ++k)
                        for (int l = 0; l < d; ++l) R(i, j) += a.weight(i * d + k, l * d + j) * S(k, l);
            terms.push_back(R);
        }
    } else {
        contract_fail("rank-mismatch", "matrix symbol can only be paired with rank-2 or rank-4 weights");
    }
    return tree_sum(terms, Tensor(Tensor::Zero(out_rows, out_cols))) * x_weight;
}

Tensor p_product_limit(const LimitSpec& spec, cplx phi_integral, Path path)
{
    const auto p = static_cast<int>(spec.factors.size());
    require(p >= 2, "product-order", "a product limit needs at least two factors");
    require(p <= max_product_order, "product-order",
            "product order above " + std::to_string(max_product_order) + " is not supported");
    std::vector<TrigPoly> filtered;
    filtered.reserve(spec.factors.size());
    for (const auto& f : spec.factors) {
        require_zero_mean(f.sequence, "p_product_limit");
        filtered.push_back(multiplier_apply(f.symbol, f.sequence));
    }
    return constrained_sum(filtered, spec.contraction, path) * phi_integral;
}

PeriodicHMeasure mu_vw_cubic(const TrigPoly& u, const Symbol& s1, const Symbol& s2,
                             const Symbol& s3, Contraction c)
{
    require_zero_mean(u, "mu_vw_cubic");
    const TrigPoly f1 = multiplier_apply(s1, u);
    const TrigPoly f2 = multiplier_apply(s2, u);
    const TrigPoly f3 = multiplier_apply(s3, u);
    const std::vector<TrigPoly> fs{f1, f2, f3};
    const auto [rows, cols] = contracted_shape(fs, c);
    const TrigPoly w = poly_product(f2, f3, c, Path::direct);

    PeriodicHMeasure m(u.dim(), rank_of(rows, cols), rows, cols);
    for (const auto& [k, a] : f1.coeffs()) {
        if (k.is_zero() || !w.has(-k)) continue;
        const Tensor parts[2] = {a, w.coeff(-k)};
        m.add(k, contract(parts, c));
    }
    m.finalize();
    return m;
}

QuarticMeasure mu_vw_quartic(const TrigPoly& u, const Symbol& s1, const Symbol& s2,
                             const Symbol& s3, const Symbol& s4, Contraction c)
{
    require_zero_mean(u, "mu_vw_quartic");
    const std::vector<TrigPoly> fs{multiplier_apply(s1, u), multiplier_apply(s2, u),
                                   multiplier_apply(s3, u), multiplier_apply(s4, u)};
    const auto [rows, cols] = contracted_shape(fs, c);
    const TrigPoly v = poly_product(fs[0], fs[1], c, Path::direct);
    const TrigPoly w = poly_product(fs[2], fs[3], c, Path::direct);

    QuarticMeasure out{PeriodicHMeasure(u.dim(), rank_of(rows, cols), rows, cols),
                       Tensor::Zero(rows, cols)};
    for (const auto& [s, a] : v.coeffs()) {
        if (!w.has(-s)) continue;
        const Tensor parts[2] = {a, w.coeff(-s)};
        if (s.is_zero())
            out.weak_limit_term = contract(parts, c);
        else
            out.atoms.add(s, contract(parts, c));
    }
    out.atoms.finalize();
    return out;
}

} // namespace sah
