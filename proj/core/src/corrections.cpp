#include "sah/corrections.hpp"

#include <algorithm>
#include <chrono>
#include <cfloat>
#include <random>
#include <set>

#include "sah/errors.hpp"
#include "sah/hmeasure.hpp"
#include "sah/symbol.hpp"

namespace sah {

namespace {

using Vec3 = Eigen::Vector3cd;
using Mat3 = Eigen::Matrix3cd;
using RVec3 = Eigen::Vector3d;

RVec3 as_vec(const Mode& k) { return RVec3(k[0], k[1], k[2]); }

// Coefficients of one factor on a dense box, zero-padded to 3x3.
class DenseFactor {
public:
    DenseFactor(const TrigPoly& p) : dim_(p.dim()), R_(std::max(p.K(), 1))
    {
        const std::int64_t side = 2 * R_ + 1;
        std::int64_t n = 1;
        for (int i = 0; i < dim_; ++i) n *= side;
        slot_.assign(static_cast<std::size_t>(n), -1);
        for (const auto& [k, v] : p.coeffs()) {
            if (v.isZero(0.0)) continue;
            Mat3 m = Mat3::Zero();
            m.topLeftCorner(v.rows(), v.cols()) = v;
            slot_[index(k)] = static_cast<int>(values_.size());
            values_.push_back(m);
            modes_.push_back(k);
        }
    }

    const Mat3* find(const Mode& k) const
    {
        if (k.max_norm() > R_) return nullptr;
        const int s = slot_[index(k)];
        return s < 0 ? nullptr : &values_[static_cast<std::size_t>(s)];
    }
    const std::vector<Mode>& modes() const { return modes_; }
    const Mat3& value(std::size_t i) const { return values_[i]; }

private:
    std::size_t index(const Mode& k) const
    {
        std::int64_t idx = 0;
        for (int i = 0; i < dim_; ++i) idx = idx * (2 * R_ + 1) + (k[i] + R_);
        return static_cast<std::size_t>(idx);
    }

    int dim_;
    int R_;
    std::vector<int> slot_;
    std::vector<Mat3> values_;
    std::vector<Mode> modes_;
};

Eigen::Matrix3d pad(const Eigen::MatrixXd& A0)
{
    Eigen::Matrix3d A = Eigen::Matrix3d::Zero();
    A.topLeftCorner(A0.rows(), A0.cols()) = A0;
    return A;
}

// Mode sums in closed index form. `first` restricts the first-factor mode.
Mat3 direct_chain(const Eigen::MatrixXd& A0, const std::vector<TrigPoly>& factors,
                  const std::vector<Mode>* first)
{
    const Eigen::Matrix3d A = pad(A0);
    auto q = [&A](const RVec3& k) { return k.dot(A * k); };
    std::vector<DenseFactor> F;
    for (const auto& f : factors) F.emplace_back(f);
    const std::vector<Mode>& outer = first ? *first : F[0].modes();
    const Vec3 zv = Vec3::Zero();
    std::vector<Mat3> per_k;
    per_k.reserve(outer.size());

    for (const Mode& k : outer) {
        const Mat3* Mk = F[0].find(k);
        if (!Mk || k.is_zero()) continue;
        const RVec3 kv = as_vec(k);
        const Vec3 left = *Mk * kv.cast<cplx>() / q(kv);
        Vec3 right = Vec3::Zero();

        if (factors.size() == 2) {
            const Mat3* Mm = F[1].find(-k);
            if (!Mm) continue;
            right = Mm->transpose() * kv.cast<cplx>();
        } else if (factors.size() == 3) {
            std::vector<Vec3> terms;
            for (std::size_t im = 0; im < F[2].modes().size(); ++im) {
                const Mode& m = F[2].modes()[im];
                if (m.is_zero()) continue;
                const Mat3* Ml = F[1].find(-(k + m));
                if (!Ml) continue;
                const RVec3 mv = as_vec(m);
                const cplx w = kv.cast<cplx>().dot(*Ml * mv.cast<cplx>()) / q(mv);
                terms.push_back(w * (F[2].value(im).transpose() * mv.cast<cplx>()));
            }
            right = tree_sum(terms, zv);
        } else {
            std::vector<Vec3> outer_terms;
            for (std::size_t ij = 0; ij < F[1].modes().size(); ++ij) {
                const Mode& j = F[1].modes()[ij];
                const Mode s = j + k;
                if (s.is_zero()) continue;
                const RVec3 sv = as_vec(s);
                const cplx x = kv.cast<cplx>().dot(F[1].value(ij) * sv.cast<cplx>()) / q(sv);
                std::vector<Vec3> terms;
                for (std::size_t im = 0; im < F[3].modes().size(); ++im) {
                    const Mode& m = F[3].modes()[im];
                    if (m.is_zero()) continue;
                    const Mat3* Ml = F[2].find(-(s + m));
                    if (!Ml) continue;
                    const RVec3 mv = as_vec(m);
                    const cplx y = sv.cast<cplx>().dot(*Ml * mv.cast<cplx>()) / q(mv);
                    terms.push_back(y * (F[3].value(im).transpose() * mv.cast<cplx>()));
                }
                outer_terms.push_back(x * tree_sum(terms, zv));
            }
            right = tree_sum(outer_terms, zv);
        }
        per_k.push_back(left * right.transpose());
    }
    return tree_sum(per_k, Mat3(Mat3::Zero()));
}

// Right part of the chain, G = Psi (M2 Psi (M3 ... Psi Mp)).
TrigPoly chain_tail(const Symbol& psi, const std::vector<TrigPoly>& factors)
{
    TrigPoly G = multiplier_apply(psi, factors.back());
    for (std::size_t r = factors.size() - 2; r >= 1; --r)
        G = multiplier_apply(psi, poly_product(factors[r], G, Contraction::chain, Path::fft));
    return G;
}

void check_factors(const Eigen::MatrixXd& A0, const std::vector<TrigPoly>& factors)
{
    require(factors.size() >= 2 && factors.size() <= 4, "chain-length",
            "corrector chains have 2 to 4 factors");
    for (const auto& f : factors) {
        require(f.shape() == Shape::matrix, "shape-mismatch", "chain factors must be matrix-valued");
        require(f.dim() == A0.rows(), "dimension-mismatch", "chain factor dimension differs from A0");
    }
}

Eigen::MatrixXcd crop(const Mat3& m, int d) { return m.topLeftCorner(d, d); }

} // namespace

Eigen::MatrixXcd chain_mean(const Eigen::MatrixXd& A0, const std::vector<TrigPoly>& factors, Path path)
{
    check_factors(A0, factors);
    const int d = static_cast<int>(A0.rows());
    if (path == Path::direct) return crop(direct_chain(A0, factors, nullptr), d);
    const std::vector<TrigPoly> pair{factors.front(), chain_tail(Symbol::psi(A0), factors)};
    return constrained_sum(pair, Contraction::chain, Path::fft);
}

Eigen::MatrixXcd chain_mean_partial(const Eigen::MatrixXd& A0, const std::vector<TrigPoly>& factors,
                                    const std::vector<Mode>& first_modes, Path path)
{
    check_factors(A0, factors);
    const int d = static_cast<int>(A0.rows());
    if (path == Path::direct) return crop(direct_chain(A0, factors, &first_modes), d);
    const TrigPoly G = chain_tail(Symbol::psi(A0), factors);
    std::vector<Eigen::MatrixXcd> terms;
    for (const Mode& k : first_modes) terms.push_back(factors.front().coeff(k) * G.coeff(-k));
    return tree_sum(terms, Eigen::MatrixXcd(Eigen::MatrixXcd::Zero(d, d)));
}

namespace {

struct ChainTerm {
    double sign;
    std::vector<int> orders;
};

const std::vector<ChainTerm>& terms_for(int order)
{
    static const std::vector<ChainTerm> a2{{-1.0, {1, 1}}};
    static const std::vector<ChainTerm> a3{{-1.0, {1, 2}}, {-1.0, {2, 1}}, {1.0, {1, 1, 1}}};
    static const std::vector<ChainTerm> a4{{-1.0, {1, 3}},    {-1.0, {3, 1}},    {-1.0, {2, 2}},
                                           {1.0, {1, 1, 2}},  {1.0, {1, 2, 1}},  {1.0, {2, 1, 1}},
                                           {-1.0, {1, 1, 1, 1}}};
    switch (order) {
    case 2: return a2;
    case 3: return a3;
    default: return a4;
    }
}

bool term_vanishes(const CoefficientExpansion& c, const ChainTerm& t)
{
    for (int o : t.orders)
        if (!c.has_order(o) || c.orders().at(o).coeffs().empty()) return true;
    return false;
}

std::vector<TrigPoly> term_factors(const CoefficientExpansion& c, const ChainTerm& t)
{
    std::vector<TrigPoly> fs;
    for (int o : t.orders) fs.push_back(c.order(o));
    return fs;
}

Eigen::MatrixXcd correction(const CoefficientExpansion& c, int order, Path path,
                            const std::vector<Mode>* sample)
{
    const int d = c.dim();
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(d, d);
    for (const ChainTerm& t : terms_for(order)) {
        if (term_vanishes(c, t)) continue;
        const auto fs = term_factors(c, t);
        acc += t.sign * (sample ? chain_mean_partial(c.A0(), fs, *sample, path)
                                : chain_mean(c.A0(), fs, path));
    }
    return acc;
}

} // namespace

Eigen::MatrixXcd a2_direct(const CoefficientExpansion& c)
{
    return correction(c, 2, Path::direct, nullptr);
}

Eigen::MatrixXcd a2_via_measure(const CoefficientExpansion& c)
{
    const TrigPoly A1 = c.order(1);
    const PeriodicHMeasure mu = h_measure_pair(A1, A1);
    if (mu.empty()) return Eigen::MatrixXcd::Zero(c.dim(), c.dim());
    return -measure_pairing(mu, Symbol::psi(c.A0()), 1.0);
}

Eigen::MatrixXcd a3_correction(const CoefficientExpansion& c, Path path)
{
    return correction(c, 3, path, nullptr);
}

Eigen::MatrixXcd a4_correction(const CoefficientExpansion& c, Path path)
{
    return correction(c, 4, path, nullptr);
}

const Eigen::MatrixXd* CorrectionReport::order(int i) const
{
    switch (i) {
    case 1: return &A1;
    case 2: return &A2;
    case 3: return A3 ? &*A3 : nullptr;
    case 4: return A4 ? &*A4 : nullptr;
    default: return nullptr;
    }
}

double CorrectionReport::worst_cross_check() const
{
    double w = 0.0;
    for (const auto& c : checks) w = std::max(w, c.rel_delta);
    return w;
}

namespace {

double max_abs_imag(const Eigen::MatrixXcd& m) { return m.imag().cwiseAbs().maxCoeff(); }

CrossCheck compare(const std::string& what, const std::string& ref, const Eigen::MatrixXcd& value,
                   const Eigen::MatrixXcd& reference, std::size_t sampled)
{
    CrossCheck cc;
    cc.quantity = what;
    cc.reference = ref;
    cc.sampled_modes = sampled;
    const Eigen::MatrixXcd diff = value - reference;
    cc.max_abs_delta = diff.cwiseAbs().maxCoeff();
    const double scale = std::max({reference.norm(), value.norm(), DBL_MIN});
    cc.rel_delta = diff.norm() / scale;
    return cc;
}

std::vector<Mode> sample_modes(const CoefficientExpansion& c, int count, std::uint64_t seed)
{
    std::set<Mode> support;
    for (const auto& [i, p] : c.orders())
        for (const auto& [k, v] : p.coeffs())
            if (!k.is_zero()) support.insert(k);
    std::vector<Mode> all(support.begin(), support.end());
    std::mt19937_64 rng(seed);
    std::shuffle(all.begin(), all.end(), rng);
    if (static_cast<int>(all.size()) > count) all.resize(static_cast<std::size_t>(count));
    std::sort(all.begin(), all.end());
    return all;
}

} // namespace

CorrectionReport correction_report(const CoefficientExpansion& c, const CorrectionOptions& opts)
{
    require(opts.max_order >= 2 && opts.max_order <= 4, "order-range", "max order must be 2, 3 or 4");
    using clock = std::chrono::steady_clock;
    auto ms_since = [](clock::time_point t0) {
        return std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    };

    CorrectionReport r;
    const int d = c.dim();
    r.dim = d;
    r.truncation = c.truncation();
    r.max_order = opts.max_order;
    r.path = to_string(opts.path);
    r.A1 = Eigen::MatrixXd::Zero(d, d);

    const bool full = c.support_radius() <= opts.full_check_max_K;
    const std::vector<Mode> sample = full ? std::vector<Mode>{} : sample_modes(c, opts.sampled_modes, opts.seed);

    for (int order = 2; order <= opts.max_order; ++order) {
        const std::string name = "A" + std::to_string(order);
        auto t0 = clock::now();
        const Eigen::MatrixXcd value =
            order == 2 ? (opts.path == Path::direct ? a2_direct(c) : correction(c, 2, Path::fft, nullptr))
                       : correction(c, order, opts.path, nullptr);
        r.timings_ms.emplace_back(name, ms_since(t0));
        r.max_imag[static_cast<std::size_t>(order)] = max_abs_imag(value);
        const Eigen::MatrixXd re = value.real();
        if (order == 2) r.A2 = re;
        if (order == 3) r.A3 = re;
        if (order == 4) r.A4 = re;

        if (!opts.cross_check) continue;
        t0 = clock::now();
        if (order == 2) r.checks.push_back(compare(name, "measure", value, a2_via_measure(c), 0));
        const Path other = opts.path == Path::fft ? Path::direct : Path::fft;
        if (full) {
            if (order > 2 || opts.path == Path::fft)
                r.checks.push_back(compare(name, to_string(other), value, correction(c, order, other, nullptr), 0));
        } else if (!sample.empty()) {
            r.checks.push_back(compare(name, std::string(to_string(other)) + "-sampled",
                                       correction(c, order, opts.path, &sample),
                                       correction(c, order, other, &sample), sample.size()));
        }
        r.timings_ms.emplace_back(name + "-cross-check", ms_since(t0));
    }
    return r;
}

} // namespace sah
