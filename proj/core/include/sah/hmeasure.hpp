#pragma once

#include <map>
#include <optional>
#include <vector>

#include "sah/fourier_ops.hpp"
#include "sah/symbol.hpp"
#include "sah/trig_poly.hpp"

namespace sah {

/// One Dirac mass in direction space. The direction is stored as the reduced
/// integer mode k/gcd(k), which identifies k/|k| exactly.
struct Atom {
    Mode direction;
    Tensor weight;

    Eigen::VectorXd unit_direction(int dim) const;
};

/// Periodic H-measure: finitely many atoms in xi times Lebesgue measure in x.
///
/// Tensor weights are stored unfolded as matrices. For a pair measure built
/// from u and v the weight at direction xi is vec(u^(k)) vec(v^(-k))^T summed
/// over the modes k with k/|k| = xi, where vec() flattens row-major. For two
/// matrix-valued sequences this puts W^{iklj} = u^(k)_{ik} v^(-k)_{lj} at
/// row i*d+k, column l*d+j.
class PeriodicHMeasure {
public:
    PeriodicHMeasure(int dim, int rank, int rows, int cols);

    int dim() const { return dim_; }
    int rank() const { return rank_; }
    int weight_rows() const { return rows_; }
    int weight_cols() const { return cols_; }

    bool empty() const { return atoms_.empty(); }
    std::size_t size() const { return atoms_.size(); }
    /// Atoms in lexicographic order of their reduced direction.
    std::vector<Atom> atoms() const;
    /// Weight at a direction (any positive multiple of the stored mode), zero if absent.
    Tensor weight(const Mode& direction) const;
    /// Sum of all weights.
    Tensor total_mass() const;

    /// Accumulates a contribution at mode k (merged with every k' parallel to k).
    void add(const Mode& k, const Tensor& w);
    /// Tree-sums pending contributions per direction and drops exactly-zero atoms.
    void finalize();

private:
    int dim_;
    int rank_;
    int rows_;
    int cols_;
    std::map<Mode, std::vector<Tensor>> pending_;
    std::map<Mode, Tensor> atoms_;
};

/// mu = sum_k |u^(k)|^2 delta_{k/|k|} (x) Lebesgue.
PeriodicHMeasure h_measure_scalar(const TrigPoly& u);

/// mu_uv = sum_k u^(k) (x) v^(-k) delta_{k/|k|} (x) Lebesgue.
PeriodicHMeasure h_measure_pair(const TrigPoly& u, const TrigPoly& v);

/// sum over atoms of contraction(weight, s(direction)), times x_weight (= integral of phi).
///
/// Supported pairings (weight unfolded as above):
///  - scalar symbol: every atom weight is scaled by s;
///  - matrix symbol on a rank-2 weight: full contraction sum_ab W_ab S_ab;
///  - matrix symbol on a rank-4 weight: middle-index contraction
///    R_ij = sum_kl W^{iklj} S_kl.
Tensor measure_pairing(const PeriodicHMeasure& m, const Symbol& s, cplx x_weight);

struct LimitFactor {
    TrigPoly sequence;
    Symbol symbol;
};

struct LimitSpec {
    std::vector<LimitFactor> factors;
    Contraction contraction = Contraction::chain;
};

constexpr int max_product_order = 6;

/// Limit of the integral of the product of A_{psi_i}(phi_i u_n^i), i = 1..p,
/// for periodic zero-mean sequences:
///   sum_{k_1+...+k_p=0} prod_i psi_i(k_i) u^i(k_i)  *  phi_integral.
Tensor p_product_limit(const LimitSpec& spec, cplx phi_integral, Path path = Path::fft);

/// Cubic measure: atoms at k/|k|, k != 0, with weight
///   f1(k) * sum_{l+m=-k} f2(l) f3(m),   f_i = A_{s_i} u.
PeriodicHMeasure mu_vw_cubic(const TrigPoly& u, const Symbol& s1, const Symbol& s2,
                             const Symbol& s3, Contraction c = Contraction::chain);

/// Quartic measure of v_n = f1 f2 and conj(w_n) = f3 f4: atoms at
/// (j+k)/|j+k| for j+k != 0. The excluded j+k = 0 group, v * conj(w) with
/// v and conj(w) the weak limits, is returned separately.
struct QuarticMeasure {
    PeriodicHMeasure atoms;
    Tensor weak_limit_term;
};

QuarticMeasure mu_vw_quartic(const TrigPoly& u, const Symbol& s1, const Symbol& s2,
                             const Symbol& s3, const Symbol& s4,
                             Contraction c = Contraction::chain);

} // namespace sah
