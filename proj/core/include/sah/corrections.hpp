#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sah/expansion.hpp"
#include "sah/fourier_ops.hpp"
#include "sah/trig_poly.hpp"

namespace sah {

/// Mean of the corrector chain M1 G M2 G ... G Mp, where G is the Fourier
/// multiplier with symbol Psi(xi) = xi (x) xi / (A0 xi . xi) and Psi(0) = 0:
///
///   sum_{k1+...+kp=0} M1(k1) Psi(k2+...+kp) M2(k2) ... Psi(kp) Mp(kp).
///
/// Every correction tensor is a signed sum of such chains. Path::fft builds
/// the chain right to left with poly_product / multiplier_apply and closes it
/// with constrained_sum; Path::direct evaluates the explicit mode sums
/// (for p = 2, 3, 4) in closed index form.
Eigen::MatrixXcd chain_mean(const Eigen::MatrixXd& A0, const std::vector<TrigPoly>& factors,
                            Path path = Path::fft);

/// Contribution of the listed first-factor modes k1 to chain_mean. Used for
/// sampled cross-checks when the full direct sum is too expensive.
Eigen::MatrixXcd chain_mean_partial(const Eigen::MatrixXd& A0, const std::vector<TrigPoly>& factors,
                                    const std::vector<Mode>& first_modes, Path path);

/// A2 = -sum_k (A1(k) k) (x) (A1(-k) k) / (A0 k . k).
Eigen::MatrixXcd a2_direct(const CoefficientExpansion& c);
/// A2 as minus the pairing of the four-index measure of (A1, A1) with Psi.
Eigen::MatrixXcd a2_via_measure(const CoefficientExpansion& c);

/// A3 = -(T(A1,A2) + T(A2,A1)) + T(A1,A1,A1), T = chain_mean.
Eigen::MatrixXcd a3_correction(const CoefficientExpansion& c, Path path = Path::fft);

/// A4 = -(T(A1,A3) + T(A3,A1) + T(A2,A2))
///      + T(A1,A1,A2) + T(A1,A2,A1) + T(A2,A1,A1)
///      - T(A1,A1,A1,A1).
/// The quartic chain skips the j+k = 0 group through Psi(0) = 0.
Eigen::MatrixXcd a4_correction(const CoefficientExpansion& c, Path path = Path::fft);

struct CrossCheck {
    std::string quantity;     // "A2", "A3", "A4"
    std::string reference;    // "measure", "direct", "direct-sampled"
    double max_abs_delta = 0.0;
    double rel_delta = 0.0;
    std::size_t sampled_modes = 0;  // 0 means the full sum was compared
};

struct CorrectionOptions {
    int max_order = 4;
    Path path = Path::fft;
    bool cross_check = true;
    /// Full direct cross-check up to this truncation, sampled above it.
    int full_check_max_K = 3;
    int sampled_modes = 6;
    std::uint64_t seed = 20240611;
};

/// Effective-tensor corrections A1..A4 (A1 is identically zero).
struct CorrectionReport {
    int dim = 0;
    int truncation = 0;
    int max_order = 2;
    Eigen::MatrixXd A1;
    Eigen::MatrixXd A2;
    std::optional<Eigen::MatrixXd> A3;
    std::optional<Eigen::MatrixXd> A4;
    /// max |imag| entry per order, indexed 1..4 (entry 0 unused).
    std::array<double, 5> max_imag{};
    std::string path;
    std::vector<CrossCheck> checks;
    std::vector<std::pair<std::string, double>> timings_ms;

    const Eigen::MatrixXd* order(int i) const;
    double worst_cross_check() const;
};

CorrectionReport correction_report(const CoefficientExpansion& c,
                                   const CorrectionOptions& opts = {});

} // namespace sah
