#pragma once

#include <string>
#include <vector>

#include "sah/corrections.hpp"
#include "sah/oracle.hpp"
#include "sahc/document.hpp"

namespace sahc {

inline constexpr const char* report_schema = "sah.report/1";
inline constexpr const char* error_schema = "sah.error/1";

/// Formula vs internal reference path (FFT vs direct, measure route).
inline constexpr double cross_check_tolerance = 1e-10;
/// Oracle fit vs formula, relative Frobenius.
inline constexpr double oracle_tolerance = 1e-3;
/// ||C1||_F bound, relative to max(1, ||A0||_F).
inline constexpr double c1_tolerance = 1e-6;

const char* tool_version();

json report_header(const std::string& command, const std::string& input_path, const std::string& input_bytes);

/// "A1".."A4" blocks: {"real": matrix, "max_imag": x} for the requested orders.
json corrections_json(const sah::CorrectionReport& r, const std::vector<int>& orders);
json cross_checks_json(const sah::CorrectionReport& r);

struct OracleComparison {
    int order = 0;
    double abs_delta = 0.0;
    double rel_delta = 0.0;
    bool pass = false;
};

/// rel = ||C - F||_F / max(||F||_F, 1e-6 ||A0||_F).
OracleComparison compare_order(int order, const Eigen::MatrixXd& formula, const Eigen::MatrixXd& oracle,
                               const Eigen::MatrixXd& A0);

json fit_json(const sah::GammaFit& fit);
json quadrature_json(const sah::QuadratureRun& run);

json error_json(const std::string& name, const std::string& message, int exit_code, const json& details);

/// Two-space indented dump with a trailing newline. Doubles are written with
/// the shortest representation that parses back to the same value.
std::string dump(const json& j);

/// Report with the timings block removed (the part that must be reproducible).
json without_timings(json report);

} // namespace sahc
