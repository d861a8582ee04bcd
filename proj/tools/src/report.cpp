#include "sahc/report.hpp"

#include <algorithm>

#ifndef SAH_VERSION
#define SAH_VERSION "0.0.0"
#endif

namespace sahc {

const char* tool_version() { return SAH_VERSION; }

json report_header(const std::string& command, const std::string& input_path, const std::string& input_bytes)
{
    json r;
    r["schema"] = report_schema;
    r["tool"] = {{"name", "sahc"}, {"version", tool_version()}};
    r["command"] = command;
    r["input"] = {{"path", input_path}, {"digest", digest(input_bytes)}, {"bytes", input_bytes.size()}};
    return r;
}

json corrections_json(const sah::CorrectionReport& r, const std::vector<int>& orders)
{
    json out = json::object();
    for (int i : orders) {
        const Eigen::MatrixXd* m = r.order(i);
        if (!m) continue;
        out["A" + std::to_string(i)] = {{"real", matrix_json(*m)},
                                         {"max_imag", r.max_imag[static_cast<std::size_t>(i)]}};
    }
    return out;
}

json cross_checks_json(const sah::CorrectionReport& r)
{
    json arr = json::array();
    for (const auto& c : r.checks)
        arr.push_back({{"quantity", c.quantity},
                       {"reference", c.reference},
                       {"max_abs_delta", c.max_abs_delta},
                       {"rel_delta", c.rel_delta},
                       {"sampled_modes", c.sampled_modes},
                       {"pass", c.rel_delta <= cross_check_tolerance}});
    return arr;
}

OracleComparison compare_order(int order, const Eigen::MatrixXd& formula, const Eigen::MatrixXd& oracle,
                               const Eigen::MatrixXd& A0)
{
    OracleComparison c;
    c.order = order;
    c.abs_delta = (oracle - formula).norm();
    c.rel_delta = c.abs_delta / std::max(formula.norm(), 1e-6 * A0.norm());
    c.pass = c.rel_delta <= oracle_tolerance;
    return c;
}

json fit_json(const sah::GammaFit& fit)
{
    json coeffs = json::object();
    for (std::size_t i = 0; i < fit.coefficients.size(); ++i)
        coeffs["C" + std::to_string(i)] = matrix_json(fit.coefficients[i]);
    json samples = json::array();
    for (std::size_t i = 0; i < fit.gammas.size(); ++i)
        samples.push_back({{"gamma", fit.gammas[i]}, {"A_eff", matrix_json(fit.tensors[i])}});
    return {{"degree", static_cast<int>(fit.coefficients.size()) - 1},
            {"coefficients", coeffs},
            {"condition", fit.condition},
            {"fit_residual", fit.fit_residual},
            {"sentinel", fit.sentinel},
            {"max_cell_residual", fit.max_cell_residual},
            {"all_converged", fit.all_converged},
            {"samples", samples}};
}

json quadrature_json(const sah::QuadratureRun& run)
{
    json rows = json::array();
    for (std::size_t i = 0; i < run.n_values.size(); ++i)
        rows.push_back({{"n", run.n_values[i]},
                        {"estimate", complex_json(run.estimates[i])},
                        {"abs_error", run.abs_errors[i]},
                        {"rel_error", run.rel_errors[i]}});
    bool decreasing = true;
    for (std::size_t i = 1; i < run.rel_errors.size(); ++i)
        decreasing = decreasing && run.rel_errors[i] < run.rel_errors[i - 1];
    return {{"closed_form", complex_json(run.closed_form)},
            {"phi_integral", complex_json(run.phi_integral)},
            {"error_scale", run.error_scale},
            {"samples_per_unit", run.samples_per_unit},
            {"grid_points_per_axis", run.grid_points_per_axis},
            {"table", rows},
            {"error_decreasing", decreasing}};
}

json error_json(const std::string& name, const std::string& message, int exit_code, const json& details)
{
    return {{"schema", error_schema},
            {"tool", {{"name", "sahc"}, {"version", tool_version()}}},
            {"error", {{"name", name}, {"message", message}, {"exit_code", exit_code}, {"details", details}}}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json without_timings(json report)
{
    report.erase("timings");
    return report;
}

} // namespace sahc
