#include "sahc/commands.hpp"

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <climits>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "sah/errors.hpp"
#include "sahc/document.hpp"
#include "sahc/report.hpp"

namespace sahc {

namespace {

using clock_type = std::chrono::steady_clock;

double ms_since(clock_type::time_point t0)
{
    return std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
}

struct Options {
    std::string input;
    std::string output;
    std::string orders = "2,3,4";
    std::string method = "both";
    std::string gammas;
    int p = 2;
    std::string check_n;
    int k_solver = 0;
    std::uint64_t seed = 20240611;
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CliError("io-error", "cannot read " + path, exit_invalid, json{{"path", path}});
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json parse_json(const std::string& bytes)
{
    try {
        return json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw CliError("parse-error", e.what(), exit_invalid, json{{"byte", e.byte}});
    }
}

void emit(const json& report, const Options& o, std::ostream& out)
{
    const std::string text = dump(report);
    if (o.output.empty()) {
        out << text;
        return;
    }
    std::ofstream f(o.output, std::ios::binary);
    if (!f) throw CliError("io-error", "cannot write " + o.output, exit_invalid, json{{"path", o.output}});
    f << text;
}

std::vector<int> requested_orders(const std::string& csv)
{
    std::vector<int> ords = parse_int_csv(csv, "--orders");
    std::set<int> uniq(ords.begin(), ords.end());
    for (int i : uniq)
        if (i < 1 || i > 4)
            throw CliError("order-range", "--orders accepts 1, 2, 3 and 4", exit_invalid, json{{"order", i}});
    return {uniq.begin(), uniq.end()};
}

sah::CorrectionReport formula(const sah::CoefficientExpansion& c, const std::vector<int>& orders, const Options& o)
{
    sah::CorrectionOptions co;
    co.max_order = std::max(2, orders.empty() ? 2 : orders.back());
    co.seed = o.seed;
    return sah::correction_report(c, co);
}

json timings_json(const sah::CorrectionReport& r)
{
    json t = json::object();
    for (const auto& [name, ms] : r.timings_ms) t[name] = ms;
    return t;
}

bool checks_pass(const sah::CorrectionReport& r)
{
    return r.checks.empty() || r.worst_cross_check() <= cross_check_tolerance;
}

int cmd_compute(const Options& o, std::ostream& out)
{
    const auto t0 = clock_type::now();
    const std::string bytes = read_file(o.input);
    const auto c = build_expansion(parse_input(parse_json(bytes)));
    std::vector<int> orders = requested_orders(o.orders);
    if (std::find(orders.begin(), orders.end(), 1) == orders.end()) orders.insert(orders.begin(), 1);

    const auto rep = formula(c, orders, o);
    json r = report_header("compute", o.input, bytes);
    r["input"]["dimension"] = c.dim();
    r["input"]["truncation"] = c.truncation();
    r["input"]["support_radius"] = c.support_radius();
    r["options"] = {{"orders", orders}, {"path", rep.path}, {"seed", o.seed}};
    r["corrections"] = corrections_json(rep, orders);
    const bool ok = checks_pass(rep);
    r["verification"] = {{"cross_checks", cross_checks_json(rep)},
                         {"tolerance", cross_check_tolerance},
                         {"pass", ok}};
    r["timings"] = timings_json(rep);
    r["timings"]["total"] = ms_since(t0);
    if (!ok) {
        r["error"] = error_json("cross-check", "formula paths disagree", exit_cross_check,
                                json{{"worst_rel_delta", rep.worst_cross_check()}})["error"];
    }
    emit(r, o, out);
    return ok ? exit_ok : exit_cross_check;
}

int cmd_verify(const Options& o, std::ostream& out)
{
    const auto t0 = clock_type::now();
    const std::string bytes = read_file(o.input);
    const auto c = build_expansion(parse_input(parse_json(bytes)));
    std::vector<int> orders = requested_orders(o.orders);
    orders.erase(std::remove(orders.begin(), orders.end(), 1), orders.end());
    if (orders.empty()) orders = {2};

    if (o.method != "cell" && o.method != "harmonic1d" && o.method != "both")
        throw CliError("usage", "--method must be cell, harmonic1d or both", exit_invalid, json{{"method", o.method}});
    if (o.method == "harmonic1d" && c.dim() != 1)
        throw CliError("dimension", "the harmonic-mean oracle is one-dimensional", exit_invalid,
                       json{{"dimension", c.dim()}});

    const std::vector<double> gammas = o.gammas.empty() ? sah::default_gamma_grid()
                                                        : parse_double_csv(o.gammas, "--gammas");
    const std::set<double> distinct(gammas.begin(), gammas.end());
    const int degree = std::min(7, static_cast<int>(distinct.size()) - 2);
    if (degree < orders.back() + 1)
        throw CliError("gamma-grid",
                       "need at least " + std::to_string(orders.back() + 3) +
                           " distinct gammas to fit up to order " + std::to_string(orders.back()) +
                           " with a sentinel term",
                       exit_invalid, json{{"distinct_gammas", distinct.size()}});
    for (double g : gammas) sah::check_ellipticity(c, g);

    const auto rep = formula(c, orders, o);
    json r = report_header("verify", o.input, bytes);
    r["input"]["dimension"] = c.dim();
    r["input"]["truncation"] = c.truncation();
    r["input"]["support_radius"] = c.support_radius();
    const int K_solver = std::max(0, o.k_solver);
    r["options"] = {{"orders", orders}, {"method", o.method}, {"gammas", gammas},
                    {"fit_degree", degree}, {"seed", o.seed}};
    if (K_solver > 0) r["options"]["K_solver"] = K_solver;
    r["corrections"] = corrections_json(rep, orders);
    r["timings"] = timings_json(rep);

    bool ok = checks_pass(rep);
    json oracles = json::array();
    std::vector<sah::OracleMethod> methods;
    if (o.method != "harmonic1d") methods.push_back(sah::OracleMethod::cell);
    if (o.method != "cell") {
        if (c.dim() == 1) methods.push_back(sah::OracleMethod::harmonic1d);
        else oracles.push_back({{"method", "harmonic1d"}, {"skipped", "requires dimension 1"}});
    }
    for (auto m : methods) {
        const auto t1 = clock_type::now();
        sah::GammaFitOptions fo;
        fo.method = m;
        fo.K_solver = K_solver;
        fo.degree = degree;
        const sah::GammaFit fit = sah::gamma_fit(c, gammas, fo);
        if (!fit.all_converged)
            throw CliError("non-convergence", "cell problem did not reach the residual tolerance", exit_numerical,
                           json{{"max_cell_residual", fit.max_cell_residual}, {"K_solver", fit.K_solver}});
        json cmp = json::array();
        for (int i : orders) {
            const auto oc = compare_order(i, *rep.order(i), fit.coefficients[static_cast<std::size_t>(i)], c.A0());
            ok = ok && oc.pass;
            cmp.push_back({{"order", i},
                           {"formula", matrix_json(*rep.order(i))},
                           {"oracle", matrix_json(fit.coefficients[static_cast<std::size_t>(i)])},
                           {"abs_delta", oc.abs_delta},
                           {"rel_delta", oc.rel_delta},
                           {"pass", oc.pass}});
        }
        const double c1 = fit.coefficients[1].norm();
        const bool c1_ok = c1 <= c1_tolerance * std::max(1.0, c.A0().norm());
        ok = ok && c1_ok;
        json entry = {{"method", sah::to_string(m)},
                      {"fit", fit_json(fit)},
                      {"C1_norm", c1},
                      {"C1_pass", c1_ok},
                      {"comparison", cmp}};
        if (m == sah::OracleMethod::cell) {
            entry["K_solver"] = fit.K_solver;
            entry["refinements"] = fit.refinements;
        }
        oracles.push_back(entry);
        r["timings"][std::string("oracle-") + sah::to_string(m)] = ms_since(t1);
    }
    r["verification"] = {{"cross_checks", cross_checks_json(rep)},
                         {"cross_check_tolerance", cross_check_tolerance},
                         {"oracle_tolerance", oracle_tolerance},
                         {"c1_tolerance", c1_tolerance},
                         {"oracles", oracles},
                         {"pass", ok}};
    r["timings"]["total"] = ms_since(t0);
    if (!ok) r["error"] = error_json("cross-check", "oracle or path comparison outside tolerance", exit_cross_check, json::object())["error"];
    emit(r, o, out);
    return ok ? exit_ok : exit_cross_check;
}

int cmd_limit(const Options& o, std::ostream& out)
{
    const auto t0 = clock_type::now();
    const std::string bytes = read_file(o.input);
    const SequenceDocument doc = parse_sequence(parse_json(bytes));
    const sah::TrigPoly u = build_sequence(doc);
    if (o.p < 2 || o.p > sah::max_product_order)
        throw CliError("product-order", "--p must lie in 2..6", exit_invalid, json{{"p", o.p}});
    const auto p = static_cast<std::size_t>(o.p);
    if (doc.symbols.size() != 1 && doc.symbols.size() != p)
        throw CliError("symbol-count", "give one symbol or exactly p symbols", exit_invalid,
                       json{{"symbols", doc.symbols.size()}, {"p", o.p}});

    sah::LimitSpec spec;
    json used = json::array();
    for (std::size_t i = 0; i < p; ++i) {
        const json& s = doc.symbols.size() == 1 ? doc.symbols[0] : doc.symbols[i];
        spec.factors.push_back({u, build_symbol(s, doc.dimension)});
        used.push_back(s);
    }
    const sah::cplx value = sah::p_product_limit(spec, doc.phi_integral)(0, 0);

    json r = report_header("limit", o.input, bytes);
    r["input"]["dimension"] = doc.dimension;
    r["input"]["support_radius"] = u.support_radius();
    r["options"] = {{"p", o.p}};
    r["limit"] = {{"p", o.p}, {"symbols", used}, {"phi_integral", doc.phi_integral}, {"value", complex_json(value)}};
    r["timings"] = json::object();
    if (!o.check_n.empty()) {
        const std::vector<int> ns = parse_int_csv(o.check_n, "--check-n");
        sah::BumpWindow w;
        if (doc.window) {
            w = *doc.window;
        } else {
            w.center = Eigen::VectorXd::Constant(doc.dimension, 0.5);
            w.radius = 0.4;
        }
        r["options"]["check_n"] = ns;
        const auto t1 = clock_type::now();
        const sah::QuadratureRun run = sah::finite_n_limit(spec, {w}, ns);
        r["timings"]["quadrature"] = ms_since(t1);
        json q = quadrature_json(run);
        std::vector<double> centre(w.center.data(), w.center.data() + w.center.size());
        q["window"] = {{"kind", "bump"}, {"center", centre}, {"radius", w.radius}};
        r["quadrature"] = q;
    }
    r["timings"]["total"] = ms_since(t0);
    emit(r, o, out);
    return exit_ok;
}

int fail(const std::string& name, const std::string& msg, int code, const json& details, const Options& o,
         std::ostream& err)
{
    const json e = error_json(name, msg, code, details);
    err << dump(e);
    if (!o.output.empty()) {
        std::ofstream f(o.output, std::ios::binary);
        if (f) f << dump(e);
    }
    return code;
}

} // namespace

std::vector<int> parse_int_csv(const std::string& csv, const char* flag)
{
    std::vector<int> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        char* end = nullptr;
        errno = 0;
        const long v = std::strtol(tok.c_str(), &end, 10);
        if (tok.empty() || *end != '\0' || errno != 0 || v < INT32_MIN || v > INT32_MAX)
            throw CliError("usage", std::string(flag) + ": \"" + tok + "\" is not an integer", exit_invalid,
                           json{{"flag", flag}, {"value", csv}});
        out.push_back(static_cast<int>(v));
    }
    if (out.empty()) throw CliError("usage", std::string(flag) + " is empty", exit_invalid, json{{"flag", flag}});
    return out;
}

std::vector<double> parse_double_csv(const std::string& csv, const char* flag)
{
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (tok.empty() || *end != '\0' || !std::isfinite(v))
            throw CliError("usage", std::string(flag) + ": \"" + tok + "\" is not a number", exit_invalid,
                           json{{"flag", flag}, {"value", csv}});
        out.push_back(v);
    }
    if (out.empty()) throw CliError("usage", std::string(flag) + " is empty", exit_invalid, json{{"flag", flag}});
    return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Options o;
    CLI::App app{"Small-amplitude homogenisation corrections and H-measure product limits", "sahc"};
    app.require_subcommand(1);
    app.set_version_flag("--version", tool_version());

    auto* compute = app.add_subcommand("compute", "correction tensors A2..A4 from a coefficient file");
    auto* verify = app.add_subcommand("verify", "compare the corrections with cell-problem / harmonic-mean fits");
    auto* limit = app.add_subcommand("limit", "closed-form p-product limit of a scalar sequence");
    for (auto* sc : {compute, verify, limit}) {
        sc->add_option("--input", o.input, "input JSON document")->required();
        sc->add_option("--output", o.output, "report path (stdout if omitted)");
    }
    for (auto* sc : {compute, verify}) {
        sc->add_option("--orders", o.orders, "comma-separated correction orders")->capture_default_str();
        sc->add_option("--seed", o.seed, "seed for sampled cross-checks")->capture_default_str();
    }
    verify->add_option("--method", o.method, "cell, harmonic1d or both")->capture_default_str();
    verify->add_option("--gammas", o.gammas, "comma-separated gamma grid");
    verify->add_option("--k-solver", o.k_solver, "cell-problem truncation (default 4x data support)");
    limit->add_option("--p", o.p, "number of factors (2..6)")->capture_default_str();
    limit->add_option("--check-n", o.check_n, "comma-separated n for the finite-n quadrature");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return exit_ok;
        }
        return fail("usage", e.what(), exit_invalid, json::object(), o, err);
    }

    try {
        if (*compute) return cmd_compute(o, out);
        if (*verify) return cmd_verify(o, out);
        return cmd_limit(o, out);
    } catch (const CliError& e) {
        return fail(e.name(), e.what(), e.exit_code(), e.details(), o, err);
    } catch (const sah::ContractViolation& e) {
        return fail(e.name(), e.what(), exit_invalid, json::object(), o, err);
    } catch (const sah::EllipticityError& e) {
        return fail(e.name(), e.what(), exit_numerical,
                    json{{"gamma", e.gamma()}, {"min_eigenvalue", e.min_eigenvalue()}}, o, err);
    } catch (const sah::NumericalFailure& e) {
        return fail(e.name(), e.what(), exit_numerical, json::object(), o, err);
    } catch (const std::exception& e) {
        return fail("internal", e.what(), exit_internal, json::object(), o, err);
    }
}

} // namespace sahc
