#include "sahc/document.hpp"

#include <cinttypes>
#include <cstdio>
#include <set>

#include "sah/errors.hpp"
#include "sah/symbol.hpp"

namespace sahc {

CliError::CliError(std::string name, const std::string& what, int exit_code, json details)
    : std::runtime_error(what), name_(std::move(name)), exit_code_(exit_code), details_(std::move(details))
{
}

namespace {

[[noreturn]] void schema_fail(const std::string& where, const std::string& what)
{
    throw CliError("schema", where + ": " + what, 2, json{{"field", where}});
}

const json& field(const json& j, const char* key, const std::string& where)
{
    if (!j.is_object()) schema_fail(where, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw CliError("missing-field", where + "." + key + " is required", 2, json{{"field", where + "." + key}});
    return *it;
}

double number(const json& j, const std::string& where)
{
    if (!j.is_number()) schema_fail(where, "expected a number");
    return j.get<double>();
}

int integer(const json& j, const std::string& where)
{
    if (!j.is_number_integer()) schema_fail(where, "expected an integer");
    return j.get<int>();
}

bool boolean(const json& j, const char* key, bool fallback, const std::string& where)
{
    if (!j.is_object() || !j.contains(key)) return fallback;
    if (!j[key].is_boolean()) schema_fail(where + "." + key, "expected true or false");
    return j[key].get<bool>();
}

// Accepts a bare number only for 1x1 results.
Eigen::MatrixXd real_matrix(const json& j, int rows, int cols, const std::string& where)
{
    if (j.is_number()) {
        if (rows != 1 || cols != 1) schema_fail(where, "expected a " + std::to_string(rows) + "x" + std::to_string(cols) + " matrix");
        return Eigen::MatrixXd::Constant(1, 1, j.get<double>());
    }
    if (!j.is_array() || static_cast<int>(j.size()) != rows)
        schema_fail(where, "expected " + std::to_string(rows) + " rows");
    Eigen::MatrixXd m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        const json& row = j[static_cast<std::size_t>(r)];
        if (cols == 1 && row.is_number()) {
            m(r, 0) = row.get<double>();
            continue;
        }
        if (!row.is_array() || static_cast<int>(row.size()) != cols)
            schema_fail(where, "row " + std::to_string(r) + " must have " + std::to_string(cols) + " entries");
        for (int c = 0; c < cols; ++c) m(r, c) = number(row[static_cast<std::size_t>(c)], where);
    }
    return m;
}

Eigen::VectorXd real_vector(const json& j, int n, const std::string& where)
{
    if (!j.is_array() || static_cast<int>(j.size()) != n) schema_fail(where, "expected " + std::to_string(n) + " numbers");
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = number(j[static_cast<std::size_t>(i)], where);
    return v;
}

sah::Mode mode(const json& j, int d, const std::string& where)
{
    if (!j.is_array() || static_cast<int>(j.size()) != d)
        schema_fail(where, "k must list " + std::to_string(d) + " integers");
    sah::Mode k;
    for (int i = 0; i < d; ++i) k[i] = integer(j[static_cast<std::size_t>(i)], where);
    return k;
}

std::vector<CoeffEntry> entries(const json& list, int d, int rows, int cols, const std::string& where)
{
    if (!list.is_array()) schema_fail(where, "expected a list of {k, re, im} entries");
    std::vector<CoeffEntry> out;
    std::set<sah::Mode> seen;
    for (std::size_t n = 0; n < list.size(); ++n) {
        const std::string at = where + "[" + std::to_string(n) + "]";
        const json& e = list[n];
        CoeffEntry ce;
        ce.k = mode(field(e, "k", at), d, at + ".k");
        if (!seen.insert(ce.k).second)
            throw CliError("duplicate-mode", at + ": mode " + ce.k.str(d) + " is listed twice", 2,
                           json{{"field", at}, {"k", ce.k.str(d)}});
        const Eigen::MatrixXd re = real_matrix(field(e, "re", at), rows, cols, at + ".re");
        Eigen::MatrixXd im = Eigen::MatrixXd::Zero(rows, cols);
        if (e.contains("im")) im = real_matrix(e["im"], rows, cols, at + ".im");
        ce.value = re.cast<sah::cplx>() + sah::cplx(0, 1) * im.cast<sah::cplx>();
        out.push_back(std::move(ce));
    }
    return out;
}

int dimension(const json& j)
{
    const int d = integer(field(j, "dimension", "$"), "$.dimension");
    if (d < 1 || d > 3) throw CliError("dimension", "dimension must be 1, 2 or 3", 2, json{{"dimension", d}});
    return d;
}

sah::TrigPoly to_poly(const std::vector<CoeffEntry>& list, int d, sah::Shape shape, unsigned flags, bool complete)
{
    int K = 1;
    for (const auto& e : list) K = std::max(K, e.k.max_norm());
    sah::TrigPoly p(sah::Lattice(d, K), shape, flags);
    for (const auto& e : list) p.set(e.k, e.value);
    return complete ? p.hermitian_completion() : p;
}

json entry_json(const CoeffEntry& e, int d, bool scalar)
{
    json k = json::array();
    for (int i = 0; i < d; ++i) k.push_back(e.k[i]);
    const Eigen::MatrixXd re = e.value.real(), im = e.value.imag();
    json out{{"k", k}};
    if (scalar) {
        out["re"] = re(0, 0);
        out["im"] = im(0, 0);
    } else {
        out["re"] = matrix_json(re);
        out["im"] = matrix_json(im);
    }
    return out;
}

} // namespace

InputDocument parse_input(const json& j)
{
    InputDocument doc;
    doc.dimension = dimension(j);
    const int d = doc.dimension;
    doc.A0 = real_matrix(field(j, "A0", "$"), d, d, "$.A0");
    if (j.contains("orders")) {
        const json& ord = j["orders"];
        if (!ord.is_object()) schema_fail("$.orders", "expected an object keyed by order");
        for (const auto& [key, list] : ord.items()) {
            int i = 0;
            try {
                std::size_t used = 0;
                i = std::stoi(key, &used);
                if (used != key.size()) throw std::invalid_argument(key);
            } catch (const std::exception&) {
                schema_fail("$.orders." + key, "order keys must be 1, 2 or 3");
            }
            if (i < 1 || i > 3)
                throw CliError("order-range", "order " + key + " is outside 1..3", 2, json{{"order", key}});
            doc.orders[i] = entries(list, d, d, d, "$.orders." + key);
        }
    }
    if (j.contains("flags")) {
        doc.hermitian_complete = boolean(j["flags"], "hermitian_complete", true, "$.flags");
        doc.symmetric_required = boolean(j["flags"], "symmetric_required", true, "$.flags");
    }
    return doc;
}

json to_json(const InputDocument& doc)
{
    json orders = json::object();
    for (const auto& [i, list] : doc.orders) {
        json arr = json::array();
        for (const auto& e : list) arr.push_back(entry_json(e, doc.dimension, false));
        orders[std::to_string(i)] = arr;
    }
    return json{{"dimension", doc.dimension},
                {"A0", matrix_json(doc.A0)},
                {"orders", orders},
                {"flags", {{"hermitian_complete", doc.hermitian_complete},
                           {"symmetric_required", doc.symmetric_required}}}};
}

sah::CoefficientExpansion build_expansion(const InputDocument& doc)
{
    std::map<int, sah::TrigPoly> orders;
    for (const auto& [i, list] : doc.orders) {
        if (list.empty()) continue;
        orders.emplace(i, to_poly(list, doc.dimension, sah::Shape::matrix,
                                  sah::TrigPoly::real | sah::TrigPoly::zero_mean, doc.hermitian_complete));
    }
    return sah::CoefficientExpansion(doc.A0, std::move(orders), doc.symmetric_required);
}

InputDocument document_from(const sah::CoefficientExpansion& c)
{
    InputDocument doc;
    doc.dimension = c.dim();
    doc.A0 = c.A0();
    doc.hermitian_complete = false;
    for (const auto& [i, p] : c.orders()) {
        auto& list = doc.orders[i];
        for (const auto& [k, v] : p.coeffs()) list.push_back({k, v});
    }
    return doc;
}

SequenceDocument parse_sequence(const json& j)
{
    SequenceDocument doc;
    doc.dimension = dimension(j);
    const int d = doc.dimension;
    doc.sequence = entries(field(j, "sequence", "$"), d, 1, 1, "$.sequence");
    if (j.contains("flags")) doc.hermitian_complete = boolean(j["flags"], "hermitian_complete", true, "$.flags");
    if (j.contains("symbols")) {
        const json& s = j["symbols"];
        if (!s.is_array() || s.empty()) schema_fail("$.symbols", "expected a non-empty list");
        for (const auto& x : s) doc.symbols.push_back(x);
    } else {
        doc.symbols.push_back(json{{"kind", "constant"}, {"value", 1.0}});
    }
    if (j.contains("window")) {
        const json& w = j["window"];
        sah::BumpWindow bw;
        bw.center = real_vector(field(w, "center", "$.window"), d, "$.window.center");
        bw.radius = number(field(w, "radius", "$.window"), "$.window.radius");
        if (!(bw.radius > 0.0)) schema_fail("$.window.radius", "radius must be positive");
        doc.window = bw;
    }
    if (j.contains("phi_integral")) doc.phi_integral = number(j["phi_integral"], "$.phi_integral");
    return doc;
}

sah::TrigPoly build_sequence(const SequenceDocument& doc)
{
    sah::TrigPoly u = to_poly(doc.sequence, doc.dimension, sah::Shape::scalar, sah::TrigPoly::zero_mean,
                              doc.hermitian_complete);
    u.validate();
    return u;
}

sah::Symbol build_symbol(const json& spec, int d)
{
    if (!spec.is_object() || !spec.contains("kind") || !spec["kind"].is_string())
        throw CliError("unsupported-symbol", "symbol spec needs a string \"kind\"", 2, json{{"symbol", spec}});
    const std::string kind = spec["kind"].get<std::string>();
    if (kind == "constant") {
        sah::cplx v{1.0, 0.0};
        if (spec.contains("value")) v = number(spec["value"], "$.symbols.value");
        if (spec.contains("re")) v.real(number(spec["re"], "$.symbols.re"));
        if (spec.contains("im")) v.imag(number(spec["im"], "$.symbols.im"));
        return sah::Symbol::constant(d, v);
    }
    if (kind == "psi0") {
        const Eigen::MatrixXd A0 = real_matrix(field(spec, "A0", "$.symbols"), d, d, "$.symbols.A0");
        const Eigen::VectorXd a = real_vector(field(spec, "a", "$.symbols"), d, "$.symbols.a");
        const Eigen::VectorXd b = real_vector(field(spec, "b", "$.symbols"), d, "$.symbols.b");
        return sah::Symbol::psi_contracted(A0, a, b);
    }
    if (kind == "ratio") {
        const Eigen::MatrixXd N = real_matrix(field(spec, "N", "$.symbols"), d, d, "$.symbols.N");
        const Eigen::MatrixXd D = real_matrix(field(spec, "D", "$.symbols"), d, d, "$.symbols.D");
        return sah::Symbol::quadratic_ratio(N, D);
    }
    throw CliError("unsupported-symbol", "unknown symbol kind \"" + kind + "\" (constant, psi0, ratio)", 2,
                   json{{"kind", kind}});
}

std::string digest(const std::string& bytes)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016" PRIx64, h);
    return buf;
}

json matrix_json(const Eigen::MatrixXd& m)
{
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(row);
    }
    return rows;
}

json complex_json(sah::cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

} // namespace sahc
