#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "json.hpp"
#include "sah/expansion.hpp"
#include "sah/hmeasure.hpp"
#include "sah/oracle.hpp"

namespace sahc {

using json = nlohmann::json;

/// Failure that maps directly onto a process exit code and an error object.
class CliError : public std::runtime_error {
public:
    CliError(std::string name, const std::string& what, int exit_code = 2, json details = json::object());
    const std::string& name() const noexcept { return name_; }
    int exit_code() const noexcept { return exit_code_; }
    const json& details() const noexcept { return details_; }

private:
    std::string name_;
    int exit_code_;
    json details_;
};

struct CoeffEntry {
    sah::Mode k;
    sah::Tensor value;
};

/// Coefficient file: A0 plus Fourier data of A1..A3.
///
///   { "dimension": 2, "A0": [[1,0],[0,1]],
///     "orders": { "1": [ {"k": [1,0], "re": [[..],[..]], "im": [[..],[..]]} ] },
///     "flags": { "hermitian_complete": true, "symmetric_required": true } }
///
/// With hermitian_complete the file may list only one of each +-k pair.
struct InputDocument {
    int dimension = 1;
    Eigen::MatrixXd A0;
    std::map<int, std::vector<CoeffEntry>> orders;
    bool hermitian_complete = true;
    bool symmetric_required = true;
};

InputDocument parse_input(const json& j);
json to_json(const InputDocument& doc);

/// Expansion after Hermitian completion; core invariants are enforced here.
sah::CoefficientExpansion build_expansion(const InputDocument& doc);
/// Full-lattice document (no completion needed on reload).
InputDocument document_from(const sah::CoefficientExpansion& c);

/// Scalar sequence file for `limit`.
///
///   { "dimension": 1, "sequence": [ {"k": [1], "re": 1.0} ],
///     "symbols": [ {"kind": "constant", "value": 1.0} ],
///     "window": {"center": [0.5], "radius": 0.4}, "phi_integral": 1.0 }
///
/// Symbols: "constant" (value or re/im), "psi0" (A0, a, b: a . Psi(xi) b),
/// "ratio" (N, D: xi^T N xi / xi^T D xi). One symbol is shared by all factors.
struct SequenceDocument {
    int dimension = 1;
    std::vector<CoeffEntry> sequence;
    bool hermitian_complete = true;
    std::vector<json> symbols;
    std::optional<sah::BumpWindow> window;
    double phi_integral = 1.0;
};

SequenceDocument parse_sequence(const json& j);
sah::TrigPoly build_sequence(const SequenceDocument& doc);
sah::Symbol build_symbol(const json& spec, int dim);

/// 64-bit FNV-1a of the raw bytes, as "fnv1a64:<16 hex digits>".
std::string digest(const std::string& bytes);

json matrix_json(const Eigen::MatrixXd& m);
json complex_json(sah::cplx z);

} // namespace sahc
