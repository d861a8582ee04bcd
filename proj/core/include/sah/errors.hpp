#pragma once

#include <stdexcept>
#include <string>

namespace sah {

/// Precondition or invariant violation. `name()` is a stable kebab-case tag
/// (e.g. "shape-mismatch", "zero-mean") that front-ends can report verbatim.
class ContractViolation : public std::invalid_argument {
public:
    ContractViolation(std::string name, const std::string& what);
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

/// A computation that is well-posed in exact arithmetic but failed numerically
/// (loss of ellipticity, solver non-convergence, ill-conditioned fit).
class NumericalFailure : public std::runtime_error {
public:
    NumericalFailure(std::string name, const std::string& what);
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

class EllipticityError : public NumericalFailure {
public:
    EllipticityError(double gamma, double min_eigenvalue, double required);
    double gamma() const noexcept { return gamma_; }
    double min_eigenvalue() const noexcept { return min_eig_; }

private:
    double gamma_;
    double min_eig_;
};

[[noreturn]] void contract_fail(const std::string& name, const std::string& what);

inline void require(bool cond, const char* name, const std::string& what)
{
    if (!cond) contract_fail(name, what);
}

} // namespace sah
