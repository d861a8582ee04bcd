#include "sah/errors.hpp"

#include <sstream>

namespace sah {

ContractViolation::ContractViolation(std::string name, const std::string& what)
    : std::invalid_argument(name + ": " + what), name_(std::move(name))
{
}

NumericalFailure::NumericalFailure(std::string name, const std::string& what)
    : std::runtime_error(name + ": " + what), name_(std::move(name))
{
}

namespace {
std::string ellipticity_message(double gamma, double min_eig, double required)
{
    std::ostringstream os;
    os.precision(17);
    os << "coefficient loses ellipticity at gamma=" << gamma << " (min eigenvalue " << min_eig
       << " < " << required << ")";
    return os.str();
}
} // namespace

EllipticityError::EllipticityError(double gamma, double min_eigenvalue, double required)
    : NumericalFailure("ellipticity", ellipticity_message(gamma, min_eigenvalue, required)),
      gamma_(gamma), min_eig_(min_eigenvalue)
{
}

void contract_fail(const std::string& name, const std::string& what)
{
    throw ContractViolation(name, what);
}

} // namespace sah
