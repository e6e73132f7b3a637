#ifndef PEARCEY_ERRORS_HPP
#define PEARCEY_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pearcey {

/// Thrown when a quadrature or linear-algebra step fails to reach its
/// accuracy contract. Carries the offending residual.
class numeric_error : public std::runtime_error {
public:
    numeric_error(const std::string& what, double residual = 0.0)
        : std::runtime_error(what), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

/// Thrown when a degenerate configuration needs a different code path
/// (e.g. coincident start points require the zero-start kernel).
class degeneracy_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

} // namespace pearcey

#endif
