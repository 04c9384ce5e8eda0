#ifndef CBERRY_ERRORS_HPP
#define CBERRY_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cberry {

// Base class for physics-domain failures. These are expected conditions
// (degenerate spectra, undefined phases), not programming errors.
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// Two tracked cubic roots closer than the resolution threshold; branch
// labels are not meaningful at such points.
class DegenerateRoots : public DomainError {
public:
    explicit DegenerateRoots(const std::string& msg) : DomainError(msg) {}
};

// Reduced density operator has (near-)equal eigenvalues: the Schmidt
// decomposition is non-unique and subsystem phases are undefined.
class DegenerateSchmidt : public DomainError {
public:
    explicit DegenerateSchmidt(const std::string& msg) : DomainError(msg) {}
};

// Denominator of the scale factor vanished (theta = pi/2 on the zero branch).
class SingularScaleFactor : public DomainError {
public:
    explicit SingularScaleFactor(const std::string& msg) : DomainError(msg) {}
};

// Mixed-state phase requested for a state whose reduced operators single
// out no direction (2 Re(conj(alpha) beta) = 0 in the degenerate doublet).
class UndefinedPhase : public DomainError {
public:
    explicit UndefinedPhase(const std::string& msg) : DomainError(msg) {}
};

// Panel doubling did not settle within the relative tolerance.
class NonconvergentQuadrature : public DomainError {
public:
    explicit NonconvergentQuadrature(const std::string& msg) : DomainError(msg) {}
};

// Integrator lost norm beyond the contract.
class NormDrift : public DomainError {
public:
    explicit NormDrift(const std::string& msg) : DomainError(msg) {}
};

// Populations leaked between instantaneous eigenstates: the sweep period is
// too short for the adiabatic description, not a numerical defect.
class AdiabaticityFailure : public DomainError {
public:
    explicit AdiabaticityFailure(const std::string& msg) : DomainError(msg) {}
};

// Instantaneous spectrum closes a gap somewhere on the discretized path.
class DegenerateAlongPath : public DomainError {
public:
    explicit DegenerateAlongPath(const std::string& msg) : DomainError(msg) {}
};

// Schmidt coefficients vary along the path; the subsystem mixed-state phase
// is defined only for nontransition evolutions. We refuse rather than guess.
class TransitionPath : public DomainError {
public:
    explicit TransitionPath(const std::string& msg) : DomainError(msg) {}
};

} // namespace cberry

#endif
