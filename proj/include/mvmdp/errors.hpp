#pragma once

#include <stdexcept>
#include <string>

namespace mvmdp {

/// Base class for all failures raised by the solver layers.
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/// A linear system that should be uniquely solvable was not (typically a
/// multichain transition structure, which makes I - P + ee^T singular).
class SingularSystem : public SolverError {
public:
    explicit SingularSystem(const std::string& what) : SolverError(what) {}
};

/// Policy iteration revisited a policy without improving the average cost.
class CycleDetected : public SolverError {
public:
    explicit CycleDetected(const std::string& what) : SolverError(what) {}
};

/// A consistency identity that must hold between two independently computed
/// quantities was violated beyond tolerance.
class IdentityViolation : public SolverError {
public:
    explicit IdentityViolation(const std::string& what) : SolverError(what) {}
};

/// An operation that needs a nonempty search domain received an empty one.
class EmptyDomain : public SolverError {
public:
    explicit EmptyDomain(const std::string& what) : SolverError(what) {}
};

/// An iterative routine exceeded its iteration budget.
class MaxIterationsExceeded : public SolverError {
public:
    explicit MaxIterationsExceeded(const std::string& what) : SolverError(what) {}
};

/// Exhaustive enumeration was requested for a policy space too large to walk.
class PolicySpaceTooLarge : public SolverError {
public:
    explicit PolicySpaceTooLarge(const std::string& what) : SolverError(what) {}
};

/// An optimality certificate contradicts the solution it was derived from.
class InconsistentCertificate : public SolverError {
public:
    explicit InconsistentCertificate(const std::string& what) : SolverError(what) {}
};

/// Curve decomposition produced more segments than deterministic policies,
/// which is impossible for a correct decomposition.
class SegmentLimitExceeded : public SolverError {
public:
    explicit SegmentLimitExceeded(const std::string& what) : SolverError(what) {}
};

}  // namespace mvmdp
