#ifndef RELAXLAB_ERRORS_HPP
#define RELAXLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace relax {

// Exit-code contract: config errors map to 1, numeric failures to 2,
// certificate failures to 3.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericFailure : std::runtime_error {
    explicit NumericFailure(const std::string& msg) : std::runtime_error(msg) {}
};

struct CertificateFailure : std::runtime_error {
    explicit CertificateFailure(const std::string& msg) : std::runtime_error(msg) {}
};

struct InfeasibleWitness : std::runtime_error {
    explicit InfeasibleWitness(const std::string& msg) : std::runtime_error(msg) {}
};

struct IncompleteTrajectory : std::runtime_error {
    explicit IncompleteTrajectory(const std::string& msg) : std::runtime_error(msg) {}
};

struct MissingDerivatives : std::runtime_error {
    explicit MissingDerivatives(const std::string& msg) : std::runtime_error(msg) {}
};

struct DomainViolation : std::runtime_error {
    explicit DomainViolation(const std::string& msg) : std::runtime_error(msg) {}
};

struct UnboundedTransform : std::runtime_error {
    explicit UnboundedTransform(const std::string& msg) : std::runtime_error(msg) {}
};

struct NotAdmissible : std::runtime_error {
    explicit NotAdmissible(const std::string& msg) : std::runtime_error(msg) {}
};

struct CflViolation : NumericFailure {
    explicit CflViolation(const std::string& msg) : NumericFailure(msg) {}
};

struct PositivityLoss : NumericFailure {
    explicit PositivityLoss(const std::string& msg) : NumericFailure(msg) {}
};

struct UnsupportedDegree : std::runtime_error {
    explicit UnsupportedDegree(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace relax

#endif
