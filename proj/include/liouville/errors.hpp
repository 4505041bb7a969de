#pragma once

#include <stdexcept>
#include <string>

namespace liouville {

// Base class for all toolkit errors. `code()` is stable and machine-readable;
// the CLI maps domain errors to exit code 1 and everything else to 2.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& msg)
        : std::runtime_error(msg), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error("DomainError", msg) {}
};
struct DegenerateConfig : Error {
    explicit DegenerateConfig(const std::string& msg) : Error("DegenerateConfig", msg) {}
};
struct StepTooLarge : Error {
    explicit StepTooLarge(const std::string& msg) : Error("StepTooLarge", msg) {}
};
struct CollidingAngles : Error {
    explicit CollidingAngles(const std::string& msg) : Error("CollidingAngles", msg) {}
};
struct SizeMismatch : Error {
    explicit SizeMismatch(const std::string& msg) : Error("SizeMismatch", msg) {}
};
struct DegreeMismatch : Error {
    explicit DegreeMismatch(const std::string& msg) : Error("DegreeMismatch", msg) {}
};
struct NonMonic : Error {
    explicit NonMonic(const std::string& msg) : Error("NonMonic", msg) {}
};
struct RootFindingFailure : Error {
    explicit RootFindingFailure(const std::string& msg) : Error("RootFindingFailure", msg) {}
};
struct InconsistentPair : Error {
    explicit InconsistentPair(const std::string& msg) : Error("InconsistentPair", msg) {}
};
struct BlowupInIntegration : Error {
    explicit BlowupInIntegration(const std::string& msg) : Error("BlowupInIntegration", msg) {}
};
struct InternalInconsistency : Error {
    explicit InternalInconsistency(const std::string& msg) : Error("InternalInconsistency", msg) {}
};
struct NewtonDiverged : Error {
    explicit NewtonDiverged(const std::string& msg) : Error("NewtonDiverged", msg) {}
};
struct SingularJacobian : Error {
    explicit SingularJacobian(const std::string& msg) : Error("SingularJacobian", msg) {}
};
struct BranchLost : Error {
    explicit BranchLost(const std::string& msg) : Error("BranchLost", msg) {}
};
struct IoError : Error {
    explicit IoError(const std::string& msg) : Error("IoError", msg) {}
};

// True for error kinds caused by invalid user input / parameter domain.
inline bool is_domain_error(const Error& e) {
    const std::string& c = e.code();
    return c == "DomainError" || c == "DegenerateConfig" || c == "CollidingAngles" ||
           c == "SizeMismatch" || c == "DegreeMismatch" || c == "NonMonic" ||
           c == "InconsistentPair";
}

} // namespace liouville
