#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace aaf {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnknownSymbolError : Error { using Error::Error; };
struct UnknownStateError : Error { using Error::Error; };
struct UnknownEventError : Error { using Error::Error; };
struct AlphabetMismatchError : Error { using Error::Error; };
struct NoDeclaredEdgeError : Error { using Error::Error; };
struct UndeclaredEdgeError : Error { using Error::Error; };
struct MemoryBoundViolationError : Error { using Error::Error; };
struct EndmarkerViolationError : Error { using Error::Error; };
struct DisciplineViolationError : Error { using Error::Error; };
struct MalformedTraceError : Error { using Error::Error; };
struct UnknownFrameworkError : Error { using Error::Error; };
struct IllConditionedError : Error { using Error::Error; };
struct InvalidModelError : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

/// Spec validation failure carrying every violated invariant, not just the
/// first one found.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<std::string> violations)
        : Error(join(violations)), violations_(std::move(violations)) {}

    const std::vector<std::string>& violations() const { return violations_; }

private:
    static std::string join(const std::vector<std::string>& vs) {
        std::string out = "spec validation failed:";
        for (const auto& v : vs) {
            out += "\n  - ";
            out += v;
        }
        return out;
    }
    std::vector<std::string> violations_;
};

} // namespace aaf
