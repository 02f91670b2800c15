#ifndef JDR_ERRORS_HPP
#define JDR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace jdr {

struct NotPolynomialExcess : std::runtime_error {
    explicit NotPolynomialExcess(const std::string& what) : std::runtime_error(what) {}
};

struct NonCyclicMode : std::runtime_error {
    explicit NonCyclicMode(const std::string& what) : std::runtime_error(what) {}
};

struct ConstraintViolated : std::runtime_error {
    explicit ConstraintViolated(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a term cannot be matched into the active essential set; this is
// the completeness guard for the hard-coded generator catalogs.
struct UnmatchedTerm : std::runtime_error {
    explicit UnmatchedTerm(const std::string& what) : std::runtime_error(what) {}
};

struct UnknownScenario : std::runtime_error {
    explicit UnknownScenario(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace jdr

#endif
