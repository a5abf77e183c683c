#ifndef ASPECTRA_ERRORS_HPP
#define ASPECTRA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace aspectra {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct GraphError : Error {
    using Error::Error;
};

// Overlap enumeration exceeded the configured cap; the pattern pair is too
// large for exhaustive analysis and the verdict must be marked undecided.
struct OverlapCapExceeded : Error {
    using Error::Error;
};

struct RuleError : Error {
    using Error::Error;
};

struct InvalidMatch : Error {
    using Error::Error;
};

struct FlattenError : Error {
    using Error::Error;
};

struct CompileError : Error {
    using Error::Error;
};

struct ExpansionOverflow : CompileError {
    using CompileError::CompileError;
};

struct DuplicateAspectName : Error {
    using Error::Error;
};

struct UnparseableRuleName : Error {
    using Error::Error;
};

struct UnknownFormat : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

} // namespace aspectra

#endif
