#pragma once

#include <stdexcept>
#include <string>

namespace xnet {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define XNET_DEFINE_ERROR(Name)                                          \
    class Name : public Error {                                          \
    public:                                                              \
        explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
    }

// numerics
XNET_DEFINE_ERROR(SingularMatrix);
XNET_DEFINE_ERROR(NotHermitian);
XNET_DEFINE_ERROR(DimensionMismatch);
XNET_DEFINE_ERROR(NotUnitary);

// constellation / stbc
XNET_DEFINE_ERROR(UnsupportedSize);
XNET_DEFINE_ERROR(UnknownName);
XNET_DEFINE_ERROR(EigMultiplicityViolation);
XNET_DEFINE_ERROR(CodebookTooLarge);
XNET_DEFINE_ERROR(MissingCcSpec);

// xnetwork / decoder
XNET_DEFINE_ERROR(RngPathology);
XNET_DEFINE_ERROR(RankDeficient);

// verify
XNET_DEFINE_ERROR(Infeasible);
XNET_DEFINE_ERROR(InsufficientData);

// sim
XNET_DEFINE_ERROR(ConfigError);
XNET_DEFINE_ERROR(IoError);

#undef XNET_DEFINE_ERROR

/// Malformed input file; carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error("ParseError: line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace xnet
