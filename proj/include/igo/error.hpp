#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace igo {

/// Base class of every error raised by the library. `category()` is a short,
/// stable token used by the CLI as the error-line prefix.
class Error : public std::runtime_error {
public:
    Error(std::string category, const std::string& message)
        : std::runtime_error(message), category_(std::move(category)) {}

    const std::string& category() const noexcept { return category_; }

private:
    std::string category_;
};

#define IGO_DEFINE_ERROR(Name, token)                                        \
    class Name : public Error {                                              \
    public:                                                                  \
        explicit Name(const std::string& message) : Error(token, message) {} \
    }

IGO_DEFINE_ERROR(DimensionError, "dimension");
IGO_DEFINE_ERROR(SymmetryError, "symmetry");
IGO_DEFINE_ERROR(ConvergenceError, "convergence");
IGO_DEFINE_ERROR(DomainError, "domain");
IGO_DEFINE_ERROR(SampleSizeError, "sample-size");
IGO_DEFINE_ERROR(IndexError, "index");
IGO_DEFINE_ERROR(ConfigError, "config");

// File-format errors. Messages always name the offending file.
IGO_DEFINE_ERROR(IoError, "io");
IGO_DEFINE_ERROR(UnsupportedFormatError, "unsupported-format");
IGO_DEFINE_ERROR(TruncatedFileError, "truncated");
IGO_DEFINE_ERROR(ZeroDimensionError, "zero-dimension");
IGO_DEFINE_ERROR(FormatError, "format");
IGO_DEFINE_ERROR(VersionError, "version");
IGO_DEFINE_ERROR(LengthMismatchError, "length-mismatch");
IGO_DEFINE_ERROR(NonFiniteError, "non-finite");

#undef IGO_DEFINE_ERROR

/// Requested more components than the data supports.
class RankError : public Error {
public:
    RankError(const std::string& message, std::size_t numerical_rank)
        : Error("rank", message), numerical_rank_(numerical_rank) {}

    std::size_t numerical_rank() const noexcept { return numerical_rank_; }

private:
    std::size_t numerical_rank_;
};

}  // namespace igo
