#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace toral {

enum class ErrorKind {
    ZeroScalar,
    SingularForm,
    FieldMismatch,
    ZeroElement,
    IndexOutOfRange,
    NonMonomialEntry,
    UnsupportedField,
    InvalidDescriptor,
    SizeMismatch,
    NotUnimodular,
    DegreeIncompatible,
    InvalidField,
    NotSkew,
    Overflow,
    ParseError,
};

std::string_view error_name(ErrorKind kind) noexcept;

/// Domain error raised by every module. The kind is the stable, machine
/// readable part; the message is for humans.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(error_name(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }
    std::string_view name() const noexcept { return error_name(kind_); }

private:
    ErrorKind kind_;
};

} // namespace toral
