#pragma once

#include <stdexcept>
#include <string>

namespace kreiss {

enum class ErrorKind {
    invalid_matrix,
    factorization_failure,
    scaling_failure,
    unsolvable_on_boundary,
    not_unit_triangular,
    domain,
    singular_point,
    spec,
    configuration,
    parse,
    io,
};

const char* to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so callers (the CLI in
// particular) can map it onto an exit code without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace kreiss
