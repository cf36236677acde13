#pragma once

#include <stdexcept>
#include <string>

namespace matchbound {

enum class ParseErrc {
    malformed,
    duplicate_edge,
    loop,
    out_of_range,
    invalid_character,
    length_mismatch,
};

inline const char* to_string(ParseErrc e) {
    switch (e) {
        case ParseErrc::malformed: return "malformed";
        case ParseErrc::duplicate_edge: return "duplicate edge";
        case ParseErrc::loop: return "loop";
        case ParseErrc::out_of_range: return "vertex out of range";
        case ParseErrc::invalid_character: return "invalid character";
        case ParseErrc::length_mismatch: return "length mismatch";
    }
    return "unknown";
}

/// Raised by the text readers; `code()` says which rule the input broke.
class ParseError : public std::runtime_error {
public:
    ParseError(ParseErrc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ParseErrc code() const noexcept { return code_; }

private:
    ParseErrc code_;
};

/// A size or enumeration cap was exceeded; the input is valid but too large.
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bound evaluators reject graphs with isolated vertices.
class IsolatedVertexError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace matchbound
