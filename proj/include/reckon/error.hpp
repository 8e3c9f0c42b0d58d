#pragma once

#include <stdexcept>
#include <string>

namespace reckon {

enum class ErrorKind {
    config,        // bad configuration / violated precondition
    precondition,  // missing prerequisite artifact or illegal state
    backend,       // transport exhausted, refusal, empty completion
    corruption,    // unreadable or inconsistent persisted state
    parse,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

inline Error config_error(std::string m) { return Error(ErrorKind::config, std::move(m)); }
inline Error precondition_error(std::string m) { return Error(ErrorKind::precondition, std::move(m)); }
inline Error backend_error(std::string m) { return Error(ErrorKind::backend, std::move(m)); }
inline Error corruption_error(std::string m) { return Error(ErrorKind::corruption, std::move(m)); }
inline Error parse_error(std::string m) { return Error(ErrorKind::parse, std::move(m)); }

}  // namespace reckon
