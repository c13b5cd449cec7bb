#pragma once

#include <stdexcept>
#include <string>

namespace foldent {

// All toolkit errors carry a short machine-readable code plus a human message.
// The CLI prints "code: detail" on stderr and maps codes to exit status 2.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& detail)
        : std::runtime_error(code + ": " + detail), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

inline Error domain_gap_error(const std::string& d) { return Error("domain-gap", d); }
inline Error convergence_error(const std::string& d) { return Error("convergence-failure", d); }
inline Error constraint_error(const std::string& d) { return Error("constraint-violation", d); }
inline Error budget_error(const std::string& d) { return Error("budget-exceeded", d); }
inline Error blowup_error(const std::string& d) { return Error("combinatorial-blowup", d); }
inline Error config_error(const std::string& d) { return Error("config", d); }

} // namespace foldent
