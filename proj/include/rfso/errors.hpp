#ifndef RFSO_ERRORS_HPP
#define RFSO_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace rfso {

/// Thrown when an iterative evaluation (series, continued fraction,
/// adaptive quadrature) cannot reach its error target within budget.
class convergence_error : public std::runtime_error {
public:
    explicit convergence_error(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown by configuration parsing/validation; carries one message per
/// violated field or invariant.
class config_error : public std::runtime_error {
public:
    explicit config_error(std::vector<std::string> issues)
        : std::runtime_error(join(issues)), issues_(std::move(issues)) {}

    const std::vector<std::string>& issues() const noexcept { return issues_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out;
        for (const auto& s : v) {
            if (!out.empty()) out += "; ";
            out += s;
        }
        return out;
    }

    std::vector<std::string> issues_;
};

}  // namespace rfso

#endif
