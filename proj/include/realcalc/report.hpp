#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace realcalc {

/// One named check with its worst residual.
struct Check {
    std::string name;
    bool passed = false;
    double residual = 0.0;
    std::string detail;
};

/// Ordered collection of checks; passes iff every check passes.
class ValidationReport {
public:
    void add(Check check);
    void add(std::string name, bool passed, double residual, std::string detail = {});

    /// Appends all checks of `other`, prefixing their names with `prefix`.
    void merge(const ValidationReport& other, std::string_view prefix = {});

    [[nodiscard]] bool passed() const;
    [[nodiscard]] const std::vector<Check>& checks() const { return checks_; }
    [[nodiscard]] std::optional<Check> find(std::string_view name) const;
    /// Largest residual among all checks (0 when empty).
    [[nodiscard]] double max_residual() const;

private:
    std::vector<Check> checks_;
};

}  // namespace realcalc
