#include "realcalc/report.hpp"

#include <algorithm>

namespace realcalc {

void ValidationReport::add(Check check) {
    checks_.push_back(std::move(check));
}

void ValidationReport::add(std::string name, bool passed, double residual, std::string detail) {
    checks_.push_back({std::move(name), passed, residual, std::move(detail)});
}

void ValidationReport::merge(const ValidationReport& other, std::string_view prefix) {
    for (const auto& c : other.checks_) {
        Check copy = c;
        copy.name = std::string(prefix) + c.name;
        checks_.push_back(std::move(copy));
    }
}

bool ValidationReport::passed() const {
    return std::all_of(checks_.begin(), checks_.end(), [](const Check& c) { return c.passed; });
}

std::optional<Check> ValidationReport::find(std::string_view name) const {
    const auto it = std::find_if(checks_.begin(), checks_.end(), [&](const Check& c) { return c.name == name; });
    if (it == checks_.end()) return std::nullopt;
    return *it;
}

double ValidationReport::max_residual() const {
    double worst = 0.0;
    for (const auto& c : checks_) worst = std::max(worst, c.residual);
    return worst;
}

}  // namespace realcalc
