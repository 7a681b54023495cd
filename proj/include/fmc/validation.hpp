#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fmc {

// Structural problems (malformed data, mismatched references) are thrown;
// axiom violations are collected into reports so callers can see witnesses.
struct StructuralError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationReport {
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
    void fail(std::string msg) { violations.push_back(std::move(msg)); }
    void merge(const ValidationReport& other, const std::string& prefix = "") {
        for (const auto& v : other.violations)
            violations.push_back(prefix.empty() ? v : prefix + ": " + v);
    }
    std::string summary() const {
        if (ok()) return "ok";
        std::string s;
        for (const auto& v : violations) {
            s += v;
            s += '\n';
        }
        return s;
    }
};

}  // namespace fmc
