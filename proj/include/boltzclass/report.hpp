#pragma once

#include <optional>
#include <string>
#include <vector>

#include "boltzclass/expr/zero_test.hpp"

namespace boltzclass {

/// One named verification step. `status` is a zero-test status
/// ("symbolic-zero", "numeric-zero", "nonzero") or "pass", "fail", "computed".
struct Check {
    std::string name;
    std::string status;
    std::optional<Env> witness;
    double residual = 0.0;
    std::string detail;

    [[nodiscard]] bool ok() const { return status != "nonzero" && status != "fail" && status != "error"; }
    [[nodiscard]] bool numeric() const { return status == "numeric-zero"; }
};

inline Check make_check(std::string name, const ZeroVerdict& v, std::string detail = {}) {
    Check c;
    c.name = std::move(name);
    c.status = std::string(status_name(v.status));
    c.witness = v.witness;
    c.residual = v.residual;
    c.detail = std::move(detail);
    return c;
}

inline Check make_check(std::string name, bool pass, std::string detail = {}) {
    Check c;
    c.name = std::move(name);
    c.status = pass ? "pass" : "fail";
    c.detail = std::move(detail);
    return c;
}

struct Report {
    std::vector<Check> checks;

    [[nodiscard]] bool ok() const {
        for (const auto& c : checks) {
            if (!c.ok()) return false;
        }
        return true;
    }
    [[nodiscard]] std::vector<const Check*> failures() const {
        std::vector<const Check*> out;
        for (const auto& c : checks) {
            if (!c.ok()) out.push_back(&c);
        }
        return out;
    }
};

}  // namespace boltzclass
