#pragma once

#include <string>
#include <vector>

namespace quansal {

/// One measured residual with its pass threshold.
struct CheckItem {
    std::string name;
    double residual = 0.0;
    double tol = 0.0;
    bool pass = false;
};

/// Itemized validator output. `pass` is the conjunction of all items.
struct ValidationReport {
    std::string subject;
    double tol = 0.0;
    std::vector<CheckItem> checks;
    bool pass = true;

    void add(const std::string& name, double residual, double check_tol) {
        const bool ok = residual <= check_tol;
        checks.push_back({name, residual, check_tol, ok});
        pass = pass && ok;
    }
    void add(const std::string& name, double residual) { add(name, residual, tol); }

    double max_residual() const {
        double m = 0.0;
        for (const auto& c : checks) m = std::max(m, c.residual);
        return m;
    }
};

/// Output of check_no_signaling: largest marginal deviation in each direction.
struct NoSignalingReport {
    double alice_to_bob = 0.0;  // max over (b,y,x,x') of Bob-marginal shifts
    double bob_to_alice = 0.0;
    double tol = 0.0;
    bool pass = false;
};

}  // namespace quansal
