#pragma once

#include <cmath>
#include <string>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

namespace pitmanlab {

enum class VerdictStatus { pass, fail, indeterminate };

inline const char* status_name(VerdictStatus s) {
    switch (s) {
        case VerdictStatus::pass: return "pass";
        case VerdictStatus::fail: return "fail";
        case VerdictStatus::indeterminate: return "indeterminate";
    }
    return "?";
}

// Outcome of one inequality instance. `slack` is lhs-rhs for the claimed
// direction lhs >= rhs (min eigenvalue of the difference for matrix cases);
// `uncertainty` is the Monte Carlo standard error of the slack, 0 on exact
// paths.
struct InequalityVerdict {
    std::string name;
    nlohmann::json instance;
    Eigen::MatrixXd lhs; // 1x1 for scalar instances
    Eigen::MatrixXd rhs;
    double slack = 0.0;
    double uncertainty = 0.0;
    VerdictStatus status = VerdictStatus::pass;

    bool scalar() const { return lhs.size() == 1; }
};

// An MC slack whose confidence band straddles zero is reported as
// indeterminate rather than forced into pass/fail.
inline VerdictStatus classify_slack(double slack, double uncertainty, double tol) {
    if (uncertainty > 0.0 && std::abs(slack) < 3.0 * uncertainty)
        return VerdictStatus::indeterminate;
    if (slack >= -std::max(tol, 3.0 * uncertainty)) return VerdictStatus::pass;
    return VerdictStatus::fail;
}

inline InequalityVerdict make_verdict(std::string name, nlohmann::json instance, double lhs,
                                      double rhs, double uncertainty, double tol) {
    InequalityVerdict v;
    v.name = std::move(name);
    v.instance = std::move(instance);
    v.lhs = Eigen::MatrixXd::Constant(1, 1, lhs);
    v.rhs = Eigen::MatrixXd::Constant(1, 1, rhs);
    v.slack = lhs - rhs;
    v.uncertainty = uncertainty;
    v.status = classify_slack(v.slack, uncertainty, tol);
    return v;
}

} // namespace pitmanlab
