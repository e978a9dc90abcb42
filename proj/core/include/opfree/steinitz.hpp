#pragma once

// Constructive Steinitz rearrangement with prefix bound equal to the rank of
// the vector family, subset selection approximating t * sum, and the
// triangular-array driver.

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "opfree/errors.hpp"

namespace opfree {

struct SteinitzInstance {
    int n_dim = 0;
    std::vector<Eigen::VectorXd> vectors;
    double norm_cap = 0.0;    // max ||v_i||
    Eigen::VectorXd sum;
};

/// Validate lengths and fill the cached cap and sum.
SteinitzInstance make_instance(std::vector<Eigen::VectorXd> vectors);

struct SelectionResult {
    std::vector<int> indices;  // permutation order, or ascending subset
    double certified_bound = 0.0;
    double achieved_deviation = 0.0;
    bool is_permutation = false;
    int effective_dim = 0;     // rank actually used by the certificate
};

/// Permutation sigma with every prefix sum bounded by rank * norm_cap.
///
/// Descent over the weight polytopes P_t = {w in [0,1]^{A_t} :
/// sum w = t - r, sum w_i v_i = 0}: scale the current weights to the next
/// level's total, purify to an extreme point (kernel steps of the active
/// constraint matrix until the fractional support is independent), and retire
/// a zero-weight element to position t. Every extreme point of the next-level
/// polytope has a zero coordinate, so the descent never stalls. The returned
/// achieved_deviation is the measured max prefix norm.
///
/// Requires sum(v) = 0 within 1e-9 * max(1, cap); caps above 1 are handled by
/// internal rescaling.
SelectionResult rearrange_zero_sum(const SteinitzInstance& inst);

/// Subset sigma with || sum_{i in sigma} v_i - t * sum(v) || bounded by
/// min(n_dim, rank+1) * eps. Rotates sum(v) onto the first axis, rearranges
/// the orthogonal components, and scans first-coordinate prefixes for the
/// intermediate-value crossing (smallest minimizer wins ties).
SelectionResult subset_select(const SteinitzInstance& inst, double t,
                              std::optional<double> eps = std::nullopt);

struct RowSelection {
    int row = 0;
    bool ok = false;
    std::string error;
    SelectionResult result;
    double eps = 0.0;
    double drift = 0.0;      // || row sum - target ||
    double deviation = 0.0;  // || selected sum - t * target ||
    double budget = 0.0;     // certified bound + drift
};

/// Per-row subset selection against a common limit target (defaults to the
/// last row's sum). Row failures are collected, not fatal.
std::vector<RowSelection> array_select(const std::vector<SteinitzInstance>& rows, double t,
                                       std::optional<Eigen::VectorXd> target = std::nullopt);

}  // namespace opfree
