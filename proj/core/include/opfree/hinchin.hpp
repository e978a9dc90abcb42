#pragma once

// Probe construction, the finite transform embedding, triangular-array
// builders and checks, the Steinitz-driven convolution-root experiment, and
// the tracial/complete-positivity condition checkers.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "opfree/steinitz.hpp"
#include "opfree/transforms.hpp"

namespace opfree {

/// Probes c_n = d_n + i*lambda*I with self-adjoint directions d_n, ||d_n|| <= 1.
/// The first d^2 directions span the self-adjoint part of B; extra directions
/// are seeded random. lambda > 16*M guarantees ||c_n^{-1}|| < 1/(16M).
struct ProbeSet {
    int dim = 0;
    double lambda = 0.0;
    double bound_M = 0.0;
    std::vector<BElement> directions;
    std::vector<ProbePoint> probes;         // level 1
    std::vector<ProbePoint> level2_probes;  // paired directions, same margin
};

ProbeSet build_probes(int count, double M, double lambda, std::uint64_t seed, int dim);

struct PhiEmbedding {
    Eigen::VectorXd vec;              // per probe: (Im, Re) of all d^2 entries
    std::vector<double> tail_bounds;  // per probe series tail
    double max_tail = 0.0;
};

/// Finite-dimensional specialization of the transform embedding: truncated
/// Voiculescu series values at every probe, flattened to a real vector of
/// length 2 * d^2 * P. Additive under free convolution at fixed truncation.
PhiEmbedding phi_embed(const CumulantSequence& mu, const ProbeSet& probes, int tail_order);

struct ShiftPlan {
    std::vector<BElement> shifts;  // b_i per row, self-adjoint
    BElement limit;                // b_infinity

    static ShiftPlan zero(int dim, int rows);
};

struct TriangularArray {
    int dim = 0;
    int order = 0;
    struct Row {
        std::vector<std::shared_ptr<const CumulantSequence>> entries;  // centered
        BElement shift;                                                // folded b_i
    };
    std::vector<Row> rows;
    CumulantSequence limit;  // mu boxplus delta_{b_infinity}
    BElement shift_limit;
};

/// Rows of n_i copies of mu^{boxplus 1/n_i}, optionally perturbed by
/// symmetric cumulant noise of scale noise_scale / n_i^2, then centered with
/// the per-entry shifts folded into the row shift. The shift plan must
/// converge to its declared limit (non-increasing distances).
TriangularArray build_array_from_id(const CumulantSequence& mu, const std::vector<int>& row_sizes,
                                    const ShiftPlan& plan, double noise_scale, std::uint64_t seed);

struct InfinitesimalityReport {
    std::vector<double> row_max_norms;  // max over j of moment tensor norms
    std::vector<double> schedule;
    bool pass = false;
};

/// Hypothesis check: per-row max moment-tensor norm must fall below the
/// schedule, row by row.
InfinitesimalityReport infinitesimality_check(const TriangularArray& array,
                                              const std::vector<double>& tol_schedule);

struct RowReport {
    int row = 0;
    int n_i = 0;
    std::vector<int> sigma;  // selected entry indices
    double steinitz_eps = 0.0;
    double phi_deviation = 0.0;
    double phi_budget = 0.0;
    double transform_distance = 0.0;  // max over probes, level 1
    double transform_budget = 0.0;
    double cumulant_distance = 0.0;
    double cumulant_budget = 0.0;
    double level2_distance = 0.0;
    double level2_budget = 0.0;
    std::string verdict;  // PASS | INCONCLUSIVE
    std::string error;
};

struct ExperimentReport {
    int p = 0;
    double t = 0.0;
    int tail_order = 0;
    std::vector<RowReport> rows;
    double reconvolution_error = 0.0;
    double reconvolution_budget = 0.0;
    bool pass = false;
};

/// The main experiment: per row, select a subset of entries whose embedded
/// transform vectors approximate t times the limit's, convolve the selection
/// with delta_{t b_i}, and report measured deviations against explicit
/// budgets (Steinitz certificate + row drift + series tails). Finishes by
/// reconvolving the last row's selection p-fold against the limit.
ExperimentReport run_hinchin(const TriangularArray& array, int p, const ProbeSet& probes,
                             int tail_order, int jobs = 1);

struct TracialReport {
    double worst_1 = 0.0;  // max generalized eigenvalue of the X-weighted Gram
    double worst_2 = 0.0;  // most negative Gram eigenvalue (0 when PSD)
    double worst_3 = 0.0;  // max trace-commutation defect
    bool pass_1 = false, pass_2 = false, pass_3 = false;
    double M = 0.0;
    int degree_cutoff = 0;
};

/// Conditions for mu to arise from a trace-preserving conditional expectation,
/// evaluated on the matrix-unit monomial family of the given degree.
TracialReport check_tracial_conditions(const TruncatedMoments& mu, double M, int degree_cutoff);

struct CpReport {
    double min_eigenvalue = 0.0;
    bool pass = false;
    int family_degree = 0;
};

/// Complete positivity: the block Gram matrix [mu(P_i^* P_j)] over the
/// monomial family must be PSD up to 1e-8.
CpReport check_complete_positivity(const TruncatedMoments& mu, int family_degree);

}  // namespace opfree
