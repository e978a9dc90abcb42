#pragma once

// Representations of B-valued distributions truncated at a finite order:
// moment sequences, free cumulant sequences, and self-adjoint matrix models
// with a block conditional expectation. Conversions between moments and
// cumulants run over the non-crossing partition lattice grouped by the block
// of the first letter, which keeps both directions unitriangular and exact.

#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "opfree/multilinear.hpp"

namespace opfree {

/// Moment maps m_1..m_order; maps[n-1] has arity n-1 and stores
/// m_n(b_1,...,b_{n-1}) = mu(X b_1 X ... b_{n-1} X) on basis tuples.
/// `bound` is the declared exponential bound M of Sigma_{0,M} membership:
/// ||m_n|| <= M^{n+1} on unit-norm arguments.
struct TruncatedMoments {
    int dim = 0;
    int order = 0;
    double bound = 0.0;
    std::vector<MultilinearMap> maps;

    const MultilinearMap& m(int n) const { return maps[static_cast<std::size_t>(n) - 1]; }
    MultilinearMap& m(int n) { return maps[static_cast<std::size_t>(n) - 1]; }
};

/// Cumulant maps kappa_1..kappa_order, same storage scheme. `bound` is the
/// smallest M with ||kappa_n|| <= M(4M)^n on the stored basis tuples, the
/// constant entering the Voiculescu series domain and tail bounds.
struct CumulantSequence {
    int dim = 0;
    int order = 0;
    double bound = 0.0;
    std::vector<MultilinearMap> maps;

    const MultilinearMap& k(int n) const { return maps[static_cast<std::size_t>(n) - 1]; }
    MultilinearMap& k(int n) { return maps[static_cast<std::size_t>(n) - 1]; }
};

/// Self-adjoint a in M_d(C) (x) M_N(C) with E_B = id_d (x) tr_N/N and
/// tau = normalized trace. Index layout: row (i, u) = i*N + u.
struct RealizedModel {
    int dim = 0;           // d
    int multiplicity = 0;  // N
    Eigen::MatrixXcd a;

    /// Block partial trace onto B: E_B(x)_{ij} = (1/N) sum_u x[(i,u),(j,u)].
    BElement expect_B(const Eigen::MatrixXcd& x) const;

    /// Normalized trace on the full algebra.
    Complex trace(const Eigen::MatrixXcd& x) const;

    /// b (x) I_N.
    Eigen::MatrixXcd embed(const BElement& b) const;
};

/// Validate shape and self-adjointness (tolerance 1e-10 relative), symmetrize.
RealizedModel make_realized(int dim, int multiplicity, const Eigen::MatrixXcd& a);

/// Deterministic random self-adjoint model with op_norm(a) == norm.
RealizedModel random_realized(int dim, int multiplicity, double norm, std::uint64_t seed);

/// Moment maps of a model: m_n(b_1,..) = E_B(a (b_1 x I) a ... (b_{n-1} x I) a),
/// bound set to op_norm(a).
TruncatedMoments moments_from_realized(const RealizedModel& model, int order);

/// delta_b: kappa_1 = b, all higher cumulants zero. Requires b self-adjoint.
CumulantSequence point_mass(const BElement& b, int order);

/// Operator-valued semicircular law with covariance eta: kappa_2 = eta, all
/// other cumulants zero. eta is a d^2 x d^2 matrix acting on row-major
/// vectorized B and must be completely positive (Choi matrix PSD).
CumulantSequence semicircular(const Eigen::MatrixXcd& eta, int dim, int order);

/// Inverse pair linking the two representations through the non-crossing
/// moment-cumulant relation m_n = sum_{p in NC(n)} kappa_p.
CumulantSequence cumulants_from_moments(const TruncatedMoments& mu);
TruncatedMoments moments_from_cumulants(const CumulantSequence& kappa);

/// Free additive convolution: cumulants add; bound_out = bound_a + bound_b.
CumulantSequence free_convolve(const CumulantSequence& a, const CumulantSequence& b);

struct ScaledCumulants {
    CumulantSequence kappa;
    /// False when t < 1: the rescaling is formal and positivity of the result
    /// is not certified here (see check_complete_positivity).
    bool realizability_certified = true;
};

/// mu^{boxplus t}: every cumulant scaled by t > 0.
ScaledCumulants convolution_power(const CumulantSequence& mu, double t);

struct CenteredCumulants {
    CumulantSequence centered;
    BElement shift;  // the removed kappa_1
};

/// Convolve with delta_{-kappa_1}; returns the centered law and the shift.
CenteredCumulants center(const CumulantSequence& mu);

struct ExpBoundReport {
    bool pass = false;
    double worst_ratio = 0.0;
    int worst_order = 0;
};

/// Evaluate ||m_n|| <= M^{n+1} on all basis tuples plus random unit-norm
/// argument tuples (samples_per_order draws, seeded).
ExpBoundReport exp_bound_check(const TruncatedMoments& mu, double M,
                               int samples_per_order = 20, std::uint64_t seed = 7);

/// Smallest M with max basis norm of m_n <= M^{n+1} for all stored orders.
double fit_moment_bound(const std::vector<MultilinearMap>& maps);

/// Smallest M with max basis norm of kappa_n <= M(4M)^n for all stored orders.
double fit_cumulant_bound(const std::vector<MultilinearMap>& maps);

/// Max over orders of op_norm distance between corresponding tensor entries.
double tensor_distance(const std::vector<MultilinearMap>& a,
                       const std::vector<MultilinearMap>& b);

/// Max over orders/tuples of op_norm; 0 for empty.
double tensor_max_norm(const std::vector<MultilinearMap>& maps);

}  // namespace opfree
