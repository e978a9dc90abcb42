#pragma once

// Arithmetic over the coefficient algebra B = M_d(C): adjoints, half-plane
// membership, guarded inversion, operator norms and matricial amplification.
// All functions are pure; matrices are passed and returned by value.

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "opfree/errors.hpp"

namespace opfree {

using Complex = std::complex<double>;
using BElement = Eigen::MatrixXcd;

/// Self-adjoint part (x + x*)/2.
BElement real_part(const BElement& x);

/// Anti-self-adjoint content (x - x*)/(2i); result is self-adjoint.
BElement imag_part(const BElement& x);

/// Smallest eigenvalue of the self-adjoint matrix h.
double min_eigenvalue_selfadjoint(const BElement& h);

/// True iff the smallest eigenvalue of imag_part(x) is >= eps.
bool in_upper_half_plane(const BElement& x, double eps);

/// Largest singular value.
double op_norm(const BElement& x);

/// Inverse of x. Throws SingularMatrix when the smallest singular value
/// is below 1e-12 * op_norm(x).
BElement invert(const BElement& x);

/// Assemble a (k*d) x (k*d) element of M_k(B) from a k x k grid of d x d
/// blocks, block (p,q) at rows [p*d, p*d+d), cols [q*d, q*d+d).
/// Throws DimensionMismatch when blocks disagree in size or the grid is ragged.
BElement amplify(const std::vector<std::vector<BElement>>& blocks);

/// Block (p,q) of an element of M_k(B), d = x.rows()/k.
BElement block_of(const BElement& x, int k, int p, int q);

/// b (x) I_k placed block-diagonally in M_k(B).
BElement amplify_diag(const BElement& b, int k);

/// A point b in M_k(B)^+ at which transforms are evaluated.
/// margin is a certified lower bound on the spectrum of imag_part(value).
struct ProbePoint {
    int level = 1;          // k
    BElement value;         // (k*d) x (k*d)
    double margin = 0.0;    // eps with imag_part(value) >= eps * I

    /// d of the underlying algebra.
    int algebra_dim() const { return static_cast<int>(value.rows()) / level; }
};

/// Build a probe from a matrix, certifying the half-plane margin.
/// Throws DomainViolation when imag_part(value) is not strictly positive.
ProbePoint make_probe(const BElement& value, int level = 1);

}  // namespace opfree
