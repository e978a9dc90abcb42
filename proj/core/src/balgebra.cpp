#include "opfree/balgebra.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace opfree {

BElement real_part(const BElement& x) { return 0.5 * (x + x.adjoint()); }

BElement imag_part(const BElement& x) {
    const Complex two_i(0.0, 2.0);
    return ((x - x.adjoint()) / two_i).eval();
}

double min_eigenvalue_selfadjoint(const BElement& h) {
    Eigen::SelfAdjointEigenSolver<BElement> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

bool in_upper_half_plane(const BElement& x, double eps) {
    if (x.rows() != x.cols()) return false;
    return min_eigenvalue_selfadjoint(imag_part(x)) >= eps;
}

double op_norm(const BElement& x) {
    if (x.size() == 0) return 0.0;
    Eigen::JacobiSVD<BElement> svd(x);
    return svd.singularValues()(0);
}

BElement invert(const BElement& x) {
    if (x.rows() != x.cols()) throw DimensionMismatch("invert: non-square matrix");
    Eigen::JacobiSVD<BElement> svd(x);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    if (smax == 0.0 || smin < 1e-12 * smax)
        throw SingularMatrix("invert: smallest singular value below 1e-12 * norm");
    return x.partialPivLu().solve(BElement::Identity(x.rows(), x.cols()));
}

BElement amplify(const std::vector<std::vector<BElement>>& blocks) {
    const int k = static_cast<int>(blocks.size());
    if (k == 0) throw DimensionMismatch("amplify: empty block grid");
    const int d = static_cast<int>(blocks[0][0].rows());
    BElement out = BElement::Zero(k * d, k * d);
    for (int p = 0; p < k; ++p) {
        if (static_cast<int>(blocks[p].size()) != k)
            throw DimensionMismatch("amplify: ragged block grid");
        for (int q = 0; q < k; ++q) {
            const BElement& b = blocks[p][q];
            if (b.rows() != d || b.cols() != d)
                throw DimensionMismatch("amplify: block dimension mismatch");
            out.block(p * d, q * d, d, d) = b;
        }
    }
    return out;
}

BElement block_of(const BElement& x, int k, int p, int q) {
    const int d = static_cast<int>(x.rows()) / k;
    return x.block(p * d, q * d, d, d);
}

BElement amplify_diag(const BElement& b, int k) {
    const int d = static_cast<int>(b.rows());
    BElement out = BElement::Zero(k * d, k * d);
    for (int p = 0; p < k; ++p) out.block(p * d, p * d, d, d) = b;
    return out;
}

ProbePoint make_probe(const BElement& value, int level) {
    if (value.rows() != value.cols())
        throw DimensionMismatch("make_probe: non-square matrix");
    if (level < 1 || value.rows() % level != 0)
        throw DimensionMismatch("make_probe: level does not divide matrix size");
    const double margin = min_eigenvalue_selfadjoint(imag_part(value));
    if (margin <= 0.0)
        throw DomainViolation("make_probe: imaginary part not strictly positive");
    return ProbePoint{level, value, margin};
}

}  // namespace opfree
