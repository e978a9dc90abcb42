#pragma once

// Dense storage for multilinear maps B^r -> B over the matrix-unit basis of
// B = M_d(C). A map of arity r keeps (d^2)^r entries, one d x d matrix per
// basis tuple. Basis index j in [0, d^2) encodes the matrix unit E_{pq} with
// p = j / d, q = j % d. Flat tuple index is big-endian: the first slot is the
// most significant digit.

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "opfree/balgebra.hpp"

namespace opfree {

class MultilinearMap {
  public:
    MultilinearMap() = default;
    MultilinearMap(int dim, int arity);

    static MultilinearMap constant(const BElement& value);

    int dim() const { return dim_; }
    int arity() const { return arity_; }
    std::size_t table_size() const { return table_.size(); }

    const BElement& at(std::size_t flat) const { return table_[flat]; }
    BElement& at(std::size_t flat) { return table_[flat]; }

    std::size_t flat_index(std::span<const int> tuple) const;

    /// Value on matrix units picked by `tuple` (size == arity).
    const BElement& on_basis(std::span<const int> tuple) const;

    /// Multilinear evaluation at arbitrary d x d arguments (size == arity).
    BElement eval(std::span<const BElement> args) const;

    /// Evaluation of the level-k amplification at (k*d) x (k*d) arguments in
    /// M_k(B): block (P,Q) of the result sums eval over all k-index chains
    /// P -> ... -> Q through the argument blocks. Arity 0 amplifies
    /// block-diagonally.
    BElement eval_amplified(int k, std::span<const BElement> args) const;

    /// Largest op_norm over the stored table.
    double max_basis_norm() const;

    /// The map b_1,...,b_r -> f(b_r^*, ..., b_1^*)^*; equals *this for maps
    /// consistent with mu(P^*) = mu(P)^*.
    MultilinearMap adjoint_flip() const;

    /// max over the table of op_norm(at(j) - adjoint_flip.at(j)).
    double symmetry_defect() const;

    MultilinearMap& operator+=(const MultilinearMap& other);
    MultilinearMap& operator*=(double scale);

    friend MultilinearMap operator+(MultilinearMap a, const MultilinearMap& b) {
        a += b;
        return a;
    }

  private:
    int dim_ = 0;
    int arity_ = 0;
    std::vector<BElement> table_;
};

/// Random map with independent complex Gaussian entries of the given scale,
/// symmetrized so that adjoint_flip() returns it unchanged.
MultilinearMap random_symmetric_map(int dim, int arity, double scale, std::mt19937_64& rng);

}  // namespace opfree
