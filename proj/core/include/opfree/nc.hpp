#pragma once

// Non-crossing partitions of {1..n} and the interval-contraction rule that
// evaluates a partition against cumulant data. Indices are 0-based in memory;
// JSON serialization is 1-based.

#include <functional>
#include <vector>

#include "opfree/balgebra.hpp"

namespace opfree {

struct NCPartition {
    int n = 0;
    // disjoint, individually sorted, ordered by smallest element, covering {0..n-1}
    std::vector<std::vector<int>> blocks;
};

/// Canonicalize (sort in place) and validate that blocks partition {0..n-1}.
void canonicalize_partition(NCPartition& p);

/// True iff no a<b<c<d with {a,c} in one block and {b,d} in another.
/// Single left-to-right pass over a stack of open blocks.
bool is_noncrossing(const NCPartition& p);

/// All non-crossing partitions of {1..n}, ordered lexicographically by the
/// block-membership word (restricted growth string). 1 <= n <= 12.
std::vector<NCPartition> enumerate_nc(int n);

/// Number of set partitions visited by enumerate_nc before filtering (Bell).
/// Exposed for oracle-style tests.
std::uint64_t bell_number(int n);

/// kappa(m, args) must return the order-m cumulant applied to m-1 coefficients.
using KappaFn = std::function<BElement(int, const std::vector<BElement>&)>;

/// Evaluate kappa_p(b_1,...,b_{n-1}) by repeated contraction of innermost
/// interval blocks: an interval block of size m spanning current positions
/// i..i+m-1 is replaced by kappa(m, gaps strictly inside), spliced
/// multiplicatively between its neighbouring gap values. The surviving gap is
/// the result.
BElement contract_evaluate(const NCPartition& p, const KappaFn& kappa,
                           const std::vector<BElement>& coeffs);

}  // namespace opfree
