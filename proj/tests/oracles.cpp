#include "oracles.hpp"
#include <stdexcept>
#include <cstdint>
#include <bit>

#include <algorithm>
#include <cmath>

namespace oracles {

using opfree::NCPartition;

std::vector<NCPartition> all_set_partitions(int n) {
    std::vector<std::vector<std::vector<int>>> acc{{}};
    for (int e = 0; e < n; ++e) {
        std::vector<std::vector<std::vector<int>>> next;
        for (const auto& part : acc) {
            for (std::size_t b = 0; b <= part.size(); ++b) {
                auto grown = part;
                if (b < part.size())
                    grown[b].push_back(e);
                else
                    grown.push_back({e});
                next.push_back(std::move(grown));
            }
        }
        acc = std::move(next);
    }
    std::vector<NCPartition> out;
    for (auto& blocks : acc) {
        NCPartition p;
        p.n = n;
        p.blocks = std::move(blocks);
        opfree::canonicalize_partition(p);
        out.push_back(std::move(p));
    }
    return out;
}

bool has_crossing_quadruple(const NCPartition& p) {
    std::vector<int> block_of(p.n, -1);
    for (std::size_t b = 0; b < p.blocks.size(); ++b)
        for (int e : p.blocks[b]) block_of[e] = static_cast<int>(b);
    for (int a = 0; a < p.n; ++a)
        for (int b = a + 1; b < p.n; ++b)
            for (int c = b + 1; c < p.n; ++c)
                for (int d = c + 1; d < p.n; ++d)
                    if (block_of[a] == block_of[c] && block_of[b] == block_of[d] &&
                        block_of[a] != block_of[b])
                        return true;
    return false;
}

namespace {

// evaluate the nesting of `p` restricted to letters [lo, hi): the coefficient
// to the right of letter u is coeffs[u] (u < n-1)
BElement nesting_eval_range(const NCPartition& p, const opfree::CumulantSequence& kappa,
                            const std::vector<BElement>& coeffs, int lo, int hi, int d) {
    if (lo >= hi) return BElement::Identity(d, d);
    std::vector<int> block_of(p.n);
    for (std::size_t b = 0; b < p.blocks.size(); ++b)
        for (int e : p.blocks[b]) block_of[e] = static_cast<int>(b);
    std::vector<int> v;
    for (int e = lo; e < hi; ++e)
        if (block_of[e] == block_of[lo]) v.push_back(e);
    const int s = static_cast<int>(v.size());
    std::vector<BElement> args;
    for (int r = 0; r + 1 < s; ++r) {
        BElement gap = nesting_eval_range(p, kappa, coeffs, v[r] + 1, v[r + 1], d);
        if (v[r + 1] == v[r] + 1)
            args.push_back(coeffs[v[r]]);
        else
            args.push_back(coeffs[v[r]] * gap * coeffs[v[r + 1] - 1]);
    }
    BElement value = kappa.k(s).eval(args);
    if (v[s - 1] + 1 < hi)
        value = value * coeffs[v[s - 1]] *
                nesting_eval_range(p, kappa, coeffs, v[s - 1] + 1, hi, d);
    return value;
}

}  // namespace

BElement nesting_eval(const NCPartition& p, const opfree::CumulantSequence& kappa,
                      const std::vector<BElement>& coeffs) {
    return nesting_eval_range(p, kappa, coeffs, 0, p.n, kappa.dim);
}

BElement moment_by_partition_sum(int n, const opfree::CumulantSequence& kappa,
                                 const std::vector<BElement>& coeffs) {
    BElement acc = BElement::Zero(kappa.dim, kappa.dim);
    for (const auto& p : all_set_partitions(n))
        if (!has_crossing_quadruple(p)) acc += nesting_eval(p, kappa, coeffs);
    return acc;
}

Complex semicircle_cauchy(Complex z, double variance) {
    const double edge = 2.0 * std::sqrt(variance);
    const Complex w = std::sqrt(z - edge) * std::sqrt(z + edge);
    return (z - w) / (2.0 * variance);
}

double catalan(int n) {
    double c = 1.0;
    for (int i = 0; i < n; ++i) c = c * 2.0 * (2.0 * i + 1.0) / (i + 2.0);
    return c;
}

double exhaustive_best_subset_deviation(const std::vector<Eigen::VectorXd>& vs,
                                        const Eigen::VectorXd& target) {
    const int k = static_cast<int>(vs.size());
    if (k > 24) throw std::runtime_error("exhaustive search capped at k=24");
    double best = target.norm();
    const std::uint64_t total = 1ull << k;
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(target.size());
    std::uint64_t prev = 0;
    for (std::uint64_t code = 1; code < total; ++code) {
        // gray code: flip one element per step
        const std::uint64_t gray = code ^ (code >> 1);
        const std::uint64_t diff = gray ^ prev;
        const int bit = static_cast<int>(std::countr_zero(diff));
        if (gray & diff)
            acc += vs[bit];
        else
            acc -= vs[bit];
        prev = gray;
        best = std::min(best, (acc - target).norm());
    }
    return best;
}

opfree::CumulantSequence random_cumulants(int dim, int order, double scale, double decay,
                                          std::mt19937_64& rng) {
    opfree::CumulantSequence k;
    k.dim = dim;
    k.order = order;
    double mag = scale;
    for (int n = 1; n <= order; ++n) {
        k.maps.push_back(opfree::random_symmetric_map(dim, n - 1, mag, rng));
        mag *= decay;
    }
    // kappa_1 must be self-adjoint
    opfree::BElement k1 = k.maps[0].at(0);
    k.maps[0].at(0) = 0.5 * (k1 + k1.adjoint());
    k.bound = opfree::fit_cumulant_bound(k.maps);
    return k;
}

}  // namespace oracles
