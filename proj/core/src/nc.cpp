#include "opfree/nc.hpp"

#include <algorithm>
#include <cstdint>

namespace opfree {

void canonicalize_partition(NCPartition& p) {
    std::vector<int> seen(p.n, 0);
    for (auto& block : p.blocks) {
        if (block.empty()) throw ValidationError("partition: empty block");
        std::sort(block.begin(), block.end());
        for (int e : block) {
            if (e < 0 || e >= p.n) throw ValidationError("partition: element out of range");
            if (seen[e]++) throw ValidationError("partition: repeated element");
        }
    }
    for (int e = 0; e < p.n; ++e)
        if (!seen[e]) throw ValidationError("partition: element missing");
    std::sort(p.blocks.begin(), p.blocks.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
}

bool is_noncrossing(const NCPartition& p) {
    const int n = p.n;
    std::vector<int> block_of(n, -1), last_of(p.blocks.size(), -1);
    for (std::size_t b = 0; b < p.blocks.size(); ++b)
        for (int e : p.blocks[b]) {
            block_of[e] = static_cast<int>(b);
            last_of[b] = std::max(last_of[b], e);
        }
    std::vector<int> stack;
    std::vector<char> open(p.blocks.size(), 0);
    for (int i = 0; i < n; ++i) {
        const int b = block_of[i];
        if (open[b]) {
            if (stack.empty() || stack.back() != b) return false;
        } else {
            open[b] = 1;
            stack.push_back(b);
        }
        if (i == last_of[b]) stack.pop_back();
    }
    return true;
}

std::uint64_t bell_number(int n) {
    // Bell triangle; B_n is the last entry of row n.
    std::vector<std::uint64_t> row{1};
    for (int i = 1; i < n; ++i) {
        std::vector<std::uint64_t> next{row.back()};
        for (std::uint64_t v : row) next.push_back(next.back() + v);
        row = std::move(next);
    }
    return row.back();
}

std::vector<NCPartition> enumerate_nc(int n) {
    if (n < 1 || n > 12) throw ValidationError("enumerate_nc: n out of range [1,12]");
    std::vector<NCPartition> out;
    // Restricted growth strings in lexicographic order.
    std::vector<int> rgs(n, 0);
    for (;;) {
        int nblocks = 1 + *std::max_element(rgs.begin(), rgs.end());
        NCPartition p;
        p.n = n;
        p.blocks.assign(nblocks, {});
        for (int i = 0; i < n; ++i) p.blocks[rgs[i]].push_back(i);
        if (is_noncrossing(p)) out.push_back(std::move(p));
        // next RGS: increment rightmost position that can grow
        int i = n - 1;
        for (; i >= 1; --i) {
            int maxprev = 0;
            for (int u = 0; u < i; ++u) maxprev = std::max(maxprev, rgs[u]);
            if (rgs[i] <= maxprev) {
                ++rgs[i];
                std::fill(rgs.begin() + i + 1, rgs.end(), 0);
                break;
            }
        }
        if (i == 0) break;
    }
    return out;
}

BElement contract_evaluate(const NCPartition& p, const KappaFn& kappa,
                           const std::vector<BElement>& coeffs) {
    const int n = p.n;
    if (static_cast<int>(coeffs.size()) != n - 1)
        throw DimensionMismatch("contract_evaluate: need n-1 coefficients");
    NCPartition q = p;
    canonicalize_partition(q);
    if (!is_noncrossing(q)) throw ValidationError("contract_evaluate: partition crosses");

    const int d = n > 1 ? static_cast<int>(coeffs[0].rows())
                        : static_cast<int>(kappa(1, {}).rows());
    const BElement id = BElement::Identity(d, d);

    std::vector<int> block_of(n);
    std::vector<int> block_size(q.blocks.size());
    for (std::size_t b = 0; b < q.blocks.size(); ++b) {
        block_size[b] = static_cast<int>(q.blocks[b].size());
        for (int e : q.blocks[b]) block_of[e] = static_cast<int>(b);
    }

    // Current word: letters with block ids, gaps[i] sits left of letter i,
    // gaps[len] closes the word.
    std::vector<int> letters(block_of);
    std::vector<BElement> gaps;
    gaps.reserve(n + 1);
    gaps.push_back(id);
    for (const auto& c : coeffs) gaps.push_back(c);
    gaps.push_back(id);

    while (!letters.empty()) {
        const int len = static_cast<int>(letters.size());
        int start = -1, m = 0;
        for (int i = 0; i < len;) {
            int j = i;
            while (j < len && letters[j] == letters[i]) ++j;
            if (j - i == block_size[letters[i]]) {
                start = i;
                m = j - i;
                break;
            }
            i = j;
        }
        if (start < 0) throw ValidationError("contract_evaluate: no interval block found");
        std::vector<BElement> args(gaps.begin() + start + 1, gaps.begin() + start + m);
        const BElement value = kappa(m, args);
        BElement merged = gaps[start] * value * gaps[start + m];
        letters.erase(letters.begin() + start, letters.begin() + start + m);
        gaps.erase(gaps.begin() + start, gaps.begin() + start + m + 1);
        gaps.insert(gaps.begin() + start, std::move(merged));
    }
    return gaps.front();
}

}  // namespace opfree
