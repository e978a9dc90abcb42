#include "opfree/multilinear.hpp"

#include <cmath>

namespace opfree {

namespace {

std::size_t pow_sizet(std::size_t base, int exp) {
    std::size_t out = 1;
    for (int i = 0; i < exp; ++i) out *= base;
    return out;
}

}  // namespace

MultilinearMap::MultilinearMap(int dim, int arity) : dim_(dim), arity_(arity) {
    if (dim < 1 || arity < 0) throw DimensionMismatch("MultilinearMap: bad dim/arity");
    table_.assign(pow_sizet(static_cast<std::size_t>(dim) * dim, arity),
                  BElement::Zero(dim, dim));
}

MultilinearMap MultilinearMap::constant(const BElement& value) {
    MultilinearMap m(static_cast<int>(value.rows()), 0);
    m.table_[0] = value;
    return m;
}

std::size_t MultilinearMap::flat_index(std::span<const int> tuple) const {
    const std::size_t s = static_cast<std::size_t>(dim_) * dim_;
    std::size_t flat = 0;
    for (int j : tuple) flat = flat * s + static_cast<std::size_t>(j);
    return flat;
}

const BElement& MultilinearMap::on_basis(std::span<const int> tuple) const {
    return table_[flat_index(tuple)];
}

BElement MultilinearMap::eval(std::span<const BElement> args) const {
    if (static_cast<int>(args.size()) != arity_)
        throw DimensionMismatch("MultilinearMap::eval: wrong argument count");
    if (arity_ == 0) return table_[0];

    const int s = dim_ * dim_;
    auto coeff = [&](int slot, int j) -> Complex {
        return args[slot](j / dim_, j % dim_);
    };

    std::vector<int> idx(arity_, 0);
    std::vector<Complex> prefix(arity_ + 1);
    prefix[0] = Complex(1.0, 0.0);
    for (int r = 0; r < arity_; ++r) prefix[r + 1] = prefix[r] * coeff(r, 0);

    BElement acc = BElement::Zero(dim_, dim_);
    std::size_t flat = 0;
    for (;;) {
        const Complex c = prefix[arity_];
        if (c != Complex(0.0, 0.0)) acc.noalias() += c * table_[flat];
        int r = arity_ - 1;
        while (r >= 0) {
            if (++idx[r] < s) break;
            idx[r] = 0;
            --r;
        }
        if (r < 0) break;
        for (int u = r; u < arity_; ++u) prefix[u + 1] = prefix[u] * coeff(u, idx[u]);
        ++flat;
    }
    return acc;
}

BElement MultilinearMap::eval_amplified(int k, std::span<const BElement> args) const {
    if (k == 1) return eval(args);
    if (static_cast<int>(args.size()) != arity_)
        throw DimensionMismatch("MultilinearMap::eval_amplified: wrong argument count");
    const int d = dim_;
    if (arity_ == 0) return amplify_diag(table_[0], k);
    for (const auto& a : args)
        if (a.rows() != static_cast<Eigen::Index>(k) * d || a.cols() != a.rows())
            throw DimensionMismatch("MultilinearMap::eval_amplified: argument not in M_k(B)");

    // Pre-slice argument blocks.
    std::vector<std::vector<std::vector<BElement>>> blk(arity_);
    for (int r = 0; r < arity_; ++r) {
        blk[r].assign(k, std::vector<BElement>(k));
        for (int a = 0; a < k; ++a)
            for (int b = 0; b < k; ++b) blk[r][a][b] = block_of(args[r], k, a, b);
    }

    BElement out = BElement::Zero(k * d, k * d);
    std::vector<BElement> chain(arity_);
    std::vector<int> path(arity_ + 1, 0);  // path[0] = P, path[arity_] = Q
    for (int P = 0; P < k; ++P) {
        for (int Q = 0; Q < k; ++Q) {
            path.front() = P;
            path.back() = Q;
            // interior indices path[1..arity_-1] run an odometer over k
            std::fill(path.begin() + 1, path.end() - 1, 0);
            BElement block = BElement::Zero(d, d);
            for (;;) {
                for (int r = 0; r < arity_; ++r) chain[r] = blk[r][path[r]][path[r + 1]];
                block += eval(chain);
                int r = arity_ - 1;
                while (r >= 1) {
                    if (++path[r] < k) break;
                    path[r] = 0;
                    --r;
                }
                if (r < 1) break;
            }
            out.block(P * d, Q * d, d, d) = block;
        }
    }
    return out;
}

double MultilinearMap::max_basis_norm() const {
    double worst = 0.0;
    for (const auto& m : table_) worst = std::max(worst, op_norm(m));
    return worst;
}

MultilinearMap MultilinearMap::adjoint_flip() const {
    MultilinearMap out(dim_, arity_);
    const int s = dim_ * dim_;
    std::vector<int> tuple(arity_, 0);
    for (std::size_t flat = 0; flat < table_.size(); ++flat) {
        // decode big-endian tuple
        std::size_t rem = flat;
        for (int r = arity_ - 1; r >= 0; --r) {
            tuple[r] = static_cast<int>(rem % s);
            rem /= s;
        }
        // reverse slots, adjoint each basis index (p,q) -> (q,p)
        std::vector<int> flipped(arity_);
        for (int r = 0; r < arity_; ++r) {
            const int j = tuple[arity_ - 1 - r];
            flipped[r] = (j % dim_) * dim_ + (j / dim_);
        }
        out.table_[out.flat_index(flipped)] = table_[flat].adjoint();
    }
    return out;
}

double MultilinearMap::symmetry_defect() const {
    const MultilinearMap flip = adjoint_flip();
    double worst = 0.0;
    for (std::size_t i = 0; i < table_.size(); ++i)
        worst = std::max(worst, op_norm(table_[i] - flip.table_[i]));
    return worst;
}

MultilinearMap& MultilinearMap::operator+=(const MultilinearMap& other) {
    if (dim_ != other.dim_ || arity_ != other.arity_)
        throw DimensionMismatch("MultilinearMap::operator+=: shape mismatch");
    for (std::size_t i = 0; i < table_.size(); ++i) table_[i] += other.table_[i];
    return *this;
}

MultilinearMap& MultilinearMap::operator*=(double scale) {
    for (auto& m : table_) m *= scale;
    return *this;
}

MultilinearMap random_symmetric_map(int dim, int arity, double scale, std::mt19937_64& rng) {
    MultilinearMap m(dim, arity);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (std::size_t i = 0; i < m.table_size(); ++i) {
        BElement e(dim, dim);
        for (int r = 0; r < dim; ++r)
            for (int c = 0; c < dim; ++c) e(r, c) = Complex(gauss(rng), gauss(rng)) * scale;
        m.at(i) = e;
    }
    MultilinearMap flip = m.adjoint_flip();
    for (std::size_t i = 0; i < m.table_size(); ++i) m.at(i) = 0.5 * (m.at(i) + flip.at(i));
    return m;
}

}  // namespace opfree
