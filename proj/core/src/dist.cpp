#include "opfree/dist.hpp"
#include <limits>

#include <Eigen/Eigenvalues>
#include <cmath>

namespace opfree {

namespace {

// Decode the big-endian basis tuple of a flat index into (p,q) pairs.
void decode_tuple(std::size_t flat, int arity, int d, std::vector<int>& P, std::vector<int>& Q) {
    const std::size_t s = static_cast<std::size_t>(d) * d;
    for (int r = arity - 1; r >= 0; --r) {
        const int j = static_cast<int>(flat % s);
        flat /= s;
        P[r] = j / d;
        Q[r] = j % d;
    }
}

// Flat index of the sub-tuple of coefficients [first, first+len) (0-based).
std::size_t subtuple_flat(const std::vector<int>& P, const std::vector<int>& Q, int d,
                          int first, int len) {
    const std::size_t s = static_cast<std::size_t>(d) * d;
    std::size_t flat = 0;
    for (int i = first; i < first + len; ++i)
        flat = flat * s + static_cast<std::size_t>(P[i] * d + Q[i]);
    return flat;
}

// Sum over the non-crossing partitions of {1..n} grouped by the block V
// containing the first letter: each V = {1=v_1<...<v_s} contributes
// kappa_s(a_1,...,a_{s-1}) * t, where a_r splices the moment of the gap
// between v_r and v_{r+1} between the adjacent coefficients, and t is the
// boundary coefficient times the moment of the tail after v_s. On matrix-unit
// coefficients every a_r is a scalar multiple of a matrix unit, so the outer
// cumulant evaluation reduces to one table lookup.
BElement first_block_sum(int n, int d, const std::vector<int>& P, const std::vector<int>& Q,
                         const std::vector<MultilinearMap>& moments,
                         const std::vector<MultilinearMap>& cumulants, bool skip_full) {
    BElement acc = BElement::Zero(d, d);
    const std::uint32_t nmasks = n >= 1 ? (1u << (n - 1)) : 1u;
    const std::uint32_t full = nmasks - 1;
    std::vector<int> v;
    v.reserve(n);
    for (std::uint32_t mask = 0; mask < nmasks; ++mask) {
        if (skip_full && mask == full) continue;
        v.clear();
        v.push_back(1);
        for (int u = 2; u <= n; ++u)
            if (mask & (1u << (u - 2))) v.push_back(u);
        const int s = static_cast<int>(v.size());

        Complex scalar(1.0, 0.0);
        std::size_t kflat = 0;
        const std::size_t dd = static_cast<std::size_t>(d) * d;
        bool dead = false;
        for (int r = 0; r + 1 < s; ++r) {
            const int gap = v[r + 1] - v[r] - 1;
            if (gap == 0) {
                kflat = kflat * dd + static_cast<std::size_t>(P[v[r] - 1] * d + Q[v[r] - 1]);
            } else {
                const MultilinearMap& G = moments[static_cast<std::size_t>(gap) - 1];
                const BElement& g = G.at(subtuple_flat(P, Q, d, v[r], gap - 1));
                const Complex c = g(Q[v[r] - 1], P[v[r + 1] - 2]);
                if (c == Complex(0.0, 0.0)) {
                    dead = true;
                    break;
                }
                scalar *= c;
                kflat = kflat * dd + static_cast<std::size_t>(P[v[r] - 1] * d + Q[v[r + 1] - 2]);
            }
        }
        if (dead) continue;
        const BElement& kval = cumulants[static_cast<std::size_t>(s) - 1].at(kflat);

        const int tail = n - v[s - 1];
        if (tail == 0) {
            acc.noalias() += scalar * kval;
        } else {
            const MultilinearMap& T = moments[static_cast<std::size_t>(tail) - 1];
            const BElement& tmat = T.at(subtuple_flat(P, Q, d, v[s - 1], tail - 1));
            const int p = P[v[s - 1] - 1], q = Q[v[s - 1] - 1];
            acc.noalias() += scalar * (kval.col(p) * tmat.row(q));
        }
    }
    return acc;
}

Eigen::MatrixXcd chain_step(const Eigen::MatrixXcd& L, int p, int q, int N,
                            const Eigen::MatrixXcd& a) {
    // L * (E_{pq} (x) I_N) * a = L[:, block p] * a[block q, :]
    return L.middleCols(static_cast<Eigen::Index>(p) * N, N) *
           a.middleRows(static_cast<Eigen::Index>(q) * N, N);
}

}  // namespace

BElement RealizedModel::expect_B(const Eigen::MatrixXcd& x) const {
    BElement out = BElement::Zero(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            Complex acc(0.0, 0.0);
            for (int u = 0; u < multiplicity; ++u)
                acc += x(static_cast<Eigen::Index>(i) * multiplicity + u,
                         static_cast<Eigen::Index>(j) * multiplicity + u);
            out(i, j) = acc / static_cast<double>(multiplicity);
        }
    return out;
}

Complex RealizedModel::trace(const Eigen::MatrixXcd& x) const {
    return x.trace() / static_cast<double>(dim * multiplicity);
}

Eigen::MatrixXcd RealizedModel::embed(const BElement& b) const {
    const int N = multiplicity;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim) * N,
                                                  static_cast<Eigen::Index>(dim) * N);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            out.block(static_cast<Eigen::Index>(i) * N, static_cast<Eigen::Index>(j) * N, N, N) =
                b(i, j) * Eigen::MatrixXcd::Identity(N, N);
    return out;
}

RealizedModel make_realized(int dim, int multiplicity, const Eigen::MatrixXcd& a) {
    if (dim < 1 || multiplicity < 1)
        throw DimensionMismatch("make_realized: bad dimensions");
    if (a.rows() != static_cast<Eigen::Index>(dim) * multiplicity || a.rows() != a.cols())
        throw DimensionMismatch("make_realized: matrix shape mismatch");
    const double defect = op_norm(a - a.adjoint());
    if (defect > 1e-10 * (1.0 + op_norm(a)))
        throw ValidationError("make_realized: matrix not self-adjoint");
    RealizedModel m;
    m.dim = dim;
    m.multiplicity = multiplicity;
    m.a = 0.5 * (a + a.adjoint());
    return m;
}

RealizedModel random_realized(int dim, int multiplicity, double norm, std::uint64_t seed) {
    const int n = dim * multiplicity;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXcd r(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r(i, j) = Complex(gauss(rng), gauss(rng));
    Eigen::MatrixXcd a = 0.5 * (r + r.adjoint());
    const double nrm = op_norm(a);
    if (nrm > 0.0) a *= norm / nrm;
    return make_realized(dim, multiplicity, a);
}

TruncatedMoments moments_from_realized(const RealizedModel& model, int order) {
    const int d = model.dim, N = model.multiplicity;
    TruncatedMoments mu;
    mu.dim = d;
    mu.order = order;
    mu.bound = op_norm(model.a);
    mu.maps.reserve(order);
    for (int n = 1; n <= order; ++n) {
        const int arity = n - 1;
        MultilinearMap map(d, arity);
        if (arity == 0) {
            map.at(0) = model.expect_B(model.a);
        } else {
            const int s = d * d;
            std::vector<int> idx(arity, 0);
            // partials[r] = a C(j_1) a ... C(j_r) a
            std::vector<Eigen::MatrixXcd> partials(arity + 1);
            partials[0] = model.a;
            for (int r = 0; r < arity; ++r) partials[r + 1] = chain_step(partials[r], 0, 0, N, model.a);
            std::size_t flat = 0;
            for (;;) {
                map.at(flat) = model.expect_B(partials[arity]);
                int r = arity - 1;
                while (r >= 0) {
                    if (++idx[r] < s) break;
                    idx[r] = 0;
                    --r;
                }
                if (r < 0) break;
                for (int u = r; u < arity; ++u)
                    partials[u + 1] = chain_step(partials[u], idx[u] / d, idx[u] % d, N, model.a);
                ++flat;
            }
        }
        mu.maps.push_back(std::move(map));
    }
    return mu;
}

CumulantSequence point_mass(const BElement& b, int order) {
    const int d = static_cast<int>(b.rows());
    if (b.rows() != b.cols()) throw DimensionMismatch("point_mass: non-square b");
    if (op_norm(b - b.adjoint()) > 1e-10 * (1.0 + op_norm(b)))
        throw ValidationError("point_mass: b not self-adjoint");
    CumulantSequence k;
    k.dim = d;
    k.order = order;
    k.maps.reserve(order);
    k.maps.push_back(MultilinearMap::constant(0.5 * (b + b.adjoint())));
    for (int n = 2; n <= order; ++n) k.maps.emplace_back(d, n - 1);
    k.bound = fit_cumulant_bound(k.maps);
    return k;
}

CumulantSequence semicircular(const Eigen::MatrixXcd& eta, int dim, int order) {
    const int d = dim;
    const int dd = d * d;
    if (eta.rows() != dd || eta.cols() != dd)
        throw DimensionMismatch("semicircular: eta must be d^2 x d^2");
    if (order < 2) throw ValidationError("semicircular: order must be >= 2");
    // Choi matrix C[(p,i),(q,j)] = eta(E_{pq})(i,j); CP <=> PSD.
    Eigen::MatrixXcd choi(dd, dd);
    for (int p = 0; p < d; ++p)
        for (int q = 0; q < d; ++q)
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    choi(p * d + i, q * d + j) = eta(i * d + j, p * d + q);
    const double asym = op_norm(choi - choi.adjoint());
    if (asym > 1e-10 * (1.0 + op_norm(choi)))
        throw ValidationError("semicircular: eta not hermiticity-preserving");
    const double mineig = min_eigenvalue_selfadjoint(0.5 * (choi + choi.adjoint()));
    if (mineig < -1e-10 * (1.0 + op_norm(choi)))
        throw ValidationError("semicircular: eta not completely positive");

    CumulantSequence k;
    k.dim = d;
    k.order = order;
    k.maps.reserve(order);
    k.maps.emplace_back(d, 0);
    MultilinearMap kappa2(d, 1);
    for (int j = 0; j < dd; ++j) {
        BElement e(d, d);
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) e(r, c) = eta(r * d + c, j);
        kappa2.at(static_cast<std::size_t>(j)) = e;
    }
    k.maps.push_back(std::move(kappa2));
    for (int n = 3; n <= order; ++n) k.maps.emplace_back(d, n - 1);
    k.bound = fit_cumulant_bound(k.maps);
    return k;
}

TruncatedMoments moments_from_cumulants(const CumulantSequence& kappa) {
    const int d = kappa.dim;
    TruncatedMoments mu;
    mu.dim = d;
    mu.order = kappa.order;
    mu.maps.reserve(kappa.order);
    std::vector<int> P, Q;
    for (int n = 1; n <= kappa.order; ++n) {
        const int arity = n - 1;
        MultilinearMap map(d, arity);
        P.assign(arity, 0);
        Q.assign(arity, 0);
        for (std::size_t flat = 0; flat < map.table_size(); ++flat) {
            decode_tuple(flat, arity, d, P, Q);
            map.at(flat) = first_block_sum(n, d, P, Q, mu.maps, kappa.maps, false);
        }
        mu.maps.push_back(std::move(map));
    }
    mu.bound = fit_moment_bound(mu.maps);
    return mu;
}

CumulantSequence cumulants_from_moments(const TruncatedMoments& mu) {
    const int d = mu.dim;
    CumulantSequence k;
    k.dim = d;
    k.order = mu.order;
    k.maps.reserve(mu.order);
    std::vector<int> P, Q;
    for (int n = 1; n <= mu.order; ++n) {
        const int arity = n - 1;
        MultilinearMap map(d, arity);
        P.assign(arity, 0);
        Q.assign(arity, 0);
        for (std::size_t flat = 0; flat < map.table_size(); ++flat) {
            decode_tuple(flat, arity, d, P, Q);
            map.at(flat) = mu.m(n).at(flat) - first_block_sum(n, d, P, Q, mu.maps, k.maps, true);
        }
        k.maps.push_back(std::move(map));
    }
    k.bound = fit_cumulant_bound(k.maps);
    return k;
}

CumulantSequence free_convolve(const CumulantSequence& a, const CumulantSequence& b) {
    if (a.dim != b.dim || a.order != b.order)
        throw DimensionMismatch("free_convolve: dim/order mismatch");
    CumulantSequence out = a;
    for (int n = 1; n <= out.order; ++n) out.k(n) += b.k(n);
    out.bound = a.bound + b.bound;
    return out;
}

ScaledCumulants convolution_power(const CumulantSequence& mu, double t) {
    if (!(t > 0.0)) throw ValidationError("convolution_power: t must be positive");
    ScaledCumulants out{mu, t >= 1.0};
    for (int n = 1; n <= mu.order; ++n) out.kappa.k(n) *= t;
    out.kappa.bound = fit_cumulant_bound(out.kappa.maps);
    return out;
}

CenteredCumulants center(const CumulantSequence& mu) {
    CenteredCumulants out{mu, mu.k(1).at(0)};
    out.centered.k(1).at(0).setZero();
    out.centered.bound = fit_cumulant_bound(out.centered.maps);
    return out;
}

ExpBoundReport exp_bound_check(const TruncatedMoments& mu, double M, int samples_per_order,
                               std::uint64_t seed) {
    ExpBoundReport rep;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int d = mu.dim;
    for (int n = 1; n <= mu.order; ++n) {
        const double denom = std::pow(M, n + 1);
        double worst = mu.m(n).max_basis_norm();
        if (n > 1) {
            std::vector<BElement> args(static_cast<std::size_t>(n) - 1);
            for (int s = 0; s < samples_per_order; ++s) {
                for (auto& arg : args) {
                    BElement e(d, d);
                    for (int r = 0; r < d; ++r)
                        for (int c = 0; c < d; ++c) e(r, c) = Complex(gauss(rng), gauss(rng));
                    const double nrm = op_norm(e);
                    if (nrm > 0.0) e /= nrm;
                    arg = e;
                }
                worst = std::max(worst, op_norm(mu.m(n).eval(args)));
            }
        }
        const double ratio = denom > 0.0 ? worst / denom
                                         : (worst > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
        if (ratio > rep.worst_ratio) {
            rep.worst_ratio = ratio;
            rep.worst_order = n;
        }
    }
    rep.pass = rep.worst_ratio <= 1.0 + 1e-9;
    return rep;
}

double fit_moment_bound(const std::vector<MultilinearMap>& maps) {
    double M = 0.0;
    for (std::size_t i = 0; i < maps.size(); ++i) {
        const int n = static_cast<int>(i) + 1;
        const double nrm = maps[i].max_basis_norm();
        if (nrm > 0.0) M = std::max(M, std::pow(nrm, 1.0 / (n + 1)));
    }
    return M;
}

double fit_cumulant_bound(const std::vector<MultilinearMap>& maps) {
    double M = 0.0;
    for (std::size_t i = 0; i < maps.size(); ++i) {
        const int n = static_cast<int>(i) + 1;
        const double nrm = maps[i].max_basis_norm();
        if (nrm > 0.0) M = std::max(M, std::pow(nrm / std::pow(4.0, n), 1.0 / (n + 1)));
    }
    return M;
}

double tensor_distance(const std::vector<MultilinearMap>& a,
                       const std::vector<MultilinearMap>& b) {
    if (a.size() != b.size()) throw DimensionMismatch("tensor_distance: order mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].table_size() != b[i].table_size())
            throw DimensionMismatch("tensor_distance: shape mismatch");
        for (std::size_t j = 0; j < a[i].table_size(); ++j)
            worst = std::max(worst, op_norm(a[i].at(j) - b[i].at(j)));
    }
    return worst;
}

double tensor_max_norm(const std::vector<MultilinearMap>& maps) {
    double worst = 0.0;
    for (const auto& m : maps) worst = std::max(worst, m.max_basis_norm());
    return worst;
}

}  // namespace opfree
