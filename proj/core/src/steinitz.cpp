#include "opfree/steinitz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace opfree {

namespace {

constexpr double kBoundTol = 1e-12;   // weight considered pinned to {0,1}
constexpr double kRankTol = 1e-9;

int numerical_rank(const Eigen::MatrixXd& m) {
    if (m.size() == 0) return 0;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
    qr.setThreshold(kRankTol);
    return static_cast<int>(qr.rank());
}

// Move w (restricted to `active`) to an extreme point of
// { 0 <= w <= 1, sum w = const, sum w_i v_i = const } by stepping along
// kernel vectors of the fractional columns until none remain.
void purify(std::vector<double>& w, const std::vector<int>& active,
            const std::vector<Eigen::VectorXd>& vs, int n_dim) {
    const int rows = n_dim + 1;
    for (;;) {
        std::vector<int> frac;
        for (int idx : active)
            if (w[idx] > kBoundTol && w[idx] < 1.0 - kBoundTol) frac.push_back(idx);
        if (frac.empty()) return;
        const int cols = std::min<int>(static_cast<int>(frac.size()), rows + 1);
        Eigen::MatrixXd A(rows, cols);
        for (int c = 0; c < cols; ++c) {
            A(0, c) = 1.0;
            A.col(c).tail(n_dim) = vs[frac[c]];
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
        lu.setThreshold(kRankTol);
        if (lu.dimensionOfKernel() == 0) {
            if (static_cast<int>(frac.size()) <= rows) return;  // independent support: vertex
            // cols == rows + 1 forces a kernel vector, so this cannot happen
            throw Error("steinitz purify: kernel unexpectedly empty");
        }
        Eigen::VectorXd z = lu.kernel().col(0);
        // deterministic sign: largest-magnitude component positive
        int imax = 0;
        for (int c = 1; c < cols; ++c)
            if (std::abs(z(c)) > std::abs(z(imax))) imax = c;
        if (z(imax) < 0.0) z = -z;
        double theta = std::numeric_limits<double>::infinity();
        for (int c = 0; c < cols; ++c) {
            if (z(c) > kBoundTol) theta = std::min(theta, (1.0 - w[frac[c]]) / z(c));
            else if (z(c) < -kBoundTol) theta = std::min(theta, w[frac[c]] / (-z(c)));
        }
        if (!std::isfinite(theta)) throw Error("steinitz purify: unbounded step");
        for (int c = 0; c < cols; ++c) {
            w[frac[c]] += theta * z(c);
            if (w[frac[c]] < kBoundTol) w[frac[c]] = 0.0;
            if (w[frac[c]] > 1.0 - kBoundTol) w[frac[c]] = 1.0;
        }
    }
}

double max_prefix_norm(const std::vector<Eigen::VectorXd>& vs, const std::vector<int>& order) {
    if (vs.empty()) return 0.0;
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(vs[0].size());
    double worst = 0.0;
    for (int idx : order) {
        acc += vs[idx];
        worst = std::max(worst, acc.norm());
    }
    return worst;
}

}  // namespace

SteinitzInstance make_instance(std::vector<Eigen::VectorXd> vectors) {
    if (vectors.empty()) throw InfeasibleInput("make_instance: no vectors");
    SteinitzInstance inst;
    inst.n_dim = static_cast<int>(vectors[0].size());
    if (inst.n_dim < 1) throw InfeasibleInput("make_instance: zero-dimensional vectors");
    inst.sum = Eigen::VectorXd::Zero(inst.n_dim);
    for (const auto& v : vectors) {
        if (static_cast<int>(v.size()) != inst.n_dim)
            throw InfeasibleInput("make_instance: inconsistent vector lengths");
        inst.norm_cap = std::max(inst.norm_cap, v.norm());
        inst.sum += v;
    }
    inst.vectors = std::move(vectors);
    return inst;
}

SelectionResult rearrange_zero_sum(const SteinitzInstance& inst) {
    const int k = static_cast<int>(inst.vectors.size());
    const int n = inst.n_dim;
    const double cap = inst.norm_cap;
    if (inst.sum.norm() > 1e-9 * std::max(1.0, cap))
        throw InfeasibleInput("rearrange_zero_sum: vectors do not sum to zero");

    SelectionResult out;
    out.is_permutation = true;
    if (cap == 0.0) {
        out.indices.resize(k);
        for (int i = 0; i < k; ++i) out.indices[i] = i;
        out.effective_dim = 0;
        return out;
    }

    // rescale to the unit ball and translate to an exactly zero sum
    std::vector<Eigen::VectorXd> vs(inst.vectors.begin(), inst.vectors.end());
    for (auto& v : vs) v /= cap;
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(n);
    for (const auto& v : vs) mean += v;
    mean /= static_cast<double>(k);
    for (auto& v : vs) v -= mean;

    Eigen::MatrixXd vm(n, k);
    for (int i = 0; i < k; ++i) vm.col(i) = vs[i];
    const int r = std::max(1, numerical_rank(vm));
    out.effective_dim = r;

    out.indices.assign(k, -1);
    std::vector<int> active(k);
    for (int i = 0; i < k; ++i) active[i] = i;

    if (k > r) {
        std::vector<double> w(k, static_cast<double>(k - r) / k);
        for (int t = k; t > r; --t) {
            const double c = static_cast<double>(t - 1 - r) / (t - r);
            for (int idx : active) w[idx] *= c;
            purify(w, active, vs, n);
            // an extreme point at this level always carries a zero weight
            int jpos = 0;
            for (std::size_t u = 1; u < active.size(); ++u) {
                if (w[active[u]] < w[active[jpos]] - kBoundTol ||
                    (std::abs(w[active[u]] - w[active[jpos]]) <= kBoundTol &&
                     active[u] < active[jpos]))
                    jpos = static_cast<int>(u);
            }
            out.indices[t - 1] = active[jpos];
            active.erase(active.begin() + jpos);
        }
    }
    std::sort(active.begin(), active.end());
    for (std::size_t u = 0; u < active.size(); ++u) out.indices[u] = active[u];

    out.achieved_deviation = max_prefix_norm(inst.vectors, out.indices);
    out.certified_bound = r * cap + 1e-6;
    return out;
}

SelectionResult subset_select(const SteinitzInstance& inst, double t, std::optional<double> eps_opt) {
    if (!(t > 0.0 && t < 1.0)) throw ValidationError("subset_select: t must lie in (0,1)");
    const int n = inst.n_dim;
    const int k = static_cast<int>(inst.vectors.size());
    const double eps = eps_opt.value_or(inst.norm_cap);
    if (inst.norm_cap > eps + 1e-12)
        throw InfeasibleInput("subset_select: vector norms exceed the declared cap");

    const Eigen::VectorXd v = inst.sum;
    const double vnorm = v.norm();

    // Householder reflection sending v/|v| to e_1 (identity when degenerate).
    Eigen::MatrixXd R = Eigen::MatrixXd::Identity(n, n);
    if (vnorm > 1e-12) {
        Eigen::VectorXd u = v / vnorm;
        u(0) -= 1.0;
        const double un2 = u.squaredNorm();
        if (un2 > 1e-24) R -= (2.0 / un2) * (u * u.transpose());
    }

    std::vector<double> first(k);
    std::vector<Eigen::VectorXd> orth(k);
    for (int i = 0; i < k; ++i) {
        Eigen::VectorXd rv = R * inst.vectors[i];
        first[i] = rv(0);
        orth[i] = n > 1 ? rv.tail(n - 1).eval() : Eigen::VectorXd::Zero(0);
    }

    std::vector<int> order(k);
    int rank_orth = 0;
    if (n > 1) {
        SelectionResult re = rearrange_zero_sum(make_instance(orth));
        order = re.indices;
        rank_orth = re.effective_dim;
    } else {
        for (int i = 0; i < k; ++i) order[i] = i;
    }

    // intermediate-value scan on the first coordinate
    const double target = t * vnorm;
    double best = std::abs(0.0 - target);
    int best_m = 0;
    double run = 0.0;
    for (int m = 1; m <= k; ++m) {
        run += first[order[m - 1]];
        const double dev = std::abs(run - target);
        if (dev < best - 1e-15) {
            best = dev;
            best_m = m;
        }
    }

    SelectionResult out;
    out.is_permutation = false;
    out.indices.assign(order.begin(), order.begin() + best_m);
    std::sort(out.indices.begin(), out.indices.end());
    Eigen::VectorXd chosen = Eigen::VectorXd::Zero(n);
    for (int idx : out.indices) chosen += inst.vectors[idx];
    out.achieved_deviation = (chosen - t * v).norm();
    out.effective_dim = std::min(n, rank_orth + 1);
    out.certified_bound = out.effective_dim * eps + 1e-6;
    return out;
}

std::vector<RowSelection> array_select(const std::vector<SteinitzInstance>& rows, double t,
                                       std::optional<Eigen::VectorXd> target_opt) {
    std::vector<RowSelection> out;
    if (rows.empty()) return out;
    const Eigen::VectorXd target = target_opt.value_or(rows.back().sum);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        RowSelection row;
        row.row = static_cast<int>(i);
        row.eps = rows[i].norm_cap;
        try {
            if (rows[i].n_dim != static_cast<int>(target.size()))
                throw DimensionMismatch("array_select: row dimension differs from the target");
            row.drift = (rows[i].sum - target).norm();
            row.result = subset_select(rows[i], t);
            Eigen::VectorXd chosen = Eigen::VectorXd::Zero(rows[i].n_dim);
            for (int idx : row.result.indices) chosen += rows[i].vectors[idx];
            row.deviation = (chosen - t * target).norm();
            row.budget = row.result.certified_bound + t * row.drift;
            row.ok = true;
        } catch (const Error& e) {
            row.ok = false;
            row.error = e.what();
        }
        out.push_back(std::move(row));
    }
    return out;
}

}  // namespace opfree
