#include "opfree/transforms.hpp"
#include <limits>

#include <cmath>

namespace opfree {

namespace {

ProbePoint iterate_probe(const BElement& w, int level) {
    // Wraps half-plane violations of interior iterates as NoConvergence.
    try {
        return make_probe(w, level);
    } catch (const DomainViolation&) {
        throw NoConvergence("iterate left the upper half-plane; probe too low");
    }
}

}  // namespace

bool TransformDomain::admits(const ProbePoint& b) const {
    if (b.margin <= 0.0) return false;
    const double r = op_norm(invert(b.value));
    const double factor = kind == Kind::Cauchy ? 1.0 : 4.0;
    return bound <= 0.0 || r * factor * bound < 1.0;
}

void TransformDomain::require(const ProbePoint& b) const {
    if (!admits(b))
        throw DomainViolation(kind == Kind::Cauchy
                                  ? "probe violates ||b^-1|| < 1/M"
                                  : "probe violates ||b^-1|| < 1/(4M)");
}

SeriesValue cauchy_series(const TruncatedMoments& mu, const ProbePoint& b, int tail_order) {
    const int k = b.level;
    if (b.algebra_dim() != mu.dim)
        throw DimensionMismatch("cauchy_series: probe dimension mismatch");
    if (tail_order > mu.order)
        throw ValidationError("cauchy_series: tail_order exceeds stored order");
    const BElement binv = invert(b.value);
    const double r = op_norm(binv);
    const double M = mu.bound;
    if (M > 0.0 && M * r >= 1.0)
        throw DomainViolation("cauchy_series: probe violates ||b^-1|| < 1/M");

    BElement acc = binv;
    std::vector<BElement> args;
    for (int n = 1; n <= tail_order; ++n) {
        args.assign(static_cast<std::size_t>(n) - 1, binv);
        acc += binv * mu.m(n).eval_amplified(k, args) * binv;
    }
    // sum_{n>T} M^n r^{n+1}
    const double q = M * r;
    const double tail = r * std::pow(q, tail_order + 1) / (1.0 - q);
    return {acc, tail};
}

BElement cauchy_realized(const RealizedModel& model, const ProbePoint& b) {
    const int k = b.level, d = model.dim, N = model.multiplicity;
    if (b.algebra_dim() != d)
        throw DimensionMismatch("cauchy_realized: probe dimension mismatch");
    const Eigen::Index n = static_cast<Eigen::Index>(k) * d * N;
    Eigen::MatrixXcd resolvent_arg(n, n);
    // b (x) I_N - I_k (x) a with index layout ((kappa, i), u) = (kappa*d + i)*N + u
    resolvent_arg.setZero();
    for (Eigen::Index row = 0; row < static_cast<Eigen::Index>(k) * d; ++row)
        for (Eigen::Index col = 0; col < static_cast<Eigen::Index>(k) * d; ++col)
            for (int u = 0; u < N; ++u)
                resolvent_arg(row * N + u, col * N + u) = b.value(row, col);
    for (int kap = 0; kap < k; ++kap)
        resolvent_arg.block(static_cast<Eigen::Index>(kap) * d * N,
                            static_cast<Eigen::Index>(kap) * d * N, d * N, d * N) -= model.a;
    const Eigen::MatrixXcd res = invert(resolvent_arg);
    // partial trace over the N factor
    BElement out(k * d, k * d);
    for (Eigen::Index row = 0; row < static_cast<Eigen::Index>(k) * d; ++row)
        for (Eigen::Index col = 0; col < static_cast<Eigen::Index>(k) * d; ++col) {
            Complex acc(0.0, 0.0);
            for (int u = 0; u < N; ++u) acc += res(row * N + u, col * N + u);
            out(row, col) = acc / static_cast<double>(N);
        }
    return out;
}

BElement f_transform(const TruncatedMoments& mu, const ProbePoint& b, int tail_order) {
    return invert(cauchy_series(mu, b, tail_order).value);
}

SeriesValue voiculescu_series(const CumulantSequence& kappa, const ProbePoint& b, int tail_order) {
    const int k = b.level;
    if (b.algebra_dim() != kappa.dim)
        throw DimensionMismatch("voiculescu_series: probe dimension mismatch");
    if (tail_order > kappa.order)
        throw ValidationError("voiculescu_series: tail_order exceeds stored order");
    const BElement binv = invert(b.value);
    const double r = op_norm(binv);
    const double M = kappa.bound;
    if (M > 0.0 && 4.0 * M * r >= 1.0)
        throw DomainViolation("voiculescu_series: probe violates ||b^-1|| < 1/(4M)");

    BElement acc = BElement::Zero(k * kappa.dim, k * kappa.dim);
    std::vector<BElement> args;
    for (int n = 1; n <= tail_order; ++n) {
        args.assign(static_cast<std::size_t>(n) - 1, binv);
        acc += kappa.k(n).eval_amplified(k, args);
    }
    const double q = 4.0 * M * r;
    const double tail = M * std::pow(q, tail_order + 1) / (1.0 - q);
    return {acc, tail};
}

InversionResult voiculescu_via_inversion(const TruncatedMoments& mu, const ProbePoint& b,
                                         double tol, int tail_order, int max_iter) {
    auto F = [&](const ProbePoint& w) { return invert(cauchy_series(mu, w, tail_order).value); };

    BElement w = b.value;
    // the first evaluation's domain errors are the caller's problem
    BElement fw = F(b);
    double residual = op_norm(fw - b.value);
    for (int it = 1; it <= max_iter; ++it) {
        if (residual < tol) return {w - b.value, it - 1, residual};
        double alpha = 1.0;
        for (;;) {
            const BElement w_next = w + alpha * (b.value - fw);
            BElement fw_next;
            try {
                fw_next = F(iterate_probe(w_next, b.level));
            } catch (const DomainViolation&) {
                throw NoConvergence("voiculescu_via_inversion: iterate left series domain");
            }
            const double res_next = op_norm(fw_next - b.value);
            if (res_next <= residual || alpha < 1.0 / 1024.0) {
                w = w_next;
                fw = fw_next;
                residual = res_next;
                break;
            }
            alpha *= 0.5;
        }
    }
    throw NoConvergence("voiculescu_via_inversion: no convergence; probe too low in half-plane");
}

CauchyProvider series_provider(TruncatedMoments mu, int tail_order) {
    return [mu = std::move(mu), tail_order](const ProbePoint& b) {
        return cauchy_series(mu, b, tail_order).value;
    };
}

CauchyProvider realized_provider(RealizedModel model) {
    return [model = std::move(model)](const ProbePoint& b) { return cauchy_realized(model, b); };
}

SubordinationResult subordination_convolve(const CauchyProvider& g1, const CauchyProvider& g2,
                                           const ProbePoint& b, double tol, int max_iter) {
    const int level = b.level;
    auto F1 = [&](const BElement& w) { return invert(g1(iterate_probe(w, level))); };
    auto F2 = [&](const BElement& w) { return invert(g2(iterate_probe(w, level))); };

    auto step = [&](const BElement& w) {
        const BElement omega2 = b.value + F1(w) - w;
        return (b.value + F2(omega2) - omega2).eval();
    };

    BElement w = b.value;
    double residual = std::numeric_limits<double>::infinity();
    int iterations = 0;
    for (int it = 1; it <= max_iter; ++it) {
        iterations = it;
        double alpha = 1.0;
        const BElement w_full = step(w);
        double res_full = op_norm(w_full - w);
        BElement w_next = w_full;
        while (res_full > residual && alpha > 1.0 / 1024.0) {
            alpha *= 0.5;
            w_next = w + alpha * (w_full - w);
            res_full = op_norm(step(w_next) - w_next);
        }
        w = w_next;
        residual = op_norm(step(w) - w);
        if (residual < tol) break;
    }
    if (residual >= tol)
        throw NoConvergence("subordination_convolve: fixed point did not reach tolerance");

    SubordinationResult out;
    out.omega1 = w;
    const BElement f1 = F1(w);
    out.omega2 = b.value + f1 - w;
    const BElement f2 = F2(out.omega2);
    out.value = g1(iterate_probe(w, level));
    out.iterations = iterations;
    out.residual = residual;
    out.identity_error = std::max(op_norm(f1 - f2), op_norm(w + out.omega2 - f1 - b.value));
    return out;
}

}  // namespace opfree
