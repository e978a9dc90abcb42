#pragma once

// Cauchy transform G, its multiplicative inverse F, the Voiculescu transform
// phi (series form and compositional inversion), and the two-sided
// subordination fixed point computing free additive convolutions at a probe.
//
// Convention: G(b) = mu((b - X)^{-1}) = sum_{n>=0} b^{-1} mu((X b^{-1})^n),
// mapping the upper half-plane into the closed lower half-plane, so that
// F = G^{-1} satisfies Im F(b) >= Im b and phi = F^{<-1>}(b) - b.

#include <functional>

#include "opfree/dist.hpp"

namespace opfree {

/// Radius rules gating series evaluation: ||b^{-1}|| < 1/M for Cauchy,
/// ||b^{-1}|| < 1/(4M) for the Voiculescu series.
struct TransformDomain {
    enum class Kind { Cauchy, Voiculescu };
    double bound = 0.0;
    int level = 1;
    Kind kind = Kind::Cauchy;

    bool admits(const ProbePoint& b) const;
    void require(const ProbePoint& b) const;  // throws DomainViolation
};

struct SeriesValue {
    BElement value;
    double tail_bound = 0.0;
};

/// Truncated resolvent series at a level-k probe; tail_bound is the geometric
/// remainder sum_{n>tail_order} M^n r^{n+1}, r = ||b^{-1}||.
SeriesValue cauchy_series(const TruncatedMoments& mu, const ProbePoint& b, int tail_order);

/// Exact block resolvent E_B((b (x) I_N - I_k (x) a)^{-1}) of a matrix model.
BElement cauchy_realized(const RealizedModel& model, const ProbePoint& b);

/// invert(G(b)) from the truncated series.
BElement f_transform(const TruncatedMoments& mu, const ProbePoint& b, int tail_order);

/// Truncated cumulant series phi(b) = sum_{n=1}^T kappa_n(b^{-1},...,b^{-1});
/// tail_bound = sum_{n>T} M (4 M r)^n.
SeriesValue voiculescu_series(const CumulantSequence& kappa, const ProbePoint& b, int tail_order);

struct InversionResult {
    BElement value;  // phi(b) = w* - b with F(w*) = b
    int iterations = 0;
    double residual = 0.0;
};

/// Solve F(w) = b by damped fixed-point iteration w <- w + (b - F(w)),
/// starting at w = b. Throws NoConvergence when the iteration fails or an
/// iterate leaves the series domain.
InversionResult voiculescu_via_inversion(const TruncatedMoments& mu, const ProbePoint& b,
                                         double tol, int tail_order, int max_iter = 500);

using CauchyProvider = std::function<BElement(const ProbePoint&)>;

CauchyProvider series_provider(TruncatedMoments mu, int tail_order);
CauchyProvider realized_provider(RealizedModel model);

struct SubordinationResult {
    BElement value;   // G_{mu boxplus nu}(b) = G_1(omega_1)
    BElement omega1;
    BElement omega2;
    int iterations = 0;
    double residual = 0.0;
    /// max of ||F1(w1) - F2(w2)|| and ||w1 + w2 - F1(w1) - b||.
    double identity_error = 0.0;
};

/// Subordination point omega_1(b) as the fixed point of
/// w -> b + h_2(b + h_1(w)), h_i(w) = F_i(w) - w.
SubordinationResult subordination_convolve(const CauchyProvider& g1, const CauchyProvider& g2,
                                           const ProbePoint& b, double tol, int max_iter = 500);

}  // namespace opfree
