#include "opfree/hinchin.hpp"
#include <limits>
#include <atomic>

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>

namespace opfree {

namespace {

std::vector<BElement> selfadjoint_basis(int d) {
    std::vector<BElement> out;
    const Complex i_unit(0.0, 1.0);
    for (int i = 0; i < d; ++i) {
        BElement e = BElement::Zero(d, d);
        e(i, i) = 1.0;
        out.push_back(e);
    }
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            BElement e = BElement::Zero(d, d);
            e(i, j) = 1.0;
            e(j, i) = 1.0;
            out.push_back(e);
            BElement f = BElement::Zero(d, d);
            f(i, j) = i_unit;
            f(j, i) = -i_unit;
            out.push_back(f);
        }
    return out;
}

CumulantSequence zero_cumulants(int dim, int order) {
    CumulantSequence k;
    k.dim = dim;
    k.order = order;
    for (int n = 1; n <= order; ++n) k.maps.emplace_back(dim, n - 1);
    return k;
}

void add_maps(std::vector<MultilinearMap>& acc, const std::vector<MultilinearMap>& other,
              double scale) {
    for (std::size_t i = 0; i < acc.size(); ++i)
        for (std::size_t j = 0; j < acc[i].table_size(); ++j)
            acc[i].at(j) += scale * other[i].at(j);
}

// ---- monomial family machinery for the condition checkers ----

struct UnitWord {
    int letters = 0;
    std::vector<int> units;  // basis indices, letters + 1 of them
};

std::vector<UnitWord> monomial_family(int d, int degree_cutoff) {
    std::vector<UnitWord> out;
    const int dd = d * d;
    for (int m = 0; m <= degree_cutoff; ++m) {
        std::vector<int> idx(m + 1, 0);
        for (;;) {
            out.push_back(UnitWord{m, idx});
            int r = m;
            while (r >= 0) {
                if (++idx[r] < dd) break;
                idx[r] = 0;
                --r;
            }
            if (r < 0) break;
        }
    }
    return out;
}

UnitWord word_adjoint(const UnitWord& w, int d) {
    UnitWord out;
    out.letters = w.letters;
    out.units.reserve(w.units.size());
    for (auto it = w.units.rbegin(); it != w.units.rend(); ++it)
        out.units.push_back((*it % d) * d + (*it / d));
    return out;
}

// concatenate a * b, optionally inserting a letter X between them; returns
// false when the merged boundary units annihilate.
bool word_product(const UnitWord& a, const UnitWord& b, bool insert_x, int d, UnitWord& out) {
    if (insert_x) {
        out.letters = a.letters + b.letters + 1;
        out.units = a.units;
        out.units.insert(out.units.end(), b.units.begin(), b.units.end());
        return true;
    }
    const int u1 = a.units.back(), u2 = b.units.front();
    if (u1 % d != u2 / d) return false;  // E_{p1 q1} E_{p2 q2} = 0 unless q1 == p2
    out.letters = a.letters + b.letters;
    out.units.assign(a.units.begin(), a.units.end() - 1);
    out.units.push_back((u1 / d) * d + u2 % d);
    out.units.insert(out.units.end(), b.units.begin() + 1, b.units.end());
    return true;
}

Complex tau_mu(const TruncatedMoments& mu, const UnitWord& w) {
    const int d = mu.dim;
    if (w.letters == 0) {
        const int j = w.units[0];
        return (j / d == j % d) ? Complex(1.0 / d, 0.0) : Complex(0.0, 0.0);
    }
    const int c0 = w.units.front(), cL = w.units.back();
    if (c0 / d != cL % d) return Complex(0.0, 0.0);  // tau(E_{p0,qL}) needs p0 == qL
    std::vector<int> interior(w.units.begin() + 1, w.units.end() - 1);
    const BElement& mv = mu.m(w.letters).on_basis(interior);
    return mv(c0 % d, cL / d) / static_cast<double>(d);
}

BElement mu_block(const TruncatedMoments& mu, const UnitWord& w) {
    const int d = mu.dim;
    BElement out = BElement::Zero(d, d);
    if (w.letters == 0) {
        out(w.units[0] / d, w.units[0] % d) = 1.0;
        return out;
    }
    const int c0 = w.units.front(), cL = w.units.back();
    std::vector<int> interior(w.units.begin() + 1, w.units.end() - 1);
    const BElement& mv = mu.m(w.letters).on_basis(interior);
    out(c0 / d, cL % d) = mv(c0 % d, cL / d);
    return out;
}

}  // namespace

ProbeSet build_probes(int count, double M, double lambda, std::uint64_t seed, int dim) {
    if (count < 1) throw ValidationError("build_probes: count must be positive");
    if (!(lambda > 16.0 * M))
        throw ValidationError("build_probes: lambda must exceed 16*M");
    ProbeSet out;
    out.dim = dim;
    out.lambda = lambda;
    out.bound_M = M;

    std::vector<BElement> basis = selfadjoint_basis(dim);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int n = 0; n < count; ++n) {
        BElement dmat;
        if (n < static_cast<int>(basis.size())) {
            dmat = basis[n];
        } else {
            BElement r(dim, dim);
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j) r(i, j) = Complex(gauss(rng), gauss(rng));
            dmat = 0.5 * (r + r.adjoint());
            const double nrm = op_norm(dmat);
            if (nrm > 0.0) dmat /= nrm;
        }
        out.directions.push_back(dmat);
        BElement c = dmat + Complex(0.0, lambda) * BElement::Identity(dim, dim);
        out.probes.push_back(make_probe(c, 1));
        if (M > 0.0 && op_norm(invert(c)) >= 1.0 / (16.0 * M))
            throw ValidationError("build_probes: probe failed the 1/(16M) radius check");
    }
    // level-2 probes pair consecutive directions with a small self-adjoint
    // off-diagonal coupling; the imaginary part stays lambda * I.
    const int P = count;
    for (int n = 0; n < P; ++n) {
        const BElement& c1 = out.probes[n].value;
        const BElement& c2 = out.probes[(n + 1) % P].value;
        const BElement s = 0.3 * out.directions[(n + 2) % P];
        BElement big = BElement::Zero(2 * dim, 2 * dim);
        big.block(0, 0, dim, dim) = c1;
        big.block(dim, dim, dim, dim) = c2;
        big.block(0, dim, dim, dim) = s;
        big.block(dim, 0, dim, dim) = s.adjoint();
        out.level2_probes.push_back(make_probe(big, 2));
    }
    return out;
}

PhiEmbedding phi_embed(const CumulantSequence& mu, const ProbeSet& probes, int tail_order) {
    const int d = mu.dim;
    if (probes.dim != d) throw DimensionMismatch("phi_embed: probe dimension mismatch");
    PhiEmbedding out;
    const int P = static_cast<int>(probes.probes.size());
    out.vec.resize(static_cast<Eigen::Index>(2) * d * d * P);
    Eigen::Index pos = 0;
    for (const ProbePoint& c : probes.probes) {
        const SeriesValue sv = voiculescu_series(mu, c, tail_order);
        out.tail_bounds.push_back(sv.tail_bound);
        out.max_tail = std::max(out.max_tail, sv.tail_bound);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                out.vec(pos++) = sv.value(i, j).imag();
                out.vec(pos++) = sv.value(i, j).real();
            }
    }
    return out;
}

ShiftPlan ShiftPlan::zero(int dim, int rows) {
    ShiftPlan plan;
    plan.limit = BElement::Zero(dim, dim);
    plan.shifts.assign(rows, BElement::Zero(dim, dim));
    return plan;
}

TriangularArray build_array_from_id(const CumulantSequence& mu, const std::vector<int>& row_sizes,
                                    const ShiftPlan& plan, double noise_scale, std::uint64_t seed) {
    const int d = mu.dim, order = mu.order;
    if (plan.shifts.size() != row_sizes.size())
        throw ValidationError("build_array_from_id: one shift per row required");
    if (plan.limit.rows() != d || plan.limit.cols() != d)
        throw DimensionMismatch("build_array_from_id: shift limit dimension mismatch");
    double prev_dist = std::numeric_limits<double>::infinity();
    for (const BElement& b : plan.shifts) {
        if (op_norm(b - b.adjoint()) > 1e-10 * (1.0 + op_norm(b)))
            throw ValidationError("build_array_from_id: shifts must be self-adjoint");
        const double dist = op_norm(b - plan.limit);
        if (dist > prev_dist + 1e-9)
            throw ValidationError("build_array_from_id: shift plan does not converge to its limit");
        prev_dist = dist;
    }

    TriangularArray array;
    array.dim = d;
    array.order = order;
    array.shift_limit = plan.limit;
    array.limit = free_convolve(mu, point_mass(plan.limit, order));

    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < row_sizes.size(); ++i) {
        const int n_i = row_sizes[i];
        if (n_i < 1) throw ValidationError("build_array_from_id: row sizes must be positive");
        TriangularArray::Row row;
        row.shift = plan.shifts[i];
        const CumulantSequence piece = convolution_power(mu, 1.0 / n_i).kappa;
        if (noise_scale == 0.0) {
            CenteredCumulants c = center(piece);
            auto shared = std::make_shared<const CumulantSequence>(std::move(c.centered));
            for (int j = 0; j < n_i; ++j) row.entries.push_back(shared);
            row.shift += static_cast<double>(n_i) * c.shift;
        } else {
            const double scale = noise_scale / (static_cast<double>(n_i) * n_i);
            for (int j = 0; j < n_i; ++j) {
                CumulantSequence noisy = piece;
                for (int n = 1; n <= order; ++n)
                    noisy.k(n) += random_symmetric_map(d, n - 1, scale, rng);
                noisy.bound = fit_cumulant_bound(noisy.maps);
                CenteredCumulants c = center(noisy);
                row.shift += c.shift;
                row.entries.push_back(std::make_shared<const CumulantSequence>(std::move(c.centered)));
            }
        }
        row.shift = 0.5 * (row.shift + row.shift.adjoint());
        array.rows.push_back(std::move(row));
    }
    return array;
}

InfinitesimalityReport infinitesimality_check(const TriangularArray& array,
                                              const std::vector<double>& tol_schedule) {
    if (tol_schedule.size() != array.rows.size())
        throw ValidationError("infinitesimality_check: schedule length mismatch");
    InfinitesimalityReport rep;
    rep.schedule = tol_schedule;
    std::map<const CumulantSequence*, double> cache;
    for (const auto& row : array.rows) {
        double worst = 0.0;
        for (const auto& entry : row.entries) {
            auto it = cache.find(entry.get());
            if (it == cache.end()) {
                const TruncatedMoments mom = moments_from_cumulants(*entry);
                it = cache.emplace(entry.get(), tensor_max_norm(mom.maps)).first;
            }
            worst = std::max(worst, it->second);
        }
        rep.row_max_norms.push_back(worst);
    }
    rep.pass = true;
    for (std::size_t i = 0; i < rep.row_max_norms.size(); ++i) {
        if (rep.row_max_norms[i] > tol_schedule[i]) rep.pass = false;
        if (i > 0 && rep.row_max_norms[i] > rep.row_max_norms[i - 1] + 1e-12) rep.pass = false;
    }
    return rep;
}

namespace {

struct GlobalContext {
    const TriangularArray* array;
    const ProbeSet* probes;
    int tail_order;
    double t;
    int p;
    PhiEmbedding phi_mu;
    PhiEmbedding phi_delta_inf;
    Eigen::VectorXd v_target;
    std::vector<SeriesValue> phi_mu_at_probes;
    std::vector<SeriesValue> phi_mu_at_level2;
};

RowReport process_row(const GlobalContext& g, int row_index, CumulantSequence* nu_out) {
    const TriangularArray& array = *g.array;
    const ProbeSet& probes = *g.probes;
    const auto& row = array.rows[row_index];
    const int d = array.dim;
    const int n_i = static_cast<int>(row.entries.size());
    const double t = g.t;

    RowReport rep;
    rep.row = row_index;
    rep.n_i = n_i;
    try {
        // embed entries, sharing work for repeated entry objects
        std::map<const CumulantSequence*, PhiEmbedding> cache;
        std::vector<const PhiEmbedding*> embeds;
        for (const auto& e : row.entries) {
            auto it = cache.find(e.get());
            if (it == cache.end()) it = cache.emplace(e.get(), phi_embed(*e, probes, g.tail_order)).first;
            embeds.push_back(&it->second);
        }
        double eps = 0.0, tail_entries_max = 0.0;
        Eigen::VectorXd row_sum = Eigen::VectorXd::Zero(g.v_target.size());
        std::vector<Eigen::VectorXd> vecs;
        vecs.reserve(n_i);
        for (const auto* e : embeds) {
            vecs.push_back(e->vec);
            row_sum += e->vec;
            eps = std::max(eps, e->vec.norm());
            tail_entries_max = std::max(tail_entries_max, e->max_tail);
        }
        rep.steinitz_eps = eps;
        const double drift = (row_sum - g.v_target).norm();

        std::vector<int> sigma;
        double steinitz_cert = 0.0;
        if (g.p == 1) {
            for (int j = 0; j < n_i; ++j) sigma.push_back(j);
        } else {
            SelectionResult sel = subset_select(make_instance(vecs), t);
            sigma = sel.indices;
            steinitz_cert = sel.certified_bound;
        }
        rep.sigma = sigma;

        Eigen::VectorXd chosen = Eigen::VectorXd::Zero(g.v_target.size());
        double tail_sel_sum = 0.0;
        for (int j : sigma) {
            chosen += vecs[j];
            tail_sel_sum += embeds[j]->max_tail;
        }
        rep.phi_deviation = (chosen - t * g.v_target).norm();
        rep.phi_budget = steinitz_cert + t * drift + tail_sel_sum +
                         t * (g.phi_mu.max_tail + g.phi_delta_inf.max_tail) + 1e-9;

        // nu_i = boxplus of the selection, convolved with delta_{t b_i}
        CumulantSequence nu = zero_cumulants(d, array.order);
        for (int j : sigma) add_maps(nu.maps, row.entries[j]->maps, 1.0);
        nu.k(1).at(0) += t * row.shift;
        nu.bound = fit_cumulant_bound(nu.maps);

        // cumulant-level distance and its budget
        std::vector<MultilinearMap> delta = nu.maps;
        add_maps(delta, array.limit.maps, -t);
        rep.cumulant_distance = tensor_max_norm(delta);

        CumulantSequence mean = zero_cumulants(d, array.order);
        for (const auto& e : row.entries) add_maps(mean.maps, e->maps, 1.0 / n_i);
        double spread_sel = 0.0;
        for (int j : sigma) spread_sel += tensor_distance(row.entries[j]->maps, mean.maps);
        std::vector<MultilinearMap> row_total = mean.maps;
        for (auto& m : row_total) m *= static_cast<double>(n_i);
        const double sum_norm = tensor_max_norm(row_total);
        row_total[0].at(0) += row.shift;  // kappa_1 of mu_i
        std::vector<MultilinearMap> row_vs_limit = row_total;
        add_maps(row_vs_limit, array.limit.maps, -1.0);
        const double row_drift_kappa = tensor_max_norm(row_vs_limit);
        const double share_error =
            std::abs(static_cast<double>(sigma.size()) / n_i - t);
        rep.cumulant_budget = spread_sel + share_error * sum_norm + t * row_drift_kappa + 1e-9;

        // transform distance at the level-1 probes
        const BElement shift_gap = row.shift - array.shift_limit;
        double worst_transform = 0.0, worst_tail = 0.0;
        for (std::size_t pi = 0; pi < probes.probes.size(); ++pi) {
            const SeriesValue nv = voiculescu_series(nu, probes.probes[pi], g.tail_order);
            const double dist = op_norm(nv.value - t * g.phi_mu_at_probes[pi].value);
            worst_transform = std::max(worst_transform, dist);
            worst_tail = std::max(worst_tail,
                                  nv.tail_bound + t * g.phi_mu_at_probes[pi].tail_bound);
        }
        rep.transform_distance = worst_transform;
        rep.transform_budget = steinitz_cert + t * drift + t * op_norm(shift_gap) +
                               worst_tail + 1e-9;

        // level-2 verification: the difference of truncated series is the
        // series of delta, bounded order by order
        double worst_l2 = 0.0, worst_l2_budget = 0.0;
        for (std::size_t pi = 0; pi < probes.level2_probes.size(); ++pi) {
            const ProbePoint& C = probes.level2_probes[pi];
            const SeriesValue nv = voiculescu_series(nu, C, g.tail_order);
            const double dist = op_norm(nv.value - t * g.phi_mu_at_level2[pi].value);
            worst_l2 = std::max(worst_l2, dist);
            const double r = op_norm(invert(C.value));
            double linear = 0.0;
            for (int n = 1; n <= array.order; ++n)
                linear += delta[static_cast<std::size_t>(n) - 1].max_basis_norm() *
                          std::pow(2.0 * d * d * r, n - 1) * 2.0;
            worst_l2_budget = std::max(
                worst_l2_budget,
                linear + nv.tail_bound + t * g.phi_mu_at_level2[pi].tail_bound + 1e-9);
        }
        rep.level2_distance = worst_l2;
        rep.level2_budget = worst_l2_budget;

        const bool ok = rep.phi_deviation <= rep.phi_budget &&
                        rep.transform_distance <= rep.transform_budget &&
                        rep.cumulant_distance <= rep.cumulant_budget &&
                        rep.level2_distance <= rep.level2_budget;
        rep.verdict = ok ? "PASS" : "INCONCLUSIVE";
        if (nu_out) *nu_out = std::move(nu);
    } catch (const Error& e) {
        rep.verdict = "INCONCLUSIVE";
        rep.error = e.what();
    }
    return rep;
}

}  // namespace

ExperimentReport run_hinchin(const TriangularArray& array, int p, const ProbeSet& probes,
                             int tail_order, int jobs) {
    if (p < 1) throw ValidationError("run_hinchin: p must be >= 1");
    if (probes.dim != array.dim) throw DimensionMismatch("run_hinchin: probe dimension mismatch");
    if (probes.bound_M + 1e-12 < array.limit.bound)
        throw ValidationError("run_hinchin: probe bound smaller than the target bound");

    GlobalContext g;
    g.array = &array;
    g.probes = &probes;
    g.tail_order = std::min(tail_order, array.order);
    g.p = p;
    g.t = 1.0 / p;
    g.phi_mu = phi_embed(array.limit, probes, g.tail_order);
    g.phi_delta_inf = phi_embed(point_mass(array.shift_limit, array.order), probes, g.tail_order);
    g.v_target = g.phi_mu.vec - g.phi_delta_inf.vec;
    for (const auto& c : probes.probes)
        g.phi_mu_at_probes.push_back(voiculescu_series(array.limit, c, g.tail_order));
    for (const auto& c : probes.level2_probes)
        g.phi_mu_at_level2.push_back(voiculescu_series(array.limit, c, g.tail_order));

    ExperimentReport rep;
    rep.p = p;
    rep.t = g.t;
    rep.tail_order = g.tail_order;
    const int nrows = static_cast<int>(array.rows.size());
    rep.rows.resize(nrows);
    std::vector<CumulantSequence> nus(nrows);

    if (jobs <= 1 || nrows <= 1) {
        for (int i = 0; i < nrows; ++i) rep.rows[i] = process_row(g, i, &nus[i]);
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        const int workers = std::min(jobs, nrows);
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&]() {
                for (;;) {
                    const int i = next.fetch_add(1);
                    if (i >= nrows) return;
                    rep.rows[i] = process_row(g, i, &nus[i]);
                }
            });
        for (auto& th : pool) th.join();
    }

    rep.pass = true;
    for (const auto& r : rep.rows)
        if (r.verdict != "PASS") rep.pass = false;

    if (nrows > 0 && rep.rows.back().error.empty()) {
        std::vector<MultilinearMap> reconv = nus.back().maps;
        for (auto& m : reconv) m *= static_cast<double>(p);
        add_maps(reconv, array.limit.maps, -1.0);
        rep.reconvolution_error = tensor_max_norm(reconv);
        rep.reconvolution_budget = p * rep.rows.back().cumulant_budget;
        if (rep.reconvolution_error > rep.reconvolution_budget) rep.pass = false;
    } else {
        rep.pass = false;
    }
    return rep;
}

TracialReport check_tracial_conditions(const TruncatedMoments& mu, double M, int degree_cutoff) {
    const int d = mu.dim;
    if (2 * degree_cutoff + 1 > mu.order)
        throw ValidationError("check_tracial_conditions: degree cutoff needs moments to 2*cutoff+1");
    const std::vector<UnitWord> family = monomial_family(d, degree_cutoff);
    const int F = static_cast<int>(family.size());

    Eigen::MatrixXcd gram(F, F), xgram(F, F);
    for (int a = 0; a < F; ++a) {
        const UnitWord adj = word_adjoint(family[a], d);
        for (int b = 0; b < F; ++b) {
            UnitWord w;
            gram(a, b) = word_product(adj, family[b], false, d, w) ? tau_mu(mu, w)
                                                                   : Complex(0.0, 0.0);
            UnitWord wx;
            word_product(adj, family[b], true, d, wx);
            xgram(a, b) = tau_mu(mu, wx);
        }
    }

    TracialReport rep;
    rep.M = M;
    rep.degree_cutoff = degree_cutoff;
    const Eigen::MatrixXcd gh = 0.5 * (gram + gram.adjoint());
    const Eigen::MatrixXcd xh = 0.5 * (xgram + xgram.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gh);
    const double gmax = std::max(1e-300, es.eigenvalues().maxCoeff());
    const double scale = 1.0 + gmax;

    rep.worst_2 = -es.eigenvalues().minCoeff();
    rep.pass_2 = rep.worst_2 <= 1e-8 * scale;

    // condition (1): restrict to the numerical range of the Gram form
    std::vector<int> keep;
    for (int i = 0; i < F; ++i)
        if (es.eigenvalues()(i) > 1e-10 * gmax) keep.push_back(i);
    if (keep.empty()) {
        rep.worst_1 = 0.0;
        rep.pass_1 = true;
    } else {
        Eigen::MatrixXcd V(F, keep.size());
        Eigen::VectorXd dvals(keep.size());
        for (std::size_t c = 0; c < keep.size(); ++c) {
            V.col(c) = es.eigenvectors().col(keep[c]);
            dvals(c) = es.eigenvalues()(keep[c]);
        }
        const Eigen::VectorXd dinv = dvals.cwiseSqrt().cwiseInverse();
        const Eigen::MatrixXcd reduced =
            dinv.asDiagonal() * (V.adjoint() * xh * V) * dinv.asDiagonal();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> esr(
            0.5 * (reduced + reduced.adjoint()), Eigen::EigenvaluesOnly);
        rep.worst_1 = esr.eigenvalues().maxCoeff();
        rep.pass_1 = rep.worst_1 <= M + 1e-6 * (1.0 + std::abs(M));
    }

    double worst3 = 0.0;
    for (int a = 0; a < F; ++a)
        for (int b = 0; b < F; ++b) {
            UnitWord ab, ba;
            const Complex vab =
                word_product(family[a], family[b], false, d, ab) ? tau_mu(mu, ab) : Complex(0, 0);
            const Complex vba =
                word_product(family[b], family[a], false, d, ba) ? tau_mu(mu, ba) : Complex(0, 0);
            worst3 = std::max(worst3, std::abs(vab - vba));
        }
    rep.worst_3 = worst3;
    rep.pass_3 = worst3 <= 1e-8 * scale;
    return rep;
}

CpReport check_complete_positivity(const TruncatedMoments& mu, int family_degree) {
    const int d = mu.dim;
    if (2 * family_degree > mu.order)
        throw ValidationError("check_complete_positivity: family degree needs moments to 2*degree");
    const std::vector<UnitWord> family = monomial_family(d, family_degree);
    const int F = static_cast<int>(family.size());
    Eigen::MatrixXcd big(static_cast<Eigen::Index>(F) * d, static_cast<Eigen::Index>(F) * d);
    for (int a = 0; a < F; ++a) {
        const UnitWord adj = word_adjoint(family[a], d);
        for (int b = 0; b < F; ++b) {
            UnitWord w;
            const BElement blockval = word_product(adj, family[b], false, d, w)
                                          ? mu_block(mu, w)
                                          : BElement::Zero(d, d).eval();
            big.block(static_cast<Eigen::Index>(a) * d, static_cast<Eigen::Index>(b) * d, d, d) =
                blockval;
        }
    }
    CpReport rep;
    rep.family_degree = family_degree;
    const Eigen::MatrixXcd h = 0.5 * (big + big.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
    rep.min_eigenvalue = es.eigenvalues().minCoeff();
    double diag_scale = 0.0;
    for (Eigen::Index i = 0; i < h.rows(); ++i)
        diag_scale = std::max(diag_scale, std::abs(h(i, i)));
    rep.pass = rep.min_eigenvalue >= -1e-8 * (1.0 + diag_scale);
    return rep;
}

}  // namespace opfree
