#pragma once

// Piecewise-linear vector fields f(u) = Q_i (u - u*_i) on a chain of regions
// separated by oriented hyperplanes, and their exact piecewise-exponential
// heteroclinic trajectories.

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "shockspec/errors.hpp"
#include "shockspec/linalg.hpp"

namespace shockspec {

/// Oriented hyperplane {<normal, u> = offset}. The normal points from the
/// earlier region of the chain toward the later one.
struct Hyperplane {
    Vec normal;
    double offset = 0;

    Hyperplane() = default;
    Hyperplane(Vec n, double c) : normal(std::move(n)), offset(c) {
        if (std::abs(norm2(normal) - 1.0) > 1e-12)
            throw ModelGeometryError("Hyperplane: normal must be a unit vector");
    }

    double signed_dist(const Vec& u) const { return dot(normal, u) - offset; }
};

/// One linear piece of the field: f(u) = Q (u - u_star), Q real symmetric.
struct LinearPiece {
    Mat Q;
    Vec u_star;
    SymEigen eig; // cached eigendecomposition of Q

    LinearPiece() = default;
    LinearPiece(Mat q, Vec ustar) : Q(std::move(q)), u_star(std::move(ustar)) {
        if (Q.rows() != Q.cols() || Q.rows() != int(u_star.size()))
            throw ModelGeometryError("LinearPiece: inconsistent dimensions");
        if (!is_symmetric(Q))
            throw SymmetryError("LinearPiece: Q must be symmetric");
        eig = sym_eigen(Q);
    }

    Vec field(const Vec& u) const { return Q * (u - u_star); }

    /// Flow of u' = Q (u - u_star) from u0 for time t, exact via the
    /// eigendecomposition.
    Vec flow(const Vec& u0, double t) const {
        const int n = Q.rows();
        Vec d = u0 - u_star;
        Vec c(n, 0.0); // eigenbasis coordinates of d
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i) c[k] += eig.vectors(i, k) * d[i];
        Vec out = u_star;
        for (int k = 0; k < n; ++k) {
            const double ek = std::exp(t * eig.values[k]) * c[k];
            for (int i = 0; i < n; ++i) out[i] += eig.vectors(i, k) * ek;
        }
        return out;
    }
};

enum class EquilibriumType { Source, Sink, Saddle };

struct EquilibriumClass {
    EquilibriumType type;
    int unstable_dim; // number of positive eigenvalues
    Vec eigenvalues;  // ascending
};

/// Classify the equilibrium of u' = Q (u - u*) by the eigenvalue signs of Q.
inline EquilibriumClass classify_equilibrium(const Mat& q) {
    if (!is_symmetric(q))
        throw SymmetryError("classify_equilibrium: Q must be symmetric");
    SymEigen e = sym_eigen(q);
    const double scale = std::max(1.0, std::abs(e.values.front()) + std::abs(e.values.back()));
    int pos = 0, neg = 0;
    for (double h : e.values) {
        if (std::abs(h) <= 1e-12 * scale)
            throw NonHyperbolicError("classify_equilibrium: Q is singular");
        (h > 0 ? pos : neg)++;
    }
    EquilibriumClass c;
    c.unstable_dim = pos;
    c.eigenvalues = e.values;
    c.type = (neg == 0) ? EquilibriumType::Source
                        : (pos == 0) ? EquilibriumType::Sink : EquilibriumType::Saddle;
    return c;
}

/// A chain of linear pieces separated by oriented hyperplanes.
///
/// Region i of the chain is { u : signed_dist_k(u) > 0 for k < i,
/// signed_dist_k(u) < 0 for k >= i }. Points on an interface belong to no
/// region; trajectories record crossing points explicitly.
struct PLModel {
    std::vector<LinearPiece> pieces;
    std::vector<Hyperplane> interfaces;

    int dim() const { return pieces.empty() ? 0 : pieces.front().Q.rows(); }
    int num_regions() const { return int(pieces.size()); }
    int num_crossings() const { return int(interfaces.size()); }

    /// Region index containing u, or nullopt if u lies on the deciding
    /// interface. Later interfaces take priority: region k+1 is everything
    /// past interface k that no later interface claims, so region N-1 is the
    /// full half-space past the last interface.
    std::optional<int> piece_index(const Vec& u) const {
        const double tol = 1e-14 * (1.0 + norm2(u));
        for (int k = int(interfaces.size()) - 1; k >= 0; --k) {
            const double s = interfaces[k].signed_dist(u);
            if (std::abs(s) <= tol) return std::nullopt;
            if (s > 0) return k + 1;
        }
        return 0;
    }

    bool in_region(const Vec& u, int i) const {
        auto r = piece_index(u);
        return r.has_value() && *r == i;
    }

    /// Field value; throws if u is on an interface or outside the chain.
    Vec field(const Vec& u) const {
        auto i = piece_index(u);
        if (!i)
            throw ModelGeometryError("PLModel::field: point on an interface or outside the chain");
        return pieces[*i].field(u);
    }
};

/// Validate and assemble a PLModel.
inline PLModel build_model(std::vector<LinearPiece> pieces, std::vector<Hyperplane> interfaces) {
    if (pieces.size() < 2)
        throw ModelGeometryError("build_model: need at least two pieces");
    if (interfaces.size() + 1 != pieces.size())
        throw ModelGeometryError("build_model: need exactly one interface between consecutive pieces");
    const int n = pieces.front().Q.rows();
    for (const auto& p : pieces)
        if (p.Q.rows() != n)
            throw ModelGeometryError("build_model: inconsistent piece dimensions");
    for (const auto& h : interfaces)
        if (int(h.normal.size()) != n)
            throw ModelGeometryError("build_model: inconsistent interface dimension");

    PLModel m{std::move(pieces), std::move(interfaces)};
    for (const auto& p : m.pieces)
        classify_equilibrium(p.Q); // throws NonHyperbolicError on singular Q
    if (!m.in_region(m.pieces.front().u_star, 0))
        throw ModelGeometryError("build_model: left equilibrium not strictly inside its region");
    if (!m.in_region(m.pieces.back().u_star, m.num_regions() - 1))
        throw ModelGeometryError("build_model: right equilibrium not strictly inside its region");
    return m;
}

/// Piecewise-exponential heteroclinic trajectory. Crossing times are gauged
/// so that the first crossing happens at xi = 0. Self-contained: carries the
/// segment pieces it needs for evaluation.
struct Heteroclinic {
    std::vector<Vec> crossings;   // w_k on interface k
    std::vector<double> times;    // xi_k, times[0] == 0
    std::vector<LinearPiece> pieces;

    int num_crossings() const { return int(crossings.size()); }

    /// Segment index holding xi: segment k lives on [times[k-1], times[k]).
    int segment_index(double xi) const {
        int k = 0;
        while (k < int(times.size()) && xi >= times[k]) ++k;
        return k;
    }

    Vec eval(double xi) const {
        const int k = segment_index(xi);
        // anchor: crossing k-1 for k > 0, crossing 0 for the initial segment
        const int a = (k == 0) ? 0 : k - 1;
        return pieces[k].flow(crossings[a], xi - times[a]);
    }

    /// One-sided derivative, taken from the segment that owns xi.
    Vec eval_derivative(double xi) const {
        const int k = segment_index(xi);
        return pieces[k].field(eval(xi));
    }

    Vec field_before(int crossing) const { return pieces[crossing].field(crossings[crossing]); }
    Vec field_after(int crossing) const { return pieces[crossing + 1].field(crossings[crossing]); }
};

namespace detail {

/// Require that d = w - u_star excites only eigendirections of the given
/// sign, so the segment converges at its infinite end.
inline void check_end_directions(const LinearPiece& p, const Vec& w, bool need_unstable,
                                 const char* which) {
    const int n = p.Q.rows();
    Vec d = w - p.u_star;
    const double nd = norm2(d);
    if (nd == 0.0)
        throw ModelGeometryError("build_heteroclinic: crossing equals an end equilibrium");
    for (int k = 0; k < n; ++k) {
        const bool forbidden = need_unstable ? (p.eig.values[k] < 0) : (p.eig.values[k] > 0);
        if (!forbidden) continue;
        double c = 0;
        for (int i = 0; i < n; ++i) c += p.eig.vectors(i, k) * d[i];
        if (std::abs(c) > 1e-10 * nd)
            throw NoConnectionError(std::string("build_heteroclinic: ") + which +
                                    " segment does not converge at its equilibrium");
    }
}

/// First time t > 0 at which the exact flow of `piece` from w meets the
/// hyperplane, located by scanning plus bisection (tolerance 1e-12 in t).
inline double first_hit_time(const LinearPiece& piece, const Vec& w, const Hyperplane& sigma) {
    double hmax = 0;
    for (double h : piece.eig.values) hmax = std::max(hmax, std::abs(h));
    const double dt = 0.02 / hmax;
    const double t_max = 500.0 / hmax;

    double t0 = 0.0, g0 = sigma.signed_dist(w);
    for (double t = dt; t <= t_max; t += dt) {
        const Vec u = piece.flow(w, t);
        const double g = sigma.signed_dist(u);
        if (g0 < 0 && g >= 0) {
            // bisect on [t0, t]
            double lo = t0, hi = t;
            while (hi - lo > 1e-12) {
                const double mid = 0.5 * (lo + hi);
                (sigma.signed_dist(piece.flow(w, mid)) < 0 ? lo : hi) = mid;
            }
            return 0.5 * (lo + hi);
        }
        t0 = t;
        g0 = g;
        if (norm2(u) > 1e12) break; // diverging away from the interface
    }
    throw NoConnectionError("build_heteroclinic: segment never reaches the next interface");
}

} // namespace detail

/// Assemble the heteroclinic through the given crossing points, verifying
/// on-interface placement, transversality, end convergence, and that each
/// middle segment actually flows into the next prescribed crossing.
inline Heteroclinic build_heteroclinic(const PLModel& model, const std::vector<Vec>& crossing_params) {
    const int nc = model.num_crossings();
    if (int(crossing_params.size()) != nc)
        throw ModelGeometryError("build_heteroclinic: wrong number of crossing points");

    for (int k = 0; k < nc; ++k) {
        const Vec& w = crossing_params[k];
        if (std::abs(model.interfaces[k].signed_dist(w)) > 1e-10 * (1.0 + norm2(w)))
            throw ModelGeometryError("build_heteroclinic: crossing point is not on its hyperplane");
    }
    for (int k = 0; k < nc; ++k) {
        const Vec& nrm = model.interfaces[k].normal;
        const double fpre = dot(model.pieces[k].field(crossing_params[k]), nrm);
        const double fpost = dot(model.pieces[k + 1].field(crossing_params[k]), nrm);
        if (fpre <= 0.0 || fpost <= 0.0)
            throw TransversalityError("build_heteroclinic: nonpositive normal flux at a crossing");
    }

    detail::check_end_directions(model.pieces.front(), crossing_params.front(),
                                 /*need_unstable=*/true, "left");
    detail::check_end_directions(model.pieces.back(), crossing_params.back(),
                                 /*need_unstable=*/false, "right");

    Heteroclinic het;
    het.crossings = crossing_params;
    het.pieces = model.pieces;
    het.times.resize(nc);
    het.times[0] = 0.0; // gauge: first crossing at xi = 0
    for (int k = 0; k + 1 < nc; ++k) {
        const double dtk =
            detail::first_hit_time(model.pieces[k + 1], crossing_params[k], model.interfaces[k + 1]);
        const Vec hit = model.pieces[k + 1].flow(crossing_params[k], dtk);
        if (norm2(hit - crossing_params[k + 1]) > 1e-7 * (1.0 + norm2(crossing_params[k + 1])))
            throw NoConnectionError(
                "build_heteroclinic: segment reaches the interface away from the given crossing");
        het.times[k + 1] = het.times[k] + dtk;
    }
    return het;
}

/// Compressivity index d = dim W^u(u^-) + dim W^s(u^+) - n.
inline int compressivity_index(const PLModel& model, const Heteroclinic& het) {
    if (het.num_crossings() != model.num_crossings())
        throw ModelGeometryError("compressivity_index: heteroclinic does not match the model");
    const int n = model.dim();
    const auto left = classify_equilibrium(model.pieces.front().Q);
    const auto right = classify_equilibrium(model.pieces.back().Q);
    return left.unstable_dim + (n - right.unstable_dim) - n;
}

} // namespace shockspec
