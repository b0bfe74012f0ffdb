#pragma once

// The three example families: diagonal two-region shocks (always stable),
// the overcompressive family with a rotated sink (stability loss in s), and
// the saddle-connection splitting family (instability of order eps), each
// with its closed-form constants.

#include <cmath>
#include <optional>

#include "shockspec/errors.hpp"
#include "shockspec/jump.hpp"
#include "shockspec/model.hpp"

namespace shockspec {

struct ShockInstance {
    PLModel model;
    Heteroclinic het;
};

namespace detail {

inline Mat diag_mat2(double a, double b) { return Mat(2, 2, {a, 0.0, 0.0, b}); }

inline Mat rotated_sink2(double h1, double h2, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    Mat t(2, 2, {c, -s, s, c});
    Mat ti(2, 2, {c, s, -s, c});
    return ti * diag_mat2(h1, h2) * t;
}

} // namespace detail

/// Two-region shock with both pieces diagonal and the interface {u2 = 0}.
/// Requires at least one expanding mode on the left and one contracting mode
/// on the right; every instance of this family is spectrally stable.
inline ShockInstance make_diagonal_shock(double h1m, double h2m, double h1p, double h2p,
                                         const Vec& u_minus, const Vec& u_plus, const Vec& w) {
    if (!(h1m > 0 || h2m > 0) || !(h1p < 0 || h2p < 0))
        throw ModelGeometryError("make_diagonal_shock: need an expanding left mode and a "
                                 "contracting right mode");
    if (!(u_minus.size() == 2 && u_plus.size() == 2 && w.size() == 2))
        throw ModelGeometryError("make_diagonal_shock: two-dimensional data required");
    if (!(u_minus[1] < 0 && u_plus[1] > 0))
        throw ModelGeometryError("make_diagonal_shock: need u2- < 0 < u2+");

    PLModel m = build_model({LinearPiece(detail::diag_mat2(h1m, h2m), u_minus),
                             LinearPiece(detail::diag_mat2(h1p, h2p), u_plus)},
                            {Hyperplane({0.0, 1.0}, 0.0)});
    Heteroclinic het = build_heteroclinic(m, {w});
    return {std::move(m), std::move(het)};
}

// ---------------------------------------------------------------------------
// overcompressive family

struct OvercompressiveParams {
    double h1m = 1.0, h2m = 2.0;   // left eigenvalues, both positive
    double h1p = -2.0, h2p = -1.0; // right eigenvalues, h1p < h2p < 0
    double theta = M_PI / 6;       // rotation of the right eigenframe, (0, pi/2)
    Vec u_minus = {0.0, -1.0};     // u2- < 0
    Vec u_plus = {0.0, 1.0};       // u2+ > 0
    double s = 1.0;                // crossing abscissa, s > s0
};

/// Closed-form constants of the family. Lambda < 0 forces a real unstable
/// eigenvalue for every member; lambda_largescale is the constant c in the
/// large-s eigenvalue lambda ~ c / s.
struct OvercompressivePredictions {
    double s0 = 0;
    double A1 = 0, A2 = 0;
    double Lambda = 0;
    double chi_threshold = 0; // A2 / (-A1)
    double Fprime0 = 0;
    double lambda_largescale = 0; // -Lambda / F'(0)
    bool predicted_unstable = false;
    double a_p = 0, b_p = 0, c_p = 0; // entries of the rotated right matrix
};

struct OvercompressiveInstance {
    PLModel model;
    Heteroclinic het;
    OvercompressivePredictions pred;
};

inline OvercompressiveInstance make_overcompressive(const OvercompressiveParams& p) {
    if (!(p.h1m > 0 && p.h2m > 0))
        throw ModelGeometryError("make_overcompressive: left eigenvalues must be positive");
    if (!(p.h1p < p.h2p && p.h2p < 0))
        throw ModelGeometryError("make_overcompressive: need h1p < h2p < 0");
    if (!(p.theta > 0 && p.theta < M_PI / 2))
        throw ModelGeometryError("make_overcompressive: theta must lie in (0, pi/2)");
    if (!(p.u_minus.size() == 2 && p.u_plus.size() == 2 && p.u_minus[1] < 0 && p.u_plus[1] > 0))
        throw ModelGeometryError("make_overcompressive: need u2- < 0 < u2+");

    const Mat qp = detail::rotated_sink2(p.h1p, p.h2p, p.theta);
    OvercompressivePredictions pred;
    pred.a_p = qp(0, 0);
    pred.b_p = qp(1, 1);
    pred.c_p = qp(0, 1);
    pred.s0 = p.u_plus[0] + pred.b_p * p.u_plus[1] / pred.c_p;

    const double det_qm = p.h1m * p.h2m;
    const double det_qp = p.h1p * p.h2p;
    pred.A1 = -pred.c_p * det_qm;                 // c- = 0 for the diagonal left piece
    pred.A2 = p.h2m * det_qp - pred.b_p * det_qm; // b- = h2m
    pred.Lambda = pred.A1 * (p.u_plus[0] - p.u_minus[0]) + pred.A2 * (p.u_plus[1] - p.u_minus[1]);
    pred.chi_threshold = pred.A2 / (-pred.A1);
    // slope of the s-coefficient F at lambda = 0; always positive. Verified
    // against finite differences of the determinant (see the scenario tests).
    pred.Fprime0 = (p.h2p - p.h1p) * (p.h1m - p.h2p) * (p.h1m - p.h1p) * p.h2m *
                   std::sin(p.theta) * std::cos(p.theta) / (p.h1p * p.h2p * p.h1m);
    pred.lambda_largescale = -pred.Lambda / pred.Fprime0;
    pred.predicted_unstable = pred.Lambda < 0;

    if (!(p.s > pred.s0))
        throw TransversalityError("make_overcompressive: need s > s0 for a transversal crossing");

    PLModel m = build_model({LinearPiece(detail::diag_mat2(p.h1m, p.h2m), p.u_minus),
                             LinearPiece(qp, p.u_plus)},
                            {Hyperplane({0.0, 1.0}, 0.0)});
    Heteroclinic het = build_heteroclinic(m, {{p.s, 0.0}});
    return {std::move(m), std::move(het), pred};
}

// ---------------------------------------------------------------------------
// saddle-connection splitting family

struct BifurcationParams {
    double nu_m = -1.0, kappa_m = 1.0; // left saddle: nu_m < 0 < kappa_m
    double nu_x = -1.0, kappa_x = 1.0; // middle saddle: nu_x < 0 < kappa_x
    double nu_p = -2.0, kappa_p = -1.0; // right sink: nu_p < kappa_p < 0
    double chi_state = 3.0;             // second coordinate of u+
    double eps = 0.0;                   // splitting parameter, >= 0
};

/// For eps > 0: the connected three-region shock with the predicted
/// eigenvalue slope c (lambda ~ c eps). For eps = 0: the two separate
/// sub-shocks, each spectrally stable on its own.
struct BifurcationInstance {
    std::optional<ShockInstance> connected;    // eps > 0
    std::optional<ShockInstance> left, right;  // eps = 0
    double c = 0;                  // nu- kx^2 (2 nu-x + chi) / (4 nu-x (kx - nu-))
    bool predicts_instability = false; // c > 0, i.e. chi > -2 nu-x
    double eps_times = 0;          // second coordinate of the later crossing
    double eps_flat = 0;
    double delta_xi = 0;           // time between the crossings (eps > 0)
    JumpMatrix s_minus;            // forward jump at the first crossing
    JumpMatrix s_plus;             // backward jump at the second crossing
};

inline BifurcationInstance make_bifurcation(const BifurcationParams& p) {
    if (!(p.nu_m < 0 && 0 < p.kappa_m))
        throw ModelGeometryError("make_bifurcation: need nu- < 0 < kappa-");
    if (!(p.nu_x < 0 && 0 < p.kappa_x))
        throw ModelGeometryError("make_bifurcation: need nu-x < 0 < kappa-x");
    if (!(p.nu_p < p.kappa_p && p.kappa_p < 0))
        throw ModelGeometryError("make_bifurcation: need nu+ < kappa+ < 0");
    if (p.eps < 0)
        throw ModelGeometryError("make_bifurcation: eps must be nonnegative");

    BifurcationInstance out;
    // First-order slope of the real zero of the matching determinant:
    // lambda(eps) = c eps + o(eps). The chi + 2 factor is the net change of
    // the second state component, u2+ - u2-; the slope is positive (an
    // unstable eigenvalue emerges) exactly when the composite profile
    // overshoots, chi < -2. Validated against the matching determinant and
    // an independent mollified-field shooting computation over a grid of
    // parameter sets (see the scenario and acceptance tests).
    out.c = p.nu_m * p.kappa_x * p.kappa_x * (p.chi_state + 2.0) /
            (4.0 * (p.kappa_x - p.nu_m));
    out.predicts_instability = out.c > 0;

    const double ratio_exp = -p.nu_x / p.kappa_x; // positive
    out.eps_times =
        (p.eps == 0) ? 0.0
                     : p.eps - (1.0 + p.eps) * std::pow(p.eps / (1.0 + p.eps), ratio_exp);
    out.eps_flat = (-out.eps_times * p.nu_p + (out.eps_times - p.eps) * p.nu_x) / p.nu_x;

    const Vec u_minus = {0.0, -2.0};
    const Vec u_cross = {p.eps, p.eps};
    const Vec u_plus = {-2.0, p.chi_state};
    const Mat qm = detail::diag_mat2(p.nu_m, p.kappa_m);
    const Mat qx = detail::diag_mat2(p.kappa_x, p.nu_x);
    const Mat qp = detail::diag_mat2(p.kappa_p, p.nu_p);
    const Hyperplane sigma_a({0.0, 1.0}, -1.0);  // crossed first
    const Hyperplane sigma_b({-1.0, 0.0}, 1.0);  // crossed second

    if (p.eps > 0) {
        out.delta_xi = std::log((1.0 + p.eps) / p.eps) / p.kappa_x;
        PLModel m = build_model(
            {LinearPiece(qm, u_minus), LinearPiece(qx, u_cross), LinearPiece(qp, u_plus)},
            {sigma_a, sigma_b});
        Heteroclinic het = build_heteroclinic(m, {{0.0, -1.0}, {-1.0, out.eps_times}});
        out.s_minus = jump_at(m, het, 0, JumpDirection::Forward);
        out.s_plus = jump_at(m, het, 1, JumpDirection::Backward);
        out.connected = ShockInstance{std::move(m), std::move(het)};
    } else {
        PLModel ml = build_model({LinearPiece(qm, u_minus), LinearPiece(qx, {0.0, 0.0})},
                                 {sigma_a});
        Heteroclinic hl = build_heteroclinic(ml, {{0.0, -1.0}});
        PLModel mr = build_model({LinearPiece(qx, {0.0, 0.0}), LinearPiece(qp, u_plus)},
                                 {sigma_b});
        Heteroclinic hr = build_heteroclinic(mr, {{-1.0, 0.0}});
        out.s_minus = jump_at(ml, hl, 0, JumpDirection::Forward);
        out.s_plus = jump_at(mr, hr, 0, JumpDirection::Backward);
        out.left = ShockInstance{std::move(ml), std::move(hl)};
        out.right = ShockInstance{std::move(mr), std::move(hr)};
    }
    return out;
}

} // namespace shockspec
