#include "doctest.h"

#include <cmath>

#include "shockspec/oracle.hpp"
#include "shockspec/rootfind.hpp"
#include "shockspec/scenarios.hpp"

using namespace shockspec;

namespace {

Mat diag2(double a, double b) { return Mat(2, 2, {a, 0.0, 0.0, b}); }

// source -> sink shock with field values (1,2) and (3,4) at the crossing
ShockInstance reference_jump_fixture() {
    PLModel m = build_model({LinearPiece(diag2(1.0, 2.0), {-1.0, -1.0}),
                             LinearPiece(diag2(-3.0, -4.0), {1.0, 1.0})},
                            {Hyperplane({0.0, 1.0}, 0.0)});
    Heteroclinic h = build_heteroclinic(m, {{0.0, 0.0}});
    return {std::move(m), std::move(h)};
}

} // namespace

TEST_CASE("mollifier shape") {
    Mollifier m = default_mollifier(0.1);
    CHECK(m.phi(0.0) == 0.0);
    CHECK(m.phi(-3.0) == 0.0);
    CHECK(m.phi(1.0) == 1.0);
    CHECK(m.phi(7.0) == 1.0);
    CHECK(m.phi(0.5) == doctest::Approx(0.5).epsilon(1e-14));
    for (int i = 1; i < 40; ++i) {
        const double y = i / 40.0;
        CHECK(m.dphi(y) > 0.0);
        const double fd = (m.phi(y + 1e-7) - m.phi(y - 1e-7)) / 2e-7;
        CHECK(m.dphi(y) == doctest::Approx(fd).epsilon(1e-5));
    }
    CHECK_THROWS_AS(default_mollifier(0.0), Error);
}

TEST_CASE("smoothed field equals the exact field outside the layer") {
    auto sh = reference_jump_fixture();
    Mollifier moll = default_mollifier(0.2);

    const Vec below = {0.3, -1e-12};
    CHECK(norm2(smoothed_field_eval(sh.model, moll, below) -
                sh.model.pieces[0].field(below)) == 0.0);
    const Vec at_zero = {0.3, 0.0};
    CHECK(norm2(smoothed_field_eval(sh.model, moll, at_zero) -
                sh.model.pieces[0].field(at_zero)) == 0.0);
    const Vec above = {0.3, 0.2};
    CHECK(norm2(smoothed_field_eval(sh.model, moll, above) -
                sh.model.pieces[1].field(above)) == 0.0);

    // midpoint of the layer blends with weight 1/2
    const Vec mid = {0.3, 0.1};
    const Vec expect = 0.5 * (sh.model.pieces[0].field(mid) + sh.model.pieces[1].field(mid));
    CHECK(norm2(smoothed_field_eval(sh.model, moll, mid) - expect) < 1e-14);

    // Jacobian by finite differences, inside and outside the layer
    for (const Vec& u : {Vec{0.1, 0.07}, Vec{0.1, -0.3}, Vec{0.4, 0.31}}) {
        const Mat j = smoothed_jacobian(sh.model, moll, u);
        for (int c = 0; c < 2; ++c) {
            Vec up = u, dn = u;
            up[c] += 1e-7;
            dn[c] -= 1e-7;
            const Vec fd = (1.0 / 2e-7) * (smoothed_field_eval(sh.model, moll, up) -
                                           smoothed_field_eval(sh.model, moll, dn));
            for (int r = 0; r < 2; ++r) CHECK(j(r, c) == doctest::Approx(fd[r]).epsilon(1e-5));
        }
    }
}

TEST_CASE("overlapping layers are rejected") {
    BifurcationParams bp;
    bp.eps = 0.1;
    auto inst = make_bifurcation(bp);
    const auto& m = inst.connected->model;
    Mollifier wide = default_mollifier(0.6);
    CHECK_THROWS_AS(smoothed_field_eval(m, wide, {-1.3, -0.7}), LayerOverlapError);
    Mollifier ok = default_mollifier(0.05);
    CHECK_NOTHROW(smoothed_field_eval(m, ok, {-1.3, -0.7}));
}

TEST_CASE("variational identity: v = gamma' propagates through the layer") {
    auto sh = reference_jump_fixture();
    Mollifier moll = default_mollifier(1e-3);
    const double xi0 = -1.0, xi1 = 0.5;
    const Vec g0 = sh.het.eval(xi0);
    const CVec v0 = to_complex(sh.model.pieces[0].field(g0));
    const CVec z0(2, cplx(0));
    auto samples = integrate_smoothed_system(sh.model, moll, cplx(0.0, 0.0), g0, v0, z0, xi0, xi1);
    const auto& last = samples.back();
    const Vec f_end = smoothed_field_eval(sh.model, moll, last.gamma);
    CVec diff = last.v - to_complex(f_end);
    CHECK(norm2(diff) < 1e-6 * (1.0 + norm2(f_end)));
}

TEST_CASE("smoothed spectral flow converges to the piecewise solution with the jump") {
    auto sh = reference_jump_fixture();
    const cplx la(0.4, 0.3);
    const double xi0 = -0.5, xi1 = 0.5;
    const CVec v0 = {cplx(0.8, -0.1), cplx(0.2, 0.6)};
    const CVec z0 = {cplx(-0.3, 0.2), cplx(0.5, 0.0)};

    // exact limit: propagate (v, z) through the left piece, apply the jump
    // to v at the crossing, keep z, propagate through the right piece
    CMat col(4, 1);
    for (int i = 0; i < 2; ++i) {
        col(i, 0) = v0[i];
        col(2 + i, 0) = z0[i];
    }
    col = shockspec::detail::propagate_block(sh.model.pieces[0], la, -xi0, col);
    const JumpMatrix jm = jump_at(sh.model, sh.het, 0);
    {
        CVec v = {col(0, 0), col(1, 0)};
        for (int i = 0; i < 2; ++i) {
            cplx acc = 0;
            for (int k = 0; k < 2; ++k) acc += jm.S(i, k) * v[k];
            col(i, 0) = acc;
        }
    }
    col = shockspec::detail::propagate_block(sh.model.pieces[1], la, xi1, col);
    const CVec v_exact = {col(0, 0), col(1, 0)};
    const CVec z_exact = {col(2, 0), col(3, 0)};

    double prev_err = 0;
    for (double mu : {1e-2, 1e-3}) {
        Mollifier moll = default_mollifier(mu);
        auto samples =
            integrate_smoothed_variational(sh.model, moll, sh.het, la, v0, z0, xi0, xi1);
        const auto& last = samples.back();
        const double v_err = norm2(last.v - v_exact);
        const double z_err = norm2(last.z - z_exact);
        CHECK(v_err < 5.0 * mu);
        CHECK(z_err < 5.0 * mu);
        // z converges uniformly: also small mid-layer, where v is in transit
        for (const auto& s : samples) {
            if (std::abs(s.xi) < 2.0 * mu) {
                CVec zl = s.z - z0;
                CHECK(norm2(zl) < 1.0); // z never spikes across the layer
            }
        }
        if (prev_err > 0) CHECK(v_err < 0.3 * prev_err); // first-order decay
        prev_err = v_err;
    }
}

TEST_CASE("jump relation convergence: reference fixture") {
    auto sh = reference_jump_fixture();
    const CVec v_minus = {cplx(0.7, 0.2), cplx(-0.4, 0.5)};
    const CVec z0 = {cplx(0.1, 0.0), cplx(-0.2, 0.1)};
    const cplx la(0.3, 0.2);
    auto fit = jump_convergence_fit(sh.model, sh.het, la, v_minus, z0, {1e-2, 1e-3, 1e-4});
    CHECK_FALSE(fit.skipped);
    CHECK(fit.slope > 0.8);
    CHECK(fit.slope < 1.2);
    for (std::size_t i = 0; i + 1 < fit.errors.size(); ++i) CHECK(fit.errors[i] > fit.errors[i + 1]);

    // normal-component transfer tracks f2+/f2- at first order in mu
    for (std::size_t i = 0; i < fit.mu_grid.size(); ++i)
        CHECK(fit.normal_errors[i] <= 3.0 * fit.mu_grid[i]);

    // backward transport converges to the inverse map
    const CVec v_plus = {cplx(0.3, -0.1), cplx(0.8, 0.4)};
    auto bfit = jump_convergence_fit(sh.model, sh.het, la, v_plus, z0, {1e-2, 1e-3, 1e-4}, 0,
                                     JumpDirection::Backward);
    CHECK(bfit.slope > 0.8);
    CHECK(bfit.slope < 1.2);
}

TEST_CASE("jump relation convergence: both crossings of the three-region chain") {
    BifurcationParams bp;
    bp.eps = 0.1;
    auto inst = make_bifurcation(bp);
    const auto& sh = *inst.connected;
    const CVec v = {cplx(0.9, 0.0), cplx(0.3, -0.6)};
    const CVec z0 = {cplx(0.0, 0.1), cplx(0.2, 0.0)};
    const cplx la(0.2, 0.1);

    auto f0 = jump_convergence_fit(sh.model, sh.het, la, v, z0, {1e-2, 1e-3, 1e-4}, 0);
    CHECK(f0.slope > 0.8);
    CHECK(f0.slope < 1.2);

    auto f1 = jump_convergence_fit(sh.model, sh.het, la, v, z0, {1e-2, 1e-3, 1e-4}, 1,
                                   JumpDirection::Backward);
    CHECK(f1.slope > 0.8);
    CHECK(f1.slope < 1.2);
}

TEST_CASE("continuous field: fit is skipped") {
    PLModel m = build_model({LinearPiece(diag2(1.0, 2.0), {-1.0, -1.0}),
                             LinearPiece(diag2(-1.0, -2.0), {1.0, 1.0})},
                            {Hyperplane({0.0, 1.0}, 0.0)});
    Heteroclinic h = build_heteroclinic(m, {{0.0, 0.0}});
    // field values agree at the crossing: delta-f = 0
    CHECK(norm2(h.field_before(0) - h.field_after(0)) < 1e-14);
    auto fit = jump_convergence_fit(m, h, cplx(0.1, 0.0), {cplx(1, 0), cplx(0, 1)},
                                    {cplx(0, 0), cplx(0, 0)}, {1e-2, 1e-3});
    CHECK(fit.skipped);
    // no jump to measure; the residual transport drift is O(mu) from the
    // pieces differing away from the crossing point
    for (std::size_t i = 0; i < fit.errors.size(); ++i)
        CHECK(fit.errors[i] < 3.0 * fit.mu_grid[i]);
}

TEST_CASE("mu grid too coarse for the interface spacing") {
    BifurcationParams bp;
    bp.eps = 0.1;
    auto inst = make_bifurcation(bp);
    const auto& sh = *inst.connected;
    CHECK_THROWS_AS(jump_convergence_fit(sh.model, sh.het, cplx(0.1, 0.0),
                                         {cplx(1, 0), cplx(0, 1)}, {cplx(0, 0), cplx(0, 0)},
                                         {0.9, 0.09}, 0),
                    LayerOverlapError);
}

TEST_CASE("layer crossing time matches the cutoff quadrature") {
    auto sh = reference_jump_fixture();
    const double mu = 1e-3;
    Mollifier moll = default_mollifier(mu);
    const double measured = layer_crossing_time(sh.model, moll, sh.het, 0);
    const double fn_pre = dot(sh.het.field_before(0), sh.model.interfaces[0].normal);
    const double fn_post = dot(sh.het.field_after(0), sh.model.interfaces[0].normal);
    const double predicted = mu * layer_crossing_coefficient(moll, fn_pre, fn_post);
    CHECK(std::abs(measured - predicted) <= 0.05 * predicted);
}

TEST_CASE("shooting mismatch: stable shock has no real zero, conjugation holds") {
    auto sh = make_diagonal_shock(-1.0, 1.0, -1.0, -2.0, {0.0, -1.0}, {0.0, 1.0}, {0.0, 0.0});
    Mollifier moll = default_mollifier(1e-3);
    double prev = 0;
    bool first = true;
    for (double la : {0.05, 0.15, 0.4, 1.0, 2.5}) {
        const cplx d = shooting_mismatch(sh.model, moll, sh.het, cplx(la, 0.0));
        CHECK(std::abs(d.imag()) < 1e-10 * (1.0 + std::abs(d)));
        if (!first) CHECK(d.real() * prev > 0.0); // no sign change
        prev = d.real();
        first = false;
    }
    const cplx a = shooting_mismatch(sh.model, moll, sh.het, cplx(0.2, 0.3));
    const cplx b = shooting_mismatch(sh.model, moll, sh.het, cplx(0.2, -0.3));
    CHECK(std::abs(b - std::conj(a)) < 1e-8 * (1.0 + std::abs(a)));
}

TEST_CASE("shooting mismatch root matches the matching-determinant root") {
    BifurcationParams bp;
    bp.chi_state = -5.0;
    bp.eps = 0.05;
    auto inst = make_bifurcation(bp);
    const auto& sh = *inst.connected;

    // matching determinant root
    AnalyticFn d = [&](cplx la) { return theta_det(sh.model, sh.het, la, true); };
    auto troots = real_axis_roots(d, 1e-3, 0.2, 200);
    REQUIRE(troots.size() == 1);

    // smoothed-problem root by bisection
    Mollifier moll = default_mollifier(1e-3);
    auto mm = [&](double la) { return shooting_mismatch(sh.model, moll, sh.het, cplx(la, 0.0)).real(); };
    double lo = 0.5 * troots[0], hi = 2.0 * troots[0];
    double flo = mm(lo), fhi = mm(hi);
    REQUIRE(flo * fhi < 0.0);
    for (int it = 0; it < 40; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = mm(mid);
        if (fm * flo > 0) { lo = mid; flo = fm; }
        else hi = mid;
    }
    const double root = 0.5 * (lo + hi);
    CHECK(std::abs(root - troots[0]) <= 0.15 * troots[0]);
}
