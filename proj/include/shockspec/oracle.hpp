#pragma once

// Independent validation of the discontinuity calculus: mollify the field
// over width-mu layers, integrate the smoothed trajectory and the smoothed
// spectral system with a layer-resolving RK4, fit the convergence rate of
// the jump relation v+ = S v-, and locate eigenvalues of the smoothed
// problem by subspace shooting. Nothing here uses the jump matrices except
// as the reference values being tested.

#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <vector>

#include "shockspec/errors.hpp"
#include "shockspec/jump.hpp"
#include "shockspec/linalg.hpp"
#include "shockspec/model.hpp"
#include "shockspec/spectral.hpp"

namespace shockspec {

/// Smooth monotone cutoff with width mu: phi = 0 left of a layer, 1 right
/// of it, strictly increasing across, all derivatives flat at the edges.
struct Mollifier {
    double mu = 1e-3;
    std::function<double(double)> phi;
    std::function<double(double)> dphi;
};

/// The concrete cutoff phi(y) = s(y) / (s(y) + s(1-y)) with s(y) = e^{-1/y}.
inline Mollifier default_mollifier(double mu) {
    if (!(mu > 0)) throw Error("default_mollifier: mu must be positive");
    auto bump = [](double y) { return y > 0 ? std::exp(-1.0 / y) : 0.0; };
    auto dbump = [bump](double y) { return y > 0 ? bump(y) / (y * y) : 0.0; };
    Mollifier m;
    m.mu = mu;
    m.phi = [bump](double y) {
        if (y <= 0) return 0.0;
        if (y >= 1) return 1.0;
        const double a = bump(y), b = bump(1.0 - y);
        return a / (a + b);
    };
    m.dphi = [bump, dbump](double y) {
        if (y <= 0 || y >= 1) return 0.0;
        const double a = bump(y), b = bump(1.0 - y);
        const double da = dbump(y), db = dbump(1.0 - y);
        return (da * b + a * db) / ((a + b) * (a + b));
    };
    return m;
}

namespace detail {

// Layer bookkeeping: which interface's blending band contains u. Later
// interfaces take priority, matching PLModel::piece_index.
struct LayerQuery {
    int layer = -1;   // interface whose band holds u, or -1
    int pre = 0;      // region blended from (or the plain region off-layer)
    double y = 0;     // normalized coordinate inside the band
};

inline LayerQuery locate_layer(const PLModel& model, double mu, const Vec& u) {
    int in_band = 0;
    for (const auto& h : model.interfaces) {
        const double s = h.signed_dist(u);
        if (s > 0 && s < mu) ++in_band;
    }
    if (in_band > 1)
        throw LayerOverlapError("smoothed field: point lies in two mollifier layers");

    LayerQuery q;
    for (int k = int(model.interfaces.size()) - 1; k >= 0; --k) {
        const double s = model.interfaces[k].signed_dist(u);
        if (s >= mu) {
            q.pre = k + 1;
            return q;
        }
        if (s > 0) {
            q.layer = k;
            q.y = s / mu;
            // pre-region: keep scanning below as if this interface were not crossed
            for (int j = k - 1; j >= 0; --j)
                if (model.interfaces[j].signed_dist(u) >= mu) { // treat bands as crossed
                    q.pre = j + 1;
                    return q;
                }
            q.pre = 0;
            return q;
        }
    }
    q.pre = 0;
    return q;
}

} // namespace detail

/// Mollified field value: exactly f outside every layer, the phi-blend of
/// the two adjacent pieces inside one.
inline Vec smoothed_field_eval(const PLModel& model, const Mollifier& moll, const Vec& u) {
    const auto q = detail::locate_layer(model, moll.mu, u);
    if (q.layer < 0) return model.pieces[q.pre].field(u);
    const double p = moll.phi(q.y);
    const Vec fa = model.pieces[q.pre].field(u);
    const Vec fb = model.pieces[q.layer + 1].field(u);
    return (1.0 - p) * fa + p * fb;
}

/// Jacobian of the mollified field; inside a layer it carries the
/// (dphi / mu) (f_post - f_pre) n^T rank-one term.
inline Mat smoothed_jacobian(const PLModel& model, const Mollifier& moll, const Vec& u) {
    const auto q = detail::locate_layer(model, moll.mu, u);
    if (q.layer < 0) return model.pieces[q.pre].Q;
    const double p = moll.phi(q.y);
    const double dp = moll.dphi(q.y) / moll.mu;
    Mat j = (1.0 - p) * model.pieces[q.pre].Q + p * model.pieces[q.layer + 1].Q;
    const Vec fa = model.pieces[q.pre].field(u);
    const Vec fb = model.pieces[q.layer + 1].field(u);
    return outer_update(std::move(j), fb - fa, model.interfaces[q.layer].normal, dp);
}

namespace detail {

// Step bound near the layers: mu/50 inside a band (shrunk further for fast
// crossings), creep toward a band so it is never jumped over, 1e-3 else.
inline double smoothed_step(const PLModel& model, const Mollifier& moll, const Vec& u,
                            double h_out = 1e-3) {
    const Vec f = smoothed_field_eval(model, moll, u);
    double h = h_out;
    for (const auto& iface : model.interfaces) {
        const double s = iface.signed_dist(u);
        const double speed = std::abs(dot(iface.normal, f)) + 1e-30;
        const double h_in = moll.mu / (50.0 * std::max(1.0, speed));
        if (s > 0 && s < moll.mu) return h_in;
        const double gap = (s <= 0) ? -s : s - moll.mu;
        h = std::min(h, std::max(h_in, 0.9 * gap / speed));
    }
    return h;
}

struct SpectralState {
    Vec g;   // smoothed trajectory point
    CVec v, z;
};

inline SpectralState rk4_step(const PLModel& model, const Mollifier& moll, cplx lambda,
                              const SpectralState& s, double h) {
    auto rhs = [&](const SpectralState& x) {
        SpectralState d;
        d.g = smoothed_field_eval(model, moll, x.g);
        const Mat j = smoothed_jacobian(model, moll, x.g);
        const int n = int(x.g.size());
        d.v.assign(n, cplx(0));
        d.z.assign(n, cplx(0));
        for (int i = 0; i < n; ++i) {
            cplx acc = x.z[i];
            for (int k = 0; k < n; ++k) acc += j(i, k) * x.v[k];
            d.v[i] = acc;
            d.z[i] = lambda * x.v[i];
        }
        return d;
    };
    auto axpy = [](const SpectralState& a, double c, const SpectralState& b) {
        SpectralState r = a;
        for (std::size_t i = 0; i < r.g.size(); ++i) r.g[i] += c * b.g[i];
        for (std::size_t i = 0; i < r.v.size(); ++i) {
            r.v[i] += c * b.v[i];
            r.z[i] += c * b.z[i];
        }
        return r;
    };
    const SpectralState k1 = rhs(s);
    const SpectralState k2 = rhs(axpy(s, h / 2, k1));
    const SpectralState k3 = rhs(axpy(s, h / 2, k2));
    const SpectralState k4 = rhs(axpy(s, h, k3));
    SpectralState out = s;
    for (std::size_t i = 0; i < out.g.size(); ++i)
        out.g[i] += h / 6 * (k1.g[i] + 2 * k2.g[i] + 2 * k3.g[i] + k4.g[i]);
    for (std::size_t i = 0; i < out.v.size(); ++i) {
        out.v[i] += h / 6 * (k1.v[i] + 2.0 * k2.v[i] + 2.0 * k3.v[i] + k4.v[i]);
        out.z[i] += h / 6 * (k1.z[i] + 2.0 * k2.z[i] + 2.0 * k3.z[i] + k4.z[i]);
    }
    return out;
}

} // namespace detail

/// One sample row of a smoothed spectral integration.
struct VariationalSample {
    double xi;
    Vec gamma;
    CVec v, z;
};

/// Integrate the smoothed system gamma' = f^mu(gamma), v' = Df^mu(gamma) v + z,
/// z' = lambda v from xi0 to xi1 (either direction), starting the trajectory
/// at `start`. Classical RK4 with the layer-resolving step bound.
inline std::vector<VariationalSample> integrate_smoothed_system(
    const PLModel& model, const Mollifier& moll, cplx lambda, const Vec& start, const CVec& v0,
    const CVec& z0, double xi0, double xi1) {
    detail::SpectralState s{start, v0, z0};
    const double dir = (xi1 >= xi0) ? 1.0 : -1.0;
    double xi = xi0;
    std::vector<VariationalSample> out;
    out.push_back({xi, s.g, s.v, s.z});
    std::size_t guard = 0;
    while (dir * (xi1 - xi) > 1e-14) {
        double h = std::min(detail::smoothed_step(model, moll, s.g), dir * (xi1 - xi));
        if (h < 1e-14)
            throw StiffnessError("integrate_smoothed_system: step size underflow");
        if (++guard > 50'000'000)
            throw StiffnessError("integrate_smoothed_system: step budget exhausted");
        s = detail::rk4_step(model, moll, lambda, s, dir * h);
        xi += dir * h;
        out.push_back({xi, s.g, s.v, s.z});
    }
    return out;
}

/// Spec-facing wrapper: start on the heteroclinic at xi0 (valid below the
/// first layer, where the smoothed trajectory coincides with the exact one).
inline std::vector<VariationalSample> integrate_smoothed_variational(
    const PLModel& model, const Mollifier& moll, const Heteroclinic& het, cplx lambda,
    const CVec& v0, const CVec& z0, double xi0, double xi1) {
    return integrate_smoothed_system(model, moll, lambda, het.eval(xi0), v0, z0, xi0, xi1);
}

// ---------------------------------------------------------------------------
// jump-relation convergence fit

struct ConvergenceFit {
    std::vector<double> mu_grid;
    std::vector<double> errors;        // || v_num - S v_in ||
    std::vector<double> normal_errors; // relative error of the normal transfer
    double slope = 0;                  // of log(error) vs log(mu)
    bool skipped = false;              // continuous field: nothing to fit
};

namespace detail {

// Integrate (gamma, v, z) across the band of interface `crossing` for one mu.
// Forward: from the crossing point until the band is exited upward.
// Backward: from the measured exit point back down to the interface.
inline CVec transport_across_layer(const PLModel& model, const Mollifier& moll, cplx lambda,
                                   const Vec& w, const CVec& v_in, const CVec& z0, int crossing,
                                   JumpDirection direction) {
    const Hyperplane& iface = model.interfaces[crossing];

    auto run = [&](const Vec& g0, const CVec& v0, double dir) {
        detail::SpectralState s{g0, v0, z0};
        for (std::size_t it = 0;; ++it) {
            const double sd = iface.signed_dist(s.g);
            if (dir > 0 && sd >= moll.mu) break;
            if (dir < 0 && sd <= 0) break;
            if (it > 5'000'000)
                throw StiffnessError("jump fit: failed to traverse the layer");
            const double h = detail::smoothed_step(model, moll, s.g);
            s = detail::rk4_step(model, moll, lambda, s, dir * h);
        }
        return s;
    };

    if (direction == JumpDirection::Forward) return run(w, v_in, +1.0).v;

    // backward: trace the trajectory to the exit point first (v unused)
    detail::SpectralState exit_state =
        run(w, CVec(w.size(), cplx(0)), +1.0);
    return run(exit_state.g, v_in, -1.0).v;
}

} // namespace detail

/// Measure || v_transported - S v_in || across the mollified layer for each
/// mu and fit the decay order. With direction = Backward the input data
/// lives on the later side and the reference map is the inverse jump.
inline ConvergenceFit jump_convergence_fit(const PLModel& model, const Heteroclinic& het,
                                           cplx lambda, const CVec& v_in, const CVec& z0,
                                           const std::vector<double>& mu_grid, int crossing = 0,
                                           JumpDirection direction = JumpDirection::Forward) {
    if (crossing < 0 || crossing >= model.num_crossings())
        throw ModelGeometryError("jump_convergence_fit: no such crossing");
    for (std::size_t i = 0; i + 1 < mu_grid.size(); ++i)
        if (!(mu_grid[i] > mu_grid[i + 1]))
            throw FitFailedError("jump_convergence_fit: mu grid must decrease strictly");

    const Vec& w = het.crossings[crossing];
    double clearance = std::numeric_limits<double>::infinity();
    for (int j = 0; j < model.num_crossings(); ++j)
        if (j != crossing)
            clearance = std::min(clearance, std::abs(model.interfaces[j].signed_dist(w)));
    if (!mu_grid.empty() && mu_grid.front() > 0.5 * clearance)
        throw LayerOverlapError("jump_convergence_fit: largest mu reaches a neighboring interface");

    const JumpMatrix jm = jump_at(model, het, crossing, direction);
    ConvergenceFit fit;
    fit.mu_grid = mu_grid;

    const Vec& nrm = model.interfaces[crossing].normal;
    const double ref_normal =
        (direction == JumpDirection::Forward) ? dot(jm.f_hat_post, nrm) / dot(jm.f_hat_pre, nrm)
                                              : dot(jm.f_hat_pre, nrm) / dot(jm.f_hat_post, nrm);

    CVec reference(v_in.size());
    {
        for (std::size_t i = 0; i < v_in.size(); ++i) {
            cplx acc = 0;
            for (std::size_t k = 0; k < v_in.size(); ++k) acc += jm.S(int(i), int(k)) * v_in[k];
            reference[i] = acc;
        }
    }

    for (double mu : mu_grid) {
        const Mollifier moll = default_mollifier(mu);
        const CVec v_num = detail::transport_across_layer(model, moll, lambda, w, v_in, z0,
                                                          crossing, direction);
        fit.errors.push_back(norm2(v_num - reference));
        const cplx vn_in = cdot(v_in, to_complex(nrm));
        const cplx vn_out = cdot(v_num, to_complex(nrm));
        fit.normal_errors.push_back(std::abs(vn_out - ref_normal * vn_in) /
                                    std::max(std::abs(ref_normal * vn_in), 1e-300));
    }

    const Vec df = jm.f_hat_post - jm.f_hat_pre;
    if (norm2(df) <= 1e-12 * (norm2(jm.f_hat_pre) + norm2(jm.f_hat_post))) {
        fit.skipped = true;
        fit.slope = std::numeric_limits<double>::quiet_NaN();
        return fit;
    }

    for (std::size_t i = 0; i + 1 < fit.errors.size(); ++i)
        if (!(fit.errors[i] > fit.errors[i + 1])) {
            std::ostringstream oss;
            oss << "jump_convergence_fit: errors not monotone:";
            for (std::size_t k = 0; k < fit.errors.size(); ++k)
                oss << " (" << fit.mu_grid[k] << ", " << fit.errors[k] << ")";
            throw FitFailedError(oss.str());
        }

    // least squares of log(error) on log(mu)
    const std::size_t m = fit.errors.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double x = std::log(fit.mu_grid[i]), y = std::log(fit.errors[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    fit.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return fit;
}

// ---------------------------------------------------------------------------
// layer-crossing diagnostics

/// Measured xi-length the smoothed trajectory spends inside the band of the
/// given crossing.
inline double layer_crossing_time(const PLModel& model, const Mollifier& moll,
                                  const Heteroclinic& het, int crossing) {
    const Hyperplane& iface = model.interfaces[crossing];
    detail::SpectralState s{het.crossings[crossing], CVec(model.dim(), cplx(0)),
                            CVec(model.dim(), cplx(0))};
    double xi = 0;
    for (std::size_t it = 0;; ++it) {
        if (iface.signed_dist(s.g) >= moll.mu) break;
        if (it > 5'000'000) throw StiffnessError("layer_crossing_time: no exit");
        const double h = detail::smoothed_step(model, moll, s.g);
        s = detail::rk4_step(model, moll, cplx(0), s, h);
        xi += h;
    }
    return xi;
}

/// Leading-order crossing time per unit mu: the quadrature of
/// 1 / (phi(y) fn_post + (1 - phi(y)) fn_pre) over the band.
inline double layer_crossing_coefficient(const Mollifier& moll, double fn_pre, double fn_post,
                                         int panels = 2000) {
    double acc = 0;
    for (int i = 0; i < panels; ++i) {
        const double y0 = double(i) / panels, y1 = double(i + 1) / panels, ym = 0.5 * (y0 + y1);
        auto g = [&](double y) { return 1.0 / (moll.phi(y) * fn_post + (1.0 - moll.phi(y)) * fn_pre); };
        acc += (g(y0) + 4.0 * g(ym) + g(y1)) * (y1 - y0) / 6.0;
    }
    return acc;
}

// ---------------------------------------------------------------------------
// subspace shooting on the smoothed problem

namespace detail {

// Dense output of the smoothed trajectory: cubic Hermite between RK4 nodes.
struct SmoothedPath {
    std::vector<double> xi;
    std::vector<Vec> u;
    std::vector<Vec> f;

    Vec eval(double t) const {
        if (t <= xi.front()) return u.front();
        if (t >= xi.back()) return u.back();
        std::size_t lo = 0, hi = xi.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            (xi[mid] <= t ? lo : hi) = mid;
        }
        const double h = xi[hi] - xi[lo];
        const double s = (t - xi[lo]) / h;
        const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
        const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
        Vec out(u[lo].size());
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = h00 * u[lo][i] + h10 * h * f[lo][i] + h01 * u[hi][i] + h11 * h * f[hi][i];
        return out;
    }
};

inline SmoothedPath trace_smoothed_trajectory(const PLModel& model, const Mollifier& moll,
                                              const Vec& start, double xi0, double xi1) {
    SmoothedPath path;
    Vec g = start;
    double xi = xi0;
    path.xi.push_back(xi);
    path.u.push_back(g);
    path.f.push_back(smoothed_field_eval(model, moll, g));
    detail::SpectralState s{g, {}, {}};
    s.v.assign(g.size(), cplx(0));
    s.z.assign(g.size(), cplx(0));
    for (std::size_t it = 0; xi < xi1; ++it) {
        if (it > 50'000'000) throw StiffnessError("trace_smoothed_trajectory: step budget");
        const double h = std::min(smoothed_step(model, moll, s.g), xi1 - xi);
        if (h < 1e-14) throw StiffnessError("trace_smoothed_trajectory: step underflow");
        s = rk4_step(model, moll, cplx(0), s, h);
        xi += h;
        path.xi.push_back(xi);
        path.u.push_back(s.g);
        path.f.push_back(smoothed_field_eval(model, moll, s.g));
    }
    return path;
}

// RK4 for (v, z) along a fixed gamma(xi) source.
inline void rk4_vz_step(const PLModel& model, const Mollifier& moll, cplx lambda,
                        const std::function<Vec(double)>& gamma, double xi, double h, CVec& v,
                        CVec& z) {
    const int n = int(v.size());
    auto rhs = [&](double t, const CVec& vv, const CVec& zz, CVec& dv, CVec& dz) {
        const Mat j = smoothed_jacobian(model, moll, gamma(t));
        for (int i = 0; i < n; ++i) {
            cplx acc = zz[i];
            for (int k = 0; k < n; ++k) acc += j(i, k) * vv[k];
            dv[i] = acc;
            dz[i] = lambda * vv[i];
        }
    };
    CVec k1v(n), k1z(n), k2v(n), k2z(n), k3v(n), k3z(n), k4v(n), k4z(n), tv(n), tz(n);
    rhs(xi, v, z, k1v, k1z);
    for (int i = 0; i < n; ++i) { tv[i] = v[i] + 0.5 * h * k1v[i]; tz[i] = z[i] + 0.5 * h * k1z[i]; }
    rhs(xi + 0.5 * h, tv, tz, k2v, k2z);
    for (int i = 0; i < n; ++i) { tv[i] = v[i] + 0.5 * h * k2v[i]; tz[i] = z[i] + 0.5 * h * k2z[i]; }
    rhs(xi + 0.5 * h, tv, tz, k3v, k3z);
    for (int i = 0; i < n; ++i) { tv[i] = v[i] + h * k3v[i]; tz[i] = z[i] + h * k3z[i]; }
    rhs(xi + h, tv, tz, k4v, k4z);
    for (int i = 0; i < n; ++i) {
        v[i] += h / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]);
        z[i] += h / 6.0 * (k1z[i] + 2.0 * k2z[i] + 2.0 * k3z[i] + k4z[i]);
    }
}

// Modified Gram-Schmidt on stacked (v, z) columns; keeps the span, tames the
// exponential growth. Determinant scaling is positive, so real-axis signs of
// the mismatch are preserved.
inline void orthonormalize_columns(std::vector<CVec>& vs, std::vector<CVec>& zs) {
    const std::size_t ncols = vs.size(), n = vs[0].size();
    for (std::size_t c = 0; c < ncols; ++c) {
        for (std::size_t p = 0; p < c; ++p) {
            cplx proj = 0;
            for (std::size_t i = 0; i < n; ++i)
                proj += std::conj(vs[p][i]) * vs[c][i] + std::conj(zs[p][i]) * zs[c][i];
            for (std::size_t i = 0; i < n; ++i) {
                vs[c][i] -= proj * vs[p][i];
                zs[c][i] -= proj * zs[p][i];
            }
        }
        double nrm = 0;
        for (std::size_t i = 0; i < n; ++i) nrm += std::norm(vs[c][i]) + std::norm(zs[c][i]);
        nrm = std::sqrt(nrm);
        if (!(nrm > 1e-300)) throw OverflowError("shooting: subspace collapsed");
        for (std::size_t i = 0; i < n; ++i) {
            vs[c][i] /= nrm;
            zs[c][i] /= nrm;
        }
    }
}

} // namespace detail

/// Matching determinant of the smoothed eigenvalue problem at the first
/// crossing time: integrate the decaying-at -inf subspace forward from
/// xi = xi_first - T and the decaying-at +inf subspace backward from
/// xi_last + T, orthonormalizing each unit of xi, and stack at the matching
/// point. Zeros in lambda approximate eigenvalues of the smoothed problem.
inline cplx shooting_mismatch(const PLModel& model, const Mollifier& moll, const Heteroclinic& het,
                              cplx lambda) {
    const int n = model.dim();
    double rho = std::numeric_limits<double>::infinity();
    for (const auto* p : {&model.pieces.front(), &model.pieces.back()})
        for (double h : p->eig.values) rho = std::min(rho, std::abs(h));
    const double T = 10.0 / rho;

    const double xi_first = het.times.front();
    const double xi_last = het.times.back();
    const double xi_left = xi_first - T;
    const double match = xi_first;

    // the smoothed trajectory: exact below the first layer, integrated past it
    detail::SmoothedPath path = detail::trace_smoothed_trajectory(
        model, moll, het.crossings.front(), xi_first, xi_last + T + 1.0);
    auto gamma_mu = [&](double t) { return t <= xi_first ? het.eval(t) : path.eval(t); };

    const CMat pm =
        detail::branch_matrix_unchecked(model.pieces.front(), lambda, BranchSide::Unstable);
    const CMat pp =
        detail::branch_matrix_unchecked(model.pieces.back(), lambda, BranchSide::Stable);

    auto integrate_columns = [&](std::vector<CVec> vs, std::vector<CVec> zs, double from,
                                 double to) {
        const double dir = to >= from ? 1.0 : -1.0;
        double xi = from, last_renorm = from;
        std::size_t guard = 0;
        while (dir * (to - xi) > 1e-12) {
            if (++guard > 100'000'000) throw StiffnessError("shooting: step budget");
            double h = std::min(detail::smoothed_step(model, moll, gamma_mu(xi)),
                                dir * (to - xi));
            for (std::size_t c = 0; c < vs.size(); ++c)
                detail::rk4_vz_step(model, moll, lambda, gamma_mu, xi, dir * h, vs[c], zs[c]);
            xi += dir * h;
            if (std::abs(xi - last_renorm) >= 1.0) {
                detail::orthonormalize_columns(vs, zs);
                last_renorm = xi;
            }
        }
        detail::orthonormalize_columns(vs, zs);
        return std::pair(vs, zs);
    };

    std::vector<CVec> vs_l(n), zs_l(n), vs_r(n), zs_r(n);
    for (int j = 0; j < n; ++j) {
        vs_l[j].assign(n, cplx(0));
        zs_l[j].assign(n, cplx(0));
        vs_l[j][j] = 1.0;
        for (int i = 0; i < n; ++i) zs_l[j][i] = pm(i, j) - model.pieces.front().Q(i, j);
        vs_r[j].assign(n, cplx(0));
        zs_r[j].assign(n, cplx(0));
        vs_r[j][j] = 1.0;
        for (int i = 0; i < n; ++i) zs_r[j][i] = pp(i, j) - model.pieces.back().Q(i, j);
    }

    auto [lv, lz] = integrate_columns(vs_l, zs_l, xi_left, match);
    auto [rv, rz] = integrate_columns(vs_r, zs_r, xi_last + T, match);

    CMat m(2 * n, 2 * n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            m(i, j) = lv[j][i];
            m(n + i, j) = lz[j][i];
            m(i, n + j) = rv[j][i];
            m(n + i, n + j) = rz[j][i];
        }
    const cplx d = det(m);
    if (!std::isfinite(d.real()) || !std::isfinite(d.imag()))
        throw OverflowError("shooting_mismatch: non-finite determinant");
    return d;
}

} // namespace shockspec
