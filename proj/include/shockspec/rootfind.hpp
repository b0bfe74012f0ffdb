#pragma once

// Argument-principle machinery: winding numbers of analytic functions over
// closed contours, quadtree localization of zeros in a right-half-plane
// window, real-axis bisection, and predictor-corrector continuation of
// eigenvalue branches in a model parameter.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "shockspec/errors.hpp"
#include "shockspec/linalg.hpp"
#include "shockspec/spectral.hpp"

namespace shockspec {

using AnalyticFn = std::function<cplx(cplx)>;

// ---------------------------------------------------------------------------
// contours

struct ContourSegment {
    enum class Kind { Line, Arc };
    Kind kind = Kind::Line;
    cplx a, b;              // line endpoints
    cplx center;            // arc data
    double radius = 0, ang0 = 0, ang1 = 0;

    cplx eval(double t) const {
        if (kind == Kind::Line) return a + t * (b - a);
        return center + std::polar(radius, ang0 + t * (ang1 - ang0));
    }
};

struct Contour {
    std::vector<ContourSegment> segments;
};

inline ContourSegment line_segment(cplx a, cplx b) {
    ContourSegment s;
    s.kind = ContourSegment::Kind::Line;
    s.a = a;
    s.b = b;
    return s;
}

inline ContourSegment arc_segment(cplx center, double radius, double ang0, double ang1) {
    ContourSegment s;
    s.kind = ContourSegment::Kind::Arc;
    s.center = center;
    s.radius = radius;
    s.ang0 = ang0;
    s.ang1 = ang1;
    return s;
}

/// Counterclockwise boundary of the axis-aligned rectangle [lo, hi].
inline Contour rectangle_contour(cplx lo, cplx hi) {
    Contour c;
    c.segments = {line_segment(lo, cplx(hi.real(), lo.imag())),
                  line_segment(cplx(hi.real(), lo.imag()), hi),
                  line_segment(hi, cplx(lo.real(), hi.imag())),
                  line_segment(cplx(lo.real(), hi.imag()), lo)};
    return c;
}

/// Counterclockwise boundary of { Re >= delta, |z| <= R }: a vertical chord
/// plus the right-hand circular arc.
inline Contour half_disc_contour(double delta, double R) {
    if (!(0 < delta && delta < R))
        throw Error("half_disc_contour: need 0 < delta < R");
    const double y = std::sqrt(R * R - delta * delta);
    const double phi = std::atan2(y, delta);
    Contour c;
    c.segments = {line_segment(cplx(delta, y), cplx(delta, -y)),
                  arc_segment(cplx(0, 0), R, -phi, phi)};
    return c;
}

// ---------------------------------------------------------------------------
// winding numbers

/// Integer winding of fn along the closed contour about 0, by accumulating
/// principal argument increments with adaptive panel refinement until every
/// increment is below 1/2 radian and the total sits within 0.1 of an integer.
/// Throws ContourHitsRootError when |fn| nearly vanishes on the contour.
inline int winding_number(const AnalyticFn& fn, const Contour& contour, int panels = 16) {
    struct Node {
        double t;
        cplx f;
    };
    const double max_step = 0.5; // radians
    const std::size_t eval_cap = 1 << 19;
    std::size_t evals = 0;

    double total = 0;
    double fmin = std::numeric_limits<double>::infinity(), fmax = 0;

    for (const auto& seg : contour.segments) {
        std::vector<Node> nodes(panels + 1);
        for (int i = 0; i <= panels; ++i) {
            const double t = double(i) / panels;
            nodes[i] = {t, fn(seg.eval(t))};
        }
        evals += nodes.size();

        for (std::size_t i = 0; i + 1 < nodes.size();) {
            const cplx f0 = nodes[i].f, f1 = nodes[i + 1].f;
            const double a0 = std::abs(f0), a1 = std::abs(f1);
            fmin = std::min({fmin, a0, a1});
            fmax = std::max({fmax, a0, a1});
            if (a0 == 0.0 || a1 == 0.0)
                throw ContourHitsRootError("winding_number: fn vanishes on the contour");
            const double darg = std::arg(f1 / f0);
            const double dt = nodes[i + 1].t - nodes[i].t;
            if (std::abs(darg) > max_step && dt > 1e-12) {
                if (++evals > eval_cap)
                    throw ContourHitsRootError(
                        "winding_number: refinement stalled near a zero on the contour");
                const double tm = 0.5 * (nodes[i].t + nodes[i + 1].t);
                nodes.insert(nodes.begin() + i + 1, {tm, fn(seg.eval(tm))});
                continue;
            }
            total += darg;
            ++i;
        }
    }

    if (fmin <= 1e-12 * fmax)
        throw ContourHitsRootError("winding_number: fn nearly vanishes on the contour");
    const double w = total / (2.0 * M_PI);
    const double rounded = std::round(w);
    if (std::abs(w - rounded) > 0.1)
        throw ContourHitsRootError("winding_number: argument sum is not close to an integer");
    return int(rounded);
}

/// Grow R by doubling until fn(lambda) / (-sqrt(lambda))^n stays within 20%
/// of the expected constant on five rays of |lambda| = R in Re >= 0.
inline double auto_radius(const AnalyticFn& fn, double asymptotic_const, int n, double r0 = 50.0,
                          double rel_band = 0.2) {
    double r = r0;
    for (int iter = 0; iter < 40; ++iter) {
        bool ok = true;
        for (double ang : {-M_PI / 2, -M_PI / 4, 0.0, M_PI / 4, M_PI / 2}) {
            const cplx la = std::polar(r, ang);
            const cplx denom = std::pow(-std::sqrt(la), n);
            if (std::abs(fn(la) / denom - asymptotic_const) > rel_band * asymptotic_const) {
                ok = false;
                break;
            }
        }
        if (ok) return r;
        r *= 2.0;
    }
    throw Error("auto_radius: asymptotic regime not reached");
}

// ---------------------------------------------------------------------------
// eigenvalue localization

struct LocatedRoot {
    cplx lambda;
    double residual = 0;  // |fn(lambda)|
    int winding = 1;      // winding of the enclosing cell
    bool converged = true;
};

struct EigenvalueReport {
    std::vector<LocatedRoot> roots;
    HalfPlaneRegion region;
    int total_winding = 0;
    bool strip_caveat = true; // 0 < Re lambda < delta is never examined
};

namespace detail {

struct Cell {
    double re0, re1, im0, im1;
    double width() const { return re1 - re0; }
    double height() const { return im1 - im0; }
    cplx center() const { return cplx(0.5 * (re0 + re1), 0.5 * (im0 + im1)); }
};

inline int cell_winding(const AnalyticFn& fn, const Cell& c) {
    return winding_number(fn, rectangle_contour(cplx(c.re0, c.im0), cplx(c.re1, c.im1)));
}

// Winding with the deterministic outward nudge on a contour hit: grow the
// cell by 10x the edge tolerance, to the right and upward first.
inline int cell_winding_nudged(const AnalyticFn& fn, Cell& c) {
    const double tol = 1e-7 * std::max(c.width(), c.height());
    for (int attempt = 0; attempt < 6; ++attempt) {
        try {
            return cell_winding(fn, c);
        } catch (const ContourHitsRootError&) {
            const double d = 10.0 * tol * (attempt + 1);
            c.re1 += d;
            c.im1 += d;
            c.re0 -= d;
            c.im0 -= d;
        }
    }
    return cell_winding(fn, c); // propagate the error
}

inline double boundary_median_abs(const AnalyticFn& fn, const Cell& c) {
    std::vector<double> vals;
    vals.reserve(32);
    for (int i = 0; i < 8; ++i) {
        const double t = (i + 0.5) / 8.0;
        vals.push_back(std::abs(fn(cplx(c.re0 + t * c.width(), c.im0))));
        vals.push_back(std::abs(fn(cplx(c.re0 + t * c.width(), c.im1))));
        vals.push_back(std::abs(fn(cplx(c.re0, c.im0 + t * c.height()))));
        vals.push_back(std::abs(fn(cplx(c.re1, c.im0 + t * c.height()))));
    }
    std::nth_element(vals.begin(), vals.begin() + vals.size() / 2, vals.end());
    return vals[vals.size() / 2];
}

/// Complex secant iteration. Returns nullopt when it fails to settle or the
/// iterates leave the domain of fn.
inline std::optional<cplx> secant_root(const AnalyticFn& fn, cplx z0, cplx z1, int max_iter = 80) {
    try {
        cplx f0 = fn(z0), f1 = fn(z1);
        for (int it = 0; it < max_iter; ++it) {
            if (f1 == f0) return std::nullopt;
            const cplx z2 = z1 - f1 * (z1 - z0) / (f1 - f0);
            if (!std::isfinite(z2.real()) || !std::isfinite(z2.imag())) return std::nullopt;
            const double step = std::abs(z2 - z1);
            z0 = z1;
            f0 = f1;
            z1 = z2;
            f1 = fn(z1);
            if (step <= 1e-15 * (1.0 + std::abs(z1)) || f1 == cplx(0)) return z1;
        }
        return z1; // settled enough in practice; caller checks the residual
    } catch (const Error&) {
        return std::nullopt;
    }
}

} // namespace detail

struct LocateOptions {
    double min_cell_rel = 1e-9;   // stop subdividing below this * R
    double residual_rel = 1e-8;   // accept roots with |fn| <= this * local scale
    int max_cells = 4096;
};

/// Locate the zeros of fn in the window {delta <= Re, |lambda| <= R},
/// searched over the circumscribing rectangle [delta, R] x [-R, R]:
/// quadtree subdivision by winding counts, complex secant refinement from
/// cell centers, multiplicities from the cell winding. Cells that fail to
/// refine are reported with converged = false.
inline EigenvalueReport locate_eigenvalues(const AnalyticFn& fn, const HalfPlaneRegion& region,
                                           const LocateOptions& opts = {}) {
    if (!(0 < region.delta && region.delta < region.R))
        throw Error("locate_eigenvalues: need 0 < delta < R");
    EigenvalueReport report;
    report.region = region;
    report.strip_caveat = region.delta > 0;

    detail::Cell top{region.delta, region.R, -region.R, region.R};
    report.total_winding = detail::cell_winding_nudged(fn, top);
    if (report.total_winding == 0) return report;

    std::vector<std::pair<detail::Cell, int>> queue{{top, report.total_winding}};
    int processed = 0;
    while (!queue.empty()) {
        if (++processed > opts.max_cells)
            throw Error("locate_eigenvalues: cell budget exhausted");
        auto [cell, w] = queue.back();
        queue.pop_back();

        const double diam = std::max(cell.width(), cell.height());
        if (w == 1) {
            const cplx c = cell.center();
            const cplx offset = 0.05 * cplx(cell.width(), cell.height());
            const auto root = detail::secant_root(fn, c, c + offset);
            if (root) {
                const bool inside = root->real() >= cell.re0 - 0.05 * cell.width() &&
                                    root->real() <= cell.re1 + 0.05 * cell.width() &&
                                    root->imag() >= cell.im0 - 0.05 * cell.height() &&
                                    root->imag() <= cell.im1 + 0.05 * cell.height();
                const double res = std::abs(fn(*root));
                const double scale = detail::boundary_median_abs(fn, cell);
                if (inside && res <= opts.residual_rel * scale) {
                    report.roots.push_back({*root, res, 1, true});
                    continue;
                }
            }
        }
        if (diam <= opts.min_cell_rel * region.R) {
            report.roots.push_back({cell.center(), std::abs(fn(cell.center())), w, false});
            continue;
        }

        // split into four, nudging the split point away from any root it hits
        double rm = 0.5 * (cell.re0 + cell.re1);
        double im = 0.5 * (cell.im0 + cell.im1);
        for (int attempt = 0;; ++attempt) {
            detail::Cell kids[4] = {{cell.re0, rm, cell.im0, im},
                                    {rm, cell.re1, cell.im0, im},
                                    {cell.re0, rm, im, cell.im1},
                                    {rm, cell.re1, im, cell.im1}};
            try {
                int sum = 0;
                std::vector<std::pair<detail::Cell, int>> found;
                for (auto& k : kids) {
                    const int wk = detail::cell_winding(fn, k);
                    sum += wk;
                    if (wk > 0) found.emplace_back(k, wk);
                }
                if (sum != w)
                    throw ContourHitsRootError("locate_eigenvalues: split lost a root");
                for (auto& f : found) queue.push_back(f);
                break;
            } catch (const ContourHitsRootError&) {
                if (attempt >= 6) throw;
                const double d = 10.0 * 1e-7 * diam * (attempt + 1);
                rm += d;
                im += d;
            }
        }
    }

    std::sort(report.roots.begin(), report.roots.end(), [](const LocatedRoot& a, const LocatedRoot& b) {
        if (a.lambda.real() != b.lambda.real()) return a.lambda.real() < b.lambda.real();
        return a.lambda.imag() < b.lambda.imag();
    });
    return report;
}

// ---------------------------------------------------------------------------
// real-axis roots (independent bisection oracle)

/// Roots of a real-on-the-real-axis function on [a, b], from sign changes on
/// a log-spaced grid refined by bisection.
inline std::vector<double> real_axis_roots(const AnalyticFn& fn, double a, double b,
                                           int samples = 600) {
    if (!(0 < a && a < b)) throw Error("real_axis_roots: need 0 < a < b");
    std::vector<double> xs(samples);
    const double la = std::log(a), lb = std::log(b);
    for (int i = 0; i < samples; ++i) xs[i] = std::exp(la + (lb - la) * i / (samples - 1));

    auto value = [&](double x) { return fn(cplx(x, 0.0)).real(); };
    std::vector<double> roots;
    double f0 = value(xs[0]);
    for (int i = 1; i < samples; ++i) {
        const double f1 = value(xs[i]);
        if (f0 == 0.0) roots.push_back(xs[i - 1]);
        else if (f0 * f1 < 0.0) {
            double lo = xs[i - 1], hi = xs[i], flo = f0;
            while (hi - lo > 1e-13 * hi) {
                const double mid = 0.5 * (lo + hi);
                const double fm = value(mid);
                if (fm == 0.0) { lo = hi = mid; break; }
                if (flo * fm < 0) hi = mid;
                else { lo = mid; flo = fm; }
            }
            roots.push_back(0.5 * (lo + hi));
        }
        f0 = f1;
    }
    return roots;
}

// ---------------------------------------------------------------------------
// branch continuation

/// One eigenvalue branch followed over a parameter interval, with any
/// imaginary-axis crossings found along the way.
struct BranchTrace {
    std::vector<double> params;
    CVec lambdas;
    struct Crossing {
        double s;
        cplx lambda;
    };
    std::vector<Crossing> crossings; // Re lambda sign changes, bisected in s
    bool lost = false;
    std::string note;
};

using ParamFamily = std::function<cplx(double, cplx)>; // (s, lambda) -> value

struct TraceOptions {
    double initial_step_rel = 1.0 / 64.0; // of |s_end - s_start|
    double min_step_rel = 1e-9;
    double crossing_rel_tol = 1e-6; // bisection tolerance on s
    bool throw_on_loss = true;
};

namespace detail {

inline std::optional<cplx> correct_root(const ParamFamily& family, double s, cplx guess,
                                        double trust) {
    AnalyticFn fn = [&](cplx la) { return family(s, la); };
    const cplx offset = 1e-4 * (1.0 + std::abs(guess)) * cplx(1.0, 0.7);
    auto root = secant_root(fn, guess, guess + offset);
    if (!root) return std::nullopt;
    if (std::abs(*root - guess) > trust) return std::nullopt;
    try {
        const double res = std::abs(fn(*root));
        const double ref = std::abs(fn(guess + 0.1 * trust * cplx(1, 1)));
        if (!(res <= 1e-6 * (ref + 1e-300)) && res > 1e-12) return std::nullopt;
    } catch (const Error&) {
        return std::nullopt;
    }
    return root;
}

} // namespace detail

/// Predictor-corrector continuation of a simple root lambda(s) of
/// family(s, .) from s_start to s_end, halving the step on corrector
/// failures. Records every imaginary-axis crossing, bisected in s to
/// relative tolerance.
inline BranchTrace trace_branch(const ParamFamily& family, double s_start, double s_end,
                                cplx lambda_seed, const TraceOptions& opts = {}) {
    BranchTrace trace;
    const double span = s_end - s_start;
    if (span == 0) throw Error("trace_branch: empty parameter interval");

    auto seed = detail::correct_root(family, s_start, lambda_seed,
                                     0.5 * (1.0 + std::abs(lambda_seed)));
    if (!seed) throw TraceLostError("trace_branch: seed is not a root");
    trace.params.push_back(s_start);
    trace.lambdas.push_back(*seed);

    double ds = span * opts.initial_step_rel;
    const double min_step = std::abs(span) * opts.min_step_rel;

    auto bisect_crossing = [&](double s_a, cplx la_a, double s_b, cplx la_b) {
        // Re lambda changes sign on [s_a, s_b]
        while (std::abs(s_b - s_a) > opts.crossing_rel_tol * std::max(std::abs(s_a), std::abs(s_b))) {
            const double sm = 0.5 * (s_a + s_b);
            const cplx guess = la_a + (la_b - la_a) * ((sm - s_a) / (s_b - s_a));
            auto lam = detail::correct_root(family, sm, guess,
                                            10.0 * std::abs(la_b - la_a) + 1e-9);
            if (!lam) break;
            if ((lam->real() > 0) == (la_b.real() > 0)) {
                s_b = sm;
                la_b = *lam;
            } else {
                s_a = sm;
                la_a = *lam;
            }
        }
        trace.crossings.push_back({0.5 * (s_a + s_b), 0.5 * (la_a + la_b)});
    };

    double s = s_start;
    cplx la = *seed;
    while ((span > 0) ? (s < s_end) : (s > s_end)) {
        const double step = (span > 0) ? std::min(ds, s_end - s) : std::max(-ds, s_end - s);
        const double s_next = s + step;

        cplx pred = la;
        if (trace.params.size() >= 2) {
            const std::size_t k = trace.params.size();
            const double ds_old = trace.params[k - 1] - trace.params[k - 2];
            if (ds_old != 0)
                pred = la + (trace.lambdas[k - 1] - trace.lambdas[k - 2]) * (step / ds_old);
        }
        double trust = 0.2 * (1.0 + std::abs(la));
        if (trace.params.size() >= 2)
            trust = std::max(8.0 * std::abs(trace.lambdas.back() -
                                            trace.lambdas[trace.lambdas.size() - 2]),
                             1e-6 * (1.0 + std::abs(la)));

        auto corrected = detail::correct_root(family, s_next, pred, trust);
        if (!corrected) {
            ds *= 0.5;
            if (ds < min_step) {
                trace.lost = true;
                trace.note = "step underflow at s = " + std::to_string(s);
                if (opts.throw_on_loss)
                    throw TraceLostError("trace_branch: " + trace.note);
                return trace;
            }
            continue;
        }
        if ((la.real() > 0) != (corrected->real() > 0) && la.real() != 0)
            bisect_crossing(s, la, s_next, *corrected);

        s = s_next;
        la = *corrected;
        trace.params.push_back(s);
        trace.lambdas.push_back(la);
        ds = std::min(ds * 1.5, std::abs(span) / 8.0);
    }
    return trace;
}

} // namespace shockspec
