#pragma once

// Transport of eigenfunction data across a field discontinuity: the matrix S
// with v_post = S v_pre, obtained as the vanishing-width limit of the
// mollified problem, and its block form acting on (v, z).

#include <utility>

#include "shockspec/errors.hpp"
#include "shockspec/linalg.hpp"
#include "shockspec/model.hpp"

namespace shockspec {

enum class JumpDirection { Forward, Backward };

/// Jump matrix at a transversal crossing. For Forward, S maps v just before
/// the crossing to v just after; Backward is the inverse map.
struct JumpMatrix {
    Mat S;
    Vec f_hat_pre;  // field value on the earlier side
    Vec f_hat_post; // field value on the later side
    Vec normal;
    JumpDirection direction = JumpDirection::Forward;
};

/// Build the jump matrix from the one-sided field values at the crossing.
///
/// Forward:  S = I + (df n^T) / <f_pre, n>,  df = f_post - f_pre.
/// Backward: the inverse map, I - (df n^T) / <f_post, n>.
/// S fixes every vector tangent to the interface and carries the pre-side
/// flux to the post-side flux (resp. back).
inline JumpMatrix jump_matrix(Vec f_hat_pre, Vec f_hat_post, Vec normal,
                              JumpDirection direction = JumpDirection::Forward) {
    const double fn_pre = dot(f_hat_pre, normal);
    const double fn_post = dot(f_hat_post, normal);
    if (fn_pre <= 0.0 || fn_post <= 0.0)
        throw TransversalityError("jump_matrix: normal flux must be positive on both sides");

    const int n = int(normal.size());
    const Vec df = f_hat_post - f_hat_pre;
    Mat s = Mat::identity(n);
    if (direction == JumpDirection::Forward)
        s = outer_update(std::move(s), df, normal, 1.0 / fn_pre);
    else
        s = outer_update(std::move(s), df, normal, -1.0 / fn_post);

    return JumpMatrix{std::move(s), std::move(f_hat_pre), std::move(f_hat_post),
                      std::move(normal), direction};
}

/// Jump matrix at crossing k of a heteroclinic.
inline JumpMatrix jump_at(const PLModel& model, const Heteroclinic& het, int k,
                          JumpDirection direction = JumpDirection::Forward) {
    return jump_matrix(het.field_before(k), het.field_after(k), model.interfaces[k].normal,
                       direction);
}

/// Block form acting on stacked (v, z): S on the v components, identity on z.
inline Mat block_jump(const JumpMatrix& j) {
    const int n = j.S.rows();
    Mat b(2 * n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) b(i, k) = j.S(i, k);
        b(n + i, n + i) = 1.0;
    }
    return b;
}

} // namespace shockspec
