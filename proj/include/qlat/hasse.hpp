#pragma once

// Isometries of a quadratic space and their spinor norms. An isometry given
// as a matrix in the diagonal basis is decomposed into hyperplane
// reflections (Cartan–Dieudonné, constructive, at most 2*dim factors); the
// spinor norm is the product of the reflection vectors' values, read as a
// global square class. Also: the Hilbert reciprocity check used by tests
// and the CLI, over any place set containing the support of both arguments.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qlat/localfield.hpp"
#include "qlat/matrix.hpp"
#include "qlat/place.hpp"
#include "qlat/qspace.hpp"

namespace qlat {

// Product over all places of (a,b)_v. Only places in the joint support can
// contribute a factor != +1, so the product over them is the full product;
// reciprocity says it is always +1.
inline int hilbert_product(const RatFunc& a, const RatFunc& b) {
    if (a.is_zero() || b.is_zero()) throw std::invalid_argument("Hilbert symbol needs nonzero arguments");
    int prod = 1;
    std::vector<Place> places = support_with_infinity(a);
    for (const Place& v : support_with_infinity(b)) {
        bool seen = false;
        for (const Place& w : places) seen = seen || w == v;
        if (!seen) places.push_back(v);
    }
    for (const Place& v : places) prod *= hilbert_symbol(v, a, b);
    return prod;
}

// B(x, y) for the diagonal form: sum d_i x_i y_i.
inline RatFunc bilinear_value(const QSpace& space, const std::vector<RatFunc>& x,
                              const std::vector<RatFunc>& y) {
    const std::vector<RatFunc>& d = space.diagonal();
    if (x.size() != d.size() || y.size() != d.size())
        throw std::invalid_argument("vector length mismatch");
    RatFunc s = RatFunc::zero(space.characteristic());
    for (std::size_t i = 0; i < d.size(); ++i) s += d[i] * x[i] * y[i];
    return s;
}

// tau_w(x) = x - (2 B(x,w) / Q(w)) w; requires Q(w) != 0.
inline std::vector<RatFunc> reflect(const QSpace& space, const std::vector<RatFunc>& w,
                                    const std::vector<RatFunc>& x) {
    RatFunc qw = space.evaluate(w);
    if (qw.is_zero()) throw std::invalid_argument("reflection vector must be anisotropic");
    RatFunc c = (bilinear_value(space, x, w) + bilinear_value(space, x, w)) / qw;
    std::vector<RatFunc> out = x;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= c * w[i];
    return out;
}

// Matrix of tau_w in the diagonal basis.
inline Matrix<RatFunc> reflection_matrix(const QSpace& space, const std::vector<RatFunc>& w) {
    std::size_t n = static_cast<std::size_t>(space.dim());
    RatFunc one = RatFunc::one(space.characteristic());
    Matrix<RatFunc> m(n, n, RatFunc::zero(space.characteristic()));
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<RatFunc> e(n, RatFunc::zero(space.characteristic()));
        e[j] = one;
        std::vector<RatFunc> img = reflect(space, w, e);
        for (std::size_t i = 0; i < n; ++i) m.at(i, j) = img[i];
    }
    return m;
}

inline bool is_isometry(const QSpace& space, const Matrix<RatFunc>& t) {
    std::size_t n = static_cast<std::size_t>(space.dim());
    if (t.rows() != n || t.cols() != n) return false;
    Matrix<RatFunc> g = Matrix<RatFunc>::diagonal(space.diagonal());
    return g.congruent(t) == g;
}

struct ReflectionDecomposition {
    std::vector<std::vector<RatFunc>> vectors;  // t = tau_{v_1} ... tau_{v_k}
    int determinant_sign;                       // (-1)^k
    SquareClassGlobal spinor_norm;              // product of Q(v_i) mod squares
};

// Constructive Cartan–Dieudonné for an isometry t of the diagonal space:
// fix basis vectors one at a time. If v = t(e_i) already equals e_i, no
// factor; otherwise reflect in v - e_i when that vector is anisotropic
// (tau maps v to e_i), else in v + e_i followed by e_i. Both candidates
// are orthogonal to the already-fixed e_j, so progress is preserved and at
// most 2*dim reflections are produced.
inline ReflectionDecomposition cartan_dieudonne(const QSpace& space, Matrix<RatFunc> t) {
    if (!is_isometry(space, t)) throw std::invalid_argument("matrix is not an isometry of the space");
    std::uint64_t p = space.characteristic();
    std::size_t n = static_cast<std::size_t>(space.dim());
    std::vector<std::vector<RatFunc>> pending;  // collected left-to-right

    auto apply_reflection = [&](const std::vector<RatFunc>& w) {
        // t <- tau_w * t, column by column.
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<RatFunc> col(n, RatFunc::zero(p));
            for (std::size_t i = 0; i < n; ++i) col[i] = t.at(i, j);
            std::vector<RatFunc> img = reflect(space, w, col);
            for (std::size_t i = 0; i < n; ++i) t.at(i, j) = img[i];
        }
        pending.push_back(w);
    };

    for (std::size_t i = 0; i < n; ++i) {
        std::vector<RatFunc> e(n, RatFunc::zero(p));
        e[i] = RatFunc::one(p);
        std::vector<RatFunc> v(n, RatFunc::zero(p));
        for (std::size_t r = 0; r < n; ++r) v[r] = t.at(r, i);
        if (v == e) continue;
        std::vector<RatFunc> diff(n, RatFunc::zero(p)), sum(n, RatFunc::zero(p));
        for (std::size_t r = 0; r < n; ++r) {
            diff[r] = v[r] - e[r];
            sum[r] = v[r] + e[r];
        }
        if (!space.evaluate(diff).is_zero()) {
            apply_reflection(diff);
        } else {
            // Q(v-e)=0 and Q(v)=Q(e) force Q(v+e) = 4Q(e) != 0.
            apply_reflection(sum);
            apply_reflection(e);
        }
    }
    // All basis vectors fixed => t is now the identity.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            bool diag = i == j;
            if ((diag && !t.at(i, j).is_one()) || (!diag && !t.at(i, j).is_zero()))
                throw std::logic_error("reflection decomposition failed to reach identity");
        }
    // Each w was applied on the left of the current remainder, and
    // reflections are involutions, so t = tau_{w_1} tau_{w_2} ... in
    // collection order.
    RatFunc norm = RatFunc::one(p);
    for (const auto& w : pending) norm *= space.evaluate(w);
    int sign = pending.size() % 2 == 0 ? 1 : -1;
    return ReflectionDecomposition{std::move(pending), sign, global_square_class(norm)};
}

// Spinor norm of a rotation (even product); for an odd product this is the
// usual extension by the same formula.
inline SquareClassGlobal spinor_norm(const QSpace& space, const Matrix<RatFunc>& t) {
    return cartan_dieudonne(space, t).spinor_norm;
}

}  // namespace qlat
