#pragma once

// Regular quadratic spaces over F = F_p(x), held in diagonal form. A space
// built from a Gram matrix keeps the congruence transform so callers can
// map answers back to the original basis. Global decisions (isotropy,
// representation, equivalence) reduce to local ones over the finitely many
// places where some diagonal entry is not a unit, plus the infinite place;
// outside that set every criterion is automatically satisfied.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qlat/localfield.hpp"
#include "qlat/matrix.hpp"
#include "qlat/place.hpp"
#include "qlat/ratfunc.hpp"
#include "qlat/search.hpp"

namespace qlat {

// Classifying data of V over the completion F_v.
struct LocalInvariants {
    int dim = 0;
    SquareClassLocal det_class;
    int hasse = 1;  // product of Hilbert symbols over diagonal pairs

    bool operator==(const LocalInvariants& o) const {
        return dim == o.dim && det_class == o.det_class && hasse == o.hasse;
    }
    bool operator!=(const LocalInvariants& o) const { return !(*this == o); }
};

inline SquareClassLocal local_class_of_minus_one(const Place& v) {
    return {false, !minus_one_is_square(v)};
}

// Isotropy over a non-dyadic local field, by dimension.
inline bool locally_isotropic(const LocalInvariants& inv, const Place& v) {
    if (inv.dim <= 1) return false;
    SquareClassLocal m1 = local_class_of_minus_one(v);
    if (inv.dim == 2) return inv.det_class == m1;
    if (inv.dim == 3) return inv.hasse == hilbert_symbol(v, m1, m1 * inv.det_class);
    if (inv.dim == 4) {
        if (!inv.det_class.is_trivial()) return true;
        return inv.hasse == hilbert_symbol(v, m1, m1);
    }
    return true;  // u-invariant of a non-dyadic local field is 4
}

// Representation of a nonzero class over F_v: isotropic spaces are
// universal, otherwise test isotropy of V + <-a>.
inline bool locally_represents(const LocalInvariants& inv, const Place& v,
                               const SquareClassLocal& a) {
    if (inv.dim == 0) return false;
    if (locally_isotropic(inv, v)) return true;
    SquareClassLocal neg_a = local_class_of_minus_one(v) * a;
    LocalInvariants aug{inv.dim + 1, inv.det_class * neg_a,
                        inv.hasse * hilbert_symbol(v, inv.det_class, neg_a)};
    return locally_isotropic(aug, v);
}

class QSpace {
public:
    explicit QSpace(std::vector<RatFunc> diag) : diag_(std::move(diag)) {
        if (diag_.empty()) throw std::invalid_argument("quadratic space needs dimension >= 1");
        p_ = diag_.front().characteristic();
        for (const RatFunc& d : diag_)
            if (d.is_zero() || d.characteristic() != p_)
                throw std::invalid_argument("diagonal entries must be nonzero over one field");
    }

    // Symmetric Gram matrix -> diagonal form, remembering the basis change.
    static QSpace from_gram(const Matrix<RatFunc>& gram) {
        if (!gram.is_symmetric()) throw std::invalid_argument("Gram matrix must be symmetric");
        std::size_t n = gram.rows();
        Matrix<RatFunc> g = gram;
        Matrix<RatFunc> basis = Matrix<RatFunc>::identity(n, gram.at(0, 0).one_like());
        RatFunc one = gram.at(0, 0).one_like();
        for (std::size_t k = 0; k < n; ++k) {
            if (g.at(k, k).is_zero()) {
                bool fixed = false;
                for (std::size_t j = k + 1; j < n && !fixed; ++j)
                    if (!g.at(j, j).is_zero()) {
                        g.swap_rows(k, j);
                        g.swap_cols(k, j);
                        basis.swap_cols(k, j);
                        fixed = true;
                    }
                for (std::size_t j = k + 1; j < n && !fixed; ++j)
                    if (!g.at(k, j).is_zero()) {
                        // b_k += b_j turns Q(b_k) into 2*B(b_k, b_j) != 0.
                        g.add_row_multiple(k, j, one);
                        g.add_col_multiple(k, j, one);
                        basis.add_col_multiple(k, j, one);
                        fixed = true;
                    }
                if (!fixed) throw std::domain_error("Gram matrix is singular");
            }
            RatFunc pivot_inv = g.at(k, k).inverse();
            for (std::size_t j = k + 1; j < n; ++j) {
                if (g.at(k, j).is_zero()) continue;
                RatFunc c = -(g.at(k, j) * pivot_inv);
                g.add_row_multiple(j, k, c);
                g.add_col_multiple(j, k, c);
                basis.add_col_multiple(j, k, c);
            }
        }
        std::vector<RatFunc> d;
        d.reserve(n);
        for (std::size_t k = 0; k < n; ++k) {
            if (g.at(k, k).is_zero()) throw std::domain_error("Gram matrix is singular");
            d.push_back(g.at(k, k));
        }
        QSpace s(std::move(d));
        s.gram_ = gram;
        s.basis_ = basis;
        return s;
    }

    std::uint64_t characteristic() const { return p_; }
    int dim() const { return static_cast<int>(diag_.size()); }
    const std::vector<RatFunc>& diagonal() const { return diag_; }

    // Original Gram data, present when built via from_gram.
    const std::optional<Matrix<RatFunc>>& gram() const { return gram_; }
    const std::optional<Matrix<RatFunc>>& diagonalizing_basis() const { return basis_; }

    RatFunc det() const {
        RatFunc d = RatFunc::one(p_);
        for (const RatFunc& a : diag_) d *= a;
        return d;
    }

    SquareClassGlobal det_class() const { return global_square_class(det()); }

    LocalInvariants local_invariants(const Place& v) const {
        std::vector<SquareClassLocal> cls;
        cls.reserve(diag_.size());
        for (const RatFunc& d : diag_) cls.push_back(square_class_at(v, d));
        LocalInvariants inv;
        inv.dim = dim();
        for (const SquareClassLocal& c : cls) inv.det_class = inv.det_class * c;
        for (std::size_t i = 0; i < cls.size(); ++i)
            for (std::size_t j = i + 1; j < cls.size(); ++j)
                inv.hasse *= hilbert_symbol(v, cls[i], cls[j]);
        return inv;
    }

    int hasse_invariant(const Place& v) const { return local_invariants(v).hasse; }

    bool is_isotropic_at(const Place& v) const { return locally_isotropic(local_invariants(v), v); }

    bool represents_at(const Place& v, const RatFunc& a) const {
        if (a.is_zero()) throw std::invalid_argument("representation target must be nonzero");
        return locally_represents(local_invariants(v), v, square_class_at(v, a));
    }

    // Finite places where some entry is a non-unit, plus infinity; every
    // local criterion holds automatically elsewhere.
    std::vector<Place> relevant_places() const {
        std::vector<Poly> primes;
        for (const RatFunc& d : diag_) {
            for (const auto& [q, e] : factor(d.num()).factors) {
                (void)e;
                primes.push_back(q);
            }
            if (!d.den().is_one())
                for (const auto& [q, e] : factor(d.den()).factors) {
                    (void)e;
                    primes.push_back(q);
                }
        }
        std::sort(primes.begin(), primes.end(), Poly::canonical_less);
        primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
        std::vector<Place> out;
        out.push_back(Place::infinite(p_));
        for (const Poly& q : primes) out.push_back(Place::finite(q));
        return out;
    }

    // Hasse–Minkowski: isotropic over F iff isotropic at every place.
    bool is_isotropic() const {
        if (dim() <= 1) return false;
        if (dim() == 2) return is_global_square(-(diag_[0] * diag_[1]));
        if (dim() >= 5) return true;
        for (const Place& v : relevant_places())
            if (!is_isotropic_at(v)) return false;
        return true;
    }

    bool represents(const RatFunc& a) const {
        if (a.is_zero()) throw std::invalid_argument("representation target must be nonzero");
        if (dim() >= 4) return true;  // V + <-a> has dimension >= 5
        if (is_isotropic()) return true;
        std::vector<RatFunc> aug = diag_;
        aug.push_back(-a);
        return QSpace(aug).is_isotropic();
    }

    bool is_universal() const { return dim() >= 4 || is_isotropic(); }

    // Definite = anisotropic over the completion at the infinite place.
    bool is_definite() const { return !is_isotropic_at(Place::infinite(p_)); }

    bool is_equivalent_to(const QSpace& o) const {
        if (p_ != o.p_ || dim() != o.dim()) return false;
        if (det_class() != o.det_class()) return false;
        std::vector<Place> places = relevant_places();
        for (const Place& v : o.relevant_places()) {
            bool seen = false;
            for (const Place& w : places) seen = seen || w == v;
            if (!seen) places.push_back(v);
        }
        for (const Place& v : places)
            if (hasse_invariant(v) != o.hasse_invariant(v)) return false;
        return true;
    }

    QSpace orthogonal_sum(const QSpace& o) const {
        std::vector<RatFunc> d = diag_;
        d.insert(d.end(), o.diag_.begin(), o.diag_.end());
        return QSpace(std::move(d));
    }

    QSpace scaled(const RatFunc& c) const {
        if (c.is_zero()) throw std::invalid_argument("scaling by zero");
        std::vector<RatFunc> d;
        d.reserve(diag_.size());
        for (const RatFunc& a : diag_) d.push_back(a * c);
        return QSpace(std::move(d));
    }

    // Explicit isotropy witness: nonzero w with sum d_i w_i^2 = 0, entries
    // polynomial. Denominators are cleared entrywise before the search, so
    // the bound applies to the cleared equation.
    struct Witness {
        SearchOutcome outcome;
        std::vector<RatFunc> vector;  // meaningful iff outcome.found
    };

    Witness find_isotropy_witness(int degree_bound, SearchBudget budget = {}) const {
        std::vector<Poly> cleared;
        cleared.reserve(diag_.size());
        for (const RatFunc& d : diag_) cleared.push_back(d.num() * d.den());
        Witness w;
        w.outcome = search_diagonal_isotropy(cleared, degree_bound, budget);
        if (w.outcome.found) {
            for (std::size_t i = 0; i < diag_.size(); ++i)
                w.vector.push_back(RatFunc(w.outcome.witness[i] * diag_[i].den()));
            check_value(w.vector, RatFunc::zero(p_));
        }
        return w;
    }

    // Explicit representation witness for Q(w) = a. The equation is scaled
    // to polynomial coefficients n_i m_i (entries d_i = n_i/m_i) and target
    // num(a)*den(a); witnesses map back as w_i = m_i v_i / den(a).
    Witness find_representation_witness(const RatFunc& a, int degree_bound,
                                        SearchBudget budget = {}) const {
        if (a.is_zero()) throw std::invalid_argument("representation target must be nonzero");
        std::vector<Poly> cleared;
        cleared.reserve(diag_.size());
        for (const RatFunc& d : diag_) cleared.push_back(d.num() * d.den());
        Poly target = a.num() * a.den();
        Witness w;
        w.outcome = search_diagonal_representation(cleared, target, degree_bound, budget);
        if (w.outcome.found) {
            for (std::size_t i = 0; i < diag_.size(); ++i)
                w.vector.push_back(RatFunc(w.outcome.witness[i] * diag_[i].den(), a.den()));
            check_value(w.vector, a);
        }
        return w;
    }

    RatFunc evaluate(const std::vector<RatFunc>& w) const {
        if (w.size() != diag_.size()) throw std::invalid_argument("witness length mismatch");
        RatFunc s = RatFunc::zero(p_);
        for (std::size_t i = 0; i < diag_.size(); ++i) s += diag_[i] * w[i] * w[i];
        return s;
    }

    std::string to_string() const {
        std::string s = "<";
        for (std::size_t i = 0; i < diag_.size(); ++i) {
            if (i) s += ", ";
            s += diag_[i].to_string();
        }
        return s + ">";
    }

private:
    void check_value(const std::vector<RatFunc>& w, const RatFunc& expect) const {
        if (evaluate(w) != expect)
            throw std::logic_error("witness verification failed");  // unreachable
    }

    std::uint64_t p_;
    std::vector<RatFunc> diag_;
    std::optional<Matrix<RatFunc>> gram_;
    std::optional<Matrix<RatFunc>> basis_;
};

}  // namespace qlat
