#pragma once

// Completions of F_p(x) at a place, represented to finite precision: an
// element is pi^val * (U + O(pi^N)) with U an exact polynomial representative
// of the unit part modulo pi^N. At a finite place with prime m the
// representative lives in F_p[x] mod m^N; at the infinite place it is a
// polynomial in y = 1/x mod y^N. All arithmetic is exact on representatives;
// precision only shrinks through cancellation, and any query the current
// precision cannot answer throws precision_error rather than guessing.

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "qlat/place.hpp"
#include "qlat/poly.hpp"
#include "qlat/ratfunc.hpp"

namespace qlat {

class precision_error : public std::runtime_error {
public:
    explicit precision_error(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

// Representative of the place's uniformizer in the working polynomial ring:
// the prime itself, or y at infinity.
inline Poly local_prime(const Place& v) {
    return v.is_finite() ? v.prime() : Poly::x(v.characteristic());
}

inline Poly local_prime_pow(const Place& v, int k) {
    return local_prime(v).pow(static_cast<std::uint64_t>(k));
}

// Inverse of f modulo m^k, where f is a unit (not divisible by m).
inline Poly inverse_mod(const Poly& f, const Poly& mk) {
    auto [g, s, t] = xgcd(f % mk, mk);
    (void)t;
    if (!g.is_one()) throw std::domain_error("element not invertible at this precision");
    return s % mk;
}

}  // namespace detail

// Default working precision for deciding questions about a target element
// given the valuations that will enter the computation. Doubling covers the
// square-root halving of exponents; +3 pads the strict-inequality checks.
inline int default_precision(int target_abs_val, int max_input_abs_val) {
    return 2 * (target_abs_val + max_input_abs_val) + 3;
}

class LocalElt {
public:
    // Exact image of a global element, unit part known mod pi^precision.
    static LocalElt from_ratfunc(const Place& v, const RatFunc& a, int precision) {
        check_precision(precision);
        if (a.is_zero()) return exact_zero(v);
        std::uint64_t p = v.characteristic();
        Poly m = detail::local_prime(v);
        Poly mN = detail::local_prime_pow(v, precision);
        int val;
        Poly unit(p);
        if (v.is_finite()) {
            auto [num, i] = strip(a.num(), m);
            auto [den, j] = strip(a.den(), m);
            val = i - j;
            unit = num * detail::inverse_mod(den, mN) % mN;
        } else {
            val = a.den().degree() - a.num().degree();
            Poly rn = a.num().reverse();  // nonzero constant term: unit in F_p[y]
            Poly rd = a.den().reverse();
            unit = rn * detail::inverse_mod(rd, mN) % mN;
        }
        return LocalElt(v, val, std::move(unit), precision);
    }

    static LocalElt exact_zero(const Place& v) {
        return LocalElt(v, std::numeric_limits<int>::max());
    }

    static LocalElt uniformizer_power(const Place& v, int k, int precision) {
        check_precision(precision);
        return LocalElt(v, k, Poly::one(v.characteristic()), precision);
    }

    const Place& place() const { return v_; }

    bool known_nonzero() const { return !zeroish_; }
    bool is_exact_zero() const { return zeroish_ && abs_prec_ == std::numeric_limits<int>::max(); }

    // Valuation of the element; unanswerable for a truncated possible zero.
    int valuation() const {
        if (!zeroish_) return val_;
        if (is_exact_zero()) throw std::domain_error("valuation of zero");
        throw precision_error("element is O(pi^" + std::to_string(abs_prec_) +
                              "); valuation needs more precision");
    }

    // Relative precision of the unit part.
    int precision() const {
        if (zeroish_) throw std::domain_error("possible zero has no unit part");
        return prec_;
    }

    const Poly& unit_rep() const {
        if (zeroish_) throw std::domain_error("possible zero has no unit part");
        return unit_;
    }

    // First expansion coefficient, as a residue field element.
    Fq leading_coeff() const {
        const Poly& m = detail::local_prime(v_);
        return v_.residue_field()->element(unit_rep() % m);
    }

    bool unit_is_square() const { return leading_coeff().is_square(); }

    LocalElt operator-() const {
        if (zeroish_) return *this;
        return LocalElt(v_, val_, -unit_, prec_);
    }

    LocalElt operator+(const LocalElt& o) const {
        same_place(o);
        if (zeroish_ && o.zeroish_)
            return LocalElt(v_, std::min(abs_prec_, o.abs_prec_));
        if (zeroish_) return o.absorbed(abs_prec_);
        if (o.zeroish_) return absorbed(o.abs_prec_);
        int v = std::min(val_, o.val_);
        int abs = std::min(val_ + prec_, o.val_ + o.prec_);
        Poly mrel = detail::local_prime_pow(v_, abs - v);
        Poly ua = unit_ * detail::local_prime_pow(v_, val_ - v);
        Poly ub = o.unit_ * detail::local_prime_pow(v_, o.val_ - v);
        return renormalized(v_, v, (ua + ub) % mrel, abs);
    }

    LocalElt operator-(const LocalElt& o) const { return *this + (-o); }

    LocalElt operator*(const LocalElt& o) const {
        same_place(o);
        if (is_exact_zero() || o.is_exact_zero()) return exact_zero(v_);
        if (zeroish_ || o.zeroish_) {
            // O(pi^A) * pi^v(U + ...) = O(pi^(A+v)); O(pi^A)*O(pi^B) = O(pi^(A+B))
            long a = zeroish_ ? abs_prec_ : val_;
            long b = o.zeroish_ ? o.abs_prec_ : o.val_;
            return LocalElt(v_, clamp(a + b));
        }
        int prec = std::min(prec_, o.prec_);
        Poly mrel = detail::local_prime_pow(v_, prec);
        return LocalElt(v_, val_ + o.val_, unit_ * o.unit_ % mrel, prec);
    }

    LocalElt operator/(const LocalElt& o) const {
        same_place(o);
        if (o.is_exact_zero()) throw std::domain_error("division by zero");
        if (o.zeroish_) throw precision_error("division by a possible zero");
        if (is_exact_zero()) return *this;
        if (zeroish_) return LocalElt(v_, clamp(static_cast<long>(abs_prec_) - o.val_));
        int prec = std::min(prec_, o.prec_);
        Poly mrel = detail::local_prime_pow(v_, prec);
        Poly inv = detail::inverse_mod(o.unit_, mrel);
        return LocalElt(v_, val_ - o.val_, unit_ * inv % mrel, prec);
    }

    // Hensel square root. The valuation must be even and the leading
    // coefficient a residue square; otherwise the element is certifiably a
    // non-square and std::domain_error is thrown. The result S satisfies
    // S^2 == *this to the full relative precision.
    LocalElt sqrt() const {
        if (is_exact_zero()) return *this;
        if (zeroish_) throw precision_error("sqrt of a possible zero");
        if (val_ % 2 != 0)
            throw std::domain_error("sqrt: odd valuation, element is not a square");
        Fq lead = leading_coeff();
        if (!lead.is_square())
            throw std::domain_error("sqrt: leading coefficient is not a residue square");
        const Poly m = detail::local_prime(v_);
        // Residue-level root, then Newton lifting s <- (s + U/s)/2 doubling
        // the congruence level each step (tame case: 2 is a unit).
        Poly s = lead.sqrt().rep();
        Fp half_fp = Fp(v_.characteristic(), 2).inverse();
        int level = 1;
        while (level < prec_) {
            level = std::min(2 * level, prec_);
            Poly mk = m.pow(static_cast<std::uint64_t>(level));
            Poly sinv = detail::inverse_mod(s, mk);
            s = (s + unit_ * sinv % mk) * half_fp % mk;
        }
        return LocalElt(v_, val_ / 2, std::move(s), prec_);
    }

    // True when the element is a square in the completion; exact because
    // parity and the residue character decide it in the tame case.
    bool is_square() const {
        if (is_exact_zero()) return true;
        if (zeroish_) throw precision_error("squareness of a possible zero");
        return val_ % 2 == 0 && unit_is_square();
    }

    std::string to_string() const {
        std::string pi = v_.is_finite() ? "(" + v_.prime().to_string() + ")" : "(1/x)";
        if (is_exact_zero()) return "0";
        if (zeroish_) return "O(" + pi + "^" + std::to_string(abs_prec_) + ")";
        const char* var = v_.is_finite() ? "x" : "1/x";
        return "(" + unit_.to_string(var) + " + O(" + pi + "^" + std::to_string(prec_) +
               ")) * " + pi + "^" + std::to_string(val_);
    }

private:
    LocalElt(const Place& v, int val, Poly unit, int prec)
        : v_(v), zeroish_(false), val_(val), abs_prec_(0), unit_(std::move(unit)), prec_(prec) {}
    LocalElt(const Place& v, int abs_prec)
        : v_(v), zeroish_(true), val_(0), abs_prec_(abs_prec), unit_(Poly::zero(v.characteristic())), prec_(0) {}

    static void check_precision(int n) {
        if (n < 1 || n > 4096) throw std::invalid_argument("precision out of range");
    }

    static int clamp(long v) {
        long lim = std::numeric_limits<int>::max();
        return static_cast<int>(std::min(v, lim));
    }

    static std::pair<Poly, int> strip(const Poly& f, const Poly& m) {
        Poly g = f;
        int k = 0;
        for (;;) {
            auto [q, r] = g.divmod(m);
            if (!r.is_zero()) return {g, k};
            g = q;
            ++k;
        }
    }

    // Cap my absolute precision at abs (after adding a possible zero term).
    LocalElt absorbed(int abs) const {
        if (val_ + prec_ <= abs) return *this;
        if (val_ >= abs) return LocalElt(v_, abs);  // swallowed entirely
        int prec = abs - val_;
        return LocalElt(v_, val_, unit_ % detail::local_prime_pow(v_, prec), prec);
    }

    // Strip uniformizer factors introduced by cancellation.
    static LocalElt renormalized(const Place& v, int val, Poly rep, int abs_prec) {
        const Poly m = detail::local_prime(v);
        while (val < abs_prec) {
            if (rep.is_zero()) return LocalElt(v, abs_prec);
            auto [q, r] = rep.divmod(m);
            if (!r.is_zero()) break;
            rep = std::move(q);
            ++val;
        }
        if (val >= abs_prec) return LocalElt(v, abs_prec);
        return LocalElt(v, val, std::move(rep), abs_prec - val);
    }

    void same_place(const LocalElt& o) const {
        if (v_ != o.v_) throw std::invalid_argument("mixed places in local arithmetic");
    }

    Place v_;
    bool zeroish_;
    int val_;       // meaningful iff !zeroish_
    int abs_prec_;  // meaningful iff zeroish_; INT_MAX encodes exact zero
    Poly unit_;
    int prec_;
};

// ---- square classes -------------------------------------------------------

// F_v^x / (F_v^x)^2 in the tame case: Klein four-group indexed by valuation
// parity and the residue character of the unit part.
struct SquareClassLocal {
    bool odd_val = false;
    bool nonsquare_unit = false;

    bool is_trivial() const { return !odd_val && !nonsquare_unit; }
    bool operator==(const SquareClassLocal& o) const {
        return odd_val == o.odd_val && nonsquare_unit == o.nonsquare_unit;
    }
    bool operator!=(const SquareClassLocal& o) const { return !(*this == o); }

    SquareClassLocal operator*(const SquareClassLocal& o) const {
        return {odd_val != o.odd_val, nonsquare_unit != o.nonsquare_unit};
    }

    // Representative label over {1, u, pi, u*pi}.
    std::string label() const {
        if (!odd_val && !nonsquare_unit) return "1";
        if (!odd_val) return "u";
        if (!nonsquare_unit) return "pi";
        return "u*pi";
    }
};

inline SquareClassLocal square_class_at(const Place& v, const RatFunc& a) {
    if (a.is_zero()) throw std::invalid_argument("square class of zero");
    int val = v.valuation(a);
    RatFunc unit = a;
    if (val != 0) {
        RatFunc pi = v.uniformizer();
        RatFunc scale = RatFunc::one(a.characteristic());
        int k = val > 0 ? val : -val;
        for (int i = 0; i < k; ++i) scale *= pi;
        unit = val > 0 ? a / scale : a * scale;
    }
    return {val % 2 != 0, !v.unit_is_residue_square(unit)};
}

inline SquareClassLocal square_class_of_minus_one(const Place& v) {
    return square_class_at(v, RatFunc::constant(v.characteristic(), -1));
}

// chi_v(-1) = +1 iff the residue field size is 1 mod 4.
inline bool minus_one_is_square(const Place& v) { return v.residue_size() % 4 == 1; }

// ---- Hilbert symbol -------------------------------------------------------

namespace detail {

inline RatFunc ratfunc_pow(const RatFunc& a, int e) {
    RatFunc base = e < 0 ? a.inverse() : a;
    int k = e < 0 ? -e : e;
    RatFunc r = RatFunc::one(a.characteristic());
    for (int i = 0; i < k; ++i) r *= base;
    return r;
}

}  // namespace detail

// Tame explicit formula: (a,b)_v = chi_v( (-1)^(ab valuations) a^beta / b^alpha ).
inline int hilbert_symbol(const Place& v, const RatFunc& a, const RatFunc& b) {
    if (a.is_zero() || b.is_zero()) throw std::invalid_argument("Hilbert symbol needs nonzero arguments");
    int alpha = v.valuation(a);
    int beta = v.valuation(b);
    RatFunc c = detail::ratfunc_pow(a, beta) / detail::ratfunc_pow(b, alpha);
    if ((alpha % 2 != 0) && (beta % 2 != 0)) c = -c;
    return v.unit_is_residue_square(c) ? 1 : -1;
}

// Same symbol computed from square classes alone; agrees with the formula
// above (property-tested). Faster when many symbols share a place.
inline int hilbert_symbol(const Place& v, const SquareClassLocal& a, const SquareClassLocal& b) {
    int sign = 1;
    // (unit, pi-part): chi of the unit enters once per odd valuation.
    if (a.nonsquare_unit && b.odd_val) sign = -sign;
    if (b.nonsquare_unit && a.odd_val) sign = -sign;
    if (a.odd_val && b.odd_val && !minus_one_is_square(v)) sign = -sign;
    return sign;
}

// ---- global square classes ------------------------------------------------

// F^x / (F^x)^2 for F = F_p(x): represented by (unit in {1, c0}, squarefree
// monic polynomial), where c0 is the least non-square of F_p. Finitely many
// classes meet any fixed degree bound, and two elements are equal in the
// group iff their representatives match.
struct SquareClassGlobal {
    Fp unit;         // 1 or the canonical non-square of F_p
    Poly squarefree; // monic squarefree (1 for constant classes)

    bool is_trivial() const { return unit.is_one() && squarefree.is_one(); }
    bool operator==(const SquareClassGlobal& o) const {
        return unit == o.unit && squarefree == o.squarefree;
    }
    bool operator!=(const SquareClassGlobal& o) const { return !(*this == o); }

    std::string to_string() const {
        if (is_trivial()) return "1";
        if (squarefree.is_one()) return unit.to_string();
        if (unit.is_one()) return squarefree.to_string();
        return unit.to_string() + "*(" + squarefree.to_string() + ")";
    }

    RatFunc representative() const { return RatFunc(Poly(unit) * squarefree); }
};

inline SquareClassGlobal global_square_class(const RatFunc& a) {
    if (a.is_zero()) throw std::invalid_argument("square class of zero");
    std::uint64_t p = a.characteristic();
    // a ~ num * den mod squares; split off the leading unit and odd-power primes.
    Poly f = a.num() * a.den();
    Factorization fac = factor(f);
    Poly sqf = Poly::one(p);
    for (const auto& [q, e] : fac.factors)
        if (e % 2 != 0) sqf = sqf * q;
    Fp u = fac.unit.is_square() ? Fp::one(p) : first_nonsquare(p);
    return {u, sqf};
}

inline SquareClassGlobal square_class_product(const SquareClassGlobal& a, const SquareClassGlobal& b) {
    return global_square_class(a.representative() * b.representative());
}

inline bool is_global_square(const RatFunc& a) {
    return !a.is_zero() && global_square_class(a).is_trivial();
}

}  // namespace qlat
