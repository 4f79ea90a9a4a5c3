#pragma once

// Places of the rational function field F_p(x): one for each monic
// irreducible polynomial, plus the degree-one place at infinity where the
// valuation of a polynomial is minus its degree.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qlat/factor.hpp"
#include "qlat/fq.hpp"
#include "qlat/poly.hpp"
#include "qlat/ratfunc.hpp"

namespace qlat {

class Place {
public:
    static Place finite(const Poly& prime) {
        if (!prime.is_monic() || !is_irreducible(prime))
            throw std::invalid_argument("finite place needs a monic irreducible polynomial");
        return Place(prime);
    }

    static Place infinite(std::uint64_t p) {
        check_odd_characteristic(p);
        return Place(p);
    }

    std::uint64_t characteristic() const { return p_; }
    bool is_infinite() const { return !prime_.has_value(); }
    bool is_finite() const { return prime_.has_value(); }

    const Poly& prime() const {
        if (!prime_) throw std::domain_error("infinite place has no prime polynomial");
        return *prime_;
    }

    int degree() const { return prime_ ? prime_->degree() : 1; }
    std::uint64_t residue_size() const { return residue_->q(); }
    const FqCtxPtr& residue_field() const { return residue_; }

    RatFunc uniformizer() const {
        if (prime_) return RatFunc(*prime_);
        return RatFunc(Poly::one(p_), Poly::x(p_));
    }

    int valuation(const Poly& f) const {
        if (f.is_zero()) throw std::domain_error("valuation of zero");
        if (!prime_) return -f.degree();
        int v = 0;
        Poly g = f;
        for (;;) {
            auto [q, r] = g.divmod(*prime_);
            if (!r.is_zero()) return v;
            g = q;
            ++v;
        }
    }

    int valuation(const RatFunc& a) const {
        if (a.is_zero()) throw std::domain_error("valuation of zero");
        return valuation(a.num()) - valuation(a.den());
    }

    // Image of a valuation-zero element in the residue field.
    Fq residue_of_unit(const RatFunc& a) const {
        if (valuation(a) != 0) throw std::invalid_argument("element is not a unit at this place");
        if (!prime_)
            return residue_->from_fp(a.num().leading_coeff() / a.den().leading_coeff());
        return residue_->element(a.num()) / residue_->element(a.den());
    }

    // Quadratic character of the residue class of a unit.
    bool unit_is_residue_square(const RatFunc& a) const { return residue_of_unit(a).is_square(); }

    bool operator==(const Place& o) const {
        if (p_ != o.p_) return false;
        if (is_infinite() != o.is_infinite()) return false;
        return is_infinite() || *prime_ == *o.prime_;
    }
    bool operator!=(const Place& o) const { return !(*this == o); }

    // Infinite place first, then finite places by canonical polynomial order.
    static bool canonical_less(const Place& a, const Place& b) {
        if (a.is_infinite() != b.is_infinite()) return a.is_infinite();
        if (a.is_infinite()) return false;
        return Poly::canonical_less(*a.prime_, *b.prime_);
    }

    std::string to_string() const { return prime_ ? prime_->to_string() : "oo"; }

private:
    explicit Place(const Poly& prime)
        : p_(prime.characteristic()), prime_(prime), residue_(FqCtx::make(prime)) {}
    explicit Place(std::uint64_t p)
        : p_(p), prime_(std::nullopt), residue_(FqCtx::make(Poly::x(p))) {}

    std::uint64_t p_;
    std::optional<Poly> prime_;
    FqCtxPtr residue_;
};

// The infinite place followed by all finite places of degree <= max_degree,
// in canonical order.
inline std::vector<Place> places_up_to(std::uint64_t p, int max_degree) {
    std::vector<Place> out;
    out.push_back(Place::infinite(p));
    for (int d = 1; d <= max_degree; ++d)
        for (const Poly& f : irreducibles_of_degree(p, d)) out.push_back(Place::finite(f));
    return out;
}

// Finite places in the support of a nonzero rational function, plus
// (always) the infinite place: outside this set the function is a unit.
inline std::vector<Place> support_with_infinity(const RatFunc& a) {
    if (a.is_zero()) throw std::invalid_argument("support of zero");
    std::vector<Place> out;
    out.push_back(Place::infinite(a.characteristic()));
    std::vector<Poly> primes;
    for (const auto& [q, e] : factor(a.num()).factors) {
        (void)e;
        primes.push_back(q);
    }
    if (!a.den().is_one())
        for (const auto& [q, e] : factor(a.den()).factors) {
            (void)e;
            primes.push_back(q);
        }
    std::sort(primes.begin(), primes.end(), Poly::canonical_less);
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
    for (const Poly& q : primes) out.push_back(Place::finite(q));
    return out;
}

}  // namespace qlat
