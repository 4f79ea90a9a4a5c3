#pragma once

// Factorization of univariate polynomials over F_p: squarefree handling
// (including p-th powers), distinct-degree splitting, and Cantor–Zassenhaus
// equal-degree splitting. The splitting elements are drawn from a fixed-seed
// generator so every run factors identically.

#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qlat/poly.hpp"

namespace qlat {

namespace detail {

// f = h^p with coefficients in F_p, so h is read off every p-th coefficient.
inline Poly pth_root(const Poly& f) {
    std::uint64_t p = f.characteristic();
    if (f.degree() % static_cast<int>(p) != 0)
        throw std::invalid_argument("not a p-th power");
    std::vector<std::int64_t> out(static_cast<std::size_t>(f.degree() / static_cast<int>(p)) + 1);
    for (std::size_t j = 0; j < out.size(); ++j) {
        out[j] = static_cast<std::int64_t>(f.coeff(static_cast<int>(j * p)).value());
        for (std::uint64_t r = 1; r < p; ++r)
            if (!f.coeff(static_cast<int>(j * p + r)).is_zero() && j * p + r <= static_cast<std::size_t>(f.degree()))
                throw std::invalid_argument("not a p-th power");
    }
    return Poly::from_coeffs(p, out);
}

// T = h * h^p * ... * h^(p^(d-1)) mod g. Raising to (p-1)/2 afterwards gives
// the quadratic character in each residue component without ever forming the
// exponent (p^d - 1)/2, which could overflow.
inline Poly frobenius_norm(const Poly& h, int d, const Poly& g) {
    Poly acc = h % g;
    Poly cur = h % g;
    for (int i = 1; i < d; ++i) {
        cur = cur.powmod(h.characteristic(), g);
        acc = acc * cur % g;
    }
    return acc;
}

// Equal-degree splitting: g is squarefree, monic, and a product of
// irreducibles all of degree d.
inline void edf(const Poly& g, int d, std::mt19937_64& rng, std::vector<Poly>& out) {
    if (g.degree() == d) {
        out.push_back(g);
        return;
    }
    std::uint64_t p = g.characteristic();
    std::uniform_int_distribution<std::uint64_t> coin(0, p - 1);
    for (;;) {
        std::vector<std::int64_t> coeffs(static_cast<std::size_t>(g.degree()));
        for (auto& c : coeffs) c = static_cast<std::int64_t>(coin(rng));
        Poly h = Poly::from_coeffs(p, coeffs);
        if (h.is_zero()) continue;
        Poly t = frobenius_norm(h, d, g);
        Poly u = t.powmod((p - 1) / 2, g);
        Poly split = gcd(u - Poly::one(p), g);
        if (!split.is_constant() && split.degree() < g.degree()) {
            edf(split, d, rng, out);
            edf(g / split, d, rng, out);
            return;
        }
    }
}

// Distinct-degree splitting of a squarefree monic polynomial.
inline void ddf(Poly w, std::mt19937_64& rng, std::vector<Poly>& out) {
    std::uint64_t p = w.characteristic();
    Poly h = Poly::x(p) % w;
    int d = 0;
    while (w.degree() > 0 && w.degree() >= 2 * (d + 1)) {
        ++d;
        h = h.powmod(p, w);
        Poly g = gcd(h - Poly::x(p), w);
        if (!g.is_constant()) {
            edf(g, d, rng, out);
            w = w / g;
            h = h % w;
        }
    }
    if (w.degree() > 0) out.push_back(w);
}

inline void factor_monic(Poly f, std::mt19937_64& rng, std::map<Poly, int, bool (*)(const Poly&, const Poly&)>& acc,
                         int mult_scale) {
    std::uint64_t p = f.characteristic();
    while (f.degree() > 0) {
        if (f.derivative().is_zero()) {
            factor_monic(pth_root(f), rng, acc, mult_scale * static_cast<int>(p));
            return;
        }
        Poly w = f / gcd(f, f.derivative());
        std::vector<Poly> irr;
        ddf(w, rng, irr);
        for (const Poly& q : irr) {
            int e = 0;
            while (q.divides(f)) {
                f = f / q;
                ++e;
            }
            acc[q] += e * mult_scale;
        }
        // Whatever remains has every multiplicity divisible by p.
    }
}

}  // namespace detail

struct Factorization {
    Fp unit;                                // leading coefficient
    std::vector<std::pair<Poly, int>> factors;  // monic irreducibles, canonical order

    Poly product() const {
        Poly f = Poly(unit);
        for (const auto& [q, e] : factors)
            for (int i = 0; i < e; ++i) f = f * q;
        return f;
    }
};

inline Factorization factor(const Poly& f) {
    if (f.is_zero()) throw std::invalid_argument("cannot factor the zero polynomial");
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
    std::map<Poly, int, bool (*)(const Poly&, const Poly&)> acc(&Poly::canonical_less);
    detail::factor_monic(f.monic(), rng, acc, 1);
    Factorization out{f.leading_coeff(), {}};
    for (const auto& [q, e] : acc) out.factors.emplace_back(q, e);
    return out;
}

inline bool is_irreducible(const Poly& f) {
    int n = f.degree();
    if (n <= 0) return false;
    if (n == 1) return true;
    std::uint64_t p = f.characteristic();
    // x^(p^n) == x mod f, and gcd(x^(p^(n/r)) - x, f) == 1 for primes r | n.
    Poly h = Poly::x(p) % f;
    std::vector<Poly> frob;  // frob[i] = x^(p^(i+1)) mod f
    for (int i = 0; i < n; ++i) {
        h = h.powmod(p, f);
        frob.push_back(h);
    }
    if (frob[static_cast<std::size_t>(n - 1)] != Poly::x(p) % f) return false;
    for (int r = 2; r <= n; ++r) {
        if (n % r != 0) continue;
        bool r_prime = true;
        for (int s = 2; s * s <= r; ++s)
            if (r % s == 0) { r_prime = false; break; }
        if (!r_prime) continue;
        if (!gcd(frob[static_cast<std::size_t>(n / r - 1)] - Poly::x(p), f).is_constant()) return false;
    }
    return true;
}

// f is a perfect square in F_p[x] iff every multiplicity is even and the
// leading coefficient is a square in F_p. Returns the monic part's root
// availability via the bool; sqrt rebuilds an actual square root.
inline bool is_poly_square(const Poly& f) {
    if (f.is_zero()) return true;
    if (!f.leading_coeff().is_square()) return false;
    if (f.degree() % 2 != 0) return false;
    Factorization fac = factor(f);
    for (const auto& [q, e] : fac.factors) {
        (void)q;
        if (e % 2 != 0) return false;
    }
    return true;
}

inline Poly poly_sqrt(const Poly& f) {
    if (f.is_zero()) return f;
    Factorization fac = factor(f);
    if (!fac.unit.is_square() || f.degree() % 2 != 0)
        throw std::domain_error("polynomial is not a perfect square");
    Poly r(fac.unit.sqrt());
    for (const auto& [q, e] : fac.factors) {
        if (e % 2 != 0) throw std::domain_error("polynomial is not a perfect square");
        for (int i = 0; i < e / 2; ++i) r = r * q;
    }
    return r;
}

// Largest squarefree divisor (monic).
inline Poly squarefree_part(const Poly& f) {
    Factorization fac = factor(f);
    Poly r = Poly::one(f.characteristic());
    for (const auto& [q, e] : fac.factors) {
        (void)e;
        r = r * q;
    }
    return r;
}

// Monic irreducibles of exact degree d, canonical order.
inline std::vector<Poly> irreducibles_of_degree(std::uint64_t p, int d) {
    std::vector<Poly> out;
    for (const Poly& f : monic_polys_of_degree(p, d))
        if (is_irreducible(f)) out.push_back(f);
    return out;
}

}  // namespace qlat
