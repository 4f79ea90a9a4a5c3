#pragma once

// Dense univariate polynomials over F_p. Coefficients are stored
// little-endian with no trailing zeros; the zero polynomial has an empty
// coefficient vector and degree() == -1.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "qlat/fp.hpp"

namespace qlat {

class Poly {
public:
    explicit Poly(std::uint64_t p) : p_(p) { check_odd_characteristic(p); }
    explicit Poly(const Fp& c) : p_(c.characteristic()) {
        if (!c.is_zero()) c_.push_back(c.value());
    }

    static Poly zero(std::uint64_t p) { return Poly(p); }
    static Poly one(std::uint64_t p) { return constant(p, 1); }
    static Poly constant(std::uint64_t p, std::int64_t c) { return Poly(Fp(p, c)); }
    static Poly x(std::uint64_t p) { return monomial(p, 1, 1); }

    static Poly monomial(std::uint64_t p, int deg, std::int64_t c) {
        if (deg < 0) throw std::invalid_argument("monomial degree must be >= 0");
        Poly f(p);
        Fp cf(p, c);
        if (!cf.is_zero()) {
            f.c_.assign(static_cast<std::size_t>(deg) + 1, 0);
            f.c_.back() = cf.value();
        }
        return f;
    }

    // coeffs[i] is the coefficient of x^i.
    static Poly from_coeffs(std::uint64_t p, const std::vector<std::int64_t>& coeffs) {
        Poly f(p);
        f.c_.reserve(coeffs.size());
        for (std::int64_t c : coeffs) f.c_.push_back(Fp(p, c).value());
        f.normalize();
        return f;
    }

    std::uint64_t characteristic() const { return p_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
    bool is_zero() const { return c_.empty(); }
    bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
    bool is_constant() const { return c_.size() <= 1; }
    bool is_monic() const { return !c_.empty() && c_.back() == 1; }

    Fp coeff(int i) const {
        if (i < 0 || static_cast<std::size_t>(i) >= c_.size()) return Fp::zero(p_);
        return Fp(p_, static_cast<std::int64_t>(c_[static_cast<std::size_t>(i)]));
    }
    Fp leading_coeff() const {
        if (c_.empty()) throw std::domain_error("leading coefficient of zero polynomial");
        return Fp(p_, static_cast<std::int64_t>(c_.back()));
    }
    Fp constant_coeff() const { return coeff(0); }

    Poly zero_like() const { return Poly(p_); }
    Poly one_like() const { return one(p_); }

    bool operator==(const Poly& o) const { return p_ == o.p_ && c_ == o.c_; }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    Poly operator-() const {
        Poly r(*this);
        for (auto& c : r.c_)
            if (c != 0) c = p_ - c;
        return r;
    }

    Poly operator+(const Poly& o) const {
        same_field(o);
        Poly r(p_);
        r.c_.resize(std::max(c_.size(), o.c_.size()), 0);
        for (std::size_t i = 0; i < r.c_.size(); ++i) {
            std::uint64_t s = (i < c_.size() ? c_[i] : 0) + (i < o.c_.size() ? o.c_[i] : 0);
            if (s >= p_) s -= p_;
            r.c_[i] = s;
        }
        r.normalize();
        return r;
    }
    Poly operator-(const Poly& o) const { return *this + (-o); }

    Poly operator*(const Poly& o) const {
        same_field(o);
        if (is_zero() || o.is_zero()) return Poly(p_);
        Poly r(p_);
        r.c_.assign(c_.size() + o.c_.size() - 1, 0);
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == 0) continue;
            for (std::size_t j = 0; j < o.c_.size(); ++j)
                r.c_[i + j] = (r.c_[i + j] + c_[i] * o.c_[j]) % p_;
        }
        r.normalize();
        return r;
    }

    Poly operator*(const Fp& s) const {
        if (s.characteristic() != p_) throw std::invalid_argument("mixed characteristics");
        Poly r(p_);
        if (s.is_zero() || is_zero()) return r;
        r.c_.resize(c_.size());
        for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] * s.value() % p_;
        r.normalize();
        return r;
    }

    Poly& operator+=(const Poly& o) { return *this = *this + o; }
    Poly& operator-=(const Poly& o) { return *this = *this - o; }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    // Euclidean division: *this = q * d + r with deg r < deg d.
    std::pair<Poly, Poly> divmod(const Poly& d) const {
        same_field(d);
        if (d.is_zero()) throw std::domain_error("polynomial division by zero");
        Poly q(p_), r(*this);
        if (r.degree() < d.degree()) return {q, r};
        q.c_.assign(static_cast<std::size_t>(r.degree() - d.degree()) + 1, 0);
        Fp dlc_inv = d.leading_coeff().inverse();
        while (!r.is_zero() && r.degree() >= d.degree()) {
            int shift = r.degree() - d.degree();
            std::uint64_t f = r.c_.back() * dlc_inv.value() % p_;
            q.c_[static_cast<std::size_t>(shift)] = f;
            // r -= f * x^shift * d
            for (std::size_t i = 0; i < d.c_.size(); ++i) {
                std::uint64_t sub = f * d.c_[i] % p_;
                std::uint64_t& tgt = r.c_[i + static_cast<std::size_t>(shift)];
                tgt = (tgt + p_ - sub) % p_;
            }
            r.normalize();
        }
        q.normalize();
        return {q, r};
    }

    Poly operator/(const Poly& d) const {
        auto [q, r] = divmod(d);
        if (!r.is_zero()) throw std::domain_error("inexact polynomial division");
        return q;
    }
    Poly operator%(const Poly& d) const { return divmod(d).second; }

    bool divides(const Poly& f) const { return f.divmod(*this).second.is_zero(); }

    Fp eval(const Fp& s) const {
        Fp acc = Fp::zero(p_);
        for (std::size_t i = c_.size(); i-- > 0;)
            acc = acc * s + Fp(p_, static_cast<std::int64_t>(c_[i]));
        return acc;
    }

    Poly derivative() const {
        Poly r(p_);
        if (c_.size() <= 1) return r;
        r.c_.resize(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) r.c_[i - 1] = c_[i] * (i % p_) % p_;
        r.normalize();
        return r;
    }

    Poly monic() const {
        if (is_zero()) throw std::domain_error("monic normalization of zero polynomial");
        return *this * leading_coeff().inverse();
    }

    // Coefficient reversal: x^deg * f(1/x). Used for expansions at the
    // infinite place.
    Poly reverse() const {
        Poly r(*this);
        std::reverse(r.c_.begin(), r.c_.end());
        r.normalize();
        return r;
    }

    Poly shifted(int k) const {  // multiply by x^k, k >= 0
        if (k < 0) throw std::invalid_argument("negative shift");
        if (is_zero()) return *this;
        Poly r(p_);
        r.c_.assign(c_.size() + static_cast<std::size_t>(k), 0);
        std::copy(c_.begin(), c_.end(), r.c_.begin() + k);
        return r;
    }

    Poly pow(std::uint64_t e) const {
        Poly acc = one(p_), base = *this;
        while (e > 0) {
            if (e & 1) acc = acc * base;
            base = base * base;
            e >>= 1;
        }
        return acc;
    }

    Poly powmod(std::uint64_t e, const Poly& m) const {
        Poly acc = one(p_) % m, base = *this % m;
        while (e > 0) {
            if (e & 1) acc = acc * base % m;
            base = base * base % m;
            e >>= 1;
        }
        return acc;
    }

    // Canonical order: by degree, then by coefficients from the leading
    // one down. Deterministic reports depend on this.
    static bool canonical_less(const Poly& a, const Poly& b) {
        if (a.degree() != b.degree()) return a.degree() < b.degree();
        for (std::size_t i = a.c_.size(); i-- > 0;)
            if (a.c_[i] != b.c_[i]) return a.c_[i] < b.c_[i];
        return false;
    }

    const std::vector<std::uint64_t>& coeffs() const { return c_; }

    std::string to_string(const char* var = "x") const {
        if (is_zero()) return "0";
        std::string s;
        for (std::size_t i = c_.size(); i-- > 0;) {
            if (c_[i] == 0) continue;
            if (!s.empty()) s += "+";
            if (i == 0) {
                s += std::to_string(c_[i]);
            } else {
                if (c_[i] != 1) {
                    s += std::to_string(c_[i]);
                    s += "*";
                }
                s += var;
                if (i > 1) {
                    s += "^";
                    s += std::to_string(i);
                }
            }
        }
        return s;
    }

private:
    void normalize() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    void same_field(const Poly& o) const {
        if (p_ != o.p_) throw std::invalid_argument("mixed characteristics in polynomial arithmetic");
    }

    std::uint64_t p_;
    std::vector<std::uint64_t> c_;
};

inline Poly gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
        Poly r = a % b;
        a = b;
        b = r;
    }
    return a.is_zero() ? a : a.monic();
}

// Extended Euclid: returns (g, s, t) with s*a + t*b = g, g monic (or zero).
inline std::tuple<Poly, Poly, Poly> xgcd(const Poly& a, const Poly& b) {
    std::uint64_t p = a.characteristic();
    Poly r0 = a, r1 = b;
    Poly s0 = Poly::one(p), s1 = Poly::zero(p);
    Poly t0 = Poly::zero(p), t1 = Poly::one(p);
    while (!r1.is_zero()) {
        auto [q, r2] = r0.divmod(r1);
        r0 = r1; r1 = r2;
        Poly s2 = s0 - q * s1, t2 = t0 - q * t1;
        s0 = s1; s1 = s2;
        t0 = t1; t1 = t2;
    }
    if (r0.is_zero()) return {r0, s0, t0};
    Fp lc_inv = r0.leading_coeff().inverse();
    return {r0 * lc_inv, s0 * lc_inv, t0 * lc_inv};
}

// All polynomials of degree <= bound in canonical order (zero first).
inline std::vector<Poly> polys_up_to_degree(std::uint64_t p, int bound) {
    std::vector<Poly> out;
    out.push_back(Poly::zero(p));
    for (int d = 0; d <= bound; ++d) {
        std::vector<std::int64_t> coeffs(static_cast<std::size_t>(d) + 1, 0);
        // leading coefficient 1..p-1, lower coefficients 0..p-1, counted so
        // that higher-power coefficients are more significant.
        std::vector<std::uint64_t> digits(static_cast<std::size_t>(d) + 1, 0);
        digits[static_cast<std::size_t>(d)] = 1;
        while (true) {
            for (int i = 0; i <= d; ++i) coeffs[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(digits[static_cast<std::size_t>(i)]);
            out.push_back(Poly::from_coeffs(p, coeffs));
            // increment: constant coefficient least significant
            int i = 0;
            for (; i <= d; ++i) {
                if (digits[static_cast<std::size_t>(i)] + 1 < p) {
                    ++digits[static_cast<std::size_t>(i)];
                    break;
                }
                digits[static_cast<std::size_t>(i)] = (i == d) ? 1 : 0;
                if (i == d) { i = d + 1; break; }
            }
            if (i > d) break;
        }
    }
    return out;
}

// All monic polynomials of exact degree d in canonical order.
inline std::vector<Poly> monic_polys_of_degree(std::uint64_t p, int d) {
    std::vector<Poly> out;
    if (d < 0) return out;
    std::vector<std::uint64_t> digits(static_cast<std::size_t>(d), 0);
    std::vector<std::int64_t> coeffs(static_cast<std::size_t>(d) + 1, 0);
    coeffs[static_cast<std::size_t>(d)] = 1;
    while (true) {
        for (int i = 0; i < d; ++i) coeffs[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(digits[static_cast<std::size_t>(i)]);
        out.push_back(Poly::from_coeffs(p, coeffs));
        int i = 0;
        for (; i < d; ++i) {
            if (digits[static_cast<std::size_t>(i)] + 1 < p) {
                ++digits[static_cast<std::size_t>(i)];
                break;
            }
            digits[static_cast<std::size_t>(i)] = 0;
        }
        if (i == d) break;
    }
    std::sort(out.begin(), out.end(), Poly::canonical_less);
    return out;
}

}  // namespace qlat
