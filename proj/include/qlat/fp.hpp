#pragma once

// Prime field arithmetic for F_p, p an odd prime. Elements carry their
// modulus so values from different fields cannot be mixed silently.

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qlat {

// The theory implemented here needs residue characteristic != 2 everywhere;
// a dyadic base would invalidate every local criterion used downstream, so
// p = 2 is rejected outright.
inline void check_odd_characteristic(std::uint64_t p) {
    if (p < 3 || p % 2 == 0)
        throw std::invalid_argument("characteristic must be an odd prime, got " + std::to_string(p));
    if (p >= (std::uint64_t{1} << 31))
        throw std::invalid_argument("characteristic too large: " + std::to_string(p));
}

// Trial division; called once per domain entry point (CLI, config parsing),
// not per element.
inline bool is_odd_prime(std::uint64_t p) {
    if (p < 3 || p % 2 == 0) return false;
    for (std::uint64_t d = 3; d * d <= p; d += 2)
        if (p % d == 0) return false;
    return true;
}

inline std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t acc = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) acc = acc * base % m;
        base = base * base % m;
        exp >>= 1;
    }
    return acc;
}

class Fp {
public:
    Fp(std::uint64_t p, std::int64_t value) : p_(p) {
        check_odd_characteristic(p);
        std::int64_t r = value % static_cast<std::int64_t>(p);
        if (r < 0) r += static_cast<std::int64_t>(p);
        v_ = static_cast<std::uint64_t>(r);
    }

    static Fp zero(std::uint64_t p) { return Fp(p, 0); }
    static Fp one(std::uint64_t p) { return Fp(p, 1); }

    std::uint64_t characteristic() const { return p_; }
    std::uint64_t value() const { return v_; }
    bool is_zero() const { return v_ == 0; }
    bool is_one() const { return v_ == 1; }

    Fp zero() const { return Fp(raw{}, p_, 0); }
    Fp one() const { return Fp(raw{}, p_, 1); }
    Fp zero_like() const { return zero(); }
    Fp one_like() const { return one(); }

    Fp operator-() const { return Fp(raw{}, p_, v_ == 0 ? 0 : p_ - v_); }

    Fp operator+(const Fp& o) const {
        same_field(o);
        std::uint64_t s = v_ + o.v_;
        if (s >= p_) s -= p_;
        return Fp(raw{}, p_, s);
    }
    Fp operator-(const Fp& o) const { return *this + (-o); }
    Fp operator*(const Fp& o) const {
        same_field(o);
        return Fp(raw{}, p_, v_ * o.v_ % p_);
    }
    Fp operator/(const Fp& o) const { return *this * o.inverse(); }

    Fp& operator+=(const Fp& o) { return *this = *this + o; }
    Fp& operator-=(const Fp& o) { return *this = *this - o; }
    Fp& operator*=(const Fp& o) { return *this = *this * o; }
    Fp& operator/=(const Fp& o) { return *this = *this / o; }

    bool operator==(const Fp& o) const { return p_ == o.p_ && v_ == o.v_; }
    bool operator!=(const Fp& o) const { return !(*this == o); }

    Fp inverse() const {
        if (v_ == 0) throw std::domain_error("inverse of zero in F_p");
        return pow(p_ - 2);
    }

    Fp pow(std::uint64_t e) const { return Fp(raw{}, p_, mod_pow(v_, e, p_)); }

    // Euler criterion a^((p-1)/2); zero counts as a square.
    bool is_square() const { return v_ == 0 || mod_pow(v_, (p_ - 1) / 2, p_) == 1; }

    // Tonelli–Shanks; the returned root is the smaller of the pair.
    Fp sqrt() const {
        if (v_ == 0) return *this;
        if (!is_square()) throw std::domain_error("sqrt of non-square in F_p");
        std::uint64_t r;
        if (p_ % 4 == 3) {
            r = mod_pow(v_, (p_ + 1) / 4, p_);
        } else {
            std::uint64_t t = p_ - 1;
            int s = 0;
            while ((t & 1) == 0) { t >>= 1; ++s; }
            std::uint64_t z = 2;
            while (mod_pow(z, (p_ - 1) / 2, p_) == 1) ++z;
            std::uint64_t c = mod_pow(z, t, p_);
            r = mod_pow(v_, (t + 1) / 2, p_);
            std::uint64_t u = mod_pow(v_, t, p_);
            int m = s;
            while (u != 1) {
                int i = 0;
                std::uint64_t v = u;
                while (v != 1) { v = v * v % p_; ++i; }
                std::uint64_t b = c;
                for (int j = 0; j < m - i - 1; ++j) b = b * b % p_;
                r = r * b % p_;
                c = b * b % p_;
                u = u * c % p_;
                m = i;
            }
        }
        if (p_ - r < r) r = p_ - r;
        return Fp(raw{}, p_, r);
    }

    std::string to_string() const { return std::to_string(v_); }

private:
    struct raw {};
    Fp(raw, std::uint64_t p, std::uint64_t v) : p_(p), v_(v) {}

    void same_field(const Fp& o) const {
        if (p_ != o.p_) throw std::invalid_argument("mixed characteristics in F_p arithmetic");
    }

    std::uint64_t p_;
    std::uint64_t v_;
};

// The smallest non-square of F_p (canonical order 0,1,...,p-1).
inline Fp first_nonsquare(std::uint64_t p) {
    for (std::uint64_t a = 2; a < p; ++a) {
        Fp e(p, static_cast<std::int64_t>(a));
        if (!e.is_square()) return e;
    }
    throw std::logic_error("no non-square found; modulus not an odd prime?");
}

}  // namespace qlat
