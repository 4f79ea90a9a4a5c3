#pragma once

// Rational functions F_p(x), kept in lowest terms with a monic denominator.
// This is the ambient field of every quadratic space in the library; keeping
// representatives canonical makes equality a plain comparison.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

#include "qlat/poly.hpp"

namespace qlat {

class RatFunc {
public:
    explicit RatFunc(std::uint64_t p) : num_(Poly::zero(p)), den_(Poly::one(p)) {}
    explicit RatFunc(Poly num) : num_(std::move(num)), den_(Poly::one(num_.characteristic())) {}
    RatFunc(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) { reduce(); }

    static RatFunc zero(std::uint64_t p) { return RatFunc(p); }
    static RatFunc one(std::uint64_t p) { return RatFunc(Poly::one(p)); }
    static RatFunc constant(std::uint64_t p, std::int64_t c) { return RatFunc(Poly::constant(p, c)); }

    std::uint64_t characteristic() const { return num_.characteristic(); }
    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_.is_one() && den_.is_one(); }
    bool is_polynomial() const { return den_.is_one(); }
    bool is_constant() const { return num_.is_constant() && den_.is_one(); }

    const Poly& as_polynomial() const {
        if (!den_.is_one()) throw std::domain_error("rational function is not integral");
        return num_;
    }

    RatFunc zero_like() const { return zero(characteristic()); }
    RatFunc one_like() const { return one(characteristic()); }

    bool operator==(const RatFunc& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const RatFunc& o) const { return !(*this == o); }

    RatFunc operator-() const { return RatFunc(-num_, den_, reduced_tag{}); }

    RatFunc operator+(const RatFunc& o) const {
        return RatFunc(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
    }
    RatFunc operator-(const RatFunc& o) const { return *this + (-o); }
    RatFunc operator*(const RatFunc& o) const { return RatFunc(num_ * o.num_, den_ * o.den_); }
    RatFunc operator/(const RatFunc& o) const { return *this * o.inverse(); }

    RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
    RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
    RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
    RatFunc& operator/=(const RatFunc& o) { return *this = *this / o; }

    RatFunc inverse() const {
        if (is_zero()) throw std::domain_error("inverse of zero rational function");
        return RatFunc(den_, num_);
    }

    RatFunc square() const { return *this * *this; }

    std::string to_string(const char* var = "x") const {
        if (den_.is_one()) return num_.to_string(var);
        std::string n = num_.to_string(var);
        if (num_.degree() > 0 && num_.coeffs().size() > 1) n = "(" + n + ")";
        return n + "/(" + den_.to_string(var) + ")";
    }

private:
    struct reduced_tag {};
    RatFunc(Poly num, Poly den, reduced_tag) : num_(std::move(num)), den_(std::move(den)) {}

    void reduce() {
        if (den_.is_zero()) throw std::domain_error("zero denominator");
        if (num_.is_zero()) {
            den_ = Poly::one(characteristic());
            return;
        }
        Poly g = gcd(num_, den_);
        if (!g.is_one()) {
            num_ = num_ / g;
            den_ = den_ / g;
        }
        Fp lc = den_.leading_coeff();
        if (!lc.is_one()) {
            Fp inv = lc.inverse();
            num_ = num_ * inv;
            den_ = den_ * inv;
        }
    }

    Poly num_;
    Poly den_;
};

}  // namespace qlat
