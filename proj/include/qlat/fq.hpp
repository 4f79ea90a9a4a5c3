#pragma once

// Finite extension fields F_q, q = p^d, realized as F_p[x]/(m) for a monic
// irreducible modulus m. These serve as residue fields of the finite places
// of F_p(x); the residue field at the infinite place is F_p itself (d = 1).

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "qlat/fp.hpp"
#include "qlat/poly.hpp"

namespace qlat {

class FqCtx;
using FqCtxPtr = std::shared_ptr<const FqCtx>;

class Fq {
public:
    Fq(FqCtxPtr ctx, Poly rep);

    const FqCtxPtr& ctx() const { return ctx_; }
    const Poly& rep() const { return rep_; }
    bool is_zero() const { return rep_.is_zero(); }
    bool is_one() const { return rep_.is_one(); }
    Fq zero_like() const { return Fq(ctx_, rep_.zero_like()); }
    Fq one_like() const { return Fq(ctx_, rep_.one_like()); }

    bool operator==(const Fq& o) const;
    bool operator!=(const Fq& o) const { return !(*this == o); }

    Fq operator-() const;
    Fq operator+(const Fq& o) const;
    Fq operator-(const Fq& o) const;
    Fq operator*(const Fq& o) const;
    Fq operator/(const Fq& o) const;
    Fq inverse() const;
    Fq pow(std::uint64_t e) const;

    bool is_square() const;   // zero counts as a square
    Fq sqrt() const;          // throws std::domain_error on non-squares

    std::string to_string() const { return rep_.to_string("z"); }

private:
    FqCtxPtr ctx_;
    Poly rep_;
};

class FqCtx : public std::enable_shared_from_this<FqCtx> {
public:
    // Builds F_p[x]/(modulus); the caller vouches for irreducibility (the
    // factorization module checks when constructing residue fields).
    static FqCtxPtr make(const Poly& modulus) {
        if (modulus.degree() < 1 || !modulus.is_monic())
            throw std::invalid_argument("field modulus must be monic of degree >= 1");
        return FqCtxPtr(new FqCtx(modulus));
    }

    std::uint64_t p() const { return p_; }
    int degree() const { return modulus_.degree(); }
    std::uint64_t q() const { return q_; }
    const Poly& modulus() const { return modulus_; }

    Fq element(const Poly& rep) const { return Fq(shared_from_this(), rep % modulus_); }
    Fq from_fp(const Fp& c) const {
        if (c.characteristic() != p_) throw std::invalid_argument("mixed characteristics");
        return Fq(shared_from_this(), Poly(c));
    }
    Fq zero() const { return element(Poly::zero(p_)); }
    Fq one() const { return element(Poly::one(p_)); }
    Fq gen() const { return element(Poly::x(p_)); }

    // All q elements, in canonical order of their representatives.
    std::vector<Fq> all_elements() const {
        std::vector<Fq> out;
        out.reserve(q_);
        for (const Poly& f : polys_up_to_degree(p_, degree() - 1)) out.push_back(element(f));
        return out;
    }

    // Smallest non-square in canonical representative order.
    Fq first_nonsquare() const {
        for (const Fq& a : all_elements())
            if (!a.is_zero() && !a.is_square()) return a;
        throw std::domain_error("no non-square found");  // unreachable for odd q
    }

private:
    explicit FqCtx(const Poly& modulus)
        : p_(modulus.characteristic()), modulus_(modulus), q_(1) {
        for (int i = 0; i < modulus.degree(); ++i) {
            if (q_ > (std::uint64_t(1) << 40))
                throw std::invalid_argument("residue field too large");
            q_ *= p_;
        }
    }

    std::uint64_t p_;
    Poly modulus_;
    std::uint64_t q_;
};

inline Fq::Fq(FqCtxPtr ctx, Poly rep) : ctx_(std::move(ctx)), rep_(std::move(rep)) {
    if (rep_.degree() >= ctx_->degree()) rep_ = rep_ % ctx_->modulus();
}

inline bool Fq::operator==(const Fq& o) const {
    return ctx_->modulus() == o.ctx_->modulus() && rep_ == o.rep_;
}

inline Fq Fq::operator-() const { return Fq(ctx_, -rep_); }
inline Fq Fq::operator+(const Fq& o) const { return Fq(ctx_, rep_ + o.rep_); }
inline Fq Fq::operator-(const Fq& o) const { return Fq(ctx_, rep_ - o.rep_); }
inline Fq Fq::operator*(const Fq& o) const { return Fq(ctx_, rep_ * o.rep_ % ctx_->modulus()); }
inline Fq Fq::operator/(const Fq& o) const { return *this * o.inverse(); }

inline Fq Fq::inverse() const {
    if (is_zero()) throw std::domain_error("inverse of zero");
    auto [g, s, t] = xgcd(rep_, ctx_->modulus());
    (void)t;
    if (!g.is_one()) throw std::domain_error("element not invertible (reducible modulus?)");
    return Fq(ctx_, s % ctx_->modulus());
}

inline Fq Fq::pow(std::uint64_t e) const { return Fq(ctx_, rep_.powmod(e, ctx_->modulus())); }

inline bool Fq::is_square() const {
    if (is_zero()) return true;
    return pow((ctx_->q() - 1) / 2).is_one();  // Euler criterion, q odd
}

// Tonelli–Shanks in F_q (q odd). Deterministic: the non-residue needed by
// the algorithm is located by scanning representatives in canonical order.
inline Fq Fq::sqrt() const {
    if (is_zero()) return *this;
    if (!is_square()) throw std::domain_error("sqrt of non-square");
    std::uint64_t q = ctx_->q();
    // q = 2^s * t + 1 with t odd
    std::uint64_t t = q - 1;
    int s = 0;
    while ((t & 1) == 0) { t >>= 1; ++s; }
    if (s == 1) return pow((q + 1) / 4);  // q = 3 mod 4
    Fq z = ctx_->first_nonsquare();
    Fq c = z.pow(t);
    Fq r = pow((t + 1) / 2);
    Fq u = pow(t);
    int m = s;
    while (!u.is_one()) {
        int i = 0;
        Fq v = u;
        while (!v.is_one()) { v = v * v; ++i; }
        if (i == m) throw std::domain_error("sqrt of non-square");  // defensive
        Fq b = c;
        for (int j = 0; j < m - i - 1; ++j) b = b * b;
        r = r * b;
        c = b * b;
        u = u * c;
        m = i;
    }
    return r;
}

}  // namespace qlat
