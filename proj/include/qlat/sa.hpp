#pragma once

// Strong approximation bookkeeping for spin groups of quadratic spaces over
// F_p(x), relative to the infinite place. Three-valued: the classical
// theorem certifies "holds" when the space is isotropic at infinity (and
// the spin group is simply connected and absolutely almost simple, i.e.
// dim >= 3 here); "fails" is only reported with an explicit certificate,
// which certified counterexamples deposit in a registry object. Everything
// else is "unknown" — the honest answer for definite spaces without a
// certificate either way.

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qlat/qspace.hpp"

namespace qlat {

enum class SAVerdict { holds, fails, unknown };

struct SAStatus {
    SAVerdict verdict = SAVerdict::unknown;
    std::string provenance;  // human-readable justification
};

inline const char* to_string(SAVerdict v) {
    switch (v) {
        case SAVerdict::holds: return "holds";
        case SAVerdict::fails: return "fails";
        default: return "unknown";
    }
}

// A certified statement that a specific integral diagonal lattice does not
// represent a specific element over F_p[x] — proved, not merely unfound by
// search. The diagonal is stored in normalized form (see
// normalize_integral_diagonal) so that the permutation / unit-square
// rescalings that obviously preserve integral representability match.
struct NonRepCertificate {
    std::vector<Poly> diagonal;  // normalized
    RatFunc target;
    std::string provenance;
};

// Canonical form of a diagonal integral lattice under the isometries
// <a> ~ <u^2 a> (u a unit of F_p[x], i.e. u in F_p^*) and coordinate
// permutation: scale each entry so its leading coefficient is 1 or the
// canonical nonsquare of F_p, then sort.
inline std::vector<Poly> normalize_integral_diagonal(std::vector<Poly> d) {
    for (Poly& e : d) {
        if (e.is_zero()) continue;
        Fp lc = e.leading_coeff();
        Fp want = lc.is_square() ? Fp::one(e.characteristic())
                                 : first_nonsquare(e.characteristic());
        // lc = want * s^2 for some unit s; divide by s^2 = lc / want.
        e = e * (want * lc.inverse());
    }
    std::sort(d.begin(), d.end(), Poly::canonical_less);
    return d;
}

// Holds certified failure witnesses. Deliberately an explicit object passed
// where needed: no global mutable state, so tests and CLI runs compose.
class SaRegistry {
public:
    void register_failure(QSpace space, std::string provenance) {
        failures_.emplace_back(std::move(space), std::move(provenance));
    }

    void register_nonrepresentation(std::vector<Poly> diagonal, RatFunc target,
                                    std::string provenance) {
        nonreps_.push_back(NonRepCertificate{normalize_integral_diagonal(std::move(diagonal)),
                                             std::move(target), std::move(provenance)});
    }

    const std::vector<NonRepCertificate>& nonrepresentations() const { return nonreps_; }

    // Provenance of a certificate that the lattice with the given integral
    // diagonal does not represent `a`, if one is registered.
    std::optional<std::string> certified_nonrepresentation(const std::vector<Poly>& diagonal,
                                                           const RatFunc& a) const {
        std::vector<Poly> key = normalize_integral_diagonal(diagonal);
        for (const NonRepCertificate& c : nonreps_)
            if (c.target == a && c.diagonal == key) return c.provenance;
        return std::nullopt;
    }

    std::size_t size() const { return failures_.size(); }

    const std::vector<std::pair<QSpace, std::string>>& failures() const { return failures_; }

    // Matches up to isometry of the underlying space: strong approximation
    // is a property of Spin(V), so any lattice on an isometric space shares
    // the verdict.
    SAStatus status_of(const QSpace& v) const {
        for (const auto& [space, why] : failures_)
            if (space.characteristic() == v.characteristic() && space.is_equivalent_to(v))
                return {SAVerdict::fails, why};
        if (v.dim() < 3)
            return {SAVerdict::unknown,
                    "spin group of a space of dimension < 3 is not absolutely almost simple; "
                    "the classical theorem does not apply"};
        if (v.is_isotropic_at(Place::infinite(v.characteristic())))
            return {SAVerdict::holds,
                    "space is isotropic at the infinite place; classical strong approximation "
                    "for the simply connected spin group applies"};
        return {SAVerdict::unknown,
                "space is definite at the infinite place and no certificate is registered"};
    }

private:
    std::vector<std::pair<QSpace, std::string>> failures_;
    std::vector<NonRepCertificate> nonreps_;
};

}  // namespace qlat
