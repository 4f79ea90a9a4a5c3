#pragma once

// Construction and certification of a definite quaternary lattice
// L = <1, -t, x t, -x g> over R = F_p[x] (p odd, t a nonsquare unit,
// g monic of even degree > 1 with g(0) = 1) whose quadratic form is
// universal over F = F_p(x) and over every completion of R, yet does not
// represent the element x over R itself. The non-representability is
// proved symbolically — a degree/leading-coefficient argument valid for
// representing vectors of every degree — and cross-checked by exhaustive
// bounded enumeration. A completed certificate witnesses failure of the
// Hasse principle for x -> L, hence failure of strong approximation for
// the spin group of the ambient space, and deposits both facts in an
// SaRegistry for downstream consumers.

#include <cstdint>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "qlat/factor.hpp"
#include "qlat/fp.hpp"
#include "qlat/poly.hpp"
#include "qlat/qlattice.hpp"
#include "qlat/qspace.hpp"
#include "qlat/ratfunc.hpp"
#include "qlat/sa.hpp"
#include "qlat/search.hpp"

namespace qlat {

namespace detail {

// Worker-count resolution shared by the library and the CLI: an explicit
// positive request wins, else the QLAT_JOBS environment variable, else the
// hardware concurrency (at least 1). Results never depend on the outcome —
// partitioned scans are order-independent — only wall time does.
inline int resolve_jobs(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("QLAT_JOBS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v > 0 && v < 1024) return static_cast<int>(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace detail

// Parameters (p, t, g) of the counterexample family, validated on
// construction. The diagonal is derived, never stored independently.
struct CounterexampleConfig {
    std::uint64_t p;
    Fp t;     // nonsquare unit of F_p
    Poly g;   // monic, even degree > 1, g(0) = 1

    static CounterexampleConfig make(std::uint64_t p, std::int64_t t_raw, const Poly& g) {
        if (!is_odd_prime(p)) throw std::invalid_argument("p must be an odd prime");
        Fp t(p, t_raw);
        if (t.is_zero() || t.is_square())
            throw std::invalid_argument("t must be a nonsquare unit modulo p (got " +
                                        t.to_string() + ")");
        if (g.characteristic() != p)
            throw std::invalid_argument("g must be defined over F_p");
        if (g.degree() < 1 || !g.leading_coeff().is_one())
            throw std::invalid_argument("g must be monic of positive degree");
        if (g.degree() % 2 != 0)
            throw std::invalid_argument("g must have even degree (got degree " +
                                        std::to_string(g.degree()) + ")");
        if (g.degree() <= 1)
            throw std::invalid_argument("deg(g) must exceed 1");
        if (!g.coeff(0).is_one())
            throw std::invalid_argument("g(0) must equal 1 (got " + g.coeff(0).to_string() + ")");
        return CounterexampleConfig{p, t, g};
    }

    // Diagonal entries a_1 = 1, a_2 = -t, a_3 = x t, a_4 = -x g, as
    // integral polynomials.
    std::vector<Poly> diagonal() const {
        Poly one = Poly::one(p);
        Poly x = Poly::from_coeffs(p, {0, 1});
        return {one, one * (-t), x * t, x * g * (-Fp::one(p))};
    }

    std::string to_string() const {
        return "p=" + std::to_string(p) + ", t=" + t.to_string() + ", g=" + g.to_string();
    }
};

// The lattice L = <1, -t, x t, -x g> itself.
inline QLattice build_counterexample(const CounterexampleConfig& cfg) {
    std::vector<RatFunc> d;
    for (const Poly& e : cfg.diagonal()) d.emplace_back(e);
    return QLattice(Matrix<RatFunc>::diagonal(d));
}

// Outcome of the symbolic (all-degrees) non-representability argument.
struct SymbolicCheck {
    bool passed = false;
    std::string detail;  // names the failing condition and a witness, if any
};

// Symbolic proof that for every nonzero alpha in R^4, the value
// phi = alpha_1^2 - t alpha_2^2 + x t alpha_3^2 - x g alpha_4^2 satisfies
// deg(phi) = max_i deg(a_i alpha_i^2), and consequently phi != x.
//
// The argument: deg(a_1 alpha_1^2), deg(a_2 alpha_2^2) are even while
// deg(a_3 alpha_3^2), deg(a_4 alpha_4^2) are odd, so top-degree
// cancellation can only happen within each parity pair; within the even
// pair the leading coefficient is eps_1^2 - t eps_2^2 which never vanishes
// for (eps_1, eps_2) != (0, 0) exactly when t is a nonsquare, and within
// the odd pair it is t eps_3^2 - eps_4^2 (g monic), which never vanishes
// for the same reason. Hence deg(phi) is the maximum term degree. Were
// phi = x, that maximum would be 1, forcing alpha_4 = 0 (its term has
// degree >= 1 + deg g > 1... since deg g > 1) and deg alpha_3 = 0,
// deg alpha_1, deg alpha_2 <= 0; the residual constant and linear
// equations then force t to be a square — impossible.
//
// Takes raw parameters so that near-miss configurations (square t, or
// deg g = 1) can be probed; each hypothesis failure is reported with an
// explicit witness. The two quantifier legs are checked exhaustively over
// F_p^2 rather than derived from the nonsquareness of t: the exhaustive
// scan is the certificate.
inline SymbolicCheck lemma41_symbolic(std::uint64_t p, std::int64_t t_raw, const Poly& g) {
    if (!is_odd_prime(p)) return {false, "p is not an odd prime"};
    Fp t(p, t_raw);
    if (t.is_zero()) return {false, "t = 0: the form is degenerate"};
    if (g.is_zero() || !g.leading_coeff().is_one())
        return {false, "g is not monic: the odd-pair leading coefficient is not t eps^2 - eps'^2"};
    if (g.degree() % 2 != 0)
        return {false, "deg(g) = " + std::to_string(g.degree()) +
                           " is odd: term degrees do not split into even/odd pairs"};
    // Even pair: eps_1^2 - t eps_2^2 != 0 for all (eps_1, eps_2) != (0,0).
    // Scan order (eps_2 outer, eps_1 inner) is fixed, so the reported
    // witness is reproducible.
    for (std::uint64_t e2 = 0; e2 < p; ++e2)
        for (std::uint64_t e1 = 0; e1 < p; ++e1) {
            if (e1 == 0 && e2 == 0) continue;
            Fp v = Fp(p, static_cast<std::int64_t>(e1 * e1)) -
                   t * Fp(p, static_cast<std::int64_t>(e2 * e2));
            if (v.is_zero())
                return {false, "even-degree leading pair vanishes: eps1=" + std::to_string(e1) +
                                   ", eps2=" + std::to_string(e2) +
                                   " gives eps1^2 - t*eps2^2 = 0 (t is a square)"};
        }
    // Odd pair: t eps_3^2 - eps_4^2 != 0 for all (eps_3, eps_4) != (0,0).
    for (std::uint64_t e4 = 0; e4 < p; ++e4)
        for (std::uint64_t e3 = 0; e3 < p; ++e3) {
            if (e3 == 0 && e4 == 0) continue;
            Fp v = t * Fp(p, static_cast<std::int64_t>(e3 * e3)) -
                   Fp(p, static_cast<std::int64_t>(e4 * e4));
            if (v.is_zero())
                return {false, "odd-degree leading pair vanishes: eps3=" + std::to_string(e3) +
                                   ", eps4=" + std::to_string(e4) +
                                   " gives t*eps3^2 - eps4^2 = 0 (t is a square)"};
        }
    // With the degree identity established, phi = x additionally needs
    // the alpha_4 term out of reach: deg(-x g alpha_4^2) >= 1 + deg g > 1
    // whenever alpha_4 != 0.
    if (g.degree() <= 1)
        return {false, "deg(g) = " + std::to_string(g.degree()) +
                           " <= 1: the alpha_4 term can have degree 1, so phi = x is not excluded"};
    return {true,
            "degree identity holds for all nonzero alpha in R^4, and phi = x is excluded: "
            "both leading-pair scans over F_" +
                std::to_string(p) + "^2 found no vanishing"};
}

inline SymbolicCheck lemma41_symbolic(const CounterexampleConfig& cfg) {
    return lemma41_symbolic(cfg.p, static_cast<std::int64_t>(cfg.t.value()), cfg.g);
}

// Counters from the exhaustive bounded cross-check of the symbolic
// argument: scan every alpha in R^4 with deg(alpha_i) <= degree_bound,
// not all zero, and count (a) failures of the degree identity
// deg(phi) = max_i deg(a_i alpha_i^2) and (b) occurrences of phi = x.
// Both must be zero.
struct ExhaustiveCount {
    int degree_bound = 0;
    std::uint64_t tuples_scanned = 0;
    std::uint64_t degree_identity_violations = 0;
    std::uint64_t x_hits = 0;
    int jobs = 1;
};

inline ExhaustiveCount lemma41_exhaustive(const CounterexampleConfig& cfg, int degree_bound,
                                          int jobs_requested = 0) {
    if (degree_bound < 0) throw std::invalid_argument("degree bound must be nonnegative");
    const std::uint64_t p = cfg.p;
    const std::vector<Poly> a = cfg.diagonal();
    const std::vector<Poly> universe = polys_up_to_degree(p, degree_bound);
    const std::size_t n = universe.size();  // p^(degree_bound+1), zero first

    // terms[i][j] = a_i * universe[j]^2, with degree cached.
    std::vector<std::vector<Poly>> terms(4);
    std::vector<std::vector<int>> tdeg(4);
    for (int i = 0; i < 4; ++i) {
        terms[i].reserve(n);
        tdeg[i].reserve(n);
        for (const Poly& u : universe) {
            Poly tm = a[static_cast<std::size_t>(i)] * u * u;
            tdeg[i].push_back(tm.degree());
            terms[i].push_back(std::move(tm));
        }
    }
    const Poly x = Poly::from_coeffs(p, {0, 1});

    ExhaustiveCount out;
    out.degree_bound = degree_bound;
    out.jobs = detail::resolve_jobs(jobs_requested);

    // Partition the outermost coordinate (alpha_4, whose index enumerates
    // top coefficients last in canonical order) into contiguous chunks;
    // every chunk is independent, so totals do not depend on the split.
    struct Tally {
        std::uint64_t scanned = 0, deg_bad = 0, x_hit = 0;
    };
    auto scan_range = [&](std::size_t lo, std::size_t hi, Tally& tally) {
        for (std::size_t j4 = lo; j4 < hi; ++j4) {
            const Poly& t4 = terms[3][j4];
            const int d4 = tdeg[3][j4];
            for (std::size_t j3 = 0; j3 < n; ++j3) {
                Poly t34 = t4 + terms[2][j3];
                int d34 = std::max(d4, tdeg[2][j3]);
                for (std::size_t j2 = 0; j2 < n; ++j2) {
                    Poly t234 = t34 + terms[1][j2];
                    int d234 = std::max(d34, tdeg[1][j2]);
                    for (std::size_t j1 = 0; j1 < n; ++j1) {
                        if (j1 == 0 && j2 == 0 && j3 == 0 && j4 == 0) continue;
                        Poly phi = t234 + terms[0][j1];
                        int expect = std::max(d234, tdeg[0][j1]);
                        ++tally.scanned;
                        if (phi.degree() != expect) ++tally.deg_bad;
                        if (phi == x) ++tally.x_hit;
                    }
                }
            }
        }
    };

    int jobs = std::min<int>(out.jobs, static_cast<int>(n));
    std::vector<Tally> tallies(static_cast<std::size_t>(jobs));
    if (jobs <= 1) {
        scan_range(0, n, tallies[0]);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < jobs; ++w) {
            std::size_t lo = n * static_cast<std::size_t>(w) / static_cast<std::size_t>(jobs);
            std::size_t hi = n * static_cast<std::size_t>(w + 1) / static_cast<std::size_t>(jobs);
            pool.emplace_back(scan_range, lo, hi, std::ref(tallies[static_cast<std::size_t>(w)]));
        }
        for (std::thread& th : pool) th.join();
    }
    for (const Tally& t : tallies) {
        out.tuples_scanned += t.scanned;
        out.degree_identity_violations += t.deg_bad;
        out.x_hits += t.x_hit;
    }
    return out;
}

// Evaluation of phi = sum a_i alpha_i^2 for one explicit tuple; used by
// tests and the CLI to spot-check single values.
inline Poly counterexample_value(const CounterexampleConfig& cfg, const std::vector<Poly>& alpha) {
    if (alpha.size() != 4) throw std::invalid_argument("alpha must have four coordinates");
    std::vector<Poly> a = cfg.diagonal();
    Poly s = Poly::zero(cfg.p);
    for (std::size_t i = 0; i < 4; ++i) s = s + a[i] * alpha[i] * alpha[i];
    return s;
}

// One sampled target for field-level universality: is a represented by
// V = F^4 with form <1, -t, x t, -x g>, and did the bounded witness search
// find an explicit vector?
struct UniversalitySample {
    RatFunc target;
    bool represented = false;
    bool witness_found = false;
    std::vector<RatFunc> witness;
};

// Field-level universality of V: every nonzero target passes the exact
// local-global test (dimension 4 over F_p(x)); witnesses are searched with
// a small degree bound and reported honestly when absent. Targets are the
// first `samples` nonzero polynomials in canonical order (all units first,
// then x, x+1, ...), so x itself is covered as soon as samples >= p.
inline std::vector<UniversalitySample> verify_space_universal(const CounterexampleConfig& cfg,
                                                              int samples,
                                                              int witness_degree_bound = 2) {
    QLattice L = build_counterexample(cfg);
    const QSpace& V = L.space();
    std::vector<UniversalitySample> out;
    std::vector<Poly> pool = polys_up_to_degree(cfg.p, 2 + samples / static_cast<int>(cfg.p));
    for (const Poly& cand : pool) {
        if (static_cast<int>(out.size()) >= samples) break;
        if (cand.is_zero()) continue;
        UniversalitySample s{RatFunc(cand), false, false, {}};
        s.represented = V.represents(s.target);
        QSpace::Witness w = V.find_representation_witness(s.target, witness_degree_bound);
        s.witness_found = w.outcome.found;
        if (w.outcome.found) s.witness = w.vector;
        out.push_back(std::move(s));
    }
    return out;
}

// Per-place record of the local universality check, including which
// criterion certified it — so every "true" is auditable.
struct PlaceUniversality {
    Place place;
    bool universal = false;
    std::string method;
};

struct LocalUniversalityReport {
    int place_degree_bound = 0;
    std::vector<PlaceUniversality> places;
    bool all_universal = false;
};

// Check local universality of L at the infinite place and at every finite
// place of degree <= place_degree_bound. At finite places where L is
// unimodular the rank-4 scale-0 component already certifies universality
// (its rank-3 sublattices are locally universal); at divisors of the
// discriminant — for this family, (x) and the divisors of g and t — the
// Jordan splitting is analysed component by component. Precision failures
// surface as precision_error with the offending place named.
inline LocalUniversalityReport verify_local_universality(const CounterexampleConfig& cfg,
                                                         int place_degree_bound,
                                                         std::uint64_t work_cap = 100'000'000) {
    QLattice L = build_counterexample(cfg);
    LocalUniversalityReport rep;
    rep.place_degree_bound = place_degree_bound;
    rep.all_universal = true;
    for (const Place& v : places_up_to(cfg.p, place_degree_bound)) {
        PlaceUniversality pu{v, false, ""};
        try {
            pu.universal = L.is_locally_universal(v, work_cap);
        } catch (const precision_error& e) {
            throw precision_error("local universality at place " + v.to_string() + ": " +
                                  e.what());
        }
        if (v.is_infinite()) {
            pu.method = "field-level check at the infinite place: V_oo attains all four "
                        "square classes";
        } else if (L.is_unimodular_at(v)) {
            pu.method = "unimodular shortcut: scale-0 Jordan component of rank 4 >= 3";
        } else {
            std::string comps;
            for (const JordanComponent& c : L.jordan_splitting(v)) {
                if (!comps.empty()) comps += ", ";
                comps += "(scale " + std::to_string(c.scale) + ", rank " +
                         std::to_string(c.rank) + ")";
            }
            pu.method = "Jordan component analysis with residue search fallback: " + comps;
        }
        if (!pu.universal) rep.all_universal = false;
        rep.places.push_back(std::move(pu));
    }
    return rep;
}

// Definiteness: the ambient space is anisotropic at the infinite place.
inline bool verify_definite(const CounterexampleConfig& cfg) {
    return build_counterexample(cfg).space().is_definite();
}

// Isomorphism type of the spin group of V, determined by whether the
// even Clifford algebra's center F[X]/(X^2 - g) splits: for g a square
// in F_p[x] the center splits and Spin(V) is a product of two groups of
// units of a quaternion algebra; otherwise it is the Weil restriction
// from the quadratic extension L = F(sqrt(g)).
inline std::string clifford_type_label(const CounterexampleConfig& cfg) {
    if (is_poly_square(cfg.g)) return "SL1(A) x SL1(A)";
    return "R_{L/F} SL1(C0(V)), L = F(sqrt(g))";
}

inline std::string clifford_type_label(std::uint64_t /*p*/, const Poly& g) {
    if (is_poly_square(g)) return "SL1(A) x SL1(A)";
    return "R_{L/F} SL1(C0(V)), L = F(sqrt(g))";
}

// Knobs for certify(); defaults are desk-scale and match the library's
// published reproduction numbers.
struct CertifyBounds {
    int alpha_degree_bound = -1;   // -1: 2 when p = 3, else 1
    int place_degree_bound = 2;
    int universality_samples = 6;
    int witness_search_degree = 2;
    int jobs = 0;                  // 0: resolve via QLAT_JOBS / hardware
    std::uint64_t work_cap = 100'000'000;

    int resolved_alpha_bound(std::uint64_t p) const {
        if (alpha_degree_bound >= 0) return alpha_degree_bound;
        return p == 3 ? 2 : 1;
    }
};

// The assembled certificate. `certified` is true only when every leg
// passed; then sa_conclusion = fails and the certificate has been
// deposited in the registry. Otherwise the certificate is withheld and
// withheld_reason names the first failing leg.
struct Certificate {
    CounterexampleConfig config;
    CertifyBounds bounds;

    SymbolicCheck symbolic;               // all-degrees non-representability of x
    ExhaustiveCount exhaustive;           // bounded cross-check
    SearchOutcome x_search;               // direct lattice search for x (expected absent)
    bool global_x_representable = false;  // V represents x over F
    LocalUniversalityReport local_universality;
    std::vector<UniversalitySample> universality_samples;
    bool definite = false;
    std::string clifford_label;

    SAVerdict sa_conclusion = SAVerdict::unknown;
    bool certified = false;
    std::string withheld_reason;
};

// Run every leg, assemble the certificate, and — exactly when all legs
// pass — register the strong-approximation failure of Spin(V) and the
// certified non-representation of x by L in the registry.
inline Certificate certify(const CounterexampleConfig& cfg, SaRegistry& registry,
                           CertifyBounds bounds = {}) {
    Certificate cert{cfg, bounds, {}, {}, {}, false, {}, {}, false, "", SAVerdict::unknown,
                     false, ""};
    QLattice L = build_counterexample(cfg);
    const Poly x = Poly::from_coeffs(cfg.p, {0, 1});

    cert.symbolic = lemma41_symbolic(cfg);
    cert.exhaustive = lemma41_exhaustive(cfg, bounds.resolved_alpha_bound(cfg.p), bounds.jobs);
    cert.x_search = L.search_representation(x, bounds.witness_search_degree);
    cert.global_x_representable = L.space().represents(RatFunc(x));
    cert.local_universality =
        verify_local_universality(cfg, bounds.place_degree_bound, bounds.work_cap);
    cert.universality_samples =
        verify_space_universal(cfg, bounds.universality_samples, bounds.witness_search_degree);
    cert.definite = verify_definite(cfg);
    cert.clifford_label = clifford_type_label(cfg);

    auto withhold = [&](const std::string& why) {
        cert.certified = false;
        cert.sa_conclusion = SAVerdict::unknown;
        cert.withheld_reason = "certificate withheld: " + why;
        return cert;
    };

    if (!cert.symbolic.passed)
        return withhold("symbolic non-representability leg failed (" + cert.symbolic.detail + ")");
    if (cert.exhaustive.degree_identity_violations != 0)
        return withhold("exhaustive scan found " +
                        std::to_string(cert.exhaustive.degree_identity_violations) +
                        " degree-identity violations");
    if (cert.exhaustive.x_hits != 0)
        return withhold("exhaustive scan found " + std::to_string(cert.exhaustive.x_hits) +
                        " representations of x");
    if (cert.x_search.found)
        return withhold("direct search found an integral representation of x");
    if (!cert.global_x_representable)
        return withhold("x is not represented by V over the rational function field");
    if (!cert.local_universality.all_universal)
        return withhold("local universality failed at a checked place");
    for (const UniversalitySample& s : cert.universality_samples)
        if (!s.represented)
            return withhold("field-level universality failed for target " + s.target.to_string());
    if (!cert.definite)
        return withhold("the ambient space is isotropic at the infinite place, not definite");

    cert.certified = true;
    cert.sa_conclusion = SAVerdict::fails;
    std::string provenance =
        "certified Hasse-principle violation: x is represented by " + L.space().to_string() +
        " over F_" + std::to_string(cfg.p) +
        "(x) and over every completion, but not over F_" + std::to_string(cfg.p) +
        "[x]; the spin group of this definite quaternary space fails strong approximation";
    registry.register_failure(L.space(), provenance);
    registry.register_nonrepresentation(cfg.diagonal(), RatFunc(x), provenance);
    return cert;
}

}  // namespace qlat
