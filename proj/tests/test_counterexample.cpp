// The certified counterexample pipeline: configuration validation, the
// symbolic degree argument, the exhaustive scan (including its thread
// partition independence), universality and definiteness legs, and the
// interaction between certification and diagnosis.

#include <catch2/catch_amalgamated.hpp>

#include <qlat/counterexample.hpp>
#include <qlat/diagnose.hpp>
#include <qlat/parse.hpp>

using namespace qlat;

namespace {

CounterexampleConfig standard3() {
    return CounterexampleConfig::make(3, 2, parse_poly(3, "x^2 + x + 1"));
}

CounterexampleConfig standard5() {
    return CounterexampleConfig::make(5, 2, parse_poly(5, "x^2 + x + 1"));
}

}  // namespace

TEST_CASE("configuration validation names the offending parameter") {
    Poly g3 = parse_poly(3, "x^2 + x + 1");
    REQUIRE_THROWS_WITH(CounterexampleConfig::make(4, 2, g3),
                        Catch::Matchers::ContainsSubstring("p must be an odd prime"));
    REQUIRE_THROWS_WITH(CounterexampleConfig::make(5, 4, parse_poly(5, "x^2 + x + 1")),
                        Catch::Matchers::ContainsSubstring("nonsquare unit"));
    REQUIRE_THROWS_WITH(CounterexampleConfig::make(3, 0, g3),
                        Catch::Matchers::ContainsSubstring("nonsquare unit"));
    REQUIRE_THROWS_WITH(CounterexampleConfig::make(5, 2, g3),
                        Catch::Matchers::ContainsSubstring("defined over F_p"));
    REQUIRE_THROWS_WITH(CounterexampleConfig::make(3, 2, parse_poly(3, "2*x^2 + 1")),
                        Catch::Matchers::ContainsSubstring("monic"));
    REQUIRE_THROWS_WITH(CounterexampleConfig::make(3, 2, parse_poly(3, "1")),
                        Catch::Matchers::ContainsSubstring("positive degree"));
    REQUIRE_THROWS_WITH(CounterexampleConfig::make(3, 2, parse_poly(3, "x^3 + 1")),
                        Catch::Matchers::ContainsSubstring("even degree"));
    REQUIRE_THROWS_WITH(CounterexampleConfig::make(3, 2, parse_poly(3, "x^2 + x + 2")),
                        Catch::Matchers::ContainsSubstring("g(0) must equal 1"));
    // A valid configuration returns normally.
    CounterexampleConfig cfg = standard3();
    REQUIRE(cfg.p == 3);
    REQUIRE(cfg.t == Fp(3, 2));
}

TEST_CASE("frozen diagonals of the counterexample lattice") {
    std::vector<Poly> d3 = standard3().diagonal();
    REQUIRE(d3.size() == 4);
    REQUIRE(d3[0] == parse_poly(3, "1"));
    REQUIRE(d3[1] == parse_poly(3, "1"));       // -2 = 1 mod 3
    REQUIRE(d3[2] == parse_poly(3, "2*x"));
    REQUIRE(d3[3] == parse_poly(3, "2*x^3 + 2*x^2 + 2*x"));  // -x(x^2+x+1)

    std::vector<Poly> d5 = standard5().diagonal();
    REQUIRE(d5[1] == parse_poly(5, "3"));       // -2 = 3 mod 5
    REQUIRE(d5[2] == parse_poly(5, "2*x"));
    REQUIRE(d5[3] == parse_poly(5, "4*x^3 + 4*x^2 + 4*x"));
}

TEST_CASE("the built lattice matches the configured diagonal") {
    QLattice L = build_counterexample(standard3());
    REQUIRE(L.rank() == 4);
    std::optional<std::vector<Poly>> d = L.integral_diagonal();
    REQUIRE(d.has_value());
    REQUIRE(*d == standard3().diagonal());
}

TEST_CASE("symbolic leg passes for valid configurations") {
    for (const CounterexampleConfig& cfg : {standard3(), standard5()}) {
        SymbolicCheck s = lemma41_symbolic(cfg);
        INFO(s.detail);
        REQUIRE(s.passed);
        REQUIRE_FALSE(s.detail.empty());
    }
    SymbolicCheck big = lemma41_symbolic(
        CounterexampleConfig::make(7, 3, parse_poly(7, "x^4 + 2*x^2 + 1")));
    REQUIRE(big.passed);
}

TEST_CASE("symbolic leg fails with an explicit witness when t is a square") {
    // t = 4 = 2^2 in F_5: eps1 = 2, eps2 = 1 kills the even-degree leading
    // pair, and the scan reports exactly that pair.
    SymbolicCheck s = lemma41_symbolic(5, 4, parse_poly(5, "x^2 + x + 1"));
    REQUIRE_FALSE(s.passed);
    REQUIRE_THAT(s.detail, Catch::Matchers::ContainsSubstring("eps1=2"));
    REQUIRE_THAT(s.detail, Catch::Matchers::ContainsSubstring("eps2=1"));
    REQUIRE_THAT(s.detail, Catch::Matchers::ContainsSubstring("t is a square"));
}

TEST_CASE("symbolic leg rejects degenerate g") {
    REQUIRE_FALSE(lemma41_symbolic(3, 2, parse_poly(3, "x")).passed);      // odd degree
    REQUIRE_FALSE(lemma41_symbolic(3, 2, parse_poly(3, "x^3+1")).passed);  // odd degree
    REQUIRE_FALSE(lemma41_symbolic(3, 2, Poly::one(3)).passed);            // degree not > 1
}

TEST_CASE("exhaustive scan: full tuple count, no degree violations, no x hits") {
    CounterexampleConfig cfg = standard3();
    ExhaustiveCount count = lemma41_exhaustive(cfg, 2, 1);
    REQUIRE(count.degree_bound == 2);
    REQUIRE(count.tuples_scanned == 531'440);  // 3^12 - 1
    REQUIRE(count.degree_identity_violations == 0);
    REQUIRE(count.x_hits == 0);
    REQUIRE(count.jobs == 1);
}

TEST_CASE("exhaustive scan over F_5 at degree bound 1") {
    ExhaustiveCount count = lemma41_exhaustive(standard5(), 1, 2);
    REQUIRE(count.tuples_scanned == 390'624);  // 5^8 - 1
    REQUIRE(count.degree_identity_violations == 0);
    REQUIRE(count.x_hits == 0);
}

TEST_CASE("thread partition does not change the tallies") {
    CounterexampleConfig cfg = standard3();
    ExhaustiveCount one = lemma41_exhaustive(cfg, 2, 1);
    ExhaustiveCount three = lemma41_exhaustive(cfg, 2, 3);
    REQUIRE(one.tuples_scanned == three.tuples_scanned);
    REQUIRE(one.degree_identity_violations == three.degree_identity_violations);
    REQUIRE(one.x_hits == three.x_hits);
    REQUIRE(three.jobs == 3);
}

TEST_CASE("exhaustive scan holds at degree bound 3 as well") {
    ExhaustiveCount count = lemma41_exhaustive(standard3(), 3, 0);
    REQUIRE(count.tuples_scanned == 43'046'720);  // 3^16 - 1
    REQUIRE(count.degree_identity_violations == 0);
    REQUIRE(count.x_hits == 0);
}

TEST_CASE("the evaluated form matches a hand computation") {
    // phi(1,1,1,1) = 1 - t + x t - x g over F_5 with t=2, g=x^2+x+1:
    // -1 + 2x - x^3 - x^2 - x = 4x^3 + 4x^2 + x + 4.
    CounterexampleConfig cfg = standard5();
    std::vector<Poly> alpha(4, Poly::one(5));
    REQUIRE(counterexample_value(cfg, alpha) == parse_poly(5, "4*x^3 + 4*x^2 + x + 4"));
    // The zero tuple evaluates to zero and is excluded from scans.
    std::vector<Poly> zero(4, Poly::zero(5));
    REQUIRE(counterexample_value(cfg, zero).is_zero());
}

TEST_CASE("degree identity: the top coefficient never cancels") {
    // Spot-check the scan invariant directly on a few hand-picked tuples.
    CounterexampleConfig cfg = standard3();
    std::vector<std::vector<Poly>> samples = {
        {parse_poly(3, "x^2"), parse_poly(3, "x^2"), parse_poly(3, "x"), parse_poly(3, "1")},
        {parse_poly(3, "2*x+1"), parse_poly(3, "x"), parse_poly(3, "2"), parse_poly(3, "x^2+2")},
        {Poly::zero(3), Poly::zero(3), Poly::zero(3), parse_poly(3, "x^2")},
    };
    std::vector<Poly> diag = cfg.diagonal();
    for (const auto& alpha : samples) {
        int expected = -1;
        for (std::size_t i = 0; i < 4; ++i)
            if (!alpha[i].is_zero())
                expected = std::max(expected, diag[i].degree() + 2 * alpha[i].degree());
        Poly value = counterexample_value(cfg, alpha);
        REQUIRE(value.degree() == expected);
        REQUIRE(value != Poly::x(3));
    }
}

TEST_CASE("field-level universality samples are all represented") {
    CounterexampleConfig cfg = standard3();
    std::vector<UniversalitySample> samples = verify_space_universal(cfg, 6, 2);
    REQUIRE(samples.size() == 6);
    QSpace V = build_counterexample(cfg).space();
    int with_witness = 0;
    for (const UniversalitySample& s : samples) {
        // Every sample is represented over the rational function field.
        REQUIRE(s.represented);
        // A bounded integral search may or may not exhibit a witness: the
        // sample x in particular can never have one. When it does, the
        // witness must evaluate back to the target.
        if (s.witness_found) {
            ++with_witness;
            REQUIRE(V.evaluate(s.witness) == s.target);
        } else {
            REQUIRE(s.target != RatFunc::one(3));  // constants are plainly hit
        }
    }
    REQUIRE(with_witness >= 1);
}

TEST_CASE("local universality at every place of degree <= 2") {
    LocalUniversalityReport rep = verify_local_universality(standard3(), 2);
    REQUIRE(rep.all_universal);
    REQUIRE(rep.places.size() == 7);  // oo, 3 linear, 3 quadratic
    REQUIRE(rep.places.front().place.is_infinite());
    for (const PlaceUniversality& pu : rep.places) {
        REQUIRE(pu.universal);
        REQUIRE_FALSE(pu.method.empty());
    }
}

TEST_CASE("definiteness leg") {
    REQUIRE(verify_definite(standard3()));
    REQUIRE(verify_definite(standard5()));
    REQUIRE(verify_definite(CounterexampleConfig::make(7, 3, parse_poly(7, "x^4 + 2*x^2 + 1"))));
}

TEST_CASE("Clifford-algebra label splits on whether g is a square") {
    // x^2+x+1 = (x+2)^2 over F_3, so the even Clifford algebra splits.
    REQUIRE(clifford_type_label(standard3()) == "SL1(A) x SL1(A)");
    // Over F_5 the same polynomial is irreducible: Weil restriction.
    REQUIRE(clifford_type_label(standard5()) ==
            "R_{L/F} SL1(C0(V)), L = F(sqrt(g))");
    // x^4+1 = (x^2+2)(x^2+3) over F_5 is squarefree, hence not a square.
    REQUIRE(clifford_type_label(CounterexampleConfig::make(5, 2, parse_poly(5, "x^4 + 1"))) ==
            "R_{L/F} SL1(C0(V)), L = F(sqrt(g))");
    REQUIRE(clifford_type_label(CounterexampleConfig::make(3, 2, parse_poly(3, "(x+1)^2"))) ==
            "SL1(A) x SL1(A)");
}

TEST_CASE("certification succeeds end to end and feeds the registry") {
    CounterexampleConfig cfg = standard3();
    SaRegistry registry;
    Certificate cert = certify(cfg, registry);
    REQUIRE(cert.certified);
    REQUIRE(cert.withheld_reason.empty());
    REQUIRE(cert.sa_conclusion == SAVerdict::fails);
    REQUIRE(cert.symbolic.passed);
    REQUIRE(cert.exhaustive.tuples_scanned == 531'440);
    REQUIRE(cert.exhaustive.x_hits == 0);
    REQUIRE_FALSE(cert.x_search.found);
    REQUIRE(cert.global_x_representable);
    REQUIRE(cert.local_universality.all_universal);
    REQUIRE(cert.definite);

    QLattice L = build_counterexample(cfg);
    // The registry now knows both the space-level failure and the
    // non-representation certificate.
    REQUIRE(registry.status_of(L.space()).verdict == SAVerdict::fails);
    REQUIRE(registry
                .certified_nonrepresentation(*L.integral_diagonal(), RatFunc(Poly::x(3)))
                .has_value());

    // Diagnosis picks the certificate up and reports the violation.
    HasseReport rep = hasse_diagnose(RatFunc(Poly::x(3)), L, registry);
    REQUIRE(rep.conclusion == HasseConclusion::HPviolated_certified);
    REQUIRE_FALSE(rep.certificate_provenance.empty());

    // The class-number bound now reflects the failed strong approximation.
    ClassNumberReport cn = L.class_number_bound(registry);
    REQUIRE(cn.sa.verdict == SAVerdict::fails);
    REQUIRE_FALSE(cn.class_number.has_value());
}

TEST_CASE("certification is withheld when a leg fails") {
    // Bypassing make(): t = 4 is a square in F_5, so the symbolic leg
    // cannot hold and the certificate must be withheld with that reason.
    CounterexampleConfig bad{5, Fp(5, 4), parse_poly(5, "x^2 + x + 1")};
    SaRegistry registry;
    CertifyBounds bounds;
    bounds.alpha_degree_bound = 1;
    Certificate cert = certify(bad, registry, bounds);
    REQUIRE_FALSE(cert.certified);
    REQUIRE_THAT(cert.withheld_reason,
                 Catch::Matchers::ContainsSubstring("symbolic non-representability leg failed"));
    REQUIRE(cert.sa_conclusion == SAVerdict::unknown);
    REQUIRE(registry.size() == 0);
    REQUIRE(registry.nonrepresentations().empty());
}

TEST_CASE("resolved alpha bound defaults by characteristic") {
    CertifyBounds bounds;
    REQUIRE(bounds.resolved_alpha_bound(3) == 2);
    REQUIRE(bounds.resolved_alpha_bound(5) == 1);
    bounds.alpha_degree_bound = 4;
    REQUIRE(bounds.resolved_alpha_bound(3) == 4);
}

TEST_CASE("job resolution prefers the explicit request") {
    REQUIRE(detail::resolve_jobs(3) == 3);
    REQUIRE(detail::resolve_jobs(1) == 1);
    REQUIRE(detail::resolve_jobs(0) >= 1);
    REQUIRE(detail::resolve_jobs(-2) >= 1);
}
