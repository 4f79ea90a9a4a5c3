// Places of F_p(x), completions with precision tracking, Hensel square
// roots, square classes, and the Hilbert symbol. Fast routines are checked
// against residue enumeration oracles and the standard identities.

#include <catch2/catch_amalgamated.hpp>

#include <qlat/factor.hpp>
#include <qlat/localfield.hpp>
#include <qlat/parse.hpp>
#include <qlat/place.hpp>

#include <map>
#include <random>

using namespace qlat;

namespace {

RatFunc random_nonzero_ratfunc(std::uint64_t p, int max_deg, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> deg(0, max_deg);
    std::uniform_int_distribution<std::int64_t> c(0, static_cast<std::int64_t>(p) - 1);
    auto rand_poly = [&](int d) {
        std::vector<std::int64_t> coeffs(static_cast<std::size_t>(d) + 1);
        for (auto& e : coeffs) e = c(rng);
        if (coeffs.back() == 0) coeffs.back() = 1;
        return Poly::from_coeffs(p, coeffs);
    };
    Poly num = rand_poly(deg(rng));
    Poly den = rand_poly(deg(rng));
    if (num.is_zero()) num = Poly::one(p);
    return RatFunc(num, den);
}

// All finite places in the support of a*b, plus the infinite place.
std::vector<Place> support_places(const RatFunc& a, const RatFunc& b) {
    std::uint64_t p = a.characteristic();
    std::map<Poly, int, bool (*)(const Poly&, const Poly&)> primes(Poly::canonical_less);
    for (const Poly& f : {a.num(), a.den(), b.num(), b.den()})
        for (const auto& [q, e] : factor(f).factors) primes[q] += e;
    std::vector<Place> out;
    out.push_back(Place::infinite(p));
    for (const auto& [q, e] : primes) out.push_back(Place::finite(q));
    return out;
}

// Representative of a local square class as a global rational function.
RatFunc class_representative(const Place& v, bool odd_val, bool nonsquare_unit) {
    std::uint64_t p = v.characteristic();
    RatFunc rep = RatFunc::one(p);
    if (nonsquare_unit) {
        // Any unit whose residue is a non-square; constants work at the
        // infinite place, residue-field non-residues at finite places.
        if (v.is_infinite())
            rep = rep * RatFunc(Poly(first_nonsquare(p)));
        else
            rep = rep * RatFunc(v.residue_field()->first_nonsquare().rep());
    }
    if (odd_val) {
        if (v.is_infinite())
            rep = rep * RatFunc(Poly::one(p), Poly::x(p));
        else
            rep = rep * RatFunc(v.prime());
    }
    return rep;
}

}  // namespace

TEST_CASE("place valuations match factor multiplicities") {
    std::mt19937_64 rng(5);
    for (std::uint64_t p : {3ULL, 5ULL}) {
        for (int trial = 0; trial < 40; ++trial) {
            RatFunc f = random_nonzero_ratfunc(p, 5, rng);
            Factorization num_fac = factor(f.num());
            Factorization den_fac = factor(f.den());
            for (const auto& [q, e] : num_fac.factors) {
                int expected = e;
                for (const auto& [qd, ed] : den_fac.factors)
                    if (qd == q) expected -= ed;
                REQUIRE(Place::finite(q).valuation(f) == expected);
            }
            REQUIRE(Place::infinite(p).valuation(f) == f.den().degree() - f.num().degree());
        }
    }
}

TEST_CASE("degree-weighted valuations of a rational function sum to zero") {
    std::mt19937_64 rng(9);
    for (std::uint64_t p : {3ULL, 5ULL, 7ULL}) {
        for (int trial = 0; trial < 40; ++trial) {
            RatFunc f = random_nonzero_ratfunc(p, 5, rng);
            long total = 0;
            for (const Place& v : support_places(f, RatFunc::one(p)))
                total += static_cast<long>(v.degree()) * v.valuation(f);
            REQUIRE(total == 0);
        }
    }
}

TEST_CASE("places_up_to lists the infinite place first, then finite places by degree") {
    std::vector<Place> places = places_up_to(3, 2);
    REQUIRE(places.size() == 7);  // oo + 3 linear + 3 quadratic
    REQUIRE(places[0].is_infinite());
    for (std::size_t i = 1; i < places.size(); ++i) {
        REQUIRE(places[i].is_finite());
        REQUIRE(is_irreducible(places[i].prime()));
        if (i + 1 < places.size())
            REQUIRE(places[i].degree() <= places[i + 1].degree());
    }
    REQUIRE(places_up_to(5, 1).size() == 6);  // oo + 5 linear
}

TEST_CASE("residue squareness at a linear place is evaluation at the root") {
    Place v = Place::finite(Poly::x(3));
    // Units at (x) have residue f(0); squares in F_3 are {1}.
    REQUIRE(v.unit_is_residue_square(parse_ratfunc(3, "1 + x")));
    REQUIRE_FALSE(v.unit_is_residue_square(parse_ratfunc(3, "2 + x")));
    REQUIRE(v.unit_is_residue_square(parse_ratfunc(3, "(1+x)/(1+2*x)")));
    REQUIRE_THROWS_AS(v.unit_is_residue_square(parse_ratfunc(3, "x")), std::invalid_argument);
}

TEST_CASE("local arithmetic is consistent with global arithmetic") {
    std::mt19937_64 rng(13);
    std::vector<Place> places = {Place::infinite(3), Place::finite(Poly::x(3)),
                                 Place::finite(parse_poly(3, "x^2 + 1"))};
    for (const Place& v : places) {
        for (int trial = 0; trial < 25; ++trial) {
            RatFunc a = random_nonzero_ratfunc(3, 4, rng);
            RatFunc b = random_nonzero_ratfunc(3, 4, rng);
            LocalElt la = LocalElt::from_ratfunc(v, a, 8);
            LocalElt lb = LocalElt::from_ratfunc(v, b, 8);
            REQUIRE_FALSE((la * lb - LocalElt::from_ratfunc(v, a * b, 8)).known_nonzero());
            REQUIRE_FALSE((la / lb - LocalElt::from_ratfunc(v, a / b, 8)).known_nonzero());
            RatFunc s = a + b;
            if (!s.is_zero())
                REQUIRE_FALSE((la + lb - LocalElt::from_ratfunc(v, s, 8)).known_nonzero());
            REQUIRE(la.valuation() == v.valuation(a));
        }
    }
}

TEST_CASE("Hensel square roots square back to the element") {
    std::mt19937_64 rng(17);
    std::vector<Place> places = {Place::infinite(5), Place::finite(Poly::x(5)),
                                 Place::finite(parse_poly(5, "x^2 + 2"))};
    for (const Place& v : places) {
        int found = 0;
        int trial = 0;
        while (found < 30 && trial < 2000) {
            ++trial;
            RatFunc a = random_nonzero_ratfunc(5, 4, rng);
            LocalElt la = LocalElt::from_ratfunc(v, a, 8);
            if (!la.is_square()) {
                REQUIRE_THROWS_AS(la.sqrt(), std::domain_error);
                continue;
            }
            ++found;
            LocalElt r = la.sqrt();
            REQUIRE_FALSE((r * r - la).known_nonzero());
            REQUIRE(r.valuation() * 2 == la.valuation());
        }
        REQUIRE(found == 30);
    }
}

TEST_CASE("local squareness matches truncated-series enumeration at a linear place") {
    // Oracle: a unit u of F_3[[x]] is a square iff some s with deg s <= 2
    // satisfies s^2 = u mod x^3. (One direction is lifting; the other is
    // reduction mod x.)
    Place v = Place::finite(Poly::x(3));
    Poly mod3 = Poly::monomial(3, 3, 1);
    for (const Poly& u : polys_up_to_degree(3, 2)) {
        if (u.is_zero() || u.coeff(0).is_zero()) continue;  // units only
        bool oracle = false;
        for (const Poly& s : polys_up_to_degree(3, 2))
            if ((s * s) % mod3 == u) oracle = true;
        LocalElt lu = LocalElt::from_ratfunc(v, RatFunc(u), 8);
        REQUIRE(lu.is_square() == oracle);
        // Odd valuation never yields a square, even valuation restores it.
        RatFunc x(Poly::x(3));
        REQUIRE_FALSE(LocalElt::from_ratfunc(v, RatFunc(u) * x, 8).is_square());
        REQUIRE(LocalElt::from_ratfunc(v, RatFunc(u) * x * x, 8).is_square() == oracle);
    }
}

TEST_CASE("possible zeros refuse to answer instead of guessing") {
    Place v = Place::finite(Poly::x(3));
    LocalElt a = LocalElt::from_ratfunc(v, RatFunc::one(3), 4);
    LocalElt d = a - a;  // O(pi^4): not provably zero, not provably nonzero
    REQUIRE_FALSE(d.known_nonzero());
    REQUIRE_FALSE(d.is_exact_zero());
    REQUIRE_THROWS_AS(d.valuation(), precision_error);
    REQUIRE_THROWS_AS(d.is_square(), precision_error);
    REQUIRE_THROWS_AS(d.sqrt(), precision_error);
}

TEST_CASE("square classes multiply like the Klein four-group") {
    std::mt19937_64 rng(19);
    std::vector<Place> places = {Place::infinite(3), Place::finite(Poly::x(3)),
                                 Place::finite(parse_poly(3, "x^2 + 1"))};
    for (const Place& v : places) {
        for (int trial = 0; trial < 40; ++trial) {
            RatFunc a = random_nonzero_ratfunc(3, 4, rng);
            RatFunc b = random_nonzero_ratfunc(3, 4, rng);
            SquareClassLocal ca = square_class_at(v, a);
            SquareClassLocal cb = square_class_at(v, b);
            SquareClassLocal cab = square_class_at(v, a * b);
            REQUIRE(cab.odd_val == (ca.odd_val != cb.odd_val));
            REQUIRE(cab.nonsquare_unit == (ca.nonsquare_unit != cb.nonsquare_unit));
        }
    }
}

TEST_CASE("square class of a class representative is the class itself") {
    for (std::uint64_t p : {3ULL, 5ULL}) {
        std::vector<Place> places = {Place::infinite(p), Place::finite(Poly::x(p)),
                                     Place::finite(irreducibles_of_degree(p, 2).front())};
        for (const Place& v : places) {
            for (bool odd : {false, true}) {
                for (bool ns : {false, true}) {
                    SquareClassLocal c = square_class_at(v, class_representative(v, odd, ns));
                    REQUIRE(c.odd_val == odd);
                    REQUIRE(c.nonsquare_unit == ns);
                }
            }
        }
    }
}

TEST_CASE("class of -1 depends on p mod 4") {
    // -1 is a square in F_5 (2^2 = 4) but not in F_3.
    REQUIRE(square_class_of_minus_one(Place::finite(Poly::x(5))).label() == "1");
    REQUIRE(square_class_of_minus_one(Place::infinite(5)).label() == "1");
    REQUIRE(square_class_of_minus_one(Place::finite(Poly::x(3))).label() == "u");
    REQUIRE(square_class_of_minus_one(Place::infinite(3)).label() == "u");
    // At a degree-2 place the residue field has q = p^2 = 1 mod 4, so -1
    // is a residue square regardless of p.
    REQUIRE(square_class_of_minus_one(Place::finite(parse_poly(3, "x^2 + 1"))).label() == "1");
}

TEST_CASE("Hilbert symbol: symmetry and values in {-1, +1}") {
    std::mt19937_64 rng(29);
    std::vector<Place> places = {Place::infinite(3), Place::finite(Poly::x(3)),
                                 Place::finite(parse_poly(3, "x^2 + 1"))};
    for (const Place& v : places) {
        for (int trial = 0; trial < 40; ++trial) {
            RatFunc a = random_nonzero_ratfunc(3, 4, rng);
            RatFunc b = random_nonzero_ratfunc(3, 4, rng);
            int ab = hilbert_symbol(v, a, b);
            REQUIRE((ab == 1 || ab == -1));
            REQUIRE(ab == hilbert_symbol(v, b, a));
        }
    }
}

TEST_CASE("Hilbert symbol is bimultiplicative on square classes") {
    for (std::uint64_t p : {3ULL, 5ULL}) {
        std::vector<Place> places = {Place::infinite(p), Place::finite(Poly::x(p)),
                                     Place::finite(irreducibles_of_degree(p, 2).front())};
        for (const Place& v : places) {
            std::vector<RatFunc> reps;
            for (bool odd : {false, true})
                for (bool ns : {false, true}) reps.push_back(class_representative(v, odd, ns));
            for (const RatFunc& a : reps)
                for (const RatFunc& b : reps)
                    for (const RatFunc& c : reps) {
                        REQUIRE(hilbert_symbol(v, a, b * c) ==
                                hilbert_symbol(v, a, b) * hilbert_symbol(v, a, c));
                    }
        }
    }
}

TEST_CASE("Hilbert symbol: (a, -a) = 1 and squares are universally split") {
    std::mt19937_64 rng(31);
    std::vector<Place> places = {Place::infinite(5), Place::finite(Poly::x(5)),
                                 Place::finite(parse_poly(5, "x^2 + 2"))};
    for (const Place& v : places) {
        for (int trial = 0; trial < 30; ++trial) {
            RatFunc a = random_nonzero_ratfunc(5, 4, rng);
            RatFunc b = random_nonzero_ratfunc(5, 4, rng);
            REQUIRE(hilbert_symbol(v, a, -a) == 1);
            REQUIRE(hilbert_symbol(v, a * a, b) == 1);
        }
    }
}

TEST_CASE("class-based and element-based Hilbert symbols agree") {
    std::mt19937_64 rng(37);
    std::vector<Place> places = {Place::infinite(3), Place::finite(Poly::x(3)),
                                 Place::finite(parse_poly(3, "x^2 + 1"))};
    for (const Place& v : places) {
        for (int trial = 0; trial < 40; ++trial) {
            RatFunc a = random_nonzero_ratfunc(3, 4, rng);
            RatFunc b = random_nonzero_ratfunc(3, 4, rng);
            REQUIRE(hilbert_symbol(v, a, b) ==
                    hilbert_symbol(v, square_class_at(v, a), square_class_at(v, b)));
        }
    }
}

TEST_CASE("tame evaluation: units split, uniformizer pairs with the residue character") {
    for (std::uint64_t p : {3ULL, 5ULL, 7ULL}) {
        for (const Poly& q : irreducibles_of_degree(p, 1)) {
            Place v = Place::finite(q);
            RatFunc u(v.residue_field()->first_nonsquare().rep());
            RatFunc pi(q);
            REQUIRE(hilbert_symbol(v, u, u) == 1);  // two units, tame place
            REQUIRE(hilbert_symbol(v, pi, u) == -1);
            REQUIRE(hilbert_symbol(v, pi, RatFunc::one(p)) == 1);
            // (pi, pi) = (pi, -1): decided by whether -1 is a residue square.
            int expect = square_class_of_minus_one(v).nonsquare_unit ? -1 : 1;
            REQUIRE(hilbert_symbol(v, pi, pi) == expect);
        }
    }
}

TEST_CASE("frozen Hilbert values: (x, x) at the place (x)") {
    REQUIRE(hilbert_symbol(Place::finite(Poly::x(3)), RatFunc(Poly::x(3)),
                           RatFunc(Poly::x(3))) == -1);
    REQUIRE(hilbert_symbol(Place::finite(Poly::x(5)), RatFunc(Poly::x(5)),
                           RatFunc(Poly::x(5))) == 1);
}

TEST_CASE("Hilbert product over all places of the support is trivial") {
    std::mt19937_64 rng(43);
    for (std::uint64_t p : {3ULL, 5ULL}) {
        for (int trial = 0; trial < 30; ++trial) {
            RatFunc a = random_nonzero_ratfunc(p, 3, rng);
            RatFunc b = random_nonzero_ratfunc(p, 3, rng);
            int prod = 1;
            for (const Place& v : support_places(a, b)) prod *= hilbert_symbol(v, a, b);
            REQUIRE(prod == 1);
        }
    }
}

TEST_CASE("global square classes: squarefree-kernel representative") {
    REQUIRE(is_global_square(parse_ratfunc(3, "(x^2+1)^2 / x^4")));
    REQUIRE_FALSE(is_global_square(parse_ratfunc(3, "x")));
    REQUIRE_FALSE(is_global_square(parse_ratfunc(3, "2")));
    REQUIRE(is_global_square(parse_ratfunc(5, "4")));

    SquareClassGlobal c = global_square_class(parse_ratfunc(3, "2*x*(x+1)^2"));
    REQUIRE(c.unit == Fp(3, 2));
    REQUIRE(c.squarefree == Poly::x(3));

    // Denominators contribute their odd-multiplicity primes too.
    SquareClassGlobal d = global_square_class(parse_ratfunc(3, "1/x"));
    REQUIRE(d.squarefree == Poly::x(3));
}

TEST_CASE("global square classes are multiplicative") {
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 50; ++trial) {
        RatFunc a = random_nonzero_ratfunc(3, 4, rng);
        RatFunc b = random_nonzero_ratfunc(3, 4, rng);
        SquareClassGlobal lhs = global_square_class(a * b);
        SquareClassGlobal rhs =
            square_class_product(global_square_class(a), global_square_class(b));
        REQUIRE(lhs == rhs);
        REQUIRE(is_global_square(a * b * lhs.representative()));
    }
}

TEST_CASE("a global square is a square in every completion") {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 20; ++trial) {
        RatFunc a = random_nonzero_ratfunc(5, 3, rng);
        RatFunc sq = a * a;
        for (const Place& v : places_up_to(5, 2)) {
            SquareClassLocal c = square_class_at(v, sq);
            REQUIRE_FALSE(c.odd_val);
            REQUIRE_FALSE(c.nonsquare_unit);
        }
    }
}
