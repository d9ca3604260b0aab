#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <uqf/quadint.hpp>

#include <random>

using namespace uqf;

namespace {

Field f73() { return make_field(73); }
Field f2() { return make_field(2); }

// section 5 cast for D = 73 in the {1, omega} basis
QuadInt el(const Field& f, long x, long y) { return QuadInt(f, x, y); }

}  // namespace

TEST_CASE("field construction and basis data") {
    auto f = f73();
    CHECK(f->d() == 73);
    CHECK(f->one_mod_four());
    CHECK(f->delta_sq() == 73);   // delta = sqrt(73)
    CHECK(f->omega_c() == 18);    // omega^2 = 18 + omega

    auto g = f2();
    CHECK_FALSE(g->one_mod_four());
    CHECK(g->delta_sq() == 8);    // delta = 2*sqrt(2)
}

TEST_CASE("field rejects bad D") {
    CHECK_THROWS_AS(make_field(12), NotSquarefree);   // 4 | 12
    CHECK_THROWS_AS(make_field(18), NotSquarefree);   // 9 | 18
    CHECK_THROWS_AS(make_field(25), NotSquarefree);   // perfect square
    CHECK_THROWS_AS(make_field(1), OutOfRange);
    CHECK_THROWS_AS(make_field(-7), OutOfRange);
}

TEST_CASE("mixed fields rejected") {
    auto a = QuadInt(f73(), 1, 0);
    auto b = QuadInt(f2(), 1, 0);
    CHECK_THROWS_AS(a + b, MixedFields);
}

TEST_CASE("norm and trace in the omega basis, D = 1 mod 4") {
    auto f = f73();
    auto rho = el(f, 4, 1);
    auto rho_c = el(f, 5, -1);
    auto sig = el(f, 83, 22);
    auto sig_c = el(f, 105, -22);
    auto eps = el(f, 943, 250);

    CHECK(rho.norm() == 2);
    CHECK(rho_c.norm() == 2);
    CHECK(sig.norm() == 3);
    CHECK(sig_c.norm() == 3);
    CHECK(eps.norm() == -1);
    CHECK(eps.is_unit());
    CHECK_FALSE(rho.is_unit());

    CHECK(rho.conj() == rho_c);
    CHECK(sig.conj() == sig_c);
    CHECK(rho.trace() == 9);       // (9 + sqrt 73)/2 + (9 - sqrt 73)/2
}

TEST_CASE("products of the section 5 elements") {
    auto f = f73();
    auto rho = el(f, 4, 1);
    auto rho_c = el(f, 5, -1);
    auto sig = el(f, 83, 22);
    auto sig_c = el(f, 105, -22);
    auto eps = el(f, 943, 250);

    CHECK(rho * rho_c == el(f, 2, 0));             // norm 2
    CHECK(rho * sig == el(f, 728, 193));
    CHECK(rho_c * sig == el(f, 19, 5));
    CHECK(rho * sig_c == el(f, 24, -5));
    CHECK(rho_c * sig_c == el(f, 921, -193));
    CHECK(rho.pow_ui(2) == el(f, 34, 9));
    CHECK(eps * rho_c == el(f, 215, 57));
    CHECK((rho * sig).norm() == 6);

    // 2 rho' sigma - rho^2 = rho
    CHECK(el(f, 2, 0) * rho_c * sig - rho.pow_ui(2) == rho);
    // rho^2 sigma' - 1 = rho'
    CHECK(rho.pow_ui(2) * sig_c - el(f, 1, 0) == rho_c);
}

TEST_CASE("total positivity") {
    auto f = f73();
    CHECK(el(f, 4, 1).is_totally_positive());
    CHECK(el(f, 5, -1).is_totally_positive());
    CHECK(el(f, 83, 22).is_totally_positive());
    CHECK(el(f, 105, -22).is_totally_positive());
    CHECK_FALSE(el(f, 943, 250).is_totally_positive());  // unit of norm -1
    CHECK_FALSE(el(f, 0, 0).is_totally_positive());
    CHECK_FALSE(el(f, -1, 0).is_totally_positive());
    CHECK_FALSE(el(f, 0, 1).is_totally_positive());      // omega' < 0

    auto g = f2();
    CHECK(el(g, 2, 1).is_totally_positive());            // 2 + sqrt 2
    CHECK_FALSE(el(g, 1, 1).is_totally_positive());      // 1 - sqrt 2 < 0
}

TEST_CASE("content") {
    auto f = f73();
    CHECK(el(f, 4, 1).content() == 1);
    CHECK(el(f, 6, 4).content() == 2);
    CHECK(el(f, -6, -9).content() == 3);
    CHECK_THROWS_AS(el(f, 0, 0).content(), ZeroElement);
}

TEST_CASE("twice view round trip") {
    auto f = f73();
    auto rho = el(f, 4, 1);
    CHECK(rho.s_half() == 9);
    CHECK(rho.t_half() == 1);
    auto back = QuadInt::from_half_sqrt_basis(f, 9, 1);
    REQUIRE(back.has_value());
    CHECK(*back == rho);
    CHECK_FALSE(QuadInt::from_half_sqrt_basis(f, 9, 2).has_value());  // parity mismatch

    auto g = f2();
    auto a = el(g, 2, 1);
    CHECK(a.s_half() == 4);
    CHECK(a.t_half() == 2);
    CHECK_FALSE(QuadInt::from_half_sqrt_basis(g, 3, 1).has_value());  // half-integers only for 1 mod 4
}

TEST_CASE("from_sqrt_basis") {
    auto f = f73();
    // sigma = 94 + 11 sqrt 73 = (83, 22) in the omega basis
    CHECK(QuadInt::from_sqrt_basis(f, 94, 11) == el(f, 83, 22));
    CHECK(QuadInt::from_sqrt_basis(f, 1068, 125) == el(f, 943, 250));
}

TEST_CASE("div_exact") {
    auto f = f73();
    auto rho = el(f, 4, 1);
    auto sig = el(f, 83, 22);
    auto prod = rho * sig;
    auto q = prod.div_exact(rho);
    REQUIRE(q.has_value());
    CHECK(*q == sig);
    CHECK_FALSE(sig.div_exact(rho).has_value());
    CHECK_THROWS_AS(sig.div_exact(el(f, 0, 0)), ZeroElement);
}

TEST_CASE("norm multiplicativity and conj homomorphism, randomized") {
    std::mt19937_64 rng(20260823);
    std::uniform_int_distribution<long> coef(-50, 50);
    std::vector<long> ds = {2, 3, 5, 10, 13, 73, 199};
    for (long d : ds) {
        auto f = make_field(d);
        for (int it = 0; it < 200; it++) {
            auto a = el(f, coef(rng), coef(rng));
            auto b = el(f, coef(rng), coef(rng));
            CHECK((a * b).norm() == a.norm() * b.norm());
            CHECK((a * b).conj() == a.conj() * b.conj());
            CHECK((a + b).conj() == a.conj() + b.conj());
            CHECK(mpq_class(a.norm()) == a.emb(0).norm_q());
            CHECK(a * a.conj() == QuadInt(f, a.norm(), 0));
        }
    }
}

TEST_CASE("superadditivity of norms on totally positive pairs") {
    // restatement of the two-embedding AM-GM argument:
    // t := trace(a * conj(b)) satisfies t >= 0 and t^2 >= 4 N(a) N(b)
    std::mt19937_64 rng(424242);
    std::uniform_int_distribution<long> coef(0, 60);
    for (long d : {2L, 7L, 73L}) {
        auto f = make_field(d);
        int seen = 0;
        while (seen < 300) {
            auto a = el(f, coef(rng), coef(rng) % 13 - 6);
            auto b = el(f, coef(rng), coef(rng) % 13 - 6);
            if (!a.is_totally_positive() || !b.is_totally_positive()) continue;
            seen++;
            mpz_class t = (a * b.conj()).trace();
            CHECK(t >= 0);
            CHECK(t * t >= 4 * a.norm() * b.norm());
            CHECK((a + b).norm() >= a.norm() + b.norm());
        }
    }
}

TEST_CASE("totally positive non-rational elements with a > a' exceed delta") {
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<long> coef(-80, 80);
    for (long d : {2L, 5L, 73L, 102L}) {
        auto f = make_field(d);
        int seen = 0;
        while (seen < 300) {
            auto a = el(f, coef(rng), coef(rng));
            if (!a.is_totally_positive() || a.is_rational()) continue;
            if (a.t_half() <= 0) continue;  // a > a'  <=>  positive sqrt coefficient
            seen++;
            // both sides positive, so compare squares: a^2 > delta^2
            auto e1 = a.emb(0);
            CHECK((e1 * e1 - QuadRat(f, mpq_class(f->delta_sq()), 0)).sign() > 0);
        }
    }
}

TEST_CASE("QuadRat exact comparisons and floor") {
    auto f = f73();
    QuadRat w(f, mpq_class(1, 2), mpq_class(1, 2));  // omega
    CHECK(w.sign() > 0);
    CHECK(w.floor() == 4);
    CHECK(w.ceil() == 5);
    QuadRat wc = w.conj();
    CHECK(wc.sign() < 0);
    CHECK(wc.floor() == -4);
    CHECK(wc.ceil() == -3);

    QuadRat tiny(f, -17, 2);  // 2 sqrt 73 - 17 = 0.088...
    CHECK(tiny.sign() > 0);
    CHECK(tiny.floor() == 0);
    QuadRat neg = -tiny;
    CHECK(neg.sign() < 0);
    CHECK(neg.ceil() == 0);
    CHECK(neg.floor() == -1);
    CHECK(tiny.round_nearest() == 0);
}

TEST_CASE("QuadRat floor agrees with rational squeeze on random inputs") {
    std::mt19937_64 rng(5150);
    std::uniform_int_distribution<long> num(-300, 300);
    std::uniform_int_distribution<long> den(1, 40);
    for (long d : {2L, 73L, 311L}) {
        auto f = make_field(d);
        for (int it = 0; it < 400; it++) {
            QuadRat v(f, mpq_class(num(rng), den(rng)), mpq_class(num(rng), den(rng)));
            mpz_class fl = v.floor();
            // fl <= v < fl + 1 via exact sign tests
            CHECK((v - QuadRat(f, mpq_class(fl), 0)).sign() >= 0);
            CHECK((v - QuadRat(f, mpq_class(fl + 1), 0)).sign() < 0);
            // outer bounds really bracket the value
            CHECK(v.lower() <= v.upper());
            CHECK((v - QuadRat(f, v.lower(), 0)).sign() >= 0);
            CHECK((QuadRat(f, v.upper(), 0) - v).sign() >= 0);
        }
    }
}

TEST_CASE("QuadRat division and to_integral") {
    auto f = f73();
    auto rho = el(f, 4, 1);
    auto sig = el(f, 83, 22);
    QuadRat ratio = QuadRat::of(rho * sig) / QuadRat::of(sig);
    auto back = ratio.to_integral();
    REQUIRE(back.has_value());
    CHECK(*back == rho);

    QuadRat half(f, mpq_class(1, 2), 0);
    CHECK_FALSE(half.to_integral().has_value());
    // omega = (1 + sqrt 73)/2 is integral
    QuadRat w(f, mpq_class(1, 2), mpq_class(1, 2));
    auto wi = w.to_integral();
    REQUIRE(wi.has_value());
    CHECK(*wi == el(f, 0, 1));
}

TEST_CASE("isqrt and rational square helpers") {
    CHECK(isqrt(mpz_class(0)) == 0);
    CHECK(isqrt(mpz_class(15)) == 3);
    CHECK(isqrt(mpz_class(16)) == 4);
    mpq_class root;
    CHECK(mpq_is_square(mpq_class(49, 4), &root));
    CHECK(root == mpq_class(7, 2));
    CHECK_FALSE(mpq_is_square(mpq_class(8, 9), nullptr));
    CHECK(mpq_is_square(mpq_class(0), &root));
    CHECK(root == 0);
}

TEST_CASE("canonical ordering") {
    auto f = f73();
    CHECK(el(f, 3, 0).canonical_less(el(f, 4, 0)));
    CHECK(el(f, 9, 1).canonical_less(el(f, 0, 2)));
    CHECK_FALSE(el(f, 0, 2).canonical_less(el(f, 0, 2)));
}
