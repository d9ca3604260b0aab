#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <uqf/factor.hpp>

using namespace uqf;

static mpz_class Z(const char* s) { return mpz_class(s); }

TEST_CASE("small_primes basic") {
    const auto& ps = small_primes(100);
    REQUIRE(ps.size() >= 25);
    CHECK(ps[0] == 2);
    CHECK(ps[24] == 97);
}

TEST_CASE("probably_prime on knowns") {
    CHECK(probably_prime(2));
    CHECK(probably_prime(Z("2305843009213693951")));  // 2^61 - 1
    CHECK_FALSE(probably_prime(1));
    CHECK_FALSE(probably_prime(Z("2305843009213693953")));
}

TEST_CASE("factorize small") {
    auto f = factorize(360);
    REQUIRE(f.complete);
    REQUIRE(f.terms.size() == 3);
    CHECK(f.terms[0].base == 2);
    CHECK(f.terms[0].exp == 3);
    CHECK(f.terms[1].base == 3);
    CHECK(f.terms[1].exp == 2);
    CHECK(f.terms[2].base == 5);
    CHECK(f.terms[2].exp == 1);
    CHECK(f.product_matches());
}

TEST_CASE("factorize negative keeps sign in n, factors absolute value") {
    auto f = factorize(-50);
    CHECK(f.complete);
    CHECK(f.product_matches());
    CHECK(f.terms.size() == 2);
}

TEST_CASE("factorize semiprime beyond trial range") {
    // 1000003 * 1000033, both prime, both > default trial bound
    auto f = factorize(Z("1000036000099"));
    REQUIRE(f.complete);
    REQUIRE(f.terms.size() == 2);
    CHECK(f.terms[0].base == 1000003);
    CHECK(f.terms[1].base == 1000033);
    CHECK(f.terms[0].certified_prime);
}

TEST_CASE("factorize perfect power") {
    mpz_class p("1000003");
    auto f = factorize(p * p * p);
    REQUIRE(f.complete);
    REQUIRE(f.terms.size() == 1);
    CHECK(f.terms[0].base == p);
    CHECK(f.terms[0].exp == 3);
}

TEST_CASE("is_squarefree verdicts") {
    CHECK(is_squarefree(1) == Tri::yes);
    CHECK(is_squarefree(50) == Tri::no);
    CHECK(is_squarefree(4757) == Tri::yes);  // 67 * 71
    CHECK(is_squarefree(73) == Tri::yes);
    CHECK(is_squarefree(180) == Tri::no);
    CHECK(is_squarefree(Z("3000018000027")) == Tri::no);  // 3 * 1000003^2
}

TEST_CASE("is_squarefree large squarefree semiprime") {
    CHECK(is_squarefree(Z("1000036000099")) == Tri::yes);
}

TEST_CASE("is_squarefree detects square of large prime") {
    mpz_class p("99999999977");
    CHECK(is_squarefree(p * p) == Tri::no);
    CHECK(is_squarefree(p * p * 3) == Tri::no);
}

TEST_CASE("unresolved when effort is tiny") {
    // product of two 40-digit primes cannot crack with a crippled budget
    mpz_class a("1000000000000000000000000000000000000253");
    mpz_class b("1000000000000000000000000000000000000273");
    FactorEffort weak;
    weak.trial_bound = 100;
    weak.rho_iterations = 10;
    auto f = factorize(a * b, weak);
    CHECK_FALSE(f.complete);
    CHECK(is_squarefree(a * b, weak) == Tri::unknown);
}

TEST_CASE("squarefree_status flags uncertified perfect square as no") {
    mpz_class a("1000000000000000000000000000000000000253");
    FactorEffort weak;
    weak.trial_bound = 100;
    weak.rho_iterations = 10;
    auto f = factorize(a * a, weak);
    CHECK(squarefree_status(f) == Tri::no);
}

TEST_CASE("effort scaling") {
    FactorEffort e;
    auto half = e.scaled(0.5);
    CHECK(half.trial_bound == e.trial_bound / 2);
    CHECK(half.rho_iterations == e.rho_iterations / 2);
    auto twice = e.scaled(2.0);
    CHECK(twice.trial_bound == e.trial_bound * 2);
}

TEST_CASE("factorize zero throws") {
    CHECK_THROWS_AS(factorize(0), ZeroInput);
}

TEST_CASE("factorization agrees with direct multiplication on a sweep") {
    for (int n = 2; n <= 2000; n++) {
        auto f = factorize(n);
        REQUIRE(f.complete);
        CHECK(f.product_matches());
        // cross-check squarefree against the obvious divisibility test
        bool sf = true;
        for (int d = 2; d * d <= n; d++)
            if (n % (d * d) == 0) { sf = false; break; }
        CHECK((is_squarefree(n) == Tri::yes) == sf);
    }
}
