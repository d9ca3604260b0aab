#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <uqf/escalation.hpp>
#include <uqf/family.hpp>

#include <random>

using namespace uqf;

namespace {

const Field& f73() {
    static Field f = make_field(73);
    return f;
}

QuadInt el(const Field& f, long x, long y) { return QuadInt(f, x, y); }

QuadInt one() { return el(f73(), 1, 0); }
QuadInt two() { return el(f73(), 2, 0); }
QuadInt rho() { return el(f73(), 4, 1); }
QuadInt rho_c() { return el(f73(), 5, -1); }
QuadInt sigma() { return el(f73(), 83, 22); }
QuadInt sigma_c() { return el(f73(), 105, -22); }
QuadInt eps73() { return el(f73(), 943, 250); }

std::vector<QuadInt> paper_queue() {
    return {one(),     rho(),           sigma(),         rho_c(),
            sigma_c(), two(),           rho_c() * sigma(), rho() * sigma()};
}

}  // namespace

TEST_CASE("gram_det: anchors") {
    const Field& f = f73();
    CHECK(gram_det(f, {{rho(), one()}, {one(), rho_c()}}) == one());
    // 2 rho'^2 sigma - 2 rho - 2 = 0
    CHECK(gram_det(f, {{rho_c(), one(), el(f, 0, 0)},
                       {one(), rho_c() * sigma(), rho()},
                       {el(f, 0, 0), rho(), two()}}) == el(f, 0, 0));
    // zero pivot forces a row swap
    CHECK(gram_det(f, {{el(f, 0, 0), one()}, {one(), el(f, 0, 0)}}) == el(f, -1, 0));
}

TEST_CASE("make_lattice: acceptance and rejection") {
    const Field& f = f73();
    auto lat = make_lattice({{rho(), one()}, {one(), rho_c()}});
    CHECK(lat.n == 2);
    CHECK(lat.at(0, 1) == one());

    // determinant rho' sigma - rho has a negative second embedding
    CHECK_THROWS_AS(make_lattice({{rho(), one(), el(f, 0, 0)},
                                  {one(), rho_c(), one()},
                                  {el(f, 0, 0), one(), rho_c() * sigma()}}),
                    NotTotallyPositiveDefinite);
    // determinant exactly zero
    CHECK_THROWS_AS(make_lattice({{rho_c(), one(), el(f, 0, 0)},
                                  {one(), rho_c() * sigma(), rho()},
                                  {el(f, 0, 0), rho(), two()}}),
                    NotTotallyPositiveDefinite);
    CHECK_THROWS_AS(make_lattice({{one(), rho()}, {sigma(), two()}}), NotSymmetric);
    CHECK_THROWS_AS(make_lattice({{one(), rho()}}), NotSymmetric);
    CHECK_THROWS_AS(make_lattice({}), OutOfRange);

    Field g = make_field(5);
    CHECK_THROWS_AS(make_lattice({{one(), el(f, 0, 0)}, {el(f, 0, 0), el(g, 1, 0)}}),
                    MixedFields);

    auto diag = diagonal_lattice(f, {one(), rho(), sigma()});
    CHECK(diag.n == 3);
    CHECK(diag.at(1, 1) == rho());
    CHECK(diag.at(0, 2).is_zero());
}

TEST_CASE("represents: anchors") {
    const Field& f = f73();
    auto unit = diagonal_lattice(f, {one()});
    auto r = represents(unit, one());
    REQUIRE(r);
    CHECK(*r == std::vector<QuadInt>{one()});

    CHECK_FALSE(represents(unit, rho()));  // rho is not a square

    auto l3 = diagonal_lattice(f, {one(), rho(), sigma()});
    CHECK_FALSE(represents(l3, rho_c()));
    CHECK(represents(l3, sigma()));

    auto cross = make_lattice({{one(), one()}, {one(), two()}});
    auto r2 = represents(cross, two());
    REQUIRE(r2);
    CHECK(*r2 == std::vector<QuadInt>{el(f, 0, 0), one()});

    // target zero: positive definiteness leaves only the origin
    auto z = represents(cross, el(f, 0, 0));
    REQUIRE(z);
    CHECK((*z)[0].is_zero());
    CHECK((*z)[1].is_zero());

    CHECK_THROWS_AS(represents(unit, -one()), NotTotallyPositive);
}

TEST_CASE("truant: anchors") {
    const Field& f = f73();
    auto unit = diagonal_lattice(f, {one()});
    auto t = truant(unit, paper_queue());
    REQUIRE(t);
    CHECK(*t == rho());

    auto l5 = diagonal_lattice(f, {one(), rho(), sigma(), rho_c(), sigma_c()});
    auto t5 = truant(l5, paper_queue());
    REQUIRE(t5);
    CHECK(*t5 == two());

    CHECK_FALSE(truant(unit, {}));
    CHECK_FALSE(truant(unit, {one(), el(f, 4, 0)}));
}

TEST_CASE("escalate: forced diagonal step") {
    const Field& f = f73();
    auto unit = diagonal_lattice(f, {one()});
    auto exts = escalate(unit, rho());
    REQUIRE(exts.size() == 1);
    CHECK(exts[0].at(0, 1).is_zero());
    CHECK(exts[0].at(1, 1) == rho());

    CHECK_THROWS_AS(escalate(unit, el(f, 4, 0)), AlreadyRepresented);
}

TEST_CASE("escalate: cross entries up to sign") {
    const Field& f = f73();
    // cross entry against rho lands in {0, 1} once signs are canonical
    auto parent = diagonal_lattice(f, {one(), sigma(), rho()});
    auto exts = escalate(parent, rho_c());
    REQUIRE(exts.size() == 2);
    CHECK(exts[0].at(0, 3).is_zero());
    CHECK(exts[0].at(1, 3).is_zero());
    CHECK(exts[0].at(2, 3).is_zero());
    CHECK(exts[1].at(0, 3).is_zero());
    CHECK(exts[1].at(1, 3).is_zero());
    CHECK(exts[1].at(2, 3) == one());
    for (const auto& ext : exts) {
        CHECK(ext.at(3, 3) == rho_c());
        CHECK(represents(ext, rho_c()));
    }

    auto l5 = diagonal_lattice(f, {one(), rho(), sigma(), rho_c(), sigma_c()});
    auto by2 = escalate(l5, two());
    REQUIRE(by2.size() == 2);
    // only the entry against the 1 can be nonzero, and it is 0 or 1
    for (std::size_t i = 1; i < 5; ++i) {
        CHECK(by2[0].at(i, 5).is_zero());
        CHECK(by2[1].at(i, 5).is_zero());
    }
    CHECK(by2[0].at(0, 5).is_zero());
    CHECK(by2[1].at(0, 5) == one());
}

TEST_CASE("lower_bound_search: anchors and validation") {
    const Field& f = f73();
    auto single = lower_bound_search(f, {one()}, 8);
    CHECK(single.bound == 1);
    CHECK(single.exhaustive);

    auto three = lower_bound_search(f, {one(), rho(), sigma()}, 8);
    CHECK(three.bound == 3);

    // the first levels of the full climb are forced: 1, rho, sigma diagonal,
    // then the rho' step opens a second branch
    auto four = lower_bound_search(f, paper_queue(), 4);
    CHECK(four.bound == 4);
    CHECK(four.exhaustive);
    CHECK(four.tree_summary == std::vector<long>{1, 1, 1, 1, 2});
    REQUIRE(four.levels.size() == 5);
    CHECK(four.levels[3][0].lattice.at(2, 2) == sigma());
    CHECK(four.levels[4][0].added_target == rho_c());

    CHECK_THROWS_AS(lower_bound_search(f, {}, 8), QueueInvalid);
    CHECK_THROWS_AS(lower_bound_search(f, {rho()}, 8), QueueInvalid);
    CHECK_THROWS_AS(lower_bound_search(f, {one(), rho(), rho()}, 8), QueueInvalid);
    CHECK_THROWS_AS(lower_bound_search(f, {one(), -rho()}, 8), QueueInvalid);
    CHECK_THROWS_AS(lower_bound_search(f, {one()}, 0), OutOfRange);
}

TEST_CASE("lower_bound_search: certificate set escalates diagonally") {
    auto inst = instantiate(2, 7, 1);
    REQUIRE(inst.d == 42195);
    auto elems = build_candidate_set(inst, WindowMode::direct);
    REQUIRE(elems.size() == 3);
    const Field& f = elems[0].field();
    auto rb = lower_bound_search(f, elems, 3);
    CHECK(rb.bound == 3);
    CHECK(rb.exhaustive);
    for (const auto& level : rb.levels)
        for (const auto& node : level) {
            CHECK(level.size() == 1);  // no branching anywhere
            for (const auto& c : node.cross_vector) CHECK(c.is_zero());
        }
}

TEST_CASE("diagonal_lower_bound: anchors") {
    const Field& f = f73();
    CHECK(diagonal_lower_bound(f, {one(), rho()}) == 2);
    CHECK(diagonal_lower_bound(f, {one(), rho(), rho() * eps73() * eps73()}) == 2);

    std::vector<QuadInt> ten = {one(),
                                two(),
                                rho(),
                                rho_c(),
                                sigma(),
                                sigma_c(),
                                rho() * sigma(),
                                rho() * sigma_c(),
                                rho_c() * sigma(),
                                rho_c() * sigma_c()};
    CHECK(diagonal_lower_bound(f, ten) == 10);

    CHECK_THROWS_AS(diagonal_lower_bound(f, {-one()}), NotTotallyPositive);
}

TEST_CASE("represents: bounded search misses nothing (random lattices)") {
    Field f = make_field(13);
    std::mt19937 rng(20240817);
    std::uniform_int_distribution<long> coef(-2, 3);
    auto rand_el = [&]() { return el(f, coef(rng), coef(rng)); };

    std::vector<QuadInt> targets = {el(f, 1, 0), el(f, 2, 0), el(f, 3, 1), el(f, 4, 0),
                                    el(f, 5, 1)};
    int lattices_checked = 0;
    while (lattices_checked < 12) {
        QuadInt a = rand_el(), b = rand_el(), c = rand_el();
        GramLattice lat;
        try {
            lat = make_lattice({{a, c}, {c, b}});
        } catch (const InputError&) {
            continue;
        }
        ++lattices_checked;
        for (const auto& t : targets) {
            auto found = represents(lat, t);
            // brute force over a generous coordinate box
            bool brute = false;
            for (long x1 = -6; x1 <= 6 && !brute; ++x1)
                for (long y1 = -6; y1 <= 6 && !brute; ++y1)
                    for (long x2 = -6; x2 <= 6 && !brute; ++x2)
                        for (long y2 = -6; y2 <= 6 && !brute; ++y2) {
                            QuadInt v1 = el(f, x1, y1), v2 = el(f, x2, y2);
                            QuadInt w = a * v1 * v1 + c * v1 * v2 + c * v1 * v2 +
                                        b * v2 * v2;
                            brute = w == t;
                        }
            if (brute) CHECK(found);
            if (found) {
                // solutions are verified internally; just confirm shape
                CHECK(found->size() == 2);
            }
        }
    }
}

TEST_CASE("make_lattice: accepted forms take totally positive values") {
    Field f = make_field(13);
    std::mt19937 rng(5252);
    std::uniform_int_distribution<long> coef(-2, 3);
    std::uniform_int_distribution<long> pt(-4, 4);
    int accepted = 0;
    while (accepted < 8) {
        QuadInt a = QuadInt(f, coef(rng), coef(rng)), b = QuadInt(f, coef(rng), coef(rng)),
                c = QuadInt(f, coef(rng), coef(rng));
        GramLattice lat;
        try {
            lat = make_lattice({{a, c}, {c, b}});
        } catch (const InputError&) {
            continue;
        }
        ++accepted;
        for (int k = 0; k < 40; ++k) {
            QuadInt v1 = QuadInt(f, pt(rng), pt(rng)), v2 = QuadInt(f, pt(rng), pt(rng));
            if (v1.is_zero() && v2.is_zero()) continue;
            QuadInt w = a * v1 * v1 + c * v1 * v2 + c * v1 * v2 + b * v2 * v2;
            CHECK(w.is_totally_positive());
        }
    }
}
