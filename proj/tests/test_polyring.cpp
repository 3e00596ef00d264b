#include <doctest.h>

#include "birat/linalg.hpp"
#include "birat/polynomial.hpp"
#include "birat/qseq.hpp"

#include <random>

using namespace birat;

namespace {

RatCtx Q;

PolyQ pq(const std::string& s, const VarSetPtr& vs) { return parse_polynomial<mpq_class>(s, vs, Q); }

PolyQ random_poly(const VarSetPtr& vs, std::mt19937_64& rng, int max_deg = 3, int max_terms = 5) {
    std::uniform_int_distribution<int> nt(1, max_terms), coef(-4, 4), ex(0, max_deg);
    std::vector<PolyQ::Term> terms;
    int count = nt(rng);
    for (int t = 0; t < count; ++t) {
        Monomial m(vs->size());
        int budget = max_deg;
        for (std::size_t i = 0; i < vs->size(); ++i) {
            int e = std::min(budget, ex(rng) % (max_deg + 1));
            m[i] = e;
            budget -= e;
        }
        terms.emplace_back(m, mpq_class(coef(rng)));
    }
    return PolyQ::from_terms(vs, Q, std::move(terms));
}

} // namespace

TEST_CASE("ring arithmetic matches hand results") {
    auto vs = VariableSet::make({"x", "y"});
    CHECK(pq("x + y", vs) * pq("x - y", vs) == pq("x^2 - y^2", vs));
    auto p = pq("3*x^2 - 2*y + 1/2", vs);
    CHECK(p + PolyQ::zero(vs, Q) == p);
    // cancellation lands on canonical zero
    auto z = pq("x - y", vs) * pq("x + y", vs) - pq("x^2 - y^2", vs);
    CHECK(z.is_zero());
    CHECK(z.format() == "0");
}

TEST_CASE("ring axioms on random triples") {
    auto vs = VariableSet::make({"x", "y", "z"});
    std::mt19937_64 rng(12);
    for (int i = 0; i < 40; ++i) {
        auto a = random_poly(vs, rng), b = random_poly(vs, rng), c = random_poly(vs, rng);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a * b == b * a);
        CHECK((a - a).is_zero());
    }
}

TEST_CASE("evaluate") {
    auto vs = VariableSet::make({"x", "y", "z"});
    auto conic = pq("x*z - y^2", vs);
    std::vector<mpq_class> p1{1, 1, 1}, p2{1, 2, 3};
    CHECK(conic.evaluate(p1) == 0);
    CHECK(conic.evaluate(p2) == -1);
    std::mt19937_64 rng(5);
    for (int i = 0; i < 20; ++i) {
        auto p = random_poly(vs, rng);
        std::vector<mpq_class> zero{0, 0, 0};
        CHECK(p.evaluate(zero) == p.constant_value());
    }
}

TEST_CASE("evaluate is a ring homomorphism") {
    auto vs = VariableSet::make({"x", "y"});
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> v(-5, 5);
    for (int i = 0; i < 30; ++i) {
        auto p = random_poly(vs, rng), q = random_poly(vs, rng);
        std::vector<mpq_class> pt{v(rng), v(rng)};
        CHECK((p * q).evaluate(pt) == p.evaluate(pt) * q.evaluate(pt));
        CHECK((p + q).evaluate(pt) == p.evaluate(pt) + q.evaluate(pt));
    }
}

TEST_CASE("differentiate: the chart derivatives of the conic example") {
    auto vs = VariableSet::make({"x", "y", "u"});
    CHECK(pq("x - y*u", vs).differentiate(2) == pq("y", vs).scaled(-1));
    CHECK(pq("y - u", vs).differentiate(2) == PolyQ::constant(vs, Q, -1));
    CHECK(pq("x - y^2", vs).differentiate(2).is_zero());
}

TEST_CASE("differentiate is linear and Leibniz") {
    auto vs = VariableSet::make({"x", "y"});
    std::mt19937_64 rng(9);
    for (int i = 0; i < 30; ++i) {
        auto p = random_poly(vs, rng), q = random_poly(vs, rng);
        for (int v = 0; v < 2; ++v) {
            CHECK((p + q).differentiate(v) == p.differentiate(v) + q.differentiate(v));
            CHECK((p * q).differentiate(v) ==
                  p.differentiate(v) * q + p * q.differentiate(v));
        }
    }
}

TEST_CASE("differentiate over F_p follows characteristic-p rules") {
    GFpCtx F5(5);
    auto vs = VariableSet::make({"x"});
    auto x5 = Polynomial<GFp>::variable(vs, F5, 0, 5);
    CHECK(x5.differentiate(0).is_zero());
    auto x3 = Polynomial<GFp>::variable(vs, F5, 0, 3);
    CHECK(x3.differentiate(0) == Polynomial<GFp>::variable(vs, F5, 0, 2).scaled(F5.from_long(3)));
}

TEST_CASE("homogenize and dehomogenize") {
    auto vs = VariableSet::make({"x0", "x1", "x2"});
    auto affine = pq("x2 - x1^2", vs);
    CHECK(affine.homogenize(0) == pq("x0*x2 - x1^2", vs));
    CHECK(pq("x0*x2 - x1^2", vs).dehomogenize(0) == affine);
    CHECK(PolyQ::one(vs, Q).homogenize(0) == PolyQ::one(vs, Q));
    std::mt19937_64 rng(4);
    auto vs2 = VariableSet::make({"h", "x", "y"});
    for (int i = 0; i < 20; ++i) {
        auto tail = random_poly(VariableSet::make({"x", "y"}), rng);
        auto p = tail.lift(vs2, Q, {1, 2});
        CHECK(p.homogenize(0).is_homogeneous());
        CHECK(p.homogenize(0).dehomogenize(0) == p);
    }
}

TEST_CASE("parse and format") {
    auto vs = VariableSet::make({"x0", "x1", "x2"});
    auto conic = pq("x0^2*x2 - x1^2", vs);
    CHECK(conic.format() == "x0^2*x2 - x1^2");
    CHECK(pq("3/2*x1 + x2", vs).terms().size() == 2);
    CHECK_THROWS_AS(pq("x1 +", vs), ParseError);
    CHECK_THROWS_AS(pq("w + 1", vs), ParseError);
    CHECK_THROWS_AS(pq("2x1", vs), ParseError); // juxtaposition is not a product

    std::mt19937_64 rng(31);
    for (int i = 0; i < 40; ++i) {
        auto p = random_poly(vs, rng);
        CHECK(parse_polynomial<mpq_class>(p.format(), vs, Q) == p);
        CHECK(parse_polynomial<mpq_class>(p.format(), vs, Q).format() == p.format());
    }
}

TEST_CASE("parse over F_p handles rational literals") {
    GFpCtx F7(7);
    auto vs = VariableSet::make({"x"});
    auto p = parse_polynomial<GFp>("3/2*x", vs, F7);
    // 3/2 = 3 * 4 = 5 mod 7
    CHECK(p == Polynomial<GFp>::variable(vs, F7, 0).scaled(F7.from_long(5)));
    CHECK_THROWS_AS(parse_polynomial<GFp>("1/7*x", vs, F7), InputError);
}

TEST_CASE("substitution") {
    auto vs = VariableSet::make({"x", "y"});
    auto p = pq("x^2 + y", vs);
    auto r = p.substitute({{0, pq("y + 1", vs)}});
    CHECK(r == pq("y^2 + 3*y + 1", vs));
    CHECK(p.substitute_values({{0, mpq_class(2)}}) == pq("y + 4", vs));
}

TEST_CASE("exact linear solving") {
    LinearSystem<mpq_class> sys(Q, 3);
    sys.add_row({{0, 1}, {1, 1}}, 3);
    sys.add_row({{1, 2}, {2, 1}}, 4);
    sys.add_row({{0, 1}, {1, -1}, {2, 1}}, 1);
    REQUIRE(sys.consistent());
    auto x = sys.particular_solution();
    REQUIRE(x.has_value());
    CHECK((*x)[0] + (*x)[1] == 3);
    CHECK(2 * (*x)[1] + (*x)[2] == 4);
    CHECK((*x)[0] - (*x)[1] + (*x)[2] == 1);

    LinearSystem<mpq_class> bad(Q, 2);
    bad.add_row({{0, 1}, {1, 1}}, 1);
    bad.add_row({{0, 2}, {1, 2}}, 3);
    CHECK_FALSE(bad.consistent());

    LinearSystem<mpq_class> ns(Q, 3);
    ns.add_row({{0, 1}, {1, 1}, {2, 1}}, 0);
    auto basis = ns.nullspace_basis();
    CHECK(basis.size() == 2);
    for (const auto& v : basis) CHECK(v[0] + v[1] + v[2] == 0);
}

TEST_CASE("q sequence") {
    CHECK(q_sequence(0, 17) == 1);
    CHECK(q_sequence(1, 3) == 4);
    CHECK(q_sequence(2, 2) == 6);
    for (int m = 0; m < 5; ++m) CHECK(q_sequence(m, 0) == 1);
    CHECK(monoid_h0_bound(3, 2, 2) == 18);
}

TEST_CASE("q_m is a degree-m polynomial with leading coefficient 1/m!") {
    // finite differences: m-th difference of q_m must be constantly 1
    for (int m = 1; m <= 4; ++m) {
        std::vector<mpz_class> vals;
        for (int d = 0; d <= m + 3; ++d) vals.push_back(q_sequence(m, d));
        for (int level = 0; level < m; ++level) {
            std::vector<mpz_class> next;
            for (std::size_t i = 0; i + 1 < vals.size(); ++i) next.push_back(vals[i + 1] - vals[i]);
            vals = next;
        }
        for (const auto& v : vals) CHECK(v == 1);
    }
}
