#include <doctest.h>

#include "birat/groebner.hpp"
#include "birat/linalg.hpp"

#include <algorithm>
#include <random>

using namespace birat;

namespace {

RatCtx Q;

PolyQ pq(const std::string& s, const VarSetPtr& vs) { return parse_polynomial<mpq_class>(s, vs, Q); }

IdealQ ideal(const VarSetPtr& vs, const std::vector<std::string>& gens) {
    std::vector<PolyQ> ps;
    for (const auto& g : gens) ps.push_back(pq(g, vs));
    return IdealQ(vs, Q, std::move(ps));
}

PolyQ random_poly(const VarSetPtr& vs, std::mt19937_64& rng, int max_deg = 3, int max_terms = 4) {
    std::uniform_int_distribution<int> nt(1, max_terms), coef(-3, 3), ex(0, max_deg);
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

// Test-side oracle, independent of the Groebner path: decide whether
// p = sum q_i g_i is solvable with deg q_i <= D by exact linear algebra.
bool linear_membership_oracle(const PolyQ& p, const std::vector<PolyQ>& gens, int D) {
    const auto& vs = p.varset();
    std::vector<Monomial> monos;
    {
        std::vector<int> e(vs->size(), 0);
        std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
            if (i == vs->size()) {
                monos.emplace_back(e);
                return;
            }
            for (int k = 0; k <= left; ++k) {
                e[i] = k;
                rec(i + 1, left - k);
            }
            e[i] = 0;
        };
        rec(0, D);
    }
    // columns: one block of |monos| unknowns per generator
    std::map<Monomial, std::map<int, mpq_class>, bool (*)(const Monomial&, const Monomial&)>
        rows(grevlex_less);
    int col = 0;
    for (const auto& g : gens) {
        for (const auto& m : monos) {
            for (const auto& [gm, gc] : g.terms()) rows[gm * m][col] += gc;
            ++col;
        }
    }
    LinearSystem<mpq_class> sys(Q, col);
    std::map<Monomial, mpq_class, bool (*)(const Monomial&, const Monomial&)> rhs(grevlex_less);
    for (const auto& [m, c] : p.terms()) rhs[m] = c;
    std::set<std::vector<int>> all;
    for (const auto& [m, r] : rows) all.insert(m.exps());
    for (const auto& [m, c] : rhs) all.insert(m.exps());
    for (const auto& e : all) {
        Monomial m(e);
        std::map<int, mpq_class> row;
        auto it = rows.find(m);
        if (it != rows.end()) row = it->second;
        auto rt = rhs.find(m);
        sys.add_row(std::move(row), rt == rhs.end() ? mpq_class(0) : rt->second);
    }
    return sys.consistent();
}

} // namespace

TEST_CASE("single generator is its own reduced basis") {
    auto vs = VariableSet::make({"x", "y"});
    auto I = ideal(vs, {"x - y"});
    auto rep = I.groebner(MonomialOrder::lex());
    REQUIRE(rep.basis.size() == 1);
    CHECK(rep.basis[0] == pq("x - y", vs));
}

TEST_CASE("hand Buchberger trace: {x^2 - y, y^2} under lex") {
    // S(x^2-y, y^2) = y^3 = y * y^2 reduces to zero, so the pair is
    // already a basis after reduction.
    auto vs = VariableSet::make({"x", "y"});
    auto I = ideal(vs, {"x^2 - y", "y^2"});
    auto rep = I.groebner(MonomialOrder::lex());
    REQUIRE(rep.basis.size() == 2);
    CHECK(rep.basis[0] == pq("y^2", vs));
    CHECK(rep.basis[1] == pq("x^2 - y", vs));
}

TEST_CASE("unit ideal collapses to {1}") {
    auto vs = VariableSet::make({"x"});
    auto I = ideal(vs, {"x", "1 - x"});
    auto rep = I.groebner(MonomialOrder::grevlex());
    REQUIRE(rep.basis.size() == 1);
    CHECK(rep.basis[0] == PolyQ::one(vs, Q));
    CHECK(is_inconsistent(I));
    CHECK_FALSE(is_inconsistent(ideal(vs, {"x - 1"})));
}

TEST_CASE("chart-emptiness pattern from the proof") {
    // oracle: substituting x = 0 forces 1 = 0
    auto vs = VariableSet::make({"x", "y", "z", "t"});
    CHECK(is_inconsistent(ideal(vs, {"x*z - y^2", "1 - t*x", "x"})));
}

TEST_CASE("normal form") {
    auto vs = VariableSet::make({"x", "y"});
    auto I = ideal(vs, {"x - y"});
    CHECK(normal_form(pq("x^2 - y^2", vs), I).is_zero());
    CHECK(normal_form(pq("x", vs), I, MonomialOrder::lex()) == pq("y", vs));
    std::mt19937_64 rng(21);
    for (int i = 0; i < 20; ++i) {
        auto p = random_poly(vs, rng);
        auto n1 = normal_form(p, I);
        CHECK(normal_form(n1, I) == n1);
    }
}

TEST_CASE("normal form is linear") {
    auto vs = VariableSet::make({"x", "y", "z"});
    auto I = ideal(vs, {"x^2 - z", "x*y - 1"});
    std::mt19937_64 rng(33);
    std::uniform_int_distribution<int> sc(-4, 4);
    for (int i = 0; i < 20; ++i) {
        auto p = random_poly(vs, rng), q = random_poly(vs, rng);
        mpq_class a(sc(rng)), b(sc(rng));
        CHECK(normal_form(p.scaled(a) + q.scaled(b), I) ==
              normal_form(p, I).scaled(a) + normal_form(q, I).scaled(b));
    }
}

TEST_CASE("ideal membership") {
    auto vs = VariableSet::make({"x", "y"});
    CHECK(ideal_membership(pq("x^2 - y^2", vs), ideal(vs, {"x - y"})));
    CHECK_FALSE(ideal_membership(pq("x", vs), ideal(vs, {"x^2"})));
    std::mt19937_64 rng(8);
    auto I = ideal(vs, {"x^2 - y", "x*y - x"});
    for (int i = 0; i < 20; ++i) {
        auto combo = random_poly(vs, rng) * I.generators()[0] +
                     random_poly(vs, rng) * I.generators()[1];
        CHECK(ideal_membership(combo, I));
    }
}

TEST_CASE("membership agrees with the linear-algebra oracle") {
    auto vs = VariableSet::make({"x", "y", "z"});
    std::mt19937_64 rng(55);
    int members = 0, nonmembers = 0;
    for (int i = 0; i < 25; ++i) {
        std::vector<PolyQ> gens{random_poly(vs, rng, 2), random_poly(vs, rng, 2)};
        if (gens[0].is_zero() || gens[1].is_zero()) continue;
        IdealQ I(vs, Q, gens);
        // member by construction with low-degree cofactors
        auto member = random_poly(vs, rng, 2) * gens[0] + random_poly(vs, rng, 2) * gens[1];
        CHECK(ideal_membership(member, I));
        CHECK(linear_membership_oracle(member, gens, 4));
        ++members;
        // arbitrary polynomial: oracle success must imply membership
        auto p = random_poly(vs, rng, 2);
        bool mem = ideal_membership(p, I);
        bool orc = linear_membership_oracle(p, gens, 4);
        if (orc) CHECK(mem);
        if (!mem) { CHECK_FALSE(orc); ++nonmembers; }
    }
    CHECK(members >= 15);
    CHECK(nonmembers >= 3);
}

TEST_CASE("radical membership via the extra-variable trick") {
    auto vs = VariableSet::make({"x", "y", "z"});
    CHECK(radical_membership(pq("x", vs), ideal(vs, {"x^2"})));
    CHECK_FALSE(radical_membership(pq("y", vs), ideal(vs, {"x^2"})));
    CHECK(radical_membership(pq("y^2 - x*z", vs), ideal(vs, {"x*z - y^2"})));
    // radical contains the ideal
    std::mt19937_64 rng(13);
    for (int i = 0; i < 10; ++i) {
        auto g1 = random_poly(vs, rng, 2), g2 = random_poly(vs, rng, 2);
        if (g1.is_zero() && g2.is_zero()) continue;
        IdealQ I(vs, Q, {g1, g2});
        auto p = random_poly(vs, rng, 1) * g1 + random_poly(vs, rng, 1) * g2;
        if (ideal_membership(p, I)) CHECK(radical_membership(p, I));
    }
}

TEST_CASE("elimination reproduces the cuspidal cubic") {
    // oracle: resultant
    // Res_t(x - t^2, y - t^3) gives y^2 - x^3 (frozen by hand)
    auto vs = VariableSet::make({"t", "x", "y"});
    auto I = ideal(vs, {"x - t^2", "y - t^3"});
    auto E = elimination_ideal(I, {1, 2});
    REQUIRE(E.generators().size() >= 1);
    auto target = pq("y^2 - x^3", vs);
    CHECK(ideal_membership(target, E));
    for (const auto& g : E.generators()) {
        CHECK_FALSE(g.uses_var(0));
        CHECK(ideal_membership(g, I));
    }

    // image of t -> t^2 is dense in the line: nothing survives elimination
    auto vs2 = VariableSet::make({"t", "y"});
    auto E2 = elimination_ideal(ideal(vs2, {"y - t^2"}), {1});
    CHECK(E2.generators().empty());

    // eliminating nothing returns the same ideal
    auto E3 = elimination_ideal(I, {0, 1, 2});
    CHECK(E3.generators().size() == I.generators().size());
}

TEST_CASE("dimension") {
    auto vs3 = VariableSet::make({"x", "y", "z"});
    CHECK(krull_dimension(ideal(vs3, {"x*z - y^2"})) == 2);
    auto vs2 = VariableSet::make({"x", "y"});
    CHECK(krull_dimension(ideal(vs2, {"x", "y"})) == 0);
    auto vst = VariableSet::make({"t", "x", "y"});
    CHECK(krull_dimension(ideal(vst, {"x - t^2", "y - t^3"})) == 1);
    CHECK_THROWS_AS(krull_dimension(ideal(vs2, {"x", "1 - x"})), EmptyVariety);
    CHECK(krull_dimension(IdealQ(vs3, Q, {})) == 3);
}

TEST_CASE("saturation chart") {
    auto vs = VariableSet::make({"x", "y"});
    // V(xy) with x != 0 leaves only the y = 0 branch
    auto c1 = saturation_chart(ideal(vs, {"x*y"}), pq("x", vs));
    auto yv = PolyQ::variable(c1.ideal.varset(), Q, 1);
    CHECK(ideal_membership(yv, c1.ideal));
    // and cutting with y != 0 as well empties it
    auto c2 = saturation_chart(c1.ideal,
                               PolyQ::variable(c1.ideal.varset(), Q, 1), "t2");
    CHECK(is_inconsistent(c2.ideal));

    CHECK(is_inconsistent(saturation_chart(ideal(vs, {"x"}), pq("x", vs)).ideal));

    // saturating at a unit changes nothing
    auto c3 = saturation_chart(ideal(vs, {"x*y - 1"}), PolyQ::one(vs, Q));
    CHECK_FALSE(is_inconsistent(c3.ideal));
    auto lifted = pq("x*y - 1", vs).lift(c3.ideal.varset(), Q, {0, 1});
    CHECK(ideal_membership(lifted, c3.ideal));
}

TEST_CASE("reduced basis is invariant under generator permutation") {
    auto vs = VariableSet::make({"x", "y", "z"});
    std::mt19937_64 rng(99);
    for (int i = 0; i < 30; ++i) {
        std::vector<PolyQ> gens{random_poly(vs, rng, 2), random_poly(vs, rng, 2),
                                random_poly(vs, rng, 2)};
        std::vector<PolyQ> shuffled = gens;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        auto r1 = IdealQ(vs, Q, gens).groebner(MonomialOrder::grevlex());
        auto r2 = IdealQ(vs, Q, shuffled).groebner(MonomialOrder::grevlex());
        REQUIRE(r1.basis.size() == r2.basis.size());
        for (std::size_t k = 0; k < r1.basis.size(); ++k) CHECK(r1.basis[k] == r2.basis[k]);
    }
}

TEST_CASE("every S-polynomial of the reduced basis reduces to zero") {
    auto vs = VariableSet::make({"x", "y", "z"});
    std::mt19937_64 rng(7);
    auto ords = {MonomialOrder::grevlex(), MonomialOrder::lex()};
    for (int i = 0; i < 15; ++i) {
        std::vector<PolyQ> gens{random_poly(vs, rng, 2), random_poly(vs, rng, 2)};
        IdealQ I(vs, Q, gens);
        for (const auto& ord : ords) {
            const auto& rep = I.groebner(ord);
            gbdetail::Engine<mpq_class> eng(ord, Q, Budget::unlimited());
            std::vector<gbdetail::Engine<mpq_class>::OP> basis;
            for (const auto& b : rep.basis) basis.push_back(eng.to_op(b));
            for (std::size_t a = 0; a < basis.size(); ++a)
                for (std::size_t b = a + 1; b < basis.size(); ++b)
                    CHECK(eng.reduce(eng.s_poly(basis[a], basis[b]), basis).empty());
        }
    }
}

TEST_CASE("budgets give inconclusive, never a wrong answer") {
    auto vs = VariableSet::make({"x", "y", "z"});
    // cyclic-style system that needs some work
    auto I = ideal(vs, {"x + y + z", "x*y + y*z + z*x", "x*y*z - 1"});
    Budget tiny{2, 2};
    CHECK_THROWS_AS(I.groebner(MonomialOrder::lex(), tiny), BudgetExceeded);
    // generous budget succeeds and reports work done
    IdealQ J = ideal(vs, {"x + y + z", "x*y + y*z + z*x", "x*y*z - 1"});
    auto rep = J.groebner(MonomialOrder::lex(), Budget{100000, 40});
    CHECK(rep.s_pairs_processed > 0);
    CHECK(rep.max_intermediate_degree >= 3);
}

TEST_CASE("zero-dimensional detection and standard monomial count") {
    auto vs = VariableSet::make({"x", "y"});
    auto I = ideal(vs, {"x^2 - 1", "y^3 - y"});
    CHECK(is_zero_dimensional(I));
    auto cnt = standard_monomial_count(I);
    REQUIRE(cnt.has_value());
    CHECK(*cnt == 6);
    CHECK_FALSE(is_zero_dimensional(ideal(vs, {"x*y - 1"})));
    CHECK_FALSE(standard_monomial_count(ideal(vs, {"x*y - 1"})).has_value());
}

TEST_CASE("groebner over F_p") {
    GFpCtx F7(7);
    auto vs = VariableSet::make({"x", "y"});
    auto x = Polynomial<GFp>::variable(vs, F7, 0);
    auto y = Polynomial<GFp>::variable(vs, F7, 1);
    Ideal<GFp> I(vs, F7, {x * x - y, y * y});
    auto rep = I.groebner(MonomialOrder::lex());
    CHECK(rep.basis.size() == 2);
    CHECK(ideal_membership(y * y * x, I));
    CHECK(radical_membership(x, I));
}
