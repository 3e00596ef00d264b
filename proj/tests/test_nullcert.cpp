#include <doctest.h>

#include "birat/nullcert.hpp"

#include <random>

using namespace birat;

namespace {

RatCtx Q;

PolyQ pq(const std::string& s, const VarSetPtr& vs) { return parse_polynomial<mpq_class>(s, vs, Q); }

CertificateQuery<mpq_class> query(const VarSetPtr& vs, const std::vector<std::string>& gens,
                                  const std::string& target, int cap = 4) {
    CertificateQuery<mpq_class> q;
    q.vs = vs;
    q.fc = Q;
    for (const auto& g : gens) q.generators.push_back(pq(g, vs));
    q.target = pq(target, vs);
    q.degree_cap = cap;
    return q;
}

PolyQ random_poly(const VarSetPtr& vs, std::mt19937_64& rng, int max_deg = 3, int max_terms = 3) {
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

} // namespace

TEST_CASE("x in sqrt(x^2): certificate found at degree 2") {
    auto vs = VariableSet::make({"x"});
    auto q = query(vs, {"x^2"}, "x");
    auto cert = find_certificate(q);
    REQUIRE(cert.has_value());
    CHECK(cert->degree == 2);
    CHECK(verify_certificate(q, *cert));
    // 1 = (1 + a x)(1 - a x) + a^2 x^2 is one witness; ours must expand
    // to 1 exactly, whatever the solver picked
}

TEST_CASE("x in sqrt(x): certificate at degree 1") {
    auto vs = VariableSet::make({"x"});
    auto q = query(vs, {"x"}, "x");
    auto cert = find_certificate(q);
    REQUIRE(cert.has_value());
    CHECK(cert->degree == 1);
    CHECK(verify_certificate(q, *cert));
}

TEST_CASE("V(x^2) is not inside V(y): no certificate at any degree") {
    auto vs = VariableSet::make({"x", "y"});
    auto q = query(vs, {"x^2"}, "y", 5);
    CHECK_FALSE(find_certificate(q).has_value());
}

TEST_CASE("k = 0 edge case: target 1 without generators has no certificate") {
    auto vs = VariableSet::make({"x"});
    auto q = query(vs, {}, "1", 2);
    CHECK_FALSE(find_certificate(q).has_value());
}

TEST_CASE("perturbing a certificate breaks verification") {
    auto vs = VariableSet::make({"x"});
    auto q = query(vs, {"x^2"}, "x");
    auto cert = find_certificate(q);
    REQUIRE(cert.has_value());
    auto broken = *cert;
    broken.taus[0] = broken.taus[0] + PolyQ::one(broken.vs_ext, Q);
    CHECK_FALSE(verify_certificate(q, broken));
}

TEST_CASE("certify_containment") {
    auto vs = VariableSet::make({"x", "y", "z", "u", "v"});
    // V(xz - y^2, xv - yu, yv - zu) is inside V(xv - yu): a generator
    IdealQ graph(vs, Q, {pq("x*z - y^2", vs), pq("x*v - y*u", vs), pq("y*v - z*u", vs)});
    auto r1 = certify_containment(graph, pq("x*v - y*u", vs), 3);
    CHECK(r1.answer == Tri::yes);
    REQUIRE(r1.certificate.has_value());

    auto vs2 = VariableSet::make({"x", "y"});
    IdealQ I2(vs2, Q, {pq("x^2", vs2)});
    CHECK(certify_containment(I2, pq("y", vs2), 3).answer == Tri::no);

    // adversarial high degree under tiny caps stays inconclusive
    auto vs3 = VariableSet::make({"x", "y", "z"});
    IdealQ I3(vs3, Q,
              {pq("x^7 - y - 1", vs3), pq("y^7 - z - 1", vs3), pq("z^7 - x*y*z - 1", vs3)});
    auto r3 = certify_containment(I3, pq("x - 1", vs3), 0, Budget::tiny());
    CHECK(r3.answer == Tri::inconclusive);
}

TEST_CASE("unit certificates witness insoluble systems") {
    auto vs = VariableSet::make({"x"});
    auto c = find_unit_certificate<mpq_class>({pq("x", vs), pq("1 - x", vs)}, vs, Q, 2);
    REQUIRE(c.has_value());
    auto acc = (*c)[0] * pq("x", vs) + (*c)[1] * pq("1 - x", vs);
    CHECK(acc == PolyQ::one(vs, Q));
    CHECK_FALSE(find_unit_certificate<mpq_class>({pq("x", vs)}, vs, Q, 3).has_value());
}

TEST_CASE("round-trip soundness and agreement with radical membership on a corpus") {
    auto vs = VariableSet::make({"x", "y", "z"});
    std::mt19937_64 rng(20250810);
    int decided_yes = 0, decided_no = 0, instances = 0;
    while (instances < 50) {
        std::vector<PolyQ> gens{random_poly(vs, rng, 2), random_poly(vs, rng, 2)};
        if (gens[0].is_zero() || gens[1].is_zero()) continue;
        PolyQ target = random_poly(vs, rng, 2);
        if (target.is_zero()) continue;
        ++instances;

        CertificateQuery<mpq_class> q{vs, Q, gens, target, 4};
        auto cert = find_certificate(q);
        bool radical = radical_membership(target, IdealQ(vs, Q, gens));
        if (cert) {
            // round-trip soundness plus agreement
            CHECK(verify_certificate(q, *cert));
            CHECK(radical);
            ++decided_yes;
        }
        if (!radical) {
            CHECK_FALSE(cert.has_value());
            ++decided_no;
        }
    }
    CHECK(instances == 50);
    CHECK(decided_yes + decided_no >= 25); // corpus genuinely exercises both sides
}

TEST_CASE("achieved degree never increases when generators are appended") {
    auto vs = VariableSet::make({"x", "y"});
    std::mt19937_64 rng(424242);
    for (int i = 0; i < 12; ++i) {
        std::vector<PolyQ> gens{random_poly(vs, rng, 2)};
        if (gens[0].is_zero()) continue;
        PolyQ target = random_poly(vs, rng, 2);
        if (target.is_zero()) continue;
        CertificateQuery<mpq_class> q1{vs, Q, gens, target, 4};
        auto c1 = find_certificate(q1);
        if (!c1) continue;
        auto extended = gens;
        extended.push_back(random_poly(vs, rng, 2));
        CertificateQuery<mpq_class> q2{vs, Q, extended, target, 4};
        auto c2 = find_certificate(q2);
        REQUIRE(c2.has_value());
        CHECK(c2->degree <= c1->degree);
    }
}
