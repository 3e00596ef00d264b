#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "birat/monoids.hpp"
#include "birat/nullcert.hpp"
#include "birat/varieties.hpp"

namespace birat {

/// Decision-procedure caps, shared across the explicit-map checks.
struct CheckCaps {
    Budget budget = {};
    int cert_cap = 4;       // cofactor degree for Nullstellensatz searches
    int fiber_cert_cap = 2; // total fiber-degree for fiber-emptiness systems
};

/// A yes/no/inconclusive answer; yes/no always carry re-checkable
/// evidence (a point, a separating generator, a certificate, or the
/// consistent/inconsistent system behind the call).
struct Verdict {
    Tri answer = Tri::inconclusive;
    std::string reason;
    std::vector<std::pair<std::string, std::string>> evidence;
    std::optional<std::map<std::string, std::string>> witness_point;
    BudgetSpent spent;

    static Verdict yes(std::string why) { return Verdict{Tri::yes, std::move(why), {}, {}, {}}; }
    static Verdict no(std::string why) { return Verdict{Tri::no, std::move(why), {}, {}, {}}; }
    static Verdict maybe(std::string why) {
        return Verdict{Tri::inconclusive, std::move(why), {}, {}, {}};
    }
};

/// Jacobian of a generator list with respect to a chosen column block,
/// with the maximal minors cached.
template <FieldElem K>
struct RelativeJacobian {
    std::vector<Polynomial<K>> generators;
    std::vector<int> cols;
    std::vector<Polynomial<K>> minors; // all (#cols x #cols) minors

    static RelativeJacobian build(const std::vector<Polynomial<K>>& gens,
                                  const std::vector<int>& cols) {
        RelativeJacobian rj;
        rj.generators = gens;
        rj.cols = cols;
        rj.minors = vdetail::jacobian_minors(gens, cols, static_cast<int>(cols.size()));
        return rj;
    }
};

namespace cdetail {

/// Deterministic search for a rational point of V(I): triangular
/// back-substitution on zero-dimensional lex bases, specializing free
/// variables to small constants otherwise. Returns nullopt when the
/// variety is empty or no rational point is found this way.
template <FieldElem K>
std::optional<std::vector<K>> find_rational_point(const Ideal<K>& I, const Budget& budget,
                                                  int depth = 6);

template <FieldElem K>
std::vector<K> rational_roots(const Polynomial<K>& uni, int var) {
    // exact rational root search on an integer-cleared univariate
    auto fc = uni.field();
    std::vector<K> roots;
    K zero = fc.zero();
    std::vector<K> coeffs(uni.degree_in(var) + 1, zero);
    for (const auto& [m, c] : uni.terms()) coeffs[m[var]] = c;
    // always try a few small candidates first (covers F_p reasonably too)
    std::vector<K> candidates;
    for (int n = 0; n <= 12; ++n) {
        candidates.push_back(fc.from_long(n));
        candidates.push_back(fc.from_long(-n));
    }
    if constexpr (std::is_same_v<K, mpq_class>) {
        // p/q with p | a_0 and q | a_lead
        mpz_class common = 1;
        for (const auto& c : coeffs) common = lcm(common, mpq_class(c).get_den());
        mpz_class a0 = mpq_class(coeffs[0] * common).get_num();
        mpz_class alead = mpq_class(coeffs[coeffs.size() - 1] * common).get_num();
        auto divisors = [](mpz_class n) {
            std::vector<mpz_class> out;
            n = abs(n);
            if (n == 0 || n > 100000) return out;
            for (mpz_class d = 1; d * d <= n; ++d)
                if (n % d == 0) { out.push_back(d); out.push_back(n / d); }
            return out;
        };
        for (const auto& p : divisors(a0))
            for (const auto& q : divisors(alead)) {
                candidates.emplace_back(mpq_class(p) / mpq_class(q));
                candidates.emplace_back(mpq_class(-p) / mpq_class(q));
            }
    }
    std::vector<K> seen;
    for (const auto& cand : candidates) {
        bool dup = false;
        for (const auto& s : seen) dup = dup || (s == cand);
        if (dup) continue;
        K acc = zero;
        for (std::size_t d = coeffs.size(); d-- > 0;) acc = acc * cand + coeffs[d];
        if (FieldCtx<K>::is_zero(acc)) {
            roots.push_back(cand);
            seen.push_back(cand);
        } else {
            seen.push_back(cand);
        }
    }
    return roots;
}

template <FieldElem K>
std::optional<std::vector<K>> find_rational_point(const Ideal<K>& I, const Budget& budget,
                                                  int depth) {
    using P = Polynomial<K>;
    auto fc = I.field();
    const auto& vs = I.varset();
    std::size_t n = vs->size();
    try {
        if (is_inconsistent(I, budget)) return std::nullopt;
        if (is_zero_dimensional(I, budget)) {
            const auto& rep = I.groebner(MonomialOrder::lex(), budget);
            // the smallest variable under lex carries a univariate generator
            int last = static_cast<int>(n) - 1;
            std::optional<P> uni;
            for (const auto& g : rep.basis) {
                bool only_last = true;
                for (std::size_t i = 0; i + 1 < n; ++i) only_last = only_last && !g.uses_var(i);
                if (only_last && g.uses_var(last)) uni = g;
            }
            if (!uni) return std::nullopt;
            for (const auto& r : rational_roots(*uni, last)) {
                std::vector<P> spec;
                for (const auto& g : I.generators())
                    spec.push_back(g.substitute_values({{last, r}}));
                if (n == 1) {
                    bool all_zero = true;
                    for (const auto& s : spec) all_zero = all_zero && s.is_zero();
                    if (all_zero) return std::vector<K>{r};
                    continue;
                }
                // drop the solved variable and recurse
                std::vector<int> keep;
                for (std::size_t i = 0; i + 1 < n; ++i) keep.push_back(static_cast<int>(i));
                VarSetPtr sub = vs->restricted(keep);
                std::vector<P> gens;
                for (const auto& s : spec)
                    if (!s.is_zero()) gens.push_back(s.restrict_to(sub, keep));
                auto inner = find_rational_point(Ideal<K>(sub, fc, std::move(gens)), budget,
                                                 depth - 1);
                if (inner) {
                    inner->push_back(r);
                    return inner;
                }
            }
            return std::nullopt;
        }
        if (depth <= 0) return std::nullopt;
        // positive-dimensional: pin one variable to a small constant
        for (std::size_t v = 0; v < n; ++v) {
            for (long c : {0L, 1L, -1L, 2L, -2L, 3L}) {
                std::vector<P> gens = I.generators();
                gens.push_back(P::variable(vs, fc, static_cast<int>(v)) -
                               P::constant(vs, fc, fc.from_long(c)));
                auto sub = find_rational_point(Ideal<K>(vs, fc, std::move(gens)), budget,
                                               depth - 1);
                if (sub) return sub;
            }
        }
        return std::nullopt;
    } catch (const BudgetExceeded&) {
        return std::nullopt;
    }
}

/// Y's generators transported into the target block of the product ring.
template <FieldElem K>
std::vector<Polynomial<K>> lift_target_ideal(const Variety<K>& Y, const ProductRing& pr) {
    std::vector<Polynomial<K>> out;
    std::vector<int> map(pr.tgt.begin(), pr.tgt.end());
    for (const auto& g : Y.ideal().generators()) out.push_back(g.lift(pr.vs, Y.field(), map));
    return out;
}

/// Y's generators over the coordinate set of an image variety
/// (positional transport).
template <FieldElem K>
std::vector<Polynomial<K>> transport_by_position(const Variety<K>& Y, const VarSetPtr& vs) {
    if (Y.coords()->size() != vs->size())
        throw InputError("target/variety coordinate count mismatch");
    std::vector<int> map;
    for (std::size_t i = 0; i < vs->size(); ++i) map.push_back(static_cast<int>(i));
    std::vector<Polynomial<K>> out;
    for (const auto& g : Y.ideal().generators()) out.push_back(g.lift(vs, Y.field(), map));
    return out;
}

inline std::map<std::string, std::string> name_point(const VarSetPtr& vs,
                                                     const std::vector<std::string>& values) {
    std::map<std::string, std::string> m;
    for (std::size_t i = 0; i < values.size(); ++i) m[vs->name(i)] = values[i];
    return m;
}

template <FieldElem K>
std::map<std::string, std::string> format_point(const VarSetPtr& vs, const std::vector<K>& pt) {
    std::vector<std::string> vals;
    for (const auto& v : pt) vals.push_back(FieldCtx<K>::to_string(v));
    return name_point(vs, vals);
}

} // namespace cdetail

/// Compatibility checks plus the rational-map conditions: X is not inside
/// the common zero locus of the components, and the closure of F(X) lies
/// in Y.
template <FieldElem K>
Verdict check_rational_into(const RationalMapRep<K>& F, const Variety<K>& X, const Variety<K>& Y,
                            const CheckCaps& caps = {}) {
    Verdict v;
    gbdetail::SpentScope scope(&v.spent);
    if (F.mode() != X.mode() || X.mode() != Y.mode())
        throw InputError("map and varieties must agree on affine/projective mode");
    if (F.target_ambient() != Y.ambient_dim())
        throw InputError("map target dimension does not match Y");
    try {
        if (F.mode() == Mode::projective) {
            bool all_vanish = true;
            for (const auto& c : F.components()) {
                if (c.is_zero()) continue;
                if (!radical_membership(c, X.ideal(), caps.budget)) { all_vanish = false; break; }
            }
            if (all_vanish) {
                v.answer = Tri::no;
                v.reason = "X lies inside the indeterminacy locus: every component vanishes on X";
                v.evidence.emplace_back("witness", "all F_i in sqrt(I(X))");
                return v;
            }
        } else {
            if (radical_membership(F.denominator(), X.ideal(), caps.budget)) {
                v.answer = Tri::no;
                v.reason = "denominator vanishes identically on X";
                v.evidence.emplace_back("witness", F.denominator().format() + " in sqrt(I(X))");
                return v;
            }
        }
        auto pr = make_product(X.coords(), default_target_names(X.mode(), Y.ambient_dim()));
        auto G = restricted_graph(F, X, pr, caps.budget);
        auto img = image_closure(G, pr, X.mode(), caps.budget);
        auto ygens = cdetail::transport_by_position(Y, img.coords());
        for (const auto& g : ygens) {
            if (!radical_membership(g, img.ideal(), caps.budget)) {
                v.answer = Tri::no;
                v.reason = "the image closure is not contained in Y";
                v.evidence.emplace_back("separating generator of I(Y)", g.format());
                // a point of the image closure off V(g)
                auto chart = saturation_chart(img.ideal(), g);
                if (auto pt = cdetail::find_rational_point(chart.ideal, caps.budget)) {
                    pt->resize(img.coords()->size());
                    v.witness_point = cdetail::format_point(img.coords(), *pt);
                }
                return v;
            }
        }
        v.answer = Tri::yes;
        v.reason = "X maps rationally into Y";
        v.evidence.emplace_back("image generators in sqrt(I(Y))",
                                std::to_string(ygens.size()) + " containments verified");
        return v;
    } catch (const BudgetExceeded& e) {
        v.answer = Tri::inconclusive;
        v.reason = e.what();
        return v;
    }
}

/// Dominance: the image closure equals Y (mutual radical containment).
/// A failing generator of the image's elimination ideal is the explicit
/// separating hypersurface.
template <FieldElem K>
Verdict check_dominant(const RationalMapRep<K>& F, const Variety<K>& X, const Variety<K>& Y,
                       const CheckCaps& caps = {}) {
    Verdict pre = check_rational_into(F, X, Y, caps);
    if (pre.answer != Tri::yes) return pre;
    Verdict v;
    gbdetail::SpentScope scope(&v.spent);
    try {
        auto pr = make_product(X.coords(), default_target_names(X.mode(), Y.ambient_dim()));
        auto G = restricted_graph(F, X, pr, caps.budget);
        auto img = image_closure(G, pr, X.mode(), caps.budget);
        Ideal<K> Yideal(img.coords(), Y.field(), cdetail::transport_by_position(Y, img.coords()));
        for (const auto& g : img.ideal().generators()) {
            if (!radical_membership(g, Yideal, caps.budget)) {
                v.answer = Tri::no;
                v.reason = "the image closure is a proper subvariety of Y";
                v.evidence.emplace_back("separating generator", g.format());
                return v;
            }
        }
        v.answer = Tri::yes;
        v.reason = "image closure equals Y";
        return v;
    } catch (const BudgetExceeded& e) {
        v.answer = Tri::inconclusive;
        v.reason = e.what();
        return v;
    }
}

namespace cdetail {

/// Chart-by-chart relative-tangent test: for every pair of source/target
/// charts, the chart ideal of the graph plus all maximal minors of the
/// Jacobian with respect to `fiber of the projection` must be
/// inconsistent. Returns the failing chart on "no".
template <FieldElem K>
struct TangentTestResult {
    Tri answer = Tri::yes;
    std::string chart;
    std::optional<std::vector<K>> point;
    std::vector<Polynomial<K>> failing_system;
};

template <FieldElem K>
TangentTestResult<K> relative_tangent_zero(const Ideal<K>& graph, const ProductRing& pr,
                                           Mode mode, bool fiber_is_target,
                                           const Budget& budget) {
    using P = Polynomial<K>;
    auto fc = graph.field();
    TangentTestResult<K> res;
    std::vector<int> src_charts, tgt_charts;
    if (mode == Mode::projective) {
        src_charts = pr.src;
        tgt_charts = pr.tgt;
    } else {
        src_charts = {-1};
        tgt_charts = {-1};
    }
    for (int ks : src_charts) {
        for (int kt : tgt_charts) {
            std::vector<P> gens;
            for (const auto& g : graph.generators()) {
                P cg = g;
                if (ks >= 0) cg = cg.dehomogenize(ks);
                if (kt >= 0) cg = cg.dehomogenize(kt);
                if (!cg.is_zero()) gens.push_back(cg);
            }
            std::vector<int> cols;
            const auto& fiber = fiber_is_target ? pr.tgt : pr.src;
            for (int i : fiber)
                if (i != ks && i != kt) cols.push_back(i);
            auto rj = RelativeJacobian<K>::build(gens, cols);
            std::vector<P> sys = gens;
            for (const auto& m : rj.minors) sys.push_back(m);
            Ideal<K> system(pr.vs, fc, std::move(sys));
            if (!is_inconsistent(system, budget)) {
                res.answer = Tri::no;
                res.chart = (ks >= 0 ? pr.vs->name(ks) : std::string("-")) + "=1," +
                            (kt >= 0 ? pr.vs->name(kt) : std::string("-")) + "=1";
                res.failing_system = system.generators();
                res.point = find_rational_point(system, budget);
                if (res.point) {
                    // the chart coordinates are pinned to 1, not free
                    if (ks >= 0) (*res.point)[ks] = fc.one();
                    if (kt >= 0) (*res.point)[kt] = fc.one();
                }
                return res;
            }
        }
    }
    return res;
}

} // namespace cdetail

/// Regularity of F restricted to a smooth X: the relative tangent spaces
/// of the projection graph -> X vanish everywhere, i.e. on every chart
/// the graph ideal together with all maximal minors of the Jacobian with
/// respect to the target variables is inconsistent.
template <FieldElem K>
Verdict check_regular(const RationalMapRep<K>& F, const Variety<K>& X, const CheckCaps& caps = {}) {
    Verdict v;
    gbdetail::SpentScope scope(&v.spent);
    try {
        if (!smoothness_check(X, caps.budget))
            throw InputError("check_regular requires a smooth X");
        auto pr = make_product(X.coords(), default_target_names(X.mode(), F.target_ambient()));
        auto G = restricted_graph(F, X, pr, caps.budget);
        auto res = cdetail::relative_tangent_zero(G, pr, X.mode(), true, caps.budget);
        if (res.answer == Tri::no) {
            v.answer = Tri::no;
            v.reason = "relative tangent space jumps on the graph (chart " + res.chart + ")";
            for (const auto& g : res.failing_system)
                v.evidence.emplace_back("consistent system generator", g.format());
            if (res.point) v.witness_point = cdetail::format_point(pr.vs, *res.point);
            return v;
        }
        v.answer = Tri::yes;
        v.reason = "relative tangent spaces vanish on every chart of the graph";
        return v;
    } catch (const BudgetExceeded& e) {
        v.answer = Tri::inconclusive;
        v.reason = e.what();
        return v;
    }
}

/// Composition A(F_1/F_den, ..., F_m/F_den) with denominators cleared to
/// the common power `deg`: returns den^deg * A(F/den).
template <FieldElem K>
Polynomial<K> compose_cleared(const Polynomial<K>& A, const std::vector<Polynomial<K>>& nums,
                              const Polynomial<K>& den, int deg) {
    using P = Polynomial<K>;
    const auto& vs = nums.front().varset();
    auto fc = nums.front().field();
    P acc = P::zero(vs, fc);
    for (const auto& [m, c] : A.terms()) {
        P term = P::constant(vs, fc, c);
        int used = 0;
        for (std::size_t j = 0; j < m.size(); ++j) {
            for (int k = 0; k < m[j]; ++k) term = term * nums[j];
            used += m[j];
        }
        for (int k = used; k < deg; ++k) term = term * den;
        acc = acc + term;
    }
    return acc;
}

template <FieldElem K>
struct BirationalityResult {
    Verdict verdict;
    /// Extracted inverse on the dense charts, as an affine map
    /// target-chart -> source-chart.
    std::optional<RationalMapRep<K>> inverse;
    int source_chart = -1; // projective chart indices; -1 in affine mode
    int target_chart = -1;
};

/// Explicit-map birationality through the graph: confirm dominance onto
/// Y, then extract from elimination-order bases a relation linear in
/// each source variable over the target function field. The extracted
/// inverse is verified by composing back modulo I(X).
template <FieldElem K>
BirationalityResult<K> check_birational(const RationalMapRep<K>& F, const Variety<K>& X,
                                        const Variety<K>& Y, const CheckCaps& caps = {}) {
    using P = Polynomial<K>;
    BirationalityResult<K> out;
    Verdict& v = out.verdict;
    gbdetail::SpentScope scope(&v.spent);
    Verdict dom = check_dominant(F, X, Y, caps);
    if (dom.answer != Tri::yes) {
        out.verdict = dom;
        if (dom.answer == Tri::no) out.verdict.reason = "not dominant onto Y: " + dom.reason;
        return out;
    }
    try {
        if (X.dimension(caps.budget) != Y.dimension(caps.budget)) {
            v.answer = Tri::no;
            v.reason = "dimension mismatch: dim X = " + std::to_string(X.dimension()) +
                       ", dim Y = " + std::to_string(Y.dimension());
            return out;
        }
        auto fc = X.field();
        auto pr = make_product(X.coords(), default_target_names(X.mode(), Y.ambient_dim()));
        auto G = restricted_graph(F, X, pr, caps.budget);

        int ks = -1, kt = -1;
        std::vector<P> chart_gens;
        if (X.mode() == Mode::projective) {
            ks = dense_chart_index(X, caps.budget);
            kt = dense_chart_index(Y, caps.budget);
            if (ks < 0 || kt < 0) throw InputError("no dense chart found");
            for (const auto& g : G.generators()) {
                P cg = g.dehomogenize(ks).dehomogenize(pr.tgt[kt]);
                if (!cg.is_zero()) chart_gens.push_back(cg);
            }
        } else {
            chart_gens = G.generators();
        }
        Ideal<K> Gaff(pr.vs, fc, chart_gens);

        // target chart ideal of Y for validity checks on denominators
        std::vector<P> ychart;
        {
            auto ylift = cdetail::lift_target_ideal(Y, pr);
            for (auto& g : ylift) {
                if (kt >= 0) g = g.dehomogenize(pr.tgt[kt]);
                if (!g.is_zero()) ychart.push_back(g);
            }
        }
        Ideal<K> Ychart(pr.vs, fc, ychart);

        std::vector<int> tgt_affine;
        for (int i : pr.tgt)
            if (i != (kt >= 0 ? pr.tgt[kt] : -2)) tgt_affine.push_back(i);

        std::vector<P> As, Bs;
        std::vector<int> solved_vars;
        for (int xi : pr.src) {
            if (xi == ks) continue;
            std::vector<int> keep = tgt_affine;
            keep.push_back(xi);
            Ideal<K> Ji = elimination_ideal(Gaff, keep, caps.budget);
            // re-reduce with x_i eliminated first to expose the linear relation
            std::vector<char> elim_mask(pr.vs->size(), 0);
            elim_mask[xi] = 1;
            const auto& rep = Ji.groebner(MonomialOrder::block_mask(elim_mask), caps.budget);
            std::optional<P> A, B;
            int min_deg = 1 << 20;
            for (const auto& g : rep.basis) {
                int d = g.degree_in(xi);
                if (d >= 1) min_deg = std::min(min_deg, d);
                if (d != 1) continue;
                // split g = A x_i - B
                std::vector<typename P::Term> at, bt;
                for (const auto& [m, c] : g.terms()) {
                    if (m[xi] == 1) {
                        Monomial mm = m;
                        mm[xi] = 0;
                        at.emplace_back(mm, c);
                    } else {
                        bt.emplace_back(m, -c);
                    }
                }
                P cand_A = P::from_terms(pr.vs, fc, std::move(at));
                P cand_B = P::from_terms(pr.vs, fc, std::move(bt));
                if (radical_membership(cand_A, Ychart, caps.budget)) continue; // A dies on Y
                A = cand_A;
                B = cand_B;
                break;
            }
            if (!A) {
                v.answer = Tri::no;
                v.reason = "function-field extension has degree > 1 in " + pr.vs->name(xi) +
                           " (no linear relation in the elimination basis)";
                v.evidence.emplace_back("minimal relation degree",
                                        min_deg == (1 << 20) ? "none" : std::to_string(min_deg));
                return out;
            }
            As.push_back(*A);
            Bs.push_back(*B);
            solved_vars.push_back(xi);
        }

        // assemble the inverse over the target chart coordinates
        VarSetPtr tvs = pr.vs->restricted(tgt_affine);
        P h = P::one(tvs, fc);
        std::vector<P> As_t, Bs_t;
        for (std::size_t i = 0; i < As.size(); ++i) {
            As_t.push_back(As[i].restrict_to(tvs, tgt_affine));
            Bs_t.push_back(Bs[i].restrict_to(tvs, tgt_affine));
            h = h * As_t.back();
        }
        std::vector<P> nums;
        for (std::size_t i = 0; i < As.size(); ++i) {
            P n = Bs_t[i];
            for (std::size_t j = 0; j < As.size(); ++j)
                if (j != i) n = n * As_t[j];
            nums.push_back(n);
        }
        out.inverse = RationalMapRep<K>::affine(nums, h);
        out.source_chart = ks;
        out.target_chart = kt;

        // verification: substitute the map components into each relation
        // A x_i - B and reduce modulo I(X) on the source chart
        std::vector<P> fnums;
        P fden = P::zero(X.coords(), fc);
        if (X.mode() == Mode::projective) {
            for (std::size_t j = 0; j < F.components().size(); ++j) {
                if (static_cast<int>(j) == kt) continue;
                fnums.push_back(F.components()[j].dehomogenize(ks));
            }
            fden = F.components()[kt].dehomogenize(ks);
        } else {
            fnums = F.components();
            fden = F.denominator();
        }
        std::vector<P> xgens_chart;
        for (const auto& g : X.ideal().generators()) {
            P cg = X.mode() == Mode::projective ? g.dehomogenize(ks) : g;
            if (!cg.is_zero()) xgens_chart.push_back(cg);
        }
        Ideal<K> Xchart(X.coords(), fc, xgens_chart);
        for (std::size_t i = 0; i < As.size(); ++i) {
            int deg = std::max(As_t[i].total_degree(), Bs_t[i].total_degree());
            P a_comp = compose_cleared(As_t[i], fnums, fden, deg);
            P b_comp = compose_cleared(Bs_t[i], fnums, fden, deg);
            int src_var = solved_vars[i]; // product index == source index
            P xi = P::variable(X.coords(), fc, src_var);
            P identity = a_comp * xi - b_comp;
            if (!radical_membership(identity, Xchart, caps.budget)) {
                v.answer = Tri::inconclusive;
                v.reason = "extracted inverse failed composition verification";
                return out;
            }
        }

        v.answer = Tri::yes;
        v.reason = "dominant with a degree-1 function-field extension; inverse extracted and "
                   "verified by composition";
        for (std::size_t i = 0; i < nums.size(); ++i)
            v.evidence.emplace_back("inverse numerator " + std::to_string(i + 1),
                                    nums[i].format());
        v.evidence.emplace_back("inverse denominator", h.format());
        return out;
    } catch (const BudgetExceeded& e) {
        v.answer = Tri::inconclusive;
        v.reason = e.what();
        return out;
    }
}

/// Regular embedding into Y: regular, birational onto the image closure,
/// vanishing relative tangent spaces for the projection to the target
/// side, and a smooth image closure inside Y.
template <FieldElem K>
Verdict check_regular_embedding(const RationalMapRep<K>& F, const Variety<K>& X,
                                const Variety<K>& Y, const CheckCaps& caps = {}) {
    Verdict into = check_rational_into(F, X, Y, caps);
    if (into.answer != Tri::yes) {
        into.reason = "not a rational map into Y: " + into.reason;
        return into;
    }
    Verdict reg = check_regular(F, X, caps);
    if (reg.answer != Tri::yes) {
        reg.reason = "not regular: " + reg.reason;
        return reg;
    }
    Verdict v;
    gbdetail::SpentScope scope(&v.spent);
    try {
        auto pr = make_product(X.coords(), default_target_names(X.mode(), Y.ambient_dim()));
        auto G = restricted_graph(F, X, pr, caps.budget);
        auto res = cdetail::relative_tangent_zero(G, pr, X.mode(), false, caps.budget);
        if (res.answer == Tri::no) {
            v.answer = Tri::no;
            v.reason = "relative tangent spaces over the image jump (chart " + res.chart + ")";
            if (res.point) v.witness_point = cdetail::format_point(pr.vs, *res.point);
            for (const auto& g : res.failing_system)
                v.evidence.emplace_back("consistent system generator", g.format());
            return v;
        }
        auto img = image_closure(G, pr, X.mode(), caps.budget);
        if (!smoothness_check(img, caps.budget)) {
            v.answer = Tri::no;
            v.reason = "image closure is singular";
            for (const auto& g : img.ideal().generators())
                v.evidence.emplace_back("image generator", g.format());
            return v;
        }
        auto bir = check_birational(F, X, img, caps);
        if (bir.verdict.answer != Tri::yes) {
            v.answer = bir.verdict.answer;
            v.reason = "not birational onto the image: " + bir.verdict.reason;
            return v;
        }
        v.answer = Tri::yes;
        v.reason = "regular, unramified over the smooth image closure, and birational onto it";
        return v;
    } catch (const BudgetExceeded& e) {
        v.answer = Tri::inconclusive;
        v.reason = e.what();
        return v;
    }
}

/// Isomorphism onto Y: a regular embedding whose image closure is all
/// of Y.
template <FieldElem K>
Verdict check_isomorphism_onto(const RationalMapRep<K>& F, const Variety<K>& X,
                               const Variety<K>& Y, const CheckCaps& caps = {}) {
    Verdict emb = check_regular_embedding(F, X, Y, caps);
    if (emb.answer != Tri::yes) return emb;
    Verdict dom = check_dominant(F, X, Y, caps);
    if (dom.answer != Tri::yes) {
        dom.reason = "embedding but not onto: " + dom.reason;
        return dom;
    }
    Verdict v = Verdict::yes("regular embedding onto the whole of Y");
    v.spent = emb.spent;
    v.spent.absorb(dom.spent);
    return v;
}

namespace cdetail {

/// Inconsistency of the fiber-emptiness system: base-ideal constraints
/// on the base block plus the coefficient-balance rows stating that some
/// degree-<=D combination of the graph generators equals 1 identically
/// in the fiber variables. Consistent means: some base point on the base
/// variety has a certified-empty fiber.
template <FieldElem K>
struct FiberEmptinessOutcome {
    Tri empty_fiber_exists = Tri::inconclusive; // yes: witnessed empty fiber
    std::optional<std::vector<K>> base_point;   // base coordinates of the witness
};

template <FieldElem K>
FiberEmptinessOutcome<K> fiber_emptiness(const Ideal<K>& graph, const ProductRing& pr,
                                         bool fiber_is_source,
                                         const std::vector<Polynomial<K>>& base_constraints,
                                         int cert_degree, const Budget& budget) {
    using P = Polynomial<K>;
    auto fc = graph.field();
    const std::vector<int>& base = fiber_is_source ? pr.tgt : pr.src;
    const std::vector<char>& fiber_mask = fiber_is_source ? pr.src_mask : pr.tgt_mask;

    std::vector<char> fiber_support(pr.vs->size(), 0);
    for (std::size_t i = 0; i < pr.vs->size(); ++i) fiber_support[i] = fiber_mask[i];

    // one coefficient variable per (generator, shift monomial); the
    // fiber-degree of every product tau * G stays within cert_degree
    struct Shift {
        int gen;
        Monomial mono;
    };
    std::vector<Shift> shifts;
    for (std::size_t g = 0; g < graph.generators().size(); ++g) {
        int gdeg = 0;
        for (const auto& [m, c] : graph.generators()[g].terms())
            gdeg = std::max(gdeg, m.degree_on(fiber_mask));
        int room = cert_degree - gdeg;
        if (room < 0) continue;
        for (const auto& m : mdetail::block_monomials(fiber_support, room, false))
            shifts.push_back({static_cast<int>(g), m});
    }
    std::vector<std::string> cnames;
    for (std::size_t s = 0; s < shifts.size(); ++s) cnames.push_back("c" + std::to_string(s));
    auto ext = extend_ring<K>(pr.vs, cnames);

    // rows: for each fiber monomial, a polynomial in (base, c); the
    // constant row must equal 1
    std::map<std::vector<int>, P> rows;
    for (std::size_t s = 0; s < shifts.size(); ++s) {
        P cvar = P::variable(ext.vs, fc, ext.fresh[s]);
        const auto& gen = graph.generators()[shifts[s].gen];
        for (const auto& [m, coeff] : gen.terms()) {
            Monomial prod = m * shifts[s].mono;
            // split into fiber part (row key) and base part (payload)
            std::vector<int> key(pr.vs->size(), 0);
            Monomial basepart(ext.vs->size());
            for (std::size_t i = 0; i < pr.vs->size(); ++i) {
                if (fiber_mask[i]) key[i] = prod[i];
                else basepart[i] = prod[i];
            }
            P payload = P::from_terms(ext.vs, fc, {{basepart, coeff}}) * cvar;
            auto it = rows.find(key);
            if (it == rows.end()) rows.emplace(key, payload);
            else it->second = it->second + payload;
        }
    }
    std::vector<P> system;
    for (const auto& g : base_constraints)
        if (!g.is_zero()) system.push_back(g.lift(ext.vs, fc, ext.old_to_new));
    const std::vector<int> zero_key(pr.vs->size(), 0);
    bool saw_const = false;
    for (auto& [key, poly] : rows) {
        if (key == zero_key) {
            system.push_back(poly - P::one(ext.vs, fc));
            saw_const = true;
        } else {
            system.push_back(poly);
        }
    }
    FiberEmptinessOutcome<K> out;
    if (!saw_const) {
        // no combination can even produce the constant 1
        out.empty_fiber_exists = Tri::no;
        return out;
    }
    Ideal<K> sys(ext.vs, fc, std::move(system));
    if (is_inconsistent(sys, budget)) {
        out.empty_fiber_exists = Tri::no;
    } else {
        out.empty_fiber_exists = Tri::yes;
        if (auto pt = find_rational_point(sys, budget)) {
            std::vector<K> basept;
            for (int i : base) basept.push_back((*pt)[i]);
            out.base_point = basept;
        }
    }
    return out;
}

} // namespace cdetail

/// Affine question iii': F|X regular (graph-side tangent test plus
/// surjectivity of graph -> X) and surjective onto Y.
template <FieldElem K>
Verdict check_surjective_regular_affine(const RationalMapRep<K>& F, const Variety<K>& X,
                                        const Variety<K>& Y, const CheckCaps& caps = {}) {
    Verdict into = check_rational_into(F, X, Y, caps);
    if (into.answer != Tri::yes) {
        into.reason = "not a rational map into Y: " + into.reason;
        return into;
    }
    Verdict v;
    gbdetail::SpentScope scope(&v.spent);
    if (X.mode() != Mode::affine) throw InputError("affine check on non-affine input");
    try {
        auto pr = make_product(X.coords(), default_target_names(Mode::affine, Y.ambient_dim()));
        auto G = restricted_graph(F, X, pr, caps.budget);
        // regular: relative tangents over X vanish and graph -> X is onto
        auto tan = cdetail::relative_tangent_zero(G, pr, Mode::affine, true, caps.budget);
        if (tan.answer == Tri::no) {
            v.answer = Tri::no;
            v.reason = "not regular: relative tangent space jumps on the graph";
            if (tan.point) v.witness_point = cdetail::format_point(pr.vs, *tan.point);
            return v;
        }
        std::vector<Polynomial<K>> xlift;
        {
            std::vector<int> map(pr.src.begin(), pr.src.end());
            for (const auto& g : X.ideal().generators())
                xlift.push_back(g.lift(pr.vs, X.field(), map));
        }
        auto onto_x = cdetail::fiber_emptiness(G, pr, false, xlift, caps.fiber_cert_cap,
                                               caps.budget);
        if (onto_x.empty_fiber_exists == Tri::yes) {
            v.answer = Tri::no;
            v.reason = "not regular: the graph misses a point of X";
            if (onto_x.base_point)
                v.witness_point = cdetail::format_point(X.coords(), *onto_x.base_point);
            return v;
        }
        // surjective onto Y: no y in Y with empty fiber
        auto onto_y = cdetail::fiber_emptiness(G, pr, true, cdetail::lift_target_ideal(Y, pr),
                                               caps.fiber_cert_cap, caps.budget);
        if (onto_y.empty_fiber_exists == Tri::yes) {
            v.answer = Tri::no;
            v.reason = "a point of Y has a certified-empty fiber";
            if (onto_y.base_point) {
                VarSetPtr tvs = pr.vs->restricted(pr.tgt);
                v.witness_point = cdetail::format_point(tvs, *onto_y.base_point);
            }
            return v;
        }
        v.answer = Tri::yes;
        v.reason = "regular and surjective onto Y (fiber certificates capped at degree " +
                   std::to_string(caps.fiber_cert_cap) + ")";
        return v;
    } catch (const BudgetExceeded& e) {
        v.answer = Tri::inconclusive;
        v.reason = e.what();
        return v;
    }
}

/// Affine question iv': closed embedding onto a closed subvariety of Y.
template <FieldElem K>
Verdict check_closed_embedding_affine(const RationalMapRep<K>& F, const Variety<K>& X,
                                      const Variety<K>& Y, const CheckCaps& caps = {}) {
    Verdict into = check_rational_into(F, X, Y, caps);
    if (into.answer != Tri::yes) {
        into.reason = "not a rational map into Y: " + into.reason;
        return into;
    }
    Verdict v;
    gbdetail::SpentScope scope(&v.spent);
    if (X.mode() != Mode::affine) throw InputError("affine check on non-affine input");
    try {
        auto pr = make_product(X.coords(), default_target_names(Mode::affine, Y.ambient_dim()));
        auto G = restricted_graph(F, X, pr, caps.budget);
        auto res = cdetail::relative_tangent_zero(G, pr, Mode::affine, false, caps.budget);
        if (res.answer == Tri::no) {
            v.answer = Tri::no;
            v.reason = "embedding fails: relative tangent spaces over the image jump";
            if (res.point) v.witness_point = cdetail::format_point(pr.vs, *res.point);
            for (const auto& g : res.failing_system)
                v.evidence.emplace_back("consistent system generator", g.format());
            return v;
        }
        auto img = image_closure(G, pr, Mode::affine, caps.budget);
        if (!smoothness_check(img, caps.budget)) {
            v.answer = Tri::no;
            v.reason = "the closed image would have to be smooth, but the image closure is "
                       "singular";
            for (const auto& g : img.ideal().generators())
                v.evidence.emplace_back("image generator", g.format());
            return v;
        }
        auto bir = check_birational(F, X, img, caps);
        if (bir.verdict.answer != Tri::yes) {
            v.answer = bir.verdict.answer;
            v.reason = "not birational onto the image: " + bir.verdict.reason;
            return v;
        }
        // image must be closed: every point of the image closure is hit
        std::vector<Polynomial<K>> zbar;
        {
            std::vector<int> map(pr.tgt.begin(), pr.tgt.end());
            for (const auto& g : img.ideal().generators())
                zbar.push_back(g.lift(pr.vs, X.field(), map));
        }
        auto onto = cdetail::fiber_emptiness(G, pr, true, zbar, caps.fiber_cert_cap, caps.budget);
        if (onto.empty_fiber_exists == Tri::yes) {
            v.answer = Tri::no;
            v.reason = "the image is not closed: a boundary point has an empty fiber";
            if (onto.base_point) {
                VarSetPtr tvs = pr.vs->restricted(pr.tgt);
                v.witness_point = cdetail::format_point(tvs, *onto.base_point);
            }
            return v;
        }
        v.answer = Tri::yes;
        v.reason = "closed embedding onto a smooth closed subvariety of Y";
        return v;
    } catch (const BudgetExceeded& e) {
        v.answer = Tri::inconclusive;
        v.reason = e.what();
        return v;
    }
}

} // namespace birat
