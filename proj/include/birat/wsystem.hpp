#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "birat/checks.hpp"
#include "birat/monoids.hpp"
#include "birat/nullcert.hpp"
#include "birat/qseq.hpp"

namespace birat {

/// Degree caps for the emitted parameterized systems. The theoretical
/// constants are worst-case exponential; the caps keep the emitted shape
/// at desk scale while witness verification stays exact at any cap.
struct SysCaps {
    int monoid_cap = 3; // C_2: degree of the general monoid blocks
    int tau_degree = 2; // degree cap of the emitted tau cofactor blocks
    int z_cap = 3;      // degree cap of the dominance hypersurface Z
};

enum class EqKind { pointwise, identity };

struct Provenance {
    std::string step; // step4 | step5 | step6 | step7 | step8 | wplus | e | eprime
    int stage = 0;
    std::string role;
};

/// A block of undetermined coefficients: one parameter variable per
/// monomial of degree <= degree over the support variables.
template <FieldElem K>
struct CoeffBlock {
    std::string id;
    std::vector<int> support;
    int degree = 0;
    std::vector<std::pair<Monomial, int>> coeffs; // (monomial, param var index)
    Polynomial<K> generic;                        // sum param * monomial
};

template <FieldElem K>
struct IdentitySpec {
    Polynomial<K> target;             // h in the certificate identity
    bool rabinowitsch = true;         // true: -1 + tau0 (1 - a h) + sum tau_k h_k
                                      // false: -1 + tau0 h + sum tau_k h_k
    std::vector<int> generator_eqs;   // equation indices acting as the h_k
    std::vector<std::string> tau_blocks; // tau0 first, then one per generator
};

template <FieldElem K>
struct SysEquation {
    Polynomial<K> poly;
    EqKind kind = EqKind::pointwise;
    Provenance prov;
    std::optional<IdentitySpec<K>> identity;
};

/// Which graph projection a monoid block chain belongs to; drives the
/// witness fits.
struct StageDesc {
    enum class Kind { step5, step6, step7, wplus_chain, wplus_final, dominance_z };
    Kind kind = Kind::step5;
    int stage = 0;
    int fiber_var = -1;           // -1 for step6 (two fibers) and dominance
    int fiber_var2 = -1;          // step6 only
    std::vector<std::string> block_ids;
    std::vector<int> identity_eqs; // identities appended by this stage
};

/// The assembled parameterized polynomial system: point variables,
/// parameter variables, equations with provenance, and the coefficient
/// block registry.
template <FieldElem K>
class ParamSystem {
public:
    VarSetPtr vs;
    FieldCtx<K> fc;
    std::vector<char> is_param;
    std::vector<SysEquation<K>> equations;
    std::map<std::string, CoeffBlock<K>> blocks;
    std::vector<std::string> block_order;
    std::vector<StageDesc> stages;

    std::string kind = "W"; // W | W+ | E | E'
    int n = 0, d = 0;
    SysCaps caps;
    int a_var = -1, w_var = -1;
    // metadata: the effective bounds backing the caps
    mpz_class c1_bound = 0;  // Bezout bound on deg(graph)
    mpz_class q_bound = 0;   // delta * q_s(C_2) from the monoid lemma

    std::vector<int> point_vars() const {
        std::vector<int> out;
        for (std::size_t i = 0; i < vs->size(); ++i)
            if (!is_param[i]) out.push_back(static_cast<int>(i));
        return out;
    }
    std::vector<int> param_vars() const {
        std::vector<int> out;
        for (std::size_t i = 0; i < vs->size(); ++i)
            if (is_param[i]) out.push_back(static_cast<int>(i));
        return out;
    }
    int var(const std::string& name) const {
        int i = vs->index_of(name);
        if (i < 0) throw InputError("unknown system variable " + name);
        return i;
    }
};

/// Values for every parameter variable.
template <FieldElem K>
struct WitnessAssignment {
    std::map<int, K> values; // param var index -> value
    std::map<std::string, std::string> notes;
};

namespace wdetail {

inline std::vector<std::string> block_param_names(const std::string& id, std::size_t count) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < count; ++i)
        names.push_back(id + "_m" + std::to_string(i));
    return names;
}

/// Declared shape of one coefficient block, before variables exist.
struct BlockPlan {
    std::string id;
    std::vector<std::string> support_names;
    int degree = 0;
};

} // namespace wdetail

/// Shared builder: turns block plans plus an equation recipe into a
/// ParamSystem over one combined variable set.
template <FieldElem K>
class SystemAssembler {
public:
    SystemAssembler(FieldCtx<K> fc, std::vector<std::string> point_names)
        : fc_(fc), point_names_(std::move(point_names)) {}

    void plan_block(const std::string& id, const std::vector<std::string>& support, int degree) {
        plans_.push_back({id, support, degree});
    }

    /// Materialize the variable set: point variables first, then the
    /// parameters of each planned block in order.
    void materialize(ParamSystem<K>& sys) {
        std::vector<std::string> names = point_names_;
        std::vector<std::size_t> block_starts;
        for (const auto& plan : plans_) {
            // size of the block: all monomials of degree <= degree over
            // the support
            std::vector<char> mask(point_names_.size(), 0);
            for (const auto& s : plan.support_names) {
                auto it = std::find(point_names_.begin(), point_names_.end(), s);
                if (it == point_names_.end()) throw InputError("block support must be point vars");
                mask[it - point_names_.begin()] = 1;
            }
            auto monos = mdetail::block_monomials(mask, plan.degree, false);
            block_starts.push_back(names.size());
            auto pnames = wdetail::block_param_names(plan.id, monos.size());
            names.insert(names.end(), pnames.begin(), pnames.end());
        }
        sys.vs = VariableSet::make(names);
        sys.fc = fc_;
        sys.is_param.assign(names.size(), 0);
        for (std::size_t i = point_names_.size(); i < names.size(); ++i) sys.is_param[i] = 1;

        for (std::size_t b = 0; b < plans_.size(); ++b) {
            const auto& plan = plans_[b];
            CoeffBlock<K> blk;
            blk.id = plan.id;
            blk.degree = plan.degree;
            std::vector<char> mask(sys.vs->size(), 0);
            for (const auto& s : plan.support_names) {
                int idx = sys.vs->index_of(s);
                blk.support.push_back(idx);
                mask[idx] = 1;
            }
            auto monos = mdetail::block_monomials(mask, plan.degree, false);
            std::vector<typename Polynomial<K>::Term> terms;
            for (std::size_t m = 0; m < monos.size(); ++m) {
                int pvar = static_cast<int>(block_starts[b] + m);
                blk.coeffs.emplace_back(monos[m], pvar);
            }
            // generic polynomial: sum param * monomial
            Polynomial<K> gen = Polynomial<K>::zero(sys.vs, fc_);
            for (const auto& [mono, pvar] : blk.coeffs) {
                Monomial m = mono;
                m[pvar] += 1;
                gen = gen + Polynomial<K>::from_terms(sys.vs, fc_, {{m, fc_.one()}});
            }
            blk.generic = gen;
            sys.blocks.emplace(plan.id, std::move(blk));
            sys.block_order.push_back(plan.id);
        }
    }

private:
    FieldCtx<K> fc_;
    std::vector<std::string> point_names_;
    std::vector<wdetail::BlockPlan> plans_;
};

namespace wdetail {

/// Appends the two-equation identity pair shell used by Steps 7/8 and
/// the W+ chain: a Rabinowitsch containment identity for `target` plus,
/// when `bad_locus` is given, the weak-Nullstellensatz identity that the
/// system avoids V(bad_locus).
template <FieldElem K>
int append_identity(ParamSystem<K>& sys, const Polynomial<K>& target, bool rabinowitsch,
                    const std::vector<int>& generator_eqs, const std::string& tau_stem,
                    const Provenance& prov) {
    using P = Polynomial<K>;
    // tau blocks were planned by the builder under tau_stem
    IdentitySpec<K> spec;
    spec.target = target;
    spec.rabinowitsch = rabinowitsch;
    spec.generator_eqs = generator_eqs;
    P a = P::variable(sys.vs, sys.fc, sys.a_var);
    P eq = -P::one(sys.vs, sys.fc);
    const auto& tau0 = sys.blocks.at(tau_stem + "_0").generic;
    spec.tau_blocks.push_back(tau_stem + "_0");
    if (rabinowitsch)
        eq = eq + tau0 * (P::one(sys.vs, sys.fc) - a * target);
    else
        eq = eq + tau0 * target;
    for (std::size_t k = 0; k < generator_eqs.size(); ++k) {
        const std::string id = tau_stem + "_" + std::to_string(k + 1);
        spec.tau_blocks.push_back(id);
        eq = eq + sys.blocks.at(id).generic * sys.equations[generator_eqs[k]].poly;
    }
    SysEquation<K> se;
    se.poly = eq;
    se.kind = EqKind::identity;
    se.prov = prov;
    se.identity = std::move(spec);
    sys.equations.push_back(std::move(se));
    return static_cast<int>(sys.equations.size()) - 1;
}

} // namespace wdetail

/// Checks X against every coordinate hyperplane; when contained, applies
/// a recorded deterministic shear until clear (Algorithm Step 1).
template <FieldElem K>
std::pair<Variety<K>, std::optional<LinearChange<K>>> avoid_coordinate_hyperplanes(
    const Variety<K>& X, const Budget& budget = {}) {
    auto fc = X.field();
    auto in_some_hyperplane = [&](const Variety<K>& V) {
        for (std::size_t k = 0; k < V.coords()->size(); ++k) {
            auto xk = Polynomial<K>::variable(V.coords(), fc, static_cast<int>(k));
            if (radical_membership(xk, V.ideal(), budget)) return true;
        }
        return false;
    };
    if (!in_some_hyperplane(X)) return {X, std::nullopt};
    std::size_t n = X.coords()->size();
    for (long lambda = 1; lambda <= 5; ++lambda) {
        LinearChange<K> change;
        change.A.assign(n, std::vector<K>(n, fc.zero()));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j)
                change.A[i][j] = (i == j) ? fc.one() : fc.from_long(lambda);
        }
        try {
            Variety<K> moved(X.ambient_dim(), X.mode(), change.apply(X.ideal()));
            if (!in_some_hyperplane(moved)) return {moved, change};
        } catch (const InputError&) {
            continue; // singular shear, try the next lambda
        }
    }
    throw InputError("could not move X off the coordinate hyperplanes");
}

/// Algorithm Steps 4-8: the parameterized system whose solvability
/// characterizes bounded-degree birational maps from X onto Y. X, Y are
/// projective subvarieties of P^n over coordinate sets of size n+1;
/// everything is assembled on the affine charts x_0 = 1, y_0 = 1.
template <FieldElem K>
ParamSystem<K> build_system(const Variety<K>& X, const Variety<K>& Y, int n, int d,
                            const SysCaps& caps = {}, const Budget& budget = {},
                            bool wplus = false) {
    using P = Polynomial<K>;
    if (X.mode() != Mode::projective || Y.mode() != Mode::projective)
        throw InputError("build_system expects projective X and Y");
    if (X.ambient_dim() != n || Y.ambient_dim() != n)
        throw InputError("build_system: ambient dimension mismatch");
    if (n < 2) throw InputError("build_system needs n >= 2");
    if (X.dimension(budget) != Y.dimension(budget))
        throw InputError("build_system: X and Y must have equal dimension");
    auto [Xm, xchange] = avoid_coordinate_hyperplanes(X, budget);
    auto [Ym, ychange] = avoid_coordinate_hyperplanes(Y, budget);
    if (xchange || ychange)
        throw InputError("inputs meet a coordinate hyperplane; apply the recorded linear "
                         "change first (Step 1) and re-run");

    auto fc = X.field();
    const int C2 = caps.monoid_cap;

    // ---- point variables, in the documented fixed order
    std::vector<std::string> pts;
    for (int i = 1; i <= n; ++i) pts.push_back("x" + std::to_string(i));
    for (int i = 1; i <= n; ++i) pts.push_back("y" + std::to_string(i));
    for (int j = 1; j <= n - 1; ++j) pts.push_back("t_0_" + std::to_string(n - j));
    pts.push_back("t_0_0_1");
    pts.push_back("t_0_0_2");
    pts.push_back("a");
    if (wplus) pts.push_back("w");

    auto xname = [](int i) { return "x" + std::to_string(i); };
    auto yname = [](int i) { return "y" + std::to_string(i); };

    SystemAssembler<K> asmb(fc, pts);

    // ---- plan the coefficient blocks
    // Step 5 stages j = 1..n-1: monoid over (x_1..x_n, y_1..y_{j-1}), fiber y_j
    for (int j = 1; j <= n - 1; ++j) {
        std::vector<std::string> sup;
        for (int i = 1; i <= n; ++i) sup.push_back(xname(i));
        for (int i = 1; i <= j - 1; ++i) sup.push_back(yname(i));
        std::string stem = "f_0_" + std::to_string(n - j);
        asmb.plan_block(stem + "_1", sup, C2 - 1);
        asmb.plan_block(stem + "_2", sup, C2);
    }
    // Step 6: two-vertex monoid over (x_1..x_{n-1}, y_1..y_{n-1})
    {
        std::vector<std::string> sup;
        for (int i = 1; i <= n - 1; ++i) sup.push_back(xname(i));
        for (int i = 1; i <= n - 1; ++i) sup.push_back(yname(i));
        asmb.plan_block("f_0_0_1", sup, C2);
        asmb.plan_block("g_0_0", sup, C2 - 1);
        asmb.plan_block("h_0_0", sup, C2 - 1);
        asmb.plan_block("f_0_0_2", sup, C2 - 2);
    }
    // tau support: every point variable
    const std::vector<std::string> tau_sup = pts;
    // Step 7 stages j = 1..n: monoid over (x_1..x_{n-j}, y_1..y_n), fiber x_{n-j+1};
    // equation counts before each stage fix the tau block fan-out
    int eq_count = static_cast<int>(Xm.ideal().generators().size()) // step 4
                   + 2 * (n - 1)                                    // step 5
                   + 3;                                             // step 6
    std::vector<int> step7_mj;
    for (int j = 1; j <= n; ++j) {
        std::vector<std::string> sup;
        for (int i = 1; i <= n - j; ++i) sup.push_back(xname(i));
        for (int i = 1; i <= n; ++i) sup.push_back(yname(i));
        std::string stem = "f_" + std::to_string(j) + "_0";
        asmb.plan_block(stem + "_1", sup, C2 - 1);
        asmb.plan_block(stem + "_2", sup, C2);
        step7_mj.push_back(eq_count);
        for (int part = 1; part <= 2; ++part)
            for (int k = 0; k <= eq_count; ++k)
                asmb.plan_block("tau_" + std::to_string(j) + "_" + std::to_string(part) + "_" +
                                    std::to_string(k),
                                tau_sup, caps.tau_degree);
        eq_count += 2;
    }
    // Step 8: F blocks of degree <= d over (x_1..x_n), plus tau blocks for
    // the n graph containments and the containments in I(Y)
    {
        std::vector<std::string> sup;
        for (int i = 1; i <= n; ++i) sup.push_back(xname(i));
        for (int i = 0; i <= n; ++i) asmb.plan_block("F_" + std::to_string(i), sup, d);
    }
    int step8_m = eq_count + 1; // the pointwise 1 - a F_0 joins the generators
    int ytargets = static_cast<int>(Ym.ideal().generators().size());
    for (int t = 0; t < n + ytargets; ++t)
        for (int k = 0; k <= step8_m; ++k)
            asmb.plan_block("tau_8_" + std::to_string(t) + "_" + std::to_string(k), tau_sup,
                            caps.tau_degree);
    eq_count += 1 + n + ytargets;

    // W+ blocks: a one-vertex monoid chain for the graph of F killing
    // x_1 .. x_{n-1}, then the w-extended final monoid killing x_n
    std::vector<int> wplus_mj;
    if (wplus) {
        int ggens = n + 1; // y_i F_0 - F_i plus 1 - a F_0
        int wplus_eqs = 0;
        for (int p = 1; p <= n - 1; ++p) {
            std::vector<std::string> sup;
            for (int i = p + 1; i <= n; ++i) sup.push_back(xname(i));
            for (int i = 1; i <= n; ++i) sup.push_back(yname(i));
            std::string stem = "fp_" + std::to_string(p);
            asmb.plan_block(stem + "_1", sup, C2 - 1);
            asmb.plan_block(stem + "_2", sup, C2);
            int m = ggens + wplus_eqs;
            wplus_mj.push_back(m);
            for (int part = 1; part <= 2; ++part)
                for (int k = 0; k <= m; ++k)
                    asmb.plan_block("taup_" + std::to_string(p) + "_" + std::to_string(part) +
                                        "_" + std::to_string(k),
                                    tau_sup, caps.tau_degree);
            wplus_eqs += 2;
        }
        {
            std::vector<std::string> sup;
            for (int i = 1; i <= n; ++i) sup.push_back(yname(i));
            sup.push_back("w");
            asmb.plan_block("fp_" + std::to_string(n) + "_1", sup, C2 - 1);
            asmb.plan_block("fp_" + std::to_string(n) + "_2", sup, C2);
            int m = ggens + wplus_eqs + 1; // + the pointwise w equation
            wplus_mj.push_back(m);
            for (int part = 1; part <= 2; ++part)
                for (int k = 0; k <= m; ++k)
                    asmb.plan_block("taup_" + std::to_string(n) + "_" + std::to_string(part) +
                                        "_" + std::to_string(k),
                                    tau_sup, caps.tau_degree);
            wplus_eqs += 3;
            int m2 = ggens + wplus_eqs;
            for (int k = 0; k <= m2; ++k)
                asmb.plan_block("taup_w_" + std::to_string(k), tau_sup, caps.tau_degree);
        }
    }

    ParamSystem<K> sys;
    asmb.materialize(sys);
    sys.kind = wplus ? "W+" : "W";
    sys.n = n;
    sys.d = d;
    sys.caps = caps;
    sys.a_var = sys.var("a");
    if (wplus) sys.w_var = sys.var("w");

    // metadata: effective bounds the caps stand in for
    {
        std::vector<int> degs;
        for (const auto& g : Xm.ideal().generators())
            degs.push_back(std::max(1, g.total_degree()));
        DegreeBound bez = degs.empty() ? DegreeBound{1, BoundDerivation::graph}
                                       : bezout_degree_bound(degs);
        mpz_class c1 = bez.value;
        for (int i = 0; i < n; ++i) c1 *= (d + 1);
        sys.c1_bound = c1;
        int s = std::max(0, Xm.dimension(budget));
        sys.q_bound = monoid_h0_bound(c1, s, C2);
    }

    auto lift_point_poly = [&](const P& p, const VarSetPtr& from,
                               const std::vector<int>& to_vars) {
        std::vector<int> map;
        for (std::size_t i = 0; i < from->size(); ++i) map.push_back(to_vars[i]);
        return p.lift(sys.vs, fc, map);
    };

    // ---- Step 4: the seed S_{0,n} = dehomogenized I(X)
    std::vector<int> xv, yv;
    for (int i = 1; i <= n; ++i) xv.push_back(sys.var(xname(i)));
    for (int i = 1; i <= n; ++i) yv.push_back(sys.var(yname(i)));
    for (const auto& g : Xm.ideal().generators()) {
        P aff = g.dehomogenize(0);
        // X coords x_0..x_n map to (unused, x1..xn)
        std::vector<int> map{sys.var(xname(1))};
        for (int i = 1; i <= n; ++i) map.push_back(sys.var(xname(i)));
        P lifted = aff.lift(sys.vs, fc, map);
        sys.equations.push_back({lifted, EqKind::pointwise, {"step4", 0, "seed"}, {}});
    }

    // ---- Step 5: one-vertex chains adding y_1 .. y_{n-1}
    for (int j = 1; j <= n - 1; ++j) {
        std::string stem = "f_0_" + std::to_string(n - j);
        const auto& f1 = sys.blocks.at(stem + "_1").generic;
        const auto& f2 = sys.blocks.at(stem + "_2").generic;
        P yj = P::variable(sys.vs, fc, sys.var(yname(j)));
        P t = P::variable(sys.vs, fc, sys.var("t_0_" + std::to_string(n - j)));
        sys.equations.push_back(
            {f1 * yj + f2, EqKind::pointwise, {"step5", j, "monoid"}, {}});
        sys.equations.push_back({P::one(sys.vs, fc) - t * f1 * f2, EqKind::pointwise,
                                 {"step5", j, "chart"}, {}});
        StageDesc sd;
        sd.kind = StageDesc::Kind::step5;
        sd.stage = j;
        sd.fiber_var = sys.var(yname(j));
        sd.block_ids = {stem + "_1", stem + "_2"};
        sys.stages.push_back(sd);
    }

    // ---- Step 6: the two-vertex monoid adding y_n
    {
        const auto& f1 = sys.blocks.at("f_0_0_1").generic;
        const auto& g0 = sys.blocks.at("g_0_0").generic;
        const auto& h0 = sys.blocks.at("h_0_0").generic;
        const auto& f2 = sys.blocks.at("f_0_0_2").generic;
        P xn = P::variable(sys.vs, fc, sys.var(xname(n)));
        P yn = P::variable(sys.vs, fc, sys.var(yname(n)));
        P t1 = P::variable(sys.vs, fc, sys.var("t_0_0_1"));
        P t2 = P::variable(sys.vs, fc, sys.var("t_0_0_2"));
        sys.equations.push_back({f1 + xn * g0 + yn * h0 + xn * yn * f2, EqKind::pointwise,
                                 {"step6", 0, "monoid"}, {}});
        sys.equations.push_back(
            {P::one(sys.vs, fc) - t1 * (f1 + xn * g0) * (h0 + xn * f2), EqKind::pointwise,
             {"step6", 0, "chart"}, {}});
        sys.equations.push_back(
            {P::one(sys.vs, fc) - t2 * (f1 + yn * h0) * (g0 + yn * f2), EqKind::pointwise,
             {"step6", 0, "chart"}, {}});
        StageDesc sd;
        sd.kind = StageDesc::Kind::step6;
        sd.fiber_var = sys.var(xname(n));
        sd.fiber_var2 = sys.var(yname(n));
        sd.block_ids = {"f_0_0_1", "g_0_0", "h_0_0", "f_0_0_2"};
        sys.stages.push_back(sd);
    }

    // ---- Step 7: Nullstellensatz-coupled descent on the x side
    for (int j = 1; j <= n; ++j) {
        std::string stem = "f_" + std::to_string(j) + "_0";
        const auto& f1 = sys.blocks.at(stem + "_1").generic;
        const auto& f2 = sys.blocks.at(stem + "_2").generic;
        P fiber = P::variable(sys.vs, fc, sys.var(xname(n - j + 1)));
        std::vector<int> gens;
        for (int k = 0; k < step7_mj[j - 1]; ++k) gens.push_back(k);
        wdetail::append_identity(sys, f1 * fiber + f2, true, gens,
                                 "tau_" + std::to_string(j) + "_1",
                                 {"step7", j, "containment"});
        wdetail::append_identity(sys, f1 * f2, false, gens,
                                 "tau_" + std::to_string(j) + "_2",
                                 {"step7", j, "bad-locus"});
        StageDesc sd;
        sd.kind = StageDesc::Kind::step7;
        sd.stage = j;
        sd.fiber_var = sys.var(xname(n - j + 1));
        sd.block_ids = {stem + "_1", stem + "_2"};
        sys.stages.push_back(sd);
    }

    // ---- Step 8: couple to the map F of degree <= d and to I(Y)
    {
        const auto& F0 = sys.blocks.at("F_0").generic;
        P a = P::variable(sys.vs, fc, sys.a_var);
        int first_gen_count = static_cast<int>(sys.equations.size());
        sys.equations.push_back({P::one(sys.vs, fc) - a * F0, EqKind::pointwise,
                                 {"step8", 0, "f-denominator"}, {}});
        std::vector<int> gens;
        for (int k = 0; k <= first_gen_count; ++k) gens.push_back(k);
        int t = 0;
        for (int i = 1; i <= n; ++i, ++t) {
            const auto& Fi = sys.blocks.at("F_" + std::to_string(i)).generic;
            P yi = P::variable(sys.vs, fc, sys.var(yname(i)));
            wdetail::append_identity(sys, yi * F0 - Fi, true, gens,
                                     "tau_8_" + std::to_string(t), {"step8", 0, "graph"});
        }
        for (const auto& gy : Ym.ideal().generators()) {
            P aff = gy.dehomogenize(0);
            std::vector<int> map{sys.var(yname(1))};
            for (int i = 1; i <= n; ++i) map.push_back(sys.var(yname(i)));
            P target = aff.lift(sys.vs, fc, map);
            wdetail::append_identity(sys, target, true, gens, "tau_8_" + std::to_string(t),
                                     {"step8", 0, "target"});
            ++t;
        }
    }

    // ---- W+ : the one-vertex chain certifying that F itself is birational
    if (wplus) {
        std::vector<int> fgraph_eqs;
        // the graph equations of F live in the system already as step8
        // targets only; re-add them as explicit generators of the chain
        {
            const auto& F0 = sys.blocks.at("F_0").generic;
            P a = P::variable(sys.vs, fc, sys.a_var);
            for (int i = 1; i <= n; ++i) {
                const auto& Fi = sys.blocks.at("F_" + std::to_string(i)).generic;
                P yi = P::variable(sys.vs, fc, sys.var(yname(i)));
                sys.equations.push_back({yi * F0 - Fi, EqKind::pointwise,
                                         {"wplus", 0, "f-graph"}, {}});
                fgraph_eqs.push_back(static_cast<int>(sys.equations.size()) - 1);
            }
            sys.equations.push_back({P::one(sys.vs, fc) - a * F0, EqKind::pointwise,
                                     {"wplus", 0, "f-denominator"}, {}});
            fgraph_eqs.push_back(static_cast<int>(sys.equations.size()) - 1);
        }
        std::vector<int> gens = fgraph_eqs;
        for (int p = 1; p <= n - 1; ++p) {
            std::string stem = "fp_" + std::to_string(p);
            const auto& f1 = sys.blocks.at(stem + "_1").generic;
            const auto& f2 = sys.blocks.at(stem + "_2").generic;
            P fiber = P::variable(sys.vs, fc, sys.var(xname(p)));
            wdetail::append_identity(sys, f1 * fiber + f2, true, gens,
                                     "taup_" + std::to_string(p) + "_1",
                                     {"wplus", p, "containment"});
            gens.push_back(static_cast<int>(sys.equations.size()) - 1);
            wdetail::append_identity(sys, f1 * f2, false,
                                     std::vector<int>(gens.begin(), gens.end() - 1),
                                     "taup_" + std::to_string(p) + "_2",
                                     {"wplus", p, "bad-locus"});
            gens.push_back(static_cast<int>(sys.equations.size()) - 1);
            StageDesc sd;
            sd.kind = StageDesc::Kind::wplus_chain;
            sd.stage = p;
            sd.fiber_var = sys.var(xname(p));
            sd.block_ids = {stem + "_1", stem + "_2"};
            sys.stages.push_back(sd);
        }
        // the w-slice: H' sits in the hyperplane w = 0 of the extended space
        P w = P::variable(sys.vs, fc, sys.w_var);
        sys.equations.push_back({w, EqKind::pointwise, {"wplus", n, "w-slice"}, {}});
        gens.push_back(static_cast<int>(sys.equations.size()) - 1);
        {
            std::string stem = "fp_" + std::to_string(n);
            const auto& f1 = sys.blocks.at(stem + "_1").generic;
            const auto& f2 = sys.blocks.at(stem + "_2").generic;
            P fiber = P::variable(sys.vs, fc, sys.var(xname(n)));
            wdetail::append_identity(sys, f1 * fiber + f2, true, gens,
                                     "taup_" + std::to_string(n) + "_1",
                                     {"wplus", n, "containment"});
            gens.push_back(static_cast<int>(sys.equations.size()) - 1);
            wdetail::append_identity(sys, f1 * f2, false,
                                     std::vector<int>(gens.begin(), gens.end() - 1),
                                     "taup_" + std::to_string(n) + "_2",
                                     {"wplus", n, "bad-locus"});
            gens.push_back(static_cast<int>(sys.equations.size()) - 1);
            StageDesc sd;
            sd.kind = StageDesc::Kind::wplus_final;
            sd.stage = n;
            sd.fiber_var = sys.var(xname(n));
            sd.block_ids = {stem + "_1", stem + "_2"};
            sys.stages.push_back(sd);
        }
        // image of the final projection stays inside the hyperplane w = 0
        wdetail::append_identity(sys, w, true, gens, "taup_w", {"wplus", n, "w-image"});
    }
    return sys;
}

/// The W+ variant: build_system plus the one-vertex monoid chain for the
/// graph of F and the final w-hyperplane image condition.
template <FieldElem K>
ParamSystem<K> build_birational_plus_system(const Variety<K>& X, const Variety<K>& Y, int n,
                                            int d, const SysCaps& caps = {},
                                            const Budget& budget = {}) {
    return build_system(X, Y, n, d, caps, budget, true);
}

/// The dominance systems of Question (A): (E) adds a bounded-degree
/// hypersurface Z through the image of X; (E') additionally forces Z to
/// contain Y. Dominant maps correspond to solutions of (E) that do not
/// solve (E').
template <FieldElem K>
std::pair<ParamSystem<K>, ParamSystem<K>> build_dominance_system(const Variety<K>& X,
                                                                 const Variety<K>& Y, int n,
                                                                 int d,
                                                                 const SysCaps& caps = {},
                                                                 const Budget& budget = {}) {
    using P = Polynomial<K>;
    if (X.mode() != Mode::projective || Y.mode() != Mode::projective)
        throw InputError("build_dominance_system expects projective X and Y");
    if (X.ambient_dim() != n || Y.ambient_dim() != n)
        throw InputError("build_dominance_system: ambient dimension mismatch");
    auto [Xm, xchange] = avoid_coordinate_hyperplanes(X, budget);
    auto [Ym, ychange] = avoid_coordinate_hyperplanes(Y, budget);
    if (xchange || ychange)
        throw InputError("inputs meet a coordinate hyperplane; apply the recorded linear "
                         "change first (Step 1) and re-run");
    auto fc = X.field();

    auto xname = [](int i) { return "x" + std::to_string(i); };
    auto yname = [](int i) { return "y" + std::to_string(i); };

    auto build_one = [&](bool prime) {
        std::vector<std::string> pts;
        for (int i = 1; i <= n; ++i) pts.push_back(xname(i));
        for (int i = 1; i <= n; ++i) pts.push_back(yname(i));
        pts.push_back("a");
        for (int i = 1; i <= n; ++i) pts.push_back("ys" + std::to_string(i));
        pts.push_back("s");

        SystemAssembler<K> asmb(fc, pts);
        std::vector<std::string> xsup, ysup;
        for (int i = 1; i <= n; ++i) xsup.push_back(xname(i));
        for (int i = 1; i <= n; ++i) ysup.push_back(yname(i));
        for (int i = 0; i <= n; ++i) asmb.plan_block("F_" + std::to_string(i), xsup, d);
        asmb.plan_block("Z", ysup, caps.z_cap);

        int base_eqs = static_cast<int>(Xm.ideal().generators().size()) + n + 1;
        int ytargets = static_cast<int>(Ym.ideal().generators().size());
        const std::vector<std::string> tau_sup = pts;
        for (int t = 0; t < ytargets; ++t)
            for (int k = 0; k <= base_eqs; ++k)
                asmb.plan_block("tau_y_" + std::to_string(t) + "_" + std::to_string(k), tau_sup,
                                caps.tau_degree);
        for (int k = 0; k <= base_eqs; ++k)
            asmb.plan_block("tau_z_" + std::to_string(k), tau_sup, caps.tau_degree);
        if (prime) {
            for (int k = 0; k <= ytargets; ++k)
                asmb.plan_block("tau_zy_" + std::to_string(k), tau_sup, caps.tau_degree);
        }

        ParamSystem<K> sys;
        asmb.materialize(sys);
        sys.kind = prime ? "E'" : "E";
        sys.n = n;
        sys.d = d;
        sys.caps = caps;
        sys.a_var = sys.var("a");

        // base: I(X), the graph of F, and the chart 1 - a F_0
        for (const auto& g : Xm.ideal().generators()) {
            P aff = g.dehomogenize(0);
            std::vector<int> map{sys.var(xname(1))};
            for (int i = 1; i <= n; ++i) map.push_back(sys.var(xname(i)));
            sys.equations.push_back({aff.lift(sys.vs, fc, map), EqKind::pointwise,
                                     {"e", 0, "seed"}, {}});
        }
        const auto& F0 = sys.blocks.at("F_0").generic;
        for (int i = 1; i <= n; ++i) {
            const auto& Fi = sys.blocks.at("F_" + std::to_string(i)).generic;
            P yi = P::variable(sys.vs, fc, sys.var(yname(i)));
            sys.equations.push_back({yi * F0 - Fi, EqKind::pointwise, {"e", 0, "graph"}, {}});
        }
        P a = P::variable(sys.vs, fc, sys.a_var);
        sys.equations.push_back({P::one(sys.vs, fc) - a * F0, EqKind::pointwise,
                                 {"e", 0, "f-denominator"}, {}});

        std::vector<int> gens;
        for (int k = 0; k < base_eqs; ++k) gens.push_back(k);
        int t = 0;
        std::vector<P> ytarget_polys;
        for (const auto& gy : Ym.ideal().generators()) {
            P aff = gy.dehomogenize(0);
            std::vector<int> map{sys.var(yname(1))};
            for (int i = 1; i <= n; ++i) map.push_back(sys.var(yname(i)));
            P target = aff.lift(sys.vs, fc, map);
            ytarget_polys.push_back(target);
            wdetail::append_identity(sys, target, true, gens, "tau_y_" + std::to_string(t),
                                     {"e", 0, "into-y"});
            ++t;
        }
        // (E): Z contains the image of X
        const auto& Z = sys.blocks.at("Z").generic;
        wdetail::append_identity(sys, Z, true, gens, "tau_z", {"e", 0, "z-contains-image"});
        // Z is a nonzero polynomial: it has a nonzero value somewhere
        {
            std::map<int, P> repl;
            for (int i = 1; i <= n; ++i)
                repl.emplace(sys.var(yname(i)),
                             P::variable(sys.vs, fc, sys.var("ys" + std::to_string(i))));
            P Zs = Z.substitute(repl);
            P s = P::variable(sys.vs, fc, sys.var("s"));
            sys.equations.push_back({P::one(sys.vs, fc) - s * Zs, EqKind::pointwise,
                                     {"e", 0, "z-nonzero"}, {}});
        }
        if (prime) {
            // (E'): additionally Y is contained in Z
            std::vector<int> ygens_idx;
            // the Y generators as standalone equations are not part of the
            // system; the identity quantifies over them directly
            IdentitySpec<K> spec;
            spec.target = Z;
            spec.rabinowitsch = true;
            P eq = -P::one(sys.vs, fc);
            const auto& tau0 = sys.blocks.at("tau_zy_0").generic;
            spec.tau_blocks.push_back("tau_zy_0");
            eq = eq + tau0 * (P::one(sys.vs, fc) - a * Z);
            for (std::size_t k = 0; k < ytarget_polys.size(); ++k) {
                const std::string id = "tau_zy_" + std::to_string(k + 1);
                spec.tau_blocks.push_back(id);
                eq = eq + sys.blocks.at(id).generic * ytarget_polys[k];
            }
            spec.generator_eqs = {}; // generators are the Y targets, stored below
            SysEquation<K> se;
            se.poly = eq;
            se.kind = EqKind::identity;
            se.prov = {"eprime", 0, "y-inside-z"};
            se.identity = std::move(spec);
            sys.equations.push_back(std::move(se));
        }
        return sys;
    };
    return {build_one(false), build_one(true)};
}

// ---------------------------------------------------------------------------
// Instantiation, verification, the guarded toy solver, and witness
// construction.

template <FieldElem K>
struct InstantiationReport {
    /// Residual point-variable system (identity equations that vanished
    /// are dropped).
    std::vector<Polynomial<K>> residual;
    /// Indices of equations that should have vanished identically but
    /// did not.
    std::vector<int> violated;
    VarSetPtr point_ring;
    std::vector<int> point_map; // system var index per point-ring position
};

/// Substitute the witness values for every parameter variable.
template <FieldElem K>
InstantiationReport<K> instantiate(const ParamSystem<K>& sys, const WitnessAssignment<K>& w) {
    using P = Polynomial<K>;
    std::map<int, K> values;
    for (std::size_t i = 0; i < sys.vs->size(); ++i) {
        if (!sys.is_param[i]) continue;
        auto it = w.values.find(static_cast<int>(i));
        if (it == w.values.end())
            throw InputError("incomplete witness: no value for " + sys.vs->name(i));
        values.emplace(static_cast<int>(i), it->second);
    }
    InstantiationReport<K> rep;
    std::vector<int> pts = sys.point_vars();
    rep.point_ring = sys.vs->restricted(pts);
    rep.point_map = pts;
    for (std::size_t e = 0; e < sys.equations.size(); ++e) {
        P inst = sys.equations[e].poly.substitute_values(values);
        if (sys.equations[e].kind == EqKind::identity) {
            if (!inst.is_zero()) rep.violated.push_back(static_cast<int>(e));
            continue;
        }
        if (!inst.is_zero()) rep.residual.push_back(inst.restrict_to(rep.point_ring, pts));
    }
    return rep;
}

template <FieldElem K>
struct VerifyReport {
    bool ok = false;
    std::string detail;
};

/// Witness validity: every identity equation collapses to the zero
/// polynomial and the residual pointwise system stays consistent.
template <FieldElem K>
VerifyReport<K> verify_witness(const ParamSystem<K>& sys, const WitnessAssignment<K>& w,
                               const Budget& budget = {}) {
    auto rep = instantiate(sys, w);
    if (!rep.violated.empty()) {
        const auto& eq = sys.equations[rep.violated.front()];
        return {false, "identity equation does not vanish: " + eq.prov.step + " stage " +
                           std::to_string(eq.prov.stage) + " (" + eq.prov.role + ")"};
    }
    Ideal<K> residual(rep.point_ring, sys.fc, rep.residual);
    try {
        if (is_inconsistent(residual, budget))
            return {false, "residual point system is inconsistent"};
    } catch (const BudgetExceeded& e) {
        return {false, std::string("residual consistency undecided: ") + e.what()};
    }
    return {true, "identities vanish and the residual system is consistent"};
}

/// Consistency of the full (un-instantiated or residual) system under a
/// strict budget. Expected outcome on realistic inputs is inconclusive;
/// that is the documented behavior, never a wrong boolean.
template <FieldElem K>
Tri toy_solve(const ParamSystem<K>& sys, const Budget& budget = Budget::toy()) {
    std::vector<Polynomial<K>> gens;
    for (const auto& e : sys.equations) gens.push_back(e.poly);
    Ideal<K> I(sys.vs, sys.fc, std::move(gens));
    try {
        return is_inconsistent(I, budget) ? Tri::no : Tri::yes; // no = unsat, yes = sat
    } catch (const BudgetExceeded&) {
        return Tri::inconclusive;
    }
}

template <FieldElem K>
Tri toy_solve_ideal(const Ideal<K>& I, const Budget& budget = Budget::toy()) {
    try {
        return is_inconsistent(I, budget) ? Tri::no : Tri::yes;
    } catch (const BudgetExceeded&) {
        return Tri::inconclusive;
    }
}

namespace wdetail {

/// Assign the coefficients of a fitted polynomial into a block; the
/// polynomial must be supported on the block's monomials.
template <FieldElem K>
void assign_block(const ParamSystem<K>& sys, const std::string& id, const Polynomial<K>& value,
                  WitnessAssignment<K>& w) {
    const auto& blk = sys.blocks.at(id);
    std::map<std::vector<int>, K> wanted;
    for (const auto& [m, c] : value.terms()) wanted.emplace(m.exps(), c);
    for (const auto& [mono, pvar] : blk.coeffs) {
        auto it = wanted.find(mono.exps());
        if (it == wanted.end()) {
            w.values[pvar] = sys.fc.zero();
        } else {
            w.values[pvar] = it->second;
            wanted.erase(it);
        }
    }
    if (!wanted.empty())
        throw InputError("fitted polynomial does not fit block " + id +
                         " (degree or support overflow)");
}

/// Certificate cofactors tau_0, tau_1, ..., tau_k for one identity
/// equation, computed against the instantiated generators.
template <FieldElem K>
bool fill_identity(const ParamSystem<K>& sys, int eq_index, WitnessAssignment<K>& w,
                   int degree_cap) {
    using P = Polynomial<K>;
    const auto& eq = sys.equations[eq_index];
    const auto& spec = *eq.identity;
    std::map<int, K> values;
    for (const auto& [var, val] : w.values) values.emplace(var, val);

    P target = spec.target.substitute_values(values);
    std::vector<P> mults;
    P a = P::variable(sys.vs, sys.fc, sys.a_var);
    if (spec.rabinowitsch)
        mults.push_back(P::one(sys.vs, sys.fc) - a * target);
    else
        mults.push_back(target);
    std::vector<std::size_t> live{0};
    // E'-style identities quantify over stored target polynomials rather
    // than equations; those were embedded in tau_blocks order with
    // generator_eqs empty, so reconstruct from the equation itself in
    // that case by re-deriving generators from the spec.
    std::vector<P> gen_polys;
    if (!spec.generator_eqs.empty()) {
        for (int g : spec.generator_eqs)
            gen_polys.push_back(sys.equations[g].poly.substitute_values(values));
    } else {
        // tau_blocks beyond tau_0 pair off with stored targets inside the
        // equation; recover them by re-instantiating the equation parts.
        // This branch only serves (E'): its generators are the Y target
        // polynomials, which carry no parameters.
        // They are reconstructed by the caller through fill_identity_with.
        return false;
    }
    for (std::size_t g = 0; g < gen_polys.size(); ++g) {
        if (!gen_polys[g].is_zero()) {
            mults.push_back(gen_polys[g]);
            live.push_back(g + 1);
        }
    }
    std::optional<std::vector<P>> cof;
    for (int D = 0; D <= degree_cap && !cof; ++D)
        cof = ncdetail::balance(mults, sys.vs, sys.fc, D);
    if (!cof) return false;
    // scatter: live[i] names the tau block the i-th cofactor belongs to
    std::vector<P> all(spec.tau_blocks.size(), P::zero(sys.vs, sys.fc));
    for (std::size_t i = 0; i < live.size(); ++i) all[live[i]] = (*cof)[i];
    for (std::size_t b = 0; b < spec.tau_blocks.size(); ++b)
        assign_block(sys, spec.tau_blocks[b], all[b], w);
    return true;
}

/// Variant for identities whose generators are explicit polynomials
/// (the E' y-inside-z identity).
template <FieldElem K>
bool fill_identity_with(const ParamSystem<K>& sys, int eq_index,
                        const std::vector<Polynomial<K>>& generators, WitnessAssignment<K>& w,
                        int degree_cap) {
    using P = Polynomial<K>;
    const auto& spec = *sys.equations[eq_index].identity;
    std::map<int, K> values;
    for (const auto& [var, val] : w.values) values.emplace(var, val);
    P target = spec.target.substitute_values(values);
    std::vector<P> mults;
    P a = P::variable(sys.vs, sys.fc, sys.a_var);
    if (spec.rabinowitsch)
        mults.push_back(P::one(sys.vs, sys.fc) - a * target);
    else
        mults.push_back(target);
    for (const auto& g : generators) mults.push_back(g.substitute_values(values));
    std::optional<std::vector<P>> cof;
    for (int D = 0; D <= degree_cap && !cof; ++D)
        cof = ncdetail::balance(mults, sys.vs, sys.fc, D);
    if (!cof) return false;
    for (std::size_t b = 0; b < spec.tau_blocks.size() && b < cof->size(); ++b)
        assign_block(sys, spec.tau_blocks[b], (*cof)[b], w);
    return true;
}

} // namespace wdetail

/// Fill every tau block of the system by certificate search, assuming
/// all non-tau parameters already carry values. Returns false (witness
/// construction failed, not a disproof) when some certificate is out of
/// reach at the cap.
template <FieldElem K>
bool fill_identity_taus(const ParamSystem<K>& sys, WitnessAssignment<K>& w, int degree_cap,
                        std::string* why = nullptr) {
    for (std::size_t e = 0; e < sys.equations.size(); ++e) {
        const auto& eq = sys.equations[e];
        if (eq.kind != EqKind::identity) continue;
        bool ok;
        if (!eq.identity->generator_eqs.empty()) {
            ok = wdetail::fill_identity(sys, static_cast<int>(e), w, degree_cap);
        } else {
            // (E'): generators are the Y targets embedded in the equation
            std::vector<Polynomial<K>> gens;
            for (const auto& other : sys.equations)
                if (other.prov.role == "into-y" && other.identity)
                    gens.push_back(other.identity->target);
            ok = wdetail::fill_identity_with(sys, static_cast<int>(e), gens, w, degree_cap);
        }
        if (!ok) {
            if (why)
                *why = "no certificate within degree cap for " + eq.prov.step + " stage " +
                       std::to_string(eq.prov.stage) + " (" + eq.prov.role + ")";
            return false;
        }
    }
    return true;
}

template <FieldElem K>
struct WitnessOutcome {
    std::optional<WitnessAssignment<K>> witness;
    std::string note; // failure reason when empty
};

/// Step 1 of the proof, run forward on an explicit map: fit the monoid
/// chains through the graph of f at the coordinate vertices, read the
/// map coefficients into the F blocks, and extract every Step-7/Step-8
/// certificate. Works for W and W+ systems.
template <FieldElem K>
WitnessOutcome<K> construct_witness(const ParamSystem<K>& sys, const RationalMapRep<K>& F,
                                    const Variety<K>& X, const Variety<K>& Y,
                                    const CheckCaps& caps = {}) {
    using P = Polynomial<K>;
    WitnessOutcome<K> out;
    auto fc = sys.fc;
    const int n = sys.n;
    if (F.mode() != Mode::projective) {
        out.note = "construct_witness expects a projective map";
        return out;
    }
    if (F.degree() > sys.d) {
        out.note = "deg(F) exceeds the system bound d";
        throw InputError(out.note);
    }
    {
        auto into = check_rational_into(F, X, Y, caps);
        if (into.answer != Tri::yes) {
            out.note = "f is not a rational map into Y: " + into.reason;
            return out;
        }
        auto bir = check_birational(F, X, Y, caps);
        if (bir.verdict.answer != Tri::yes) {
            out.note = "f is not birational onto Y: " + bir.verdict.reason;
            return out;
        }
    }

    // affine graph of f on the chart x_0 = 1, y_0 = 1, transported into
    // the system's point coordinates
    auto pr = make_product(X.coords(), default_target_names(Mode::projective, n, "yy"));
    auto G = restricted_graph(F, X, pr, caps.budget);
    std::vector<P> gamma_gens;
    {
        std::vector<int> map(2 * n + 2, 0);
        // source x_0..x_n -> (drop, x1..xn); target yy_0..yy_n -> (drop, y1..yn)
        std::vector<int> chartless;
        std::vector<int> full_map;
        full_map.push_back(sys.var("x1")); // x_0 placeholder (unused after dehomog)
        for (int i = 1; i <= n; ++i) full_map.push_back(sys.var("x" + std::to_string(i)));
        full_map.push_back(sys.var("y1")); // yy_0 placeholder
        for (int i = 1; i <= n; ++i) full_map.push_back(sys.var("y" + std::to_string(i)));
        for (const auto& g : G.generators()) {
            P aff = g.dehomogenize(0).dehomogenize(n + 1);
            if (!aff.is_zero()) gamma_gens.push_back(aff.lift(sys.vs, fc, full_map));
        }
    }
    Ideal<K> gamma(sys.vs, fc, gamma_gens);

    WitnessAssignment<K> w;
    auto fit_stage = [&](const StageDesc& sd) -> bool {
        // eliminate the point coordinates outside this stage's ambient:
        // keep the block support plus the fiber variable(s)
        std::vector<char> keep_mask(sys.vs->size(), 0);
        std::vector<int> keep;
        for (const auto& bid : sd.block_ids)
            for (int v : sys.blocks.at(bid).support) keep_mask[v] = 1;
        keep_mask[sd.fiber_var] = 1;
        if (sd.fiber_var2 >= 0) keep_mask[sd.fiber_var2] = 1;
        for (std::size_t i = 0; i < sys.vs->size(); ++i)
            if (keep_mask[i]) keep.push_back(static_cast<int>(i));
        Ideal<K> proj = elimination_ideal(gamma, keep, caps.budget);

        std::vector<FitBlock<K>> fit_blocks;
        for (const auto& bid : sd.block_ids) {
            const auto& blk = sys.blocks.at(bid);
            std::vector<char> sup(sys.vs->size(), 0);
            for (int v : blk.support) sup[v] = 1;
            P mult = P::one(sys.vs, fc);
            if (sd.kind == StageDesc::Kind::step6) {
                if (bid == "g_0_0") mult = P::variable(sys.vs, fc, sd.fiber_var);
                if (bid == "h_0_0") mult = P::variable(sys.vs, fc, sd.fiber_var2);
                if (bid == "f_0_0_2")
                    mult = P::variable(sys.vs, fc, sd.fiber_var) *
                           P::variable(sys.vs, fc, sd.fiber_var2);
            } else {
                if (bid.ends_with("_1")) mult = P::variable(sys.vs, fc, sd.fiber_var);
            }
            fit_blocks.push_back({mult, sup, blk.degree, false});
        }
        auto candidates =
            fit_shape_candidates(proj, fit_blocks, MonomialOrder::grevlex(), caps.budget);
        for (const auto& parts : candidates) {
            // density: the chart products must not vanish on the graph
            bool ok = false;
            if (sd.kind == StageDesc::Kind::step6) {
                P xn = P::variable(sys.vs, fc, sd.fiber_var);
                P yn = P::variable(sys.vs, fc, sd.fiber_var2);
                P c1 = (parts[0] + xn * parts[1]) * (parts[2] + xn * parts[3]);
                P c2 = (parts[0] + yn * parts[2]) * (parts[1] + yn * parts[3]);
                ok = !radical_membership(c1, gamma, caps.budget) &&
                     !radical_membership(c2, gamma, caps.budget);
            } else {
                if (parts[0].is_zero()) continue;
                P prod = parts[0] * parts[1];
                ok = !radical_membership(prod, gamma, caps.budget);
            }
            if (!ok) continue;
            for (std::size_t b = 0; b < sd.block_ids.size(); ++b)
                wdetail::assign_block(sys, sd.block_ids[b], parts[b], w);
            return true;
        }
        return false;
    };

    for (const auto& sd : sys.stages) {
        if (sd.kind == StageDesc::Kind::dominance_z) continue;
        Ideal<K>* against = &gamma;
        (void)against;
        if (!fit_stage(sd)) {
            out.note = "monoid fit failed at a chain stage (fiber " +
                       sys.vs->name(sd.fiber_var) + "); raise the monoid cap";
            return out;
        }
    }

    // F blocks: dehomogenized coefficients of the supplied map
    for (int i = 0; i <= n; ++i) {
        P aff = F.components()[i].is_zero() ? P::zero(sys.vs, fc)
                                            : F.components()[i].dehomogenize(0);
        P lifted = P::zero(sys.vs, fc);
        if (!aff.is_zero()) {
            std::vector<int> map{sys.var("x1")};
            for (int k = 1; k <= n; ++k) map.push_back(sys.var("x" + std::to_string(k)));
            lifted = aff.lift(sys.vs, fc, map);
        }
        wdetail::assign_block(sys, "F_" + std::to_string(i), lifted, w);
    }

    std::string why;
    if (!fill_identity_taus(sys, w, sys.caps.tau_degree, &why)) {
        out.note = "certificate extraction failed: " + why;
        return out;
    }
    // zero-fill anything untouched (unused block slots are already
    // explicit zeros; this catches blocks of skipped kinds)
    for (std::size_t i = 0; i < sys.vs->size(); ++i)
        if (sys.is_param[i] && !w.values.count(static_cast<int>(i)))
            w.values[static_cast<int>(i)] = fc.zero();
    out.witness = std::move(w);
    out.note = "witness assembled from monoid fits and certificates";
    return out;
}

} // namespace birat
