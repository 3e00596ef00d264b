#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "birat/linalg.hpp"
#include "birat/qseq.hpp"
#include "birat/varieties.hpp"

namespace birat {

/// Degree-d hypersurface in P^r whose defining equation splits as
/// f_top * x_v + f_bot with respect to the vertex coordinate x_v. The
/// vertex then has multiplicity exactly d-1 provided f_top is nonzero.
template <FieldElem K>
class Monoid {
public:
    using P = Polynomial<K>;

    Monoid(VarSetPtr vs, FieldCtx<K> fc, int degree, int vertex_var, P f_top, P f_bot)
        : vs_(std::move(vs)), fc_(fc), degree_(degree), vertex_var_(vertex_var),
          f_top_(std::move(f_top)), f_bot_(std::move(f_bot)) {
        if (f_top_.uses_var(vertex_var_) || f_bot_.uses_var(vertex_var_))
            throw InputError("monoid split must avoid the vertex coordinate");
    }

    /// Reads the split off a defining equation; fails when the equation is
    /// not linear in the vertex coordinate.
    static Monoid from_equation(const P& eq, int vertex_var) {
        if (eq.is_zero()) throw InputError("monoid equation is zero");
        if (!eq.is_homogeneous()) throw InputError("monoid equation must be homogeneous");
        int d = eq.total_degree();
        std::vector<typename P::Term> top, bot;
        for (const auto& [m, c] : eq.terms()) {
            if (m[vertex_var] == 0) {
                bot.emplace_back(m, c);
            } else if (m[vertex_var] == 1) {
                Monomial mm = m;
                mm[vertex_var] = 0;
                top.emplace_back(mm, c);
            } else {
                throw InputError("not a monoid: equation has degree >= 2 in the vertex "
                                 "coordinate (vertex multiplicity below d-1)");
            }
        }
        auto vs = eq.varset();
        auto fc = eq.field();
        return Monoid(vs, fc, d,
                      vertex_var, P::from_terms(vs, fc, std::move(top)),
                      P::from_terms(vs, fc, std::move(bot)));
    }

    const VarSetPtr& coords() const { return vs_; }
    const FieldCtx<K>& field() const { return fc_; }
    int degree() const { return degree_; }
    int vertex_var() const { return vertex_var_; }
    const P& f_top() const { return f_top_; }
    const P& f_bot() const { return f_bot_; }
    int ambient_dim() const { return static_cast<int>(vs_->size()) - 1; }

    P equation() const {
        return f_top_ * P::variable(vs_, fc_, vertex_var_) + f_bot_;
    }

private:
    VarSetPtr vs_;
    FieldCtx<K> fc_;
    int degree_;
    int vertex_var_;
    P f_top_, f_bot_;
};

/// Hypersurface with two marked vertices v1, v2 and the split
/// f_d + x_{v1} g + x_{v2} h + x_{v1} x_{v2} f_{d-2}, all blocks in the
/// remaining coordinates.
template <FieldElem K>
struct TwoVertexMonoid {
    using P = Polynomial<K>;

    VarSetPtr vs;
    FieldCtx<K> fc;
    int degree = 2;
    int v1_var = 0, v2_var = 0;
    P f_d, g, h, f_dm2;

    P equation() const {
        auto x1 = P::variable(vs, fc, v1_var);
        auto x2 = P::variable(vs, fc, v2_var);
        return f_d + x1 * g + x2 * h + x1 * x2 * f_dm2;
    }
    /// The two one-vertex readings of the same equation.
    Monoid<K> as_monoid_at_v2() const {
        return Monoid<K>(vs, fc, degree, v2_var,
                         h + P::variable(vs, fc, v1_var) * f_dm2,
                         f_d + P::variable(vs, fc, v1_var) * g);
    }
    Monoid<K> as_monoid_at_v1() const {
        return Monoid<K>(vs, fc, degree, v1_var,
                         g + P::variable(vs, fc, v2_var) * f_dm2,
                         f_d + P::variable(vs, fc, v2_var) * h);
    }
};

struct MonoidDiagnostics {
    bool valid = false;
    std::string reason;          // empty when valid
    int vertex_multiplicity = -1;
    int pair_locus_dim = -2;     // affine dim of V(f_top, f_bot); -1 = empty
};

/// Multiplicity of a homogeneous hypersurface at the coordinate point
/// e_v: the minimal total degree after setting x_v = 1.
template <FieldElem K>
int multiplicity_at_coordinate_vertex(const Polynomial<K>& eq, int vertex_var) {
    if (eq.is_zero()) return -1;
    auto aff = eq.dehomogenize(vertex_var);
    if (aff.is_zero()) return -1; // the whole space through the vertex? cannot happen for eq != 0
    int m = aff.total_degree();
    for (const auto& [mono, c] : aff.terms()) m = std::min(m, mono.total_degree());
    return m;
}

/// Checks the monoid conditions: vanishing of all partials through order
/// d-2 at the vertex with a nonzero order-(d-1) partial (read off the
/// vertex multiplicity), and the coprimality surrogate
/// dim V(f_top, f_bot) <= r-2 computed on the affine cone.
template <FieldElem K>
MonoidDiagnostics validate_monoid(const Monoid<K>& M, const Budget& budget = {}) {
    MonoidDiagnostics diag;
    int d = M.degree();
    int r = M.ambient_dim();
    if (d < 1) { diag.reason = "degree must be at least 1"; return diag; }
    if (!M.f_top().is_zero() && M.f_top().total_degree() != d - 1) {
        diag.reason = "f_top degree is not d-1";
        return diag;
    }
    if (!M.f_bot().is_zero() && M.f_bot().total_degree() != d) {
        diag.reason = "f_bot degree is not d";
        return diag;
    }
    if (!M.f_top().is_homogeneous() || !M.f_bot().is_homogeneous()) {
        diag.reason = "split parts must be homogeneous";
        return diag;
    }
    if (M.f_top().is_zero() && M.f_bot().is_zero()) {
        diag.reason = "zero equation";
        return diag;
    }
    diag.vertex_multiplicity = multiplicity_at_coordinate_vertex(M.equation(), M.vertex_var());
    if (diag.vertex_multiplicity != d - 1) {
        diag.reason = "vertex multiplicity " + std::to_string(diag.vertex_multiplicity) +
                      " differs from d-1 = " + std::to_string(d - 1);
        return diag;
    }
    // coprimality via the codimension-2 test on the affine cone in the
    // r non-vertex coordinates
    std::vector<Polynomial<K>> pair;
    if (!M.f_top().is_zero()) pair.push_back(M.f_top());
    if (!M.f_bot().is_zero()) pair.push_back(M.f_bot());
    Ideal<K> pair_ideal(M.coords(), M.field(), pair);
    try {
        // the vertex variable is absent from both, so it is independent;
        // subtract it from the measured dimension
        diag.pair_locus_dim = krull_dimension(pair_ideal, budget) - 1;
    } catch (const EmptyVariety&) {
        diag.pair_locus_dim = -1;
    }
    if (diag.pair_locus_dim > r - 2) {
        diag.reason = "f_top and f_bot share a divisor: dim V(f_top,f_bot) = " +
                      std::to_string(diag.pair_locus_dim) + " > r-2";
        return diag;
    }
    diag.valid = true;
    return diag;
}

template <FieldElem K>
MonoidDiagnostics validate_monoid(const TwoVertexMonoid<K>& M, const Budget& budget = {}) {
    MonoidDiagnostics diag;
    int d = M.degree;
    auto check_block = [&](const Polynomial<K>& p, int deg, const char* name) {
        if (p.is_zero()) return true;
        if (!p.is_homogeneous() || p.total_degree() != deg) {
            diag.reason = std::string(name) + " has the wrong degree";
            return false;
        }
        if (p.uses_var(M.v1_var) || p.uses_var(M.v2_var)) {
            diag.reason = std::string(name) + " uses a vertex coordinate";
            return false;
        }
        return true;
    };
    if (!check_block(M.f_d, d, "f_d") || !check_block(M.g, d - 1, "g") ||
        !check_block(M.h, d - 1, "h") || !check_block(M.f_dm2, d - 2, "f_{d-2}"))
        return diag;
    auto eq = M.equation();
    if (eq.is_zero()) { diag.reason = "zero equation"; return diag; }
    for (int v : {M.v1_var, M.v2_var}) {
        int mult = multiplicity_at_coordinate_vertex(eq, v);
        diag.vertex_multiplicity = mult;
        if (mult != d - 1) {
            diag.reason = "vertex multiplicity " + std::to_string(mult) +
                          " differs from d-1 at a marked vertex";
            return diag;
        }
    }
    for (const auto& reading : {M.as_monoid_at_v2(), M.as_monoid_at_v1()}) {
        auto sub = validate_monoid(reading, budget);
        if (!sub.valid) {
            diag.reason = "one-vertex reading fails: " + sub.reason;
            diag.pair_locus_dim = sub.pair_locus_dim;
            return diag;
        }
    }
    diag.valid = true;
    return diag;
}

/// Projection from the vertex: drop the vertex coordinate.
template <FieldElem K>
std::vector<K> project_from_vertex(const Monoid<K>& M, const std::vector<K>& point) {
    if (point.size() != M.coords()->size()) throw InputError("projection: wrong point arity");
    {
        std::vector<K> pt = point;
        if (!FieldCtx<K>::is_zero(M.equation().evaluate(pt)))
            throw InputError("projection: point does not lie on the monoid");
    }
    bool at_vertex = true;
    for (std::size_t i = 0; i < point.size(); ++i)
        if (static_cast<int>(i) != M.vertex_var() && !FieldCtx<K>::is_zero(point[i]))
            at_vertex = false;
    if (at_vertex) throw InputError("projection is indeterminate at the vertex");
    std::vector<K> out;
    for (std::size_t i = 0; i < point.size(); ++i)
        if (static_cast<int>(i) != M.vertex_var()) out.push_back(point[i]);
    return out;
}

/// Projection of an ideal: eliminate the vertex coordinate.
template <FieldElem K>
Ideal<K> project_from_vertex(const Monoid<K>& M, const Ideal<K>& I, const Budget& budget = {}) {
    std::vector<int> keep;
    for (std::size_t i = 0; i < M.coords()->size(); ++i)
        if (static_cast<int>(i) != M.vertex_var()) keep.push_back(static_cast<int>(i));
    Ideal<K> elim = elimination_ideal(I, keep, budget);
    VarSetPtr sub = M.coords()->restricted(keep);
    std::vector<Polynomial<K>> gens;
    for (const auto& g : elim.generators()) gens.push_back(g.restrict_to(sub, keep));
    return Ideal<K>(sub, M.field(), std::move(gens));
}

/// The rational inverse of the vertex projection:
/// [x_0 : ... : x_{r-1}] -> [f_top x_0 : ... : f_top x_{r-1} : -f_bot],
/// written over the non-vertex coordinates.
template <FieldElem K>
RationalMapRep<K> inverse_section(const Monoid<K>& M) {
    std::vector<int> keep;
    for (std::size_t i = 0; i < M.coords()->size(); ++i)
        if (static_cast<int>(i) != M.vertex_var()) keep.push_back(static_cast<int>(i));
    VarSetPtr sub = M.coords()->restricted(keep);
    auto fc = M.field();
    auto ftop = M.f_top().restrict_to(sub, keep);
    auto fbot = M.f_bot().restrict_to(sub, keep);
    std::vector<Polynomial<K>> comps;
    for (std::size_t j = 0; j < keep.size(); ++j)
        comps.push_back(ftop * Polynomial<K>::variable(sub, fc, static_cast<int>(j)));
    comps.push_back(-fbot);
    return RationalMapRep<K>::projective(std::move(comps));
}

/// Open chart of the strict transform of an affine X under the inverse
/// vertex projection, in the combined-product form: the ideal
/// { I(X), f1 * y_new + f2, 1 - t * f1 * f2 } over X's variables extended
/// by the fiber coordinate and the chart variable.
template <FieldElem K>
struct StrictTransformChart {
    Ideal<K> ideal;
    int fiber_var;
    int chart_var;
};

template <FieldElem K>
StrictTransformChart<K> strict_transform_chart(const Ideal<K>& X_affine,
                                               const Polynomial<K>& f1_aff,
                                               const Polynomial<K>& f2_aff,
                                               const std::string& fiber_name,
                                               const std::string& chart_name,
                                               const Budget& budget = {}) {
    using P = Polynomial<K>;
    auto fc = X_affine.field();
    if (radical_membership(f1_aff * f2_aff, X_affine, budget))
        throw InputError("chart empty: X lies inside {f1*f2 = 0}");
    auto ext = extend_ring<K>(X_affine.varset(), {fiber_name, chart_name});
    std::vector<P> gens;
    for (const auto& g : X_affine.generators()) gens.push_back(g.lift(ext.vs, fc, ext.old_to_new));
    P f1 = f1_aff.lift(ext.vs, fc, ext.old_to_new);
    P f2 = f2_aff.lift(ext.vs, fc, ext.old_to_new);
    P y = P::variable(ext.vs, fc, ext.fresh[0]);
    P t = P::variable(ext.vs, fc, ext.fresh[1]);
    gens.push_back(f1 * y + f2);
    gens.push_back(P::one(ext.vs, fc) - t * f1 * f2);
    return StrictTransformChart<K>{Ideal<K>(ext.vs, fc, std::move(gens)), ext.fresh[0],
                                   ext.fresh[1]};
}

// ---------------------------------------------------------------------------
// Monoid fitting: containment of a subvariety in a monoid of shape
// sum_b multiplier_b * (general polynomial over the block support) is a
// linear condition on the block coefficients.

template <FieldElem K>
struct FitBlock {
    Polynomial<K> multiplier;
    std::vector<char> support; // allowed variables
    int degree = 0;            // exact degree when homogeneous, cap otherwise
    bool homogeneous = true;
};

namespace mdetail {

inline void enumerate_exponents(const std::vector<char>& support, int degree, bool exact,
                                std::vector<Monomial>& out, std::vector<int>& e, std::size_t i,
                                int left) {
    if (i == e.size()) {
        if (!exact || left == 0) out.emplace_back(e);
        return;
    }
    if (!support[i]) {
        e[i] = 0;
        enumerate_exponents(support, degree, exact, out, e, i + 1, left);
        return;
    }
    for (int k = 0; k <= left; ++k) {
        e[i] = k;
        enumerate_exponents(support, degree, exact, out, e, i + 1, left - k);
    }
    e[i] = 0;
}

inline std::vector<Monomial> block_monomials(const std::vector<char>& support, int degree,
                                             bool homogeneous) {
    std::vector<Monomial> out;
    std::vector<int> e(support.size(), 0);
    if (degree < 0) return out;
    enumerate_exponents(support, degree, homogeneous, out, e, 0, degree);
    return out;
}

} // namespace mdetail

/// Solutions of the containment system: coefficient vectors, reported as
/// one polynomial per block. Candidates are ordered deterministically:
/// nullspace basis vectors, then pairwise sums, then the total sum, then
/// a few seeded combinations.
template <FieldElem K>
std::vector<std::vector<Polynomial<K>>> fit_shape_candidates(
    const Ideal<K>& gamma, const std::vector<FitBlock<K>>& blocks,
    const MonomialOrder& ord = MonomialOrder::grevlex(), const Budget& budget = {}) {
    using P = Polynomial<K>;
    auto fc = gamma.field();
    const auto& vs = gamma.varset();

    struct Unknown {
        int block;
        Monomial mono;
        P shape; // multiplier * mono
    };
    std::vector<Unknown> unknowns;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        for (const auto& m : mdetail::block_monomials(blocks[b].support, blocks[b].degree,
                                                      blocks[b].homogeneous)) {
            P mono = P::from_terms(vs, fc, {{m, fc.one()}});
            unknowns.push_back({static_cast<int>(b), m, blocks[b].multiplier * mono});
        }
    }
    if (unknowns.empty()) return {};

    // rows: coefficients of NF(shape) per monomial
    std::map<std::vector<int>, std::map<int, K>> rows;
    for (std::size_t u = 0; u < unknowns.size(); ++u) {
        P nf = normal_form(unknowns[u].shape, gamma, ord, budget);
        for (const auto& [m, c] : nf.terms()) {
            auto& row = rows[m.exps()];
            auto it = row.find(static_cast<int>(u));
            if (it == row.end()) row.emplace(static_cast<int>(u), c);
            else it->second = it->second + c;
        }
    }
    LinearSystem<K> sys(fc, static_cast<int>(unknowns.size()));
    for (auto& [mono, row] : rows) sys.add_row(std::move(row), fc.zero());
    auto basis = sys.nullspace_basis();
    if (basis.empty()) return {};

    std::vector<std::vector<K>> raw = basis;
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = i + 1; j < basis.size(); ++j) {
            std::vector<K> v = basis[i];
            for (std::size_t k = 0; k < v.size(); ++k) v[k] = v[k] + basis[j][k];
            raw.push_back(std::move(v));
        }
    if (basis.size() > 2) {
        std::vector<K> total(basis[0].size(), fc.zero());
        for (const auto& b : basis)
            for (std::size_t k = 0; k < total.size(); ++k) total[k] = total[k] + b[k];
        raw.push_back(std::move(total));
    }
    std::mt19937_64 rng(0x5eed);
    std::uniform_int_distribution<int> coef(1, 3);
    for (int tries = 0; tries < 8 && basis.size() > 1; ++tries) {
        std::vector<K> v(basis[0].size(), fc.zero());
        for (const auto& b : basis) {
            K c = fc.from_long(coef(rng));
            for (std::size_t k = 0; k < v.size(); ++k) v[k] = v[k] + c * b[k];
        }
        raw.push_back(std::move(v));
    }

    std::vector<std::vector<P>> candidates;
    for (const auto& v : raw) {
        std::vector<P> parts(blocks.size(), P::zero(vs, fc));
        bool nonzero = false;
        for (std::size_t u = 0; u < unknowns.size(); ++u) {
            if (FieldCtx<K>::is_zero(v[u])) continue;
            nonzero = true;
            parts[unknowns[u].block] =
                parts[unknowns[u].block] +
                P::from_terms(vs, fc, {{unknowns[u].mono, v[u]}});
        }
        if (nonzero) candidates.push_back(std::move(parts));
    }
    return candidates;
}

struct MonoidFitOptions {
    int start_degree = 1;
    int cap = 4;
    /// reject candidates whose equation contains the cone over gamma
    bool check_cone = true;
    /// require gamma not inside {f_top * f_bot = 0} (the chart-density
    /// condition the chain constructions need)
    bool check_density = false;
    Budget budget = {};
};

/// Smallest-degree monoid with vertex at the coordinate point of
/// `vertex_var` containing V(gamma) (gamma homogeneous). Returns nullopt
/// at the cap: inconclusive, not a disproof.
template <FieldElem K>
std::optional<Monoid<K>> fit_monoid(const Ideal<K>& gamma, int vertex_var,
                                    const MonoidFitOptions& opts = {}) {
    using P = Polynomial<K>;
    auto fc = gamma.field();
    const auto& vs = gamma.varset();
    int r = static_cast<int>(vs->size()) - 1;
    int gdim;
    try {
        gdim = krull_dimension(gamma, opts.budget) - 1;
    } catch (const EmptyVariety&) {
        gdim = -1;
    }
    if (gdim > r - 2)
        throw InputError("fit_monoid: dim V <= r-2 is required by the monoid lemma");

    std::vector<char> support(vs->size(), 1);
    support[vertex_var] = 0;
    std::vector<int> keep;
    for (std::size_t i = 0; i < vs->size(); ++i)
        if (static_cast<int>(i) != vertex_var) keep.push_back(static_cast<int>(i));
    Ideal<K> cone = elimination_ideal(gamma, keep, opts.budget);

    for (int d = std::max(1, opts.start_degree); d <= opts.cap; ++d) {
        std::vector<FitBlock<K>> blocks;
        blocks.push_back({P::variable(vs, fc, vertex_var), support, d - 1, true});
        blocks.push_back({P::one(vs, fc), support, d, true});
        for (auto& parts : fit_shape_candidates(gamma, blocks, MonomialOrder::grevlex(),
                                                opts.budget)) {
            Monoid<K> M(vs, fc, d, vertex_var, parts[0], parts[1]);
            if (!validate_monoid(M, opts.budget).valid) continue;
            if (opts.check_cone && radical_membership(M.equation(), cone, opts.budget)) continue;
            if (opts.check_density &&
                radical_membership(M.f_top() * M.f_bot(), gamma, opts.budget))
                continue;
            return M;
        }
    }
    return std::nullopt;
}

/// Two-vertex analogue at the coordinate points of v1_var and v2_var.
template <FieldElem K>
std::optional<TwoVertexMonoid<K>> fit_two_vertex_monoid(const Ideal<K>& gamma, int v1_var,
                                                        int v2_var,
                                                        const MonoidFitOptions& opts = {}) {
    using P = Polynomial<K>;
    auto fc = gamma.field();
    const auto& vs = gamma.varset();
    int r = static_cast<int>(vs->size()) - 1;
    int gdim;
    try {
        gdim = krull_dimension(gamma, opts.budget) - 1;
    } catch (const EmptyVariety&) {
        gdim = -1;
    }
    if (gdim > r - 3)
        throw InputError("fit_two_vertex_monoid: dim V <= r-3 is required");

    std::vector<char> support(vs->size(), 1);
    support[v1_var] = 0;
    support[v2_var] = 0;

    for (int d = std::max(1, opts.start_degree); d <= opts.cap; ++d) {
        std::vector<FitBlock<K>> blocks;
        blocks.push_back({P::one(vs, fc), support, d, true});
        blocks.push_back({P::variable(vs, fc, v1_var), support, d - 1, true});
        blocks.push_back({P::variable(vs, fc, v2_var), support, d - 1, true});
        blocks.push_back({P::variable(vs, fc, v1_var) * P::variable(vs, fc, v2_var), support,
                          d - 2, true});
        for (auto& parts : fit_shape_candidates(gamma, blocks, MonomialOrder::grevlex(),
                                                opts.budget)) {
            TwoVertexMonoid<K> M{vs, fc, d, v1_var, v2_var,
                                 parts[0], parts[1], parts[2], parts[3]};
            if (!validate_monoid(M, opts.budget).valid) continue;
            if (opts.check_cone) {
                bool bad = false;
                for (int v : {v1_var, v2_var}) {
                    std::vector<int> keep;
                    for (std::size_t i = 0; i < vs->size(); ++i)
                        if (static_cast<int>(i) != v) keep.push_back(static_cast<int>(i));
                    Ideal<K> cone = elimination_ideal(gamma, keep, opts.budget);
                    if (radical_membership(M.equation(), cone, opts.budget)) { bad = true; break; }
                }
                if (bad) continue;
            }
            return M;
        }
    }
    return std::nullopt;
}

/// Linear coordinate change moving the given projective points to the
/// last coordinate directions; recorded as the substitution matrix A
/// (old variable i becomes sum_j A[i][j] * new variable j).
template <FieldElem K>
struct LinearChange {
    std::vector<std::vector<K>> A;

    Polynomial<K> apply(const Polynomial<K>& p) const {
        using P = Polynomial<K>;
        const auto& vs = p.varset();
        auto fc = p.field();
        std::map<int, P> repl;
        for (std::size_t i = 0; i < A.size(); ++i) {
            P row = P::zero(vs, fc);
            for (std::size_t j = 0; j < A[i].size(); ++j) {
                if (FieldCtx<K>::is_zero(A[i][j])) continue;
                row = row + P::variable(vs, fc, static_cast<int>(j)).scaled(A[i][j]);
            }
            repl.emplace(static_cast<int>(i), std::move(row));
        }
        return p.substitute(repl);
    }
    Ideal<K> apply(const Ideal<K>& I) const {
        std::vector<Polynomial<K>> gens;
        for (const auto& g : I.generators()) gens.push_back(apply(g));
        return Ideal<K>(I.varset(), I.field(), std::move(gens));
    }
};

/// Builds a change of coordinates sending e_{last-k+1..last} to the given
/// points (one or two). Throws when the points are dependent.
template <FieldElem K>
LinearChange<K> vertex_normalization(FieldCtx<K> fc, const std::vector<std::vector<K>>& points,
                                     std::size_t n) {
    std::size_t k = points.size();
    // columns: n-k standard basis vectors plus the points at the end;
    // choose the basis subset deterministically so the matrix is invertible
    std::vector<int> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = static_cast<int>(i);
    std::vector<int> drop(k, 0);
    std::optional<LinearChange<K>> result;
    std::function<bool(std::size_t, int)> choose = [&](std::size_t pos, int from) -> bool {
        if (pos == k) {
            std::vector<std::vector<K>> cols;
            for (int i : all) {
                bool dropped = false;
                for (int dcol : drop) dropped = dropped || (dcol == i);
                if (dropped) continue;
                std::vector<K> e(n, fc.zero());
                e[i] = fc.one();
                cols.push_back(std::move(e));
            }
            for (const auto& p : points) cols.push_back(p);
            // invertibility via rank
            LinearSystem<K> sys(fc, static_cast<int>(n));
            for (std::size_t r = 0; r < n; ++r) {
                std::map<int, K> row;
                for (std::size_t c = 0; c < n; ++c)
                    if (!FieldCtx<K>::is_zero(cols[c][r])) row[static_cast<int>(c)] = cols[c][r];
                sys.add_row(std::move(row), fc.zero());
            }
            if (sys.rank() != static_cast<int>(n)) return false;
            LinearChange<K> change;
            change.A.assign(n, std::vector<K>(n, fc.zero()));
            for (std::size_t c = 0; c < n; ++c)
                for (std::size_t r = 0; r < n; ++r) change.A[r][c] = cols[c][r];
            result = std::move(change);
            return true;
        }
        for (int i = from; i < static_cast<int>(n); ++i) {
            drop[pos] = i;
            if (choose(pos + 1, i + 1)) return true;
        }
        return false;
    };
    if (!choose(0, 0)) throw InputError("vertex points are linearly dependent");
    return *result;
}

} // namespace birat
