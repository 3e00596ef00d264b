#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "birat/groebner.hpp"

namespace birat {

enum class Mode { affine, projective };

/// An (ambient dimension, ideal, mode) triple. Projective varieties check
/// that all generators are homogeneous. ambient_dim n means P^n (n+1
/// coordinates) in projective mode and A^n (n coordinates) in affine mode.
template <FieldElem K>
class Variety {
public:
    using P = Polynomial<K>;

    Variety(int ambient_dim, Mode mode, Ideal<K> ideal)
        : ambient_(ambient_dim), mode_(mode), ideal_(std::move(ideal)) {
        std::size_t want = mode_ == Mode::projective ? ambient_ + 1 : ambient_;
        if (ideal_.varset()->size() != want)
            throw InputError("variety: coordinate count does not match ambient dimension");
        if (mode_ == Mode::projective) {
            for (const auto& g : ideal_.generators())
                if (!g.is_homogeneous())
                    throw InputError("projective variety with non-homogeneous generator: " +
                                     g.format());
        }
        for (const auto& g : ideal_.generators())
            if (g.is_constant() && !g.is_zero())
                throw InputError("variety ideal is not proper");
    }

    int ambient_dim() const { return ambient_; }
    Mode mode() const { return mode_; }
    const Ideal<K>& ideal() const { return ideal_; }
    const VarSetPtr& coords() const { return ideal_.varset(); }
    const FieldCtx<K>& field() const { return ideal_.field(); }

    /// Dimension of the variety; -1 when empty. Projective dimension is
    /// the affine cone dimension minus one.
    int dimension(const Budget& budget = {}) const {
        if (!dim_) {
            try {
                int d = krull_dimension(ideal_, budget);
                dim_ = mode_ == Mode::projective ? d - 1 : d;
            } catch (const EmptyVariety&) {
                dim_ = -1;
            }
        }
        return *dim_;
    }

private:
    int ambient_;
    Mode mode_;
    Ideal<K> ideal_;
    mutable std::optional<int> dim_;
};

/// Components of a rational map of bounded degree. Projective form: [F_0 :
/// ... : F_m], homogeneous of one common degree, not all zero. Affine
/// form: (g_1/h, ..., g_m/h).
template <FieldElem K>
class RationalMapRep {
public:
    using P = Polynomial<K>;

    static RationalMapRep projective(std::vector<P> components) {
        RationalMapRep f;
        f.mode_ = Mode::projective;
        f.comps_ = std::move(components);
        int deg = -1;
        for (const auto& c : f.comps_) {
            if (c.is_zero()) continue;
            if (!c.is_homogeneous())
                throw InputError("projective map with non-homogeneous component: " + c.format());
            if (deg >= 0 && c.total_degree() != deg)
                throw InputError("projective map components of unequal degree");
            deg = c.total_degree();
        }
        if (deg < 0) throw InputError("rational map with all components zero");
        f.degree_ = deg;
        return f;
    }

    static RationalMapRep affine(std::vector<P> numerators, P denominator) {
        RationalMapRep f;
        f.mode_ = Mode::affine;
        if (denominator.is_zero()) throw InputError("affine map with zero denominator");
        int deg = denominator.total_degree();
        for (const auto& g : numerators) deg = std::max(deg, g.total_degree());
        f.comps_ = std::move(numerators);
        f.den_ = denominator;
        f.degree_ = deg;
        return f;
    }

    Mode mode() const { return mode_; }
    /// Projective: F_0..F_m. Affine: the numerators g_1..g_m.
    const std::vector<P>& components() const { return comps_; }
    const P& denominator() const { return *den_; }
    int degree() const { return degree_; }
    /// Ambient dimension of the target space.
    int target_ambient() const {
        return mode_ == Mode::projective ? static_cast<int>(comps_.size()) - 1
                                         : static_cast<int>(comps_.size());
    }

private:
    Mode mode_ = Mode::projective;
    std::vector<P> comps_;
    std::optional<P> den_;
    int degree_ = 0;
};

/// Source x target coordinate ring. Target names get suffixed when they
/// clash; all bookkeeping is positional.
struct ProductRing {
    VarSetPtr vs;
    std::vector<int> src, tgt;
    std::vector<char> src_mask, tgt_mask;
};

inline ProductRing make_product(const VarSetPtr& src_vs, const std::vector<std::string>& tgt_names) {
    ProductRing pr;
    pr.vs = src_vs->extended(tgt_names);
    for (std::size_t i = 0; i < src_vs->size(); ++i) pr.src.push_back(static_cast<int>(i));
    for (std::size_t i = src_vs->size(); i < pr.vs->size(); ++i) pr.tgt.push_back(static_cast<int>(i));
    pr.src_mask.assign(pr.vs->size(), 0);
    pr.tgt_mask.assign(pr.vs->size(), 0);
    for (int i : pr.src) pr.src_mask[i] = 1;
    for (int i : pr.tgt) pr.tgt_mask[i] = 1;
    return pr;
}

/// Default target coordinate names u0..um (projective) or u1..um (affine).
inline std::vector<std::string> default_target_names(Mode mode, int target_ambient,
                                                     const std::string& stem = "u") {
    std::vector<std::string> names;
    if (mode == Mode::projective)
        for (int i = 0; i <= target_ambient; ++i) names.push_back(stem + std::to_string(i));
    else
        for (int i = 1; i <= target_ambient; ++i) names.push_back(stem + std::to_string(i));
    return names;
}

/// The naive graph ideal of F in the product ring. Projective: the 2x2
/// minors u_i F_j - u_j F_i over index pairs where not both components
/// vanish identically. Affine: u_i h - g_i.
template <FieldElem K>
Ideal<K> graph_ideal(const RationalMapRep<K>& F, const ProductRing& pr) {
    using P = Polynomial<K>;
    const auto& fc = F.components().front().field();
    std::vector<int> src_map(pr.src.begin(), pr.src.end());
    std::vector<P> gens;
    if (F.mode() == Mode::projective) {
        std::vector<P> lifted;
        for (const auto& c : F.components()) lifted.push_back(c.lift(pr.vs, fc, src_map));
        for (std::size_t i = 0; i < lifted.size(); ++i)
            for (std::size_t j = i + 1; j < lifted.size(); ++j) {
                if (lifted[i].is_zero() && lifted[j].is_zero()) continue;
                auto ui = P::variable(pr.vs, fc, pr.tgt[i]);
                auto uj = P::variable(pr.vs, fc, pr.tgt[j]);
                gens.push_back(ui * lifted[j] - uj * lifted[i]);
            }
    } else {
        auto h = F.denominator().lift(pr.vs, fc, src_map);
        for (std::size_t i = 0; i < F.components().size(); ++i) {
            auto ui = P::variable(pr.vs, fc, pr.tgt[i]);
            gens.push_back(ui * h - F.components()[i].lift(pr.vs, fc, src_map));
        }
    }
    return Ideal<K>(pr.vs, fc, std::move(gens));
}

/// Least projective chart index k with X not inside {x_k = 0}; -1 if no
/// such chart exists.
template <FieldElem K>
int dense_chart_index(const Variety<K>& X, const Budget& budget = {}) {
    for (std::size_t k = 0; k < X.coords()->size(); ++k) {
        auto xk = Polynomial<K>::variable(X.coords(), X.field(), static_cast<int>(k));
        if (!radical_membership(xk, X.ideal(), budget)) return static_cast<int>(k);
    }
    return -1;
}

/// Ideal of the closure of {(x, F(x)) : x in X, F defined at x} in the
/// product ring. Computed through one dense chart: saturate the naive
/// graph by a component that is nonzero on X (the extra-variable trick)
/// and eliminate the chart variable; in projective mode the resulting
/// generators are split into bihomogeneous components.
template <FieldElem K>
Ideal<K> restricted_graph(const RationalMapRep<K>& F, const Variety<K>& X,
                          const ProductRing& pr, const Budget& budget = {}) {
    using P = Polynomial<K>;
    const auto& fc = X.field();
    std::vector<int> src_map(pr.src.begin(), pr.src.end());

    // the saturating function: a map component that is nonzero on X
    // (affine: the denominator)
    std::optional<P> sat;
    if (F.mode() == Mode::projective) {
        for (const auto& c : F.components()) {
            if (c.is_zero()) continue;
            if (!radical_membership(c, X.ideal(), budget)) { sat = c; break; }
        }
        if (!sat) throw InputError("map undefined on X: all components vanish on X");
    } else {
        if (radical_membership(F.denominator(), X.ideal(), budget))
            throw InputError("map undefined on X: denominator vanishes on X");
        sat = F.denominator();
    }

    std::vector<P> gens;
    for (const auto& g : X.ideal().generators()) gens.push_back(g.lift(pr.vs, fc, src_map));
    Ideal<K> graph = graph_ideal(F, pr);
    for (const auto& g : graph.generators()) gens.push_back(g);
    Ideal<K> naive(pr.vs, fc, std::move(gens));

    auto chart = saturation_chart(naive, sat->lift(pr.vs, fc, src_map));
    std::vector<int> keep;
    for (std::size_t i = 0; i < pr.vs->size(); ++i) keep.push_back(static_cast<int>(i));
    Ideal<K> elim = elimination_ideal(chart.ideal, keep, budget);

    std::vector<P> out;
    for (const auto& g : elim.generators()) {
        P base = g.restrict_to(pr.vs, keep);
        if (F.mode() == Mode::projective) {
            // split into bihomogeneous parts; each lies in the ideal
            std::set<std::pair<int, int>> degs;
            for (const auto& [m, c] : base.terms())
                degs.insert({m.degree_on(pr.src_mask), m.degree_on(pr.tgt_mask)});
            for (auto [ds, dt] : degs) {
                P part = base.homogeneous_part_on(pr.src_mask, ds)
                             .homogeneous_part_on(pr.tgt_mask, dt);
                if (!part.is_zero()) out.push_back(part);
            }
        } else {
            out.push_back(base);
        }
    }
    return Ideal<K>(pr.vs, fc, std::move(out));
}

/// Zariski closure of the image: eliminate the source block of a graph
/// ideal and restrict to the target coordinates.
template <FieldElem K>
Variety<K> image_closure(const Ideal<K>& graph, const ProductRing& pr, Mode mode,
                         const Budget& budget = {}) {
    Ideal<K> elim = elimination_ideal(graph, pr.tgt, budget);
    VarSetPtr tvs = pr.vs->restricted(pr.tgt);
    std::vector<Polynomial<K>> gens;
    for (const auto& g : elim.generators()) gens.push_back(g.restrict_to(tvs, pr.tgt));
    int ambient = mode == Mode::projective ? static_cast<int>(pr.tgt.size()) - 1
                                           : static_cast<int>(pr.tgt.size());
    return Variety<K>(ambient, mode, Ideal<K>(tvs, graph.field(), std::move(gens)));
}

enum class BoundDerivation { bezout_product, projection, graph };

/// Effective degree bookkeeping. The Andreotti-Bezout constant is 1; the
/// same choice is made for linear projections.
struct DegreeBound {
    mpz_class value;
    BoundDerivation derivation = BoundDerivation::bezout_product;
};

inline DegreeBound bezout_degree_bound(const std::vector<int>& degrees) {
    DegreeBound b;
    b.value = 1;
    b.derivation = BoundDerivation::bezout_product;
    for (int d : degrees) {
        if (d < 1) throw InputError("bezout bound needs degrees >= 1");
        b.value *= d;
    }
    return b;
}

/// Bound on deg(graph of F|X) from the Bezout product over the minor
/// hypersurfaces cut with X; at most ambient-many of them are needed.
template <FieldElem K>
DegreeBound graph_degree_bound(const RationalMapRep<K>& F, const Variety<K>& X) {
    std::vector<int> degs;
    for (const auto& g : X.ideal().generators()) degs.push_back(std::max(1, g.total_degree()));
    DegreeBound b = degs.empty() ? DegreeBound{1, BoundDerivation::graph}
                                 : bezout_degree_bound(degs);
    b.derivation = BoundDerivation::graph;
    int pairs = 0;
    const auto& c = F.components();
    for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = i + 1; j < c.size(); ++j)
            if (!(c[i].is_zero() && c[j].is_zero())) ++pairs;
    int hyps = std::min(pairs, X.ambient_dim());
    for (int i = 0; i < hyps; ++i) b.value *= (F.degree() + 1);
    return b;
}

namespace vdetail {

/// Determinant by Laplace expansion; fine for the small Jacobian blocks
/// that show up here.
template <FieldElem K>
Polynomial<K> poly_det(const std::vector<std::vector<Polynomial<K>>>& m) {
    std::size_t n = m.size();
    if (n == 0) throw InputError("poly_det: empty matrix");
    if (n == 1) return m[0][0];
    const auto& vs = m[0][0].varset();
    auto fc = m[0][0].field();
    Polynomial<K> acc = Polynomial<K>::zero(vs, fc);
    for (std::size_t j = 0; j < n; ++j) {
        if (m[0][j].is_zero()) continue;
        std::vector<std::vector<Polynomial<K>>> sub;
        for (std::size_t r = 1; r < n; ++r) {
            std::vector<Polynomial<K>> row;
            for (std::size_t cnum = 0; cnum < n; ++cnum)
                if (cnum != j) row.push_back(m[r][cnum]);
            sub.push_back(std::move(row));
        }
        Polynomial<K> term = m[0][j] * poly_det(sub);
        acc = (j % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

inline void combinations(int n, int k, const std::function<void(const std::vector<int>&)>& fn) {
    if (k > n || k < 0) return;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        fn(idx);
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

/// All c x c minors of the Jacobian of `gens` with respect to `cols`.
template <FieldElem K>
std::vector<Polynomial<K>> jacobian_minors(const std::vector<Polynomial<K>>& gens,
                                           const std::vector<int>& cols, int c) {
    std::vector<Polynomial<K>> minors;
    if (c <= 0 || gens.empty()) return minors;
    std::vector<std::vector<Polynomial<K>>> jac;
    for (const auto& g : gens) {
        std::vector<Polynomial<K>> row;
        for (int v : cols) row.push_back(g.differentiate(v));
        jac.push_back(std::move(row));
    }
    int rows = static_cast<int>(jac.size()), coln = static_cast<int>(cols.size());
    if (c > rows || c > coln) return minors;
    combinations(rows, c, [&](const std::vector<int>& ri) {
        combinations(coln, c, [&](const std::vector<int>& ci) {
            std::vector<std::vector<Polynomial<K>>> sub;
            for (int r : ri) {
                std::vector<Polynomial<K>> row;
                for (int cc : ci) row.push_back(jac[r][cc]);
                sub.push_back(std::move(row));
            }
            minors.push_back(poly_det(sub));
        });
    });
    return minors;
}

} // namespace vdetail

/// Jacobian criterion: X is smooth iff the codimension-sized minors of
/// the Jacobian have no common zero on X, checked chart by chart in
/// projective mode. Assumes X equi-dimensional.
template <FieldElem K>
bool smoothness_check(const Variety<K>& X, const Budget& budget = {}) {
    using P = Polynomial<K>;
    int dim = X.dimension(budget);
    if (dim < 0) return true; // empty
    const auto& vs = X.coords();
    auto fc = X.field();
    int nv = static_cast<int>(vs->size());

    auto chart_smooth = [&](const std::vector<P>& gens, const std::vector<int>& cols) {
        int c = static_cast<int>(cols.size()) - dim;
        if (c <= 0) return true; // chart is the whole affine space
        std::vector<P> sys = gens;
        auto minors = vdetail::jacobian_minors(gens, cols, c);
        if (minors.empty()) {
            // rank can never reach the required codimension, so the chart
            // must be empty
            return is_inconsistent(Ideal<K>(vs, fc, gens), budget);
        }
        for (auto& m : minors) sys.push_back(std::move(m));
        return is_inconsistent(Ideal<K>(vs, fc, std::move(sys)), budget);
    };

    if (X.mode() == Mode::affine) {
        std::vector<int> cols;
        for (int i = 0; i < nv; ++i) cols.push_back(i);
        return chart_smooth(X.ideal().generators(), cols);
    }
    for (int k = 0; k < nv; ++k) {
        std::vector<P> gens;
        for (const auto& g : X.ideal().generators()) gens.push_back(g.dehomogenize(k));
        std::vector<int> cols;
        for (int i = 0; i < nv; ++i)
            if (i != k) cols.push_back(i);
        if (!chart_smooth(gens, cols)) return false;
    }
    return true;
}

} // namespace birat
