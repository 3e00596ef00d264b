#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "birat/polynomial.hpp"

namespace birat {

/// Resource caps for Groebner computations. Exceeding a cap raises
/// BudgetExceeded, which decision procedures turn into "inconclusive";
/// a capped run never returns a wrong boolean.
struct Budget {
    std::uint64_t max_s_pairs = 500000;
    int max_degree = 60;

    static Budget unlimited() { return Budget{UINT64_MAX, 1 << 20}; }
    static Budget tiny() { return Budget{64, 12}; }
    /// Deliberately strict default for the guarded toy solver.
    static Budget toy() { return Budget{8000, 24}; }
};

/// Work done during one Groebner run.
struct BudgetSpent {
    std::uint64_t s_pairs = 0;
    int max_degree_seen = 0;

    void absorb(const BudgetSpent& o) {
        s_pairs += o.s_pairs;
        max_degree_seen = std::max(max_degree_seen, o.max_degree_seen);
    }
};

template <FieldElem K>
struct GBReport {
    std::vector<Polynomial<K>> basis; // reduced basis, sorted by leading term
    std::uint64_t s_pairs_processed = 0;
    int max_intermediate_degree = 0;
};

class EmptyVariety : public std::runtime_error {
public:
    EmptyVariety() : std::runtime_error("variety is empty (ideal contains 1)") {}
};

namespace gbdetail {

/// Optional thread-local sink: while set, every engine run adds its work
/// counters here, so decision procedures can report budget spent.
struct SpentSink {
    inline static thread_local BudgetSpent* active = nullptr;
};

struct SpentScope {
    explicit SpentScope(BudgetSpent* sink) : prev_(SpentSink::active) { SpentSink::active = sink; }
    ~SpentScope() { SpentSink::active = prev_; }

private:
    BudgetSpent* prev_;
};

template <FieldElem K>
struct Engine {
    using P = Polynomial<K>;
    using Term = typename P::Term;

    MonomialOrder ord;
    FieldCtx<K> fc;
    Budget budget;
    BudgetSpent spent;

    ~Engine() {
        if (SpentSink::active) SpentSink::active->absorb(spent);
    }

    // working polynomials keep terms sorted descending under `ord`
    using OP = std::vector<Term>;

    Engine(const MonomialOrder& o, FieldCtx<K> f, const Budget& b)
        : ord(o), fc(f), budget(b) {}

    OP to_op(const P& p) const {
        OP t(p.terms().begin(), p.terms().end());
        std::sort(t.begin(), t.end(), [&](const Term& a, const Term& b) {
            return ord.greater(a.first, b.first);
        });
        return t;
    }
    P to_poly(const OP& t, const VarSetPtr& vs) const {
        return P::from_terms(vs, fc, {t.begin(), t.end()});
    }

    void check_degree(int d) {
        spent.max_degree_seen = std::max(spent.max_degree_seen, d);
        if (d > budget.max_degree)
            throw BudgetExceeded("intermediate degree " + std::to_string(d) +
                                 " exceeds cap " + std::to_string(budget.max_degree));
    }

    static int op_degree(const OP& p) {
        int d = -1;
        for (const auto& [m, c] : p) d = std::max(d, m.total_degree());
        return d;
    }

    // r := a - c * x^m * b, both canonical under ord
    OP submul(const OP& a, const K& c, const Monomial& m, const OP& b) {
        OP scaled;
        scaled.reserve(b.size());
        for (const auto& [mb, cb] : b) scaled.emplace_back(mb * m, c * cb);
        OP out;
        out.reserve(a.size() + scaled.size());
        std::size_t i = 0, j = 0;
        while (i < a.size() || j < scaled.size()) {
            if (j == scaled.size() ||
                (i < a.size() && ord.greater(a[i].first, scaled[j].first))) {
                out.push_back(a[i++]);
            } else if (i == a.size() || ord.greater(scaled[j].first, a[i].first)) {
                out.emplace_back(scaled[j].first, -scaled[j].second);
                ++j;
            } else {
                K v = a[i].second - scaled[j].second;
                if (!FieldCtx<K>::is_zero(v)) out.emplace_back(a[i].first, std::move(v));
                ++i; ++j;
            }
        }
        return out;
    }

    // full normal form against `basis`
    OP reduce(OP p, const std::vector<OP>& basis) {
        OP remainder;
        while (!p.empty()) {
            bool reduced = false;
            const Monomial& lm = p.front().first;
            for (const auto& g : basis) {
                if (g.empty()) continue;
                if (!g.front().first.divides(lm)) continue;
                Monomial q = lm / g.front().first;
                check_degree(q.total_degree() + op_degree(g));
                K c = p.front().second / g.front().second;
                p = submul(p, c, q, g);
                reduced = true;
                break;
            }
            if (!reduced) {
                remainder.push_back(p.front());
                p.erase(p.begin());
            }
        }
        return remainder;
    }

    OP s_poly(const OP& f, const OP& g) {
        const Monomial lcm = Monomial::lcm(f.front().first, g.front().first);
        check_degree(lcm.total_degree() + std::max(op_degree(f), op_degree(g)));
        OP a;
        a.reserve(f.size());
        Monomial qf = lcm / f.front().first;
        for (const auto& [m, c] : f) a.emplace_back(m * qf, c / f.front().second);
        return submul(a, fc.one() / g.front().second, lcm / g.front().first, g);
    }

    std::vector<OP> buchberger(std::vector<OP> basis) {
        // a constant generator settles everything
        auto has_unit = [&](const std::vector<OP>& b) {
            for (const auto& g : b)
                if (!g.empty() && g.front().first.is_constant()) return true;
            return false;
        };

        using PairKey = std::tuple<int, int, int>; // (lcm degree, i, j)
        struct Cmp {
            bool operator()(const std::pair<PairKey, Monomial>& a,
                            const std::pair<PairKey, Monomial>& b) const {
                return a.first > b.first;
            }
        };
        std::priority_queue<std::pair<PairKey, Monomial>,
                            std::vector<std::pair<PairKey, Monomial>>, Cmp>
            queue;
        std::set<std::pair<int, int>> pending;

        auto push_pair = [&](int i, int j) {
            Monomial l = Monomial::lcm(basis[i].front().first, basis[j].front().first);
            queue.push({{l.total_degree(), i, j}, l});
            pending.insert({i, j});
        };

        for (std::size_t i = 0; i < basis.size(); ++i)
            for (std::size_t j = i + 1; j < basis.size(); ++j)
                push_pair(static_cast<int>(i), static_cast<int>(j));

        if (has_unit(basis)) return basis;

        while (!queue.empty()) {
            auto [key, lcm] = queue.top();
            queue.pop();
            auto [deg, i, j] = key;
            pending.erase({i, j});

            if (++spent.s_pairs > budget.max_s_pairs)
                throw BudgetExceeded("S-pair count exceeds cap " +
                                     std::to_string(budget.max_s_pairs));

            // first Buchberger criterion: coprime leading terms
            if (basis[i].front().first.coprime(basis[j].front().first)) continue;
            // chain criterion
            bool skip = false;
            for (std::size_t k = 0; k < basis.size(); ++k) {
                if (static_cast<int>(k) == i || static_cast<int>(k) == j) continue;
                if (!basis[k].front().first.divides(lcm)) continue;
                int a = std::min<int>(i, k), b = std::max<int>(i, k);
                int c = std::min<int>(j, k), d = std::max<int>(j, k);
                if (!pending.count({a, b}) && !pending.count({c, d})) { skip = true; break; }
            }
            if (skip) continue;

            OP r = reduce(s_poly(basis[i], basis[j]), basis);
            if (r.empty()) continue;
            basis.push_back(std::move(r));
            int newi = static_cast<int>(basis.size()) - 1;
            if (basis[newi].front().first.is_constant()) break;
            for (int k = 0; k < newi; ++k) push_pair(k, newi);
        }
        return basis;
    }

    std::vector<OP> reduced_basis(std::vector<OP> basis) {
        // drop redundant leading terms
        std::vector<OP> minimal;
        for (std::size_t i = 0; i < basis.size(); ++i) {
            if (basis[i].empty()) continue;
            bool redundant = false;
            for (std::size_t j = 0; j < basis.size(); ++j) {
                if (i == j || basis[j].empty()) continue;
                if (basis[j].front().first.divides(basis[i].front().first) &&
                    !(basis[i].front().first == basis[j].front().first && i < j)) {
                    redundant = true;
                    break;
                }
            }
            if (!redundant) minimal.push_back(basis[i]);
        }
        // tail-reduce each against the others, make monic
        std::vector<OP> out(minimal.size());
        for (std::size_t i = 0; i < minimal.size(); ++i) {
            std::vector<OP> others;
            for (std::size_t j = 0; j < minimal.size(); ++j)
                if (j != i) others.push_back(minimal[j]);
            OP r = reduce(minimal[i], others);
            K lc = r.front().second;
            for (auto& [m, c] : r) c = c / lc;
            out[i] = std::move(r);
        }
        std::sort(out.begin(), out.end(), [&](const OP& a, const OP& b) {
            return ord.less(a.front().first, b.front().first);
        });
        return out;
    }
};

} // namespace gbdetail

/// A polynomial ideal with cached reduced Groebner bases, one per
/// monomial order. Values are immutable once built; the cache only ever
/// fills in results of deterministic computations.
template <FieldElem K>
class Ideal {
public:
    using P = Polynomial<K>;

    Ideal(VarSetPtr vs, FieldCtx<K> fc, std::vector<P> gens)
        : vs_(std::move(vs)), fc_(fc) {
        for (auto& g : gens) {
            if (g.varset() != vs_ && !(*g.varset() == *vs_))
                throw InputError("ideal generator over a different variable set");
            if (!g.is_zero()) gens_.push_back(std::move(g));
        }
    }

    const VarSetPtr& varset() const { return vs_; }
    const FieldCtx<K>& field() const { return fc_; }
    /// Nonzero generators, as given.
    const std::vector<P>& generators() const { return gens_; }
    bool is_zero_ideal() const { return gens_.empty(); }

    /// Reduced Groebner basis; unique per order. Throws BudgetExceeded.
    const GBReport<K>& groebner(const MonomialOrder& ord, const Budget& budget = {}) const {
        auto it = cache_.find(ord.key());
        if (it != cache_.end()) return it->second;
        gbdetail::Engine<K> eng(ord, fc_, budget);
        std::vector<typename gbdetail::Engine<K>::OP> ops;
        for (const auto& g : gens_) ops.push_back(eng.to_op(g));
        auto basis = eng.reduced_basis(eng.buchberger(std::move(ops)));
        GBReport<K> rep;
        for (const auto& b : basis) rep.basis.push_back(eng.to_poly(b, vs_));
        rep.s_pairs_processed = eng.spent.s_pairs;
        rep.max_intermediate_degree = eng.spent.max_degree_seen;
        return cache_.emplace(ord.key(), std::move(rep)).first->second;
    }

private:
    VarSetPtr vs_;
    FieldCtx<K> fc_;
    std::vector<P> gens_;
    mutable std::map<std::string, GBReport<K>> cache_;
};

/// Remainder of p on division by the reduced basis of I; p - NF(p) lies
/// in I and no remainder term is divisible by a basis leading term.
template <FieldElem K>
Polynomial<K> normal_form(const Polynomial<K>& p, const Ideal<K>& I,
                          const MonomialOrder& ord = MonomialOrder::grevlex(),
                          const Budget& budget = {}) {
    const auto& rep = I.groebner(ord, budget);
    gbdetail::Engine<K> eng(ord, I.field(), budget);
    std::vector<typename gbdetail::Engine<K>::OP> basis;
    for (const auto& g : rep.basis) basis.push_back(eng.to_op(g));
    return eng.to_poly(eng.reduce(eng.to_op(p), basis), I.varset());
}

template <FieldElem K>
bool ideal_membership(const Polynomial<K>& p, const Ideal<K>& I,
                      const MonomialOrder& ord = MonomialOrder::grevlex(),
                      const Budget& budget = {}) {
    return normal_form(p, I, ord, budget).is_zero();
}

/// True iff 1 lies in I, i.e. V(I) is empty over the algebraic closure.
template <FieldElem K>
bool is_inconsistent(const Ideal<K>& I, const Budget& budget = {}) {
    const auto& rep = I.groebner(MonomialOrder::grevlex(), budget);
    return rep.basis.size() == 1 && rep.basis[0].is_constant();
}

/// Ring extension bookkeeping for the fresh-variable tricks.
template <FieldElem K>
struct RingExtension {
    VarSetPtr vs;
    std::vector<int> old_to_new; // identity prefix
    std::vector<int> fresh;      // indices of the added variables
};

template <FieldElem K>
RingExtension<K> extend_ring(const VarSetPtr& vs, const std::vector<std::string>& names) {
    RingExtension<K> ext;
    ext.vs = vs->extended(names);
    for (std::size_t i = 0; i < vs->size(); ++i) ext.old_to_new.push_back(static_cast<int>(i));
    for (std::size_t i = vs->size(); i < ext.vs->size(); ++i)
        ext.fresh.push_back(static_cast<int>(i));
    return ext;
}

/// V(I) subseteq V(h), via the Rabinowitsch trick: I + (1 - a h) is
/// inconsistent for a fresh variable a.
template <FieldElem K>
bool radical_membership(const Polynomial<K>& h, const Ideal<K>& I, const Budget& budget = {}) {
    if (h.is_zero()) return true;
    auto ext = extend_ring<K>(I.varset(), {"a"});
    std::vector<Polynomial<K>> gens;
    for (const auto& g : I.generators())
        gens.push_back(g.lift(ext.vs, I.field(), ext.old_to_new));
    auto a = Polynomial<K>::variable(ext.vs, I.field(), ext.fresh[0]);
    gens.push_back(Polynomial<K>::one(ext.vs, I.field()) -
                   a * h.lift(ext.vs, I.field(), ext.old_to_new));
    return is_inconsistent(Ideal<K>(ext.vs, I.field(), std::move(gens)), budget);
}

/// Generators of I intersected with the subring of the kept variables,
/// via a block elimination order.
template <FieldElem K>
Ideal<K> elimination_ideal(const Ideal<K>& I, const std::vector<int>& keep,
                           const Budget& budget = {}) {
    std::vector<char> elim(I.varset()->size(), 1);
    for (int k : keep) elim[k] = 0;
    bool nothing = true;
    for (char c : elim) nothing = nothing && !c;
    if (nothing) return I;
    auto ord = MonomialOrder::block_mask(elim);
    const auto& rep = I.groebner(ord, budget);
    std::vector<char> keep_mask(I.varset()->size(), 0);
    for (int k : keep) keep_mask[k] = 1;
    std::vector<Polynomial<K>> out;
    for (const auto& g : rep.basis) {
        bool ok = true;
        for (const auto& [m, c] : g.terms()) ok = ok && m.supported_on(keep_mask);
        if (ok) out.push_back(g);
    }
    return Ideal<K>(I.varset(), I.field(), std::move(out));
}

/// I + (1 - t h) over a ring extended by the fresh chart variable t:
/// the locus of V(I) where h does not vanish, one dimension up.
template <FieldElem K>
struct ChartIdeal {
    Ideal<K> ideal;
    int chart_var;
};

template <FieldElem K>
ChartIdeal<K> saturation_chart(const Ideal<K>& I, const Polynomial<K>& h,
                               const std::string& tname = "t") {
    auto ext = extend_ring<K>(I.varset(), {tname});
    std::vector<Polynomial<K>> gens;
    for (const auto& g : I.generators())
        gens.push_back(g.lift(ext.vs, I.field(), ext.old_to_new));
    auto t = Polynomial<K>::variable(ext.vs, I.field(), ext.fresh[0]);
    gens.push_back(Polynomial<K>::one(ext.vs, I.field()) -
                   t * h.lift(ext.vs, I.field(), ext.old_to_new));
    return ChartIdeal<K>{Ideal<K>(ext.vs, I.field(), std::move(gens)), ext.fresh[0]};
}

/// Krull dimension of V(I), from maximal sets of variables independent
/// modulo the leading-term ideal (grevlex). Throws EmptyVariety when
/// 1 lies in I.
template <FieldElem K>
int krull_dimension(const Ideal<K>& I, const Budget& budget = {}) {
    const auto& rep = I.groebner(MonomialOrder::grevlex(), budget);
    if (rep.basis.size() == 1 && rep.basis[0].is_constant()) throw EmptyVariety();
    std::size_t n = I.varset()->size();
    if (n > 22) throw InputError("krull_dimension: too many variables");
    std::vector<std::uint32_t> lt_support;
    for (const auto& g : rep.basis) {
        std::uint32_t m = 0;
        const Monomial& lt = g.terms().front().first;
        for (std::size_t i = 0; i < n; ++i)
            if (lt[i] > 0) m |= (1u << i);
        lt_support.push_back(m);
    }
    int best = 0;
    for (std::uint32_t s = 0; s < (1u << n); ++s) {
        int size = __builtin_popcount(s);
        if (size <= best) continue;
        bool independent = true;
        for (std::uint32_t lt : lt_support)
            if ((lt & ~s) == 0) { independent = false; break; }
        if (independent) best = size;
    }
    return best;
}

/// True iff V(I) is finite: every variable has a pure-power leading term.
template <FieldElem K>
bool is_zero_dimensional(const Ideal<K>& I, const Budget& budget = {}) {
    const auto& rep = I.groebner(MonomialOrder::grevlex(), budget);
    if (rep.basis.size() == 1 && rep.basis[0].is_constant()) return true; // empty
    std::size_t n = I.varset()->size();
    std::vector<char> covered(n, 0);
    for (const auto& g : rep.basis) {
        const Monomial& lt = g.terms().front().first;
        int var = -1;
        bool pure = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (lt[i] > 0) {
                if (var >= 0) { pure = false; break; }
                var = static_cast<int>(i);
            }
        }
        if (pure && var >= 0) covered[var] = 1;
    }
    for (char c : covered)
        if (!c) return false;
    return true;
}

/// Vector-space dimension of the quotient ring for a zero-dimensional
/// ideal: the number of standard monomials. Used as the multiplicity
/// count behind degree measurements.
template <FieldElem K>
std::optional<std::uint64_t> standard_monomial_count(const Ideal<K>& I,
                                                     const Budget& budget = {},
                                                     std::uint64_t cap = 1u << 20) {
    if (!is_zero_dimensional(I, budget)) return std::nullopt;
    const auto& rep = I.groebner(MonomialOrder::grevlex(), budget);
    if (rep.basis.size() == 1 && rep.basis[0].is_constant()) return 0;
    std::vector<Monomial> lts;
    for (const auto& g : rep.basis) lts.push_back(g.terms().front().first);
    std::size_t n = I.varset()->size();
    std::set<std::vector<int>> seen;
    std::vector<std::vector<int>> frontier{std::vector<int>(n, 0)};
    seen.insert(frontier[0]);
    std::uint64_t count = 0;
    while (!frontier.empty()) {
        auto e = frontier.back();
        frontier.pop_back();
        ++count;
        if (count > cap) return std::nullopt;
        for (std::size_t i = 0; i < n; ++i) {
            auto e2 = e;
            ++e2[i];
            if (seen.count(e2)) continue;
            Monomial m(e2);
            bool divisible = false;
            for (const auto& lt : lts)
                if (lt.divides(m)) { divisible = true; break; }
            if (!divisible) {
                seen.insert(e2);
                frontier.push_back(e2);
            }
        }
    }
    return count;
}

using IdealQ = Ideal<mpq_class>;

} // namespace birat
