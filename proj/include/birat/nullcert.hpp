#pragma once

#include <optional>
#include <string>
#include <vector>

#include "birat/linalg.hpp"
#include "birat/groebner.hpp"

namespace birat {

enum class Tri { yes, no, inconclusive };

inline const char* tri_name(Tri t) {
    switch (t) {
    case Tri::yes: return "yes";
    case Tri::no: return "no";
    case Tri::inconclusive: return "inconclusive";
    }
    return "?";
}

/// Containment query: is V(h_1,...,h_k) inside V(h)? Witnessed by the
/// identity 1 = tau (1 - a h) + sum tau_i h_i over the ring extended by
/// the fresh variable a.
template <FieldElem K>
struct CertificateQuery {
    VarSetPtr vs;
    FieldCtx<K> fc;
    std::vector<Polynomial<K>> generators;
    Polynomial<K> target;
    int degree_cap = 4;
};

template <FieldElem K>
struct Certificate {
    VarSetPtr vs_ext; // query ring plus the variable a
    int a_var = -1;
    Polynomial<K> tau;                  // cofactor of (1 - a h)
    std::vector<Polynomial<K>> taus;    // cofactors of the h_i
    int degree = 0;                     // max cofactor degree achieved
};

namespace ncdetail {

inline void enumerate_upto(std::size_t nvars, int degree, std::vector<Monomial>& out) {
    std::vector<int> e(nvars, 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
        if (i == nvars) {
            out.emplace_back(e);
            return;
        }
        for (int k = 0; k <= left; ++k) {
            e[i] = k;
            rec(i + 1, left - k);
        }
        e[i] = 0;
    };
    rec(0, degree);
}

/// Solve 1 = sum_b cof_b * mult_b with deg cof_b <= D by coefficient
/// balancing; returns the cofactors (free unknowns zeroed).
template <FieldElem K>
std::optional<std::vector<Polynomial<K>>> balance(const std::vector<Polynomial<K>>& mults,
                                                  const VarSetPtr& vs, FieldCtx<K> fc, int D) {
    using P = Polynomial<K>;
    std::vector<Monomial> monos;
    enumerate_upto(vs->size(), D, monos);
    const int block = static_cast<int>(monos.size());
    std::map<std::vector<int>, std::map<int, K>> rows;
    for (std::size_t b = 0; b < mults.size(); ++b) {
        for (int j = 0; j < block; ++j) {
            int col = static_cast<int>(b) * block + j;
            for (const auto& [m, c] : mults[b].terms()) {
                auto& row = rows[(m * monos[j]).exps()];
                auto it = row.find(col);
                if (it == row.end()) row.emplace(col, c);
                else it->second = it->second + c;
            }
        }
    }
    LinearSystem<K> sys(fc, block * static_cast<int>(mults.size()));
    const std::vector<int> one(vs->size(), 0);
    bool saw_one = false;
    for (auto& [mono, row] : rows) {
        K rhs = fc.zero();
        if (mono == one) { rhs = fc.one(); saw_one = true; }
        sys.add_row(std::move(row), std::move(rhs));
    }
    if (!saw_one) return std::nullopt; // nothing can produce the constant 1
    auto sol = sys.particular_solution();
    if (!sol) return std::nullopt;
    std::vector<P> out;
    for (std::size_t b = 0; b < mults.size(); ++b) {
        std::vector<typename P::Term> terms;
        for (int j = 0; j < block; ++j) {
            const K& c = (*sol)[static_cast<int>(b) * block + j];
            if (!FieldCtx<K>::is_zero(c)) terms.emplace_back(monos[j], c);
        }
        out.push_back(P::from_terms(vs, fc, std::move(terms)));
    }
    return out;
}

} // namespace ncdetail

/// Incremental-degree search for the containment certificate; nullopt at
/// the cap is inconclusive, never a disproof.
template <FieldElem K>
std::optional<Certificate<K>> find_certificate(const CertificateQuery<K>& q) {
    using P = Polynomial<K>;
    auto ext = extend_ring<K>(q.vs, {"a"});
    int a_var = ext.fresh[0];
    auto a = P::variable(ext.vs, q.fc, a_var);
    std::vector<P> mults;
    mults.push_back(P::one(ext.vs, q.fc) -
                    a * q.target.lift(ext.vs, q.fc, ext.old_to_new)); // tau slot
    for (const auto& h : q.generators) mults.push_back(h.lift(ext.vs, q.fc, ext.old_to_new));

    for (int D = 0; D <= q.degree_cap; ++D) {
        auto cof = ncdetail::balance(mults, ext.vs, q.fc, D);
        if (!cof) continue;
        Certificate<K> cert;
        cert.vs_ext = ext.vs;
        cert.a_var = a_var;
        cert.tau = (*cof)[0];
        cert.taus.assign(cof->begin() + 1, cof->end());
        cert.degree = D;
        return cert;
    }
    return std::nullopt;
}

/// Exact expansion check: tau (1 - a h) + sum tau_i h_i == 1.
template <FieldElem K>
bool verify_certificate(const CertificateQuery<K>& q, const Certificate<K>& cert) {
    using P = Polynomial<K>;
    if (cert.taus.size() != q.generators.size()) return false;
    auto ext_vs = cert.vs_ext;
    std::vector<int> up;
    for (std::size_t i = 0; i < q.vs->size(); ++i) up.push_back(static_cast<int>(i));
    auto a = P::variable(ext_vs, q.fc, cert.a_var);
    P acc = cert.tau * (P::one(ext_vs, q.fc) - a * q.target.lift(ext_vs, q.fc, up));
    for (std::size_t i = 0; i < q.generators.size(); ++i)
        acc = acc + cert.taus[i] * q.generators[i].lift(ext_vs, q.fc, up);
    return acc == P::one(ext_vs, q.fc);
}

/// Weak-Nullstellensatz certificate 1 = sum tau_i h_i (no auxiliary
/// variable); witnesses that the system h_1 = ... = h_k = 0 is insoluble.
template <FieldElem K>
std::optional<std::vector<Polynomial<K>>> find_unit_certificate(
    const std::vector<Polynomial<K>>& generators, const VarSetPtr& vs, FieldCtx<K> fc,
    int degree_cap) {
    for (int D = 0; D <= degree_cap; ++D) {
        auto cof = ncdetail::balance(generators, vs, fc, D);
        if (cof) return cof;
    }
    return std::nullopt;
}

template <FieldElem K>
struct ContainmentResult {
    Tri answer = Tri::inconclusive;
    std::optional<Certificate<K>> certificate;
    std::string note;
};

/// Decide V(I) subseteq V(h): "yes" with a certificate when the search
/// succeeds, else fall back to the Groebner route; "no" only when
/// radical membership refutes.
template <FieldElem K>
ContainmentResult<K> certify_containment(const Ideal<K>& I, const Polynomial<K>& h,
                                         int degree_cap, const Budget& budget = {}) {
    ContainmentResult<K> res;
    CertificateQuery<K> q{I.varset(), I.field(), I.generators(), h, degree_cap};
    if (auto cert = find_certificate(q)) {
        res.answer = Tri::yes;
        res.certificate = std::move(cert);
        res.note = "certificate at degree " + std::to_string(res.certificate->degree);
        return res;
    }
    try {
        if (radical_membership(h, I, budget)) {
            res.answer = Tri::yes;
            res.note = "radical membership (no certificate within cap " +
                       std::to_string(degree_cap) + ")";
        } else {
            res.answer = Tri::no;
            res.note = "radical membership refutes containment";
        }
    } catch (const BudgetExceeded& e) {
        res.answer = Tri::inconclusive;
        res.note = std::string("certificate cap reached and ") + e.what();
    }
    return res;
}

} // namespace birat
