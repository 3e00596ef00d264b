#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "birat/field.hpp"
#include "birat/monomial.hpp"
#include "birat/varset.hpp"

namespace birat {

class ParseError : public InputError {
public:
    ParseError(const std::string& what, std::size_t pos)
        : InputError(what + " (at position " + std::to_string(pos) + ")"), position(pos) {}
    std::size_t position;
};

/// Sparse multivariate polynomial with exact coefficients. Terms are kept
/// in canonical form: sorted descending by grevlex, no zero coefficients.
/// Values are immutable after construction as far as callers are
/// concerned; all operations return fresh polynomials.
template <FieldElem K>
class Polynomial {
public:
    using Ctx = FieldCtx<K>;
    using Term = std::pair<Monomial, K>;

    Polynomial() = default;
    Polynomial(VarSetPtr vs, Ctx fc) : vs_(std::move(vs)), fc_(fc) {}

    static Polynomial zero(VarSetPtr vs, Ctx fc) { return Polynomial(std::move(vs), fc); }
    static Polynomial constant(VarSetPtr vs, Ctx fc, const K& c) {
        Polynomial p(std::move(vs), fc);
        if (!Ctx::is_zero(c)) p.terms_.emplace_back(Monomial(p.vs_->size()), c);
        return p;
    }
    static Polynomial one(VarSetPtr vs, Ctx fc) {
        return constant(std::move(vs), fc, fc.one());
    }
    static Polynomial variable(VarSetPtr vs, Ctx fc, int index, int power = 1) {
        Polynomial p(vs, fc);
        Monomial m(vs->size());
        m[index] = power;
        p.terms_.emplace_back(std::move(m), fc.one());
        return p;
    }
    static Polynomial from_terms(VarSetPtr vs, Ctx fc, std::vector<Term> terms) {
        Polynomial p(std::move(vs), fc);
        p.terms_ = std::move(terms);
        p.normalize();
        return p;
    }

    const VarSetPtr& varset() const { return vs_; }
    const Ctx& field() const { return fc_; }
    const std::vector<Term>& terms() const { return terms_; }
    std::size_t nvars() const { return vs_->size(); }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_[0].first.is_constant());
    }
    /// Constant term (zero if absent).
    K constant_value() const {
        for (const auto& [m, c] : terms_)
            if (m.is_constant()) return c;
        return fc_.zero();
    }
    /// -1 for the zero polynomial.
    int total_degree() const {
        int d = -1;
        for (const auto& [m, c] : terms_) d = std::max(d, m.total_degree());
        return d;
    }
    int degree_in(int var) const {
        int d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m[var]);
        return d;
    }
    bool is_homogeneous() const {
        if (terms_.empty()) return true;
        int d = terms_[0].first.total_degree();
        for (const auto& [m, c] : terms_)
            if (m.total_degree() != d) return false;
        return true;
    }
    bool uses_var(int var) const {
        for (const auto& [m, c] : terms_)
            if (m[var] > 0) return true;
        return false;
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        a.require_compatible(b);
        Polynomial r(a.vs_, a.fc_);
        r.terms_ = merge(a.terms_, b.terms_, false);
        return r;
    }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
        a.require_compatible(b);
        Polynomial r(a.vs_, a.fc_);
        r.terms_ = merge(a.terms_, b.terms_, true);
        return r;
    }
    Polynomial operator-() const {
        Polynomial r(vs_, fc_);
        r.terms_.reserve(terms_.size());
        for (const auto& [m, c] : terms_) r.terms_.emplace_back(m, -c);
        return r;
    }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        a.require_compatible(b);
        Polynomial r(a.vs_, a.fc_);
        if (a.is_zero() || b.is_zero()) return r;
        std::map<Monomial, K, MonoLess> acc;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) {
                Monomial m = ma * mb;
                K prod = ca * cb;
                auto it = acc.find(m);
                if (it == acc.end()) acc.emplace(std::move(m), std::move(prod));
                else it->second = it->second + prod;
            }
        r.terms_.reserve(acc.size());
        for (auto it = acc.rbegin(); it != acc.rend(); ++it)
            if (!Ctx::is_zero(it->second)) r.terms_.emplace_back(it->first, it->second);
        return r;
    }
    Polynomial scaled(const K& c) const {
        Polynomial r(vs_, fc_);
        if (Ctx::is_zero(c)) return r;
        r.terms_.reserve(terms_.size());
        for (const auto& [m, co] : terms_) r.terms_.emplace_back(m, co * c);
        return r;
    }
    Polynomial pow(int e) const {
        Polynomial r = one(vs_, fc_);
        Polynomial base = *this;
        while (e > 0) {
            if (e & 1) r = r * base;
            base = e > 1 ? base * base : base;
            e >>= 1;
        }
        return r;
    }
    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

    /// Exact evaluation at a full point.
    K evaluate(std::span<const K> point) const {
        if (point.size() != nvars()) throw InputError("evaluate: wrong point arity");
        K acc = fc_.zero();
        for (const auto& [m, c] : terms_) {
            K t = c;
            for (std::size_t i = 0; i < m.size(); ++i)
                for (int k = 0; k < m[i]; ++k) t = t * point[i];
            acc = acc + t;
        }
        return acc;
    }

    /// Substitute polynomials for a subset of the variables (same ring).
    Polynomial substitute(const std::map<int, Polynomial>& repl) const {
        Polynomial acc = zero(vs_, fc_);
        for (const auto& [m, c] : terms_) {
            Polynomial t = constant(vs_, fc_, c);
            for (std::size_t i = 0; i < m.size(); ++i) {
                if (m[i] == 0) continue;
                auto it = repl.find(static_cast<int>(i));
                if (it == repl.end()) {
                    Monomial mi(vs_->size());
                    mi[i] = m[i];
                    t = t * from_terms(vs_, fc_, {{mi, fc_.one()}});
                } else {
                    t = t * it->second.pow(m[i]);
                }
            }
            acc = acc + t;
        }
        return acc;
    }
    /// Substitute constants for a subset of the variables.
    Polynomial substitute_values(const std::map<int, K>& repl) const {
        Polynomial acc = zero(vs_, fc_);
        std::vector<Term> out;
        for (const auto& [m, c] : terms_) {
            K coeff = c;
            Monomial mm = m;
            for (const auto& [i, v] : repl) {
                for (int k = 0; k < mm[i]; ++k) coeff = coeff * v;
                mm[static_cast<std::size_t>(i)] = 0;
            }
            out.emplace_back(std::move(mm), std::move(coeff));
        }
        return from_terms(vs_, fc_, std::move(out));
    }

    /// Formal partial derivative; obeys characteristic-p rules over F_p.
    Polynomial differentiate(int var) const {
        std::vector<Term> out;
        for (const auto& [m, c] : terms_) {
            if (m[var] == 0) continue;
            K coeff = c * fc_.from_long(m[var]);
            if (Ctx::is_zero(coeff)) continue;
            Monomial mm = m;
            mm[var] -= 1;
            out.emplace_back(std::move(mm), std::move(coeff));
        }
        return from_terms(vs_, fc_, std::move(out));
    }

    /// Homogenize with `var`, which must not occur in the polynomial. The
    /// result is homogeneous of the same total degree.
    Polynomial homogenize(int var) const {
        if (uses_var(var))
            throw InputError("homogenize: variable already used: " + vs_->name(var));
        int d = total_degree();
        std::vector<Term> out;
        for (const auto& [m, c] : terms_) {
            Monomial mm = m;
            mm[var] += d - m.total_degree();
            out.emplace_back(std::move(mm), c);
        }
        return from_terms(vs_, fc_, std::move(out));
    }
    /// Homogenize only with respect to total degree on the masked block,
    /// raising `var` (inside the block) as needed. Used for rebuilding
    /// bihomogeneous generators chart by chart.
    Polynomial homogenize_on(int var, const std::vector<char>& block) const {
        if (uses_var(var)) throw InputError("homogenize_on: variable already used");
        int d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m.degree_on(block));
        std::vector<Term> out;
        for (const auto& [m, c] : terms_) {
            Monomial mm = m;
            mm[var] += d - m.degree_on(block);
            out.emplace_back(std::move(mm), c);
        }
        return from_terms(vs_, fc_, std::move(out));
    }
    Polynomial dehomogenize(int var) const {
        return substitute_values({{var, fc_.one()}});
    }
    /// The part of the polynomial whose masked-block degree equals d.
    Polynomial homogeneous_part_on(const std::vector<char>& block, int d) const {
        std::vector<Term> out;
        for (const auto& [m, c] : terms_)
            if (m.degree_on(block) == d) out.emplace_back(m, c);
        return from_terms(vs_, fc_, std::move(out));
    }

    /// Transport to a superset ring; `index_map[i]` is the new index of
    /// old variable i.
    Polynomial lift(const VarSetPtr& nvs, Ctx nfc, const std::vector<int>& index_map) const {
        std::vector<Term> out;
        for (const auto& [m, c] : terms_) {
            Monomial mm(nvs->size());
            for (std::size_t i = 0; i < m.size(); ++i) mm[index_map[i]] = m[i];
            out.emplace_back(std::move(mm), c);
        }
        return from_terms(nvs, nfc, std::move(out));
    }
    /// Transport to a smaller ring; all terms must be supported on the
    /// kept variables.
    Polynomial restrict_to(const VarSetPtr& nvs, const std::vector<int>& keep) const {
        std::vector<char> mask(nvars(), 0);
        for (int i : keep) mask[i] = 1;
        std::vector<Term> out;
        for (const auto& [m, c] : terms_) {
            if (!m.supported_on(mask))
                throw InputError("restrict_to: polynomial uses a dropped variable");
            Monomial mm(nvs->size());
            for (std::size_t j = 0; j < keep.size(); ++j) mm[j] = m[keep[j]];
            out.emplace_back(std::move(mm), c);
        }
        return from_terms(nvs, fc_, std::move(out));
    }

    std::string format() const;

    void require_compatible(const Polynomial& o) const {
        if (vs_ != o.vs_ && !(*vs_ == *o.vs_))
            throw InputError("polynomials over different variable sets");
        if (!fc_.same(o.fc_)) throw InputError("polynomials over different fields");
    }

private:
    struct MonoLess {
        bool operator()(const Monomial& a, const Monomial& b) const {
            return grevlex_less(a, b);
        }
    };

    void normalize() {
        std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) {
            return grevlex_less(b.first, a.first);
        });
        std::vector<Term> out;
        out.reserve(terms_.size());
        for (auto& t : terms_) {
            if (!out.empty() && out.back().first == t.first)
                out.back().second = out.back().second + t.second;
            else
                out.push_back(std::move(t));
            if (!out.empty() && Ctx::is_zero(out.back().second)) out.pop_back();
        }
        terms_ = std::move(out);
    }

    // merge two canonical term lists (descending grevlex)
    static std::vector<Term> merge(const std::vector<Term>& a, const std::vector<Term>& b,
                                   bool subtract) {
        std::vector<Term> out;
        out.reserve(a.size() + b.size());
        std::size_t i = 0, j = 0;
        while (i < a.size() || j < b.size()) {
            if (j == b.size() || (i < a.size() && grevlex_less(b[j].first, a[i].first))) {
                out.push_back(a[i++]);
            } else if (i == a.size() || grevlex_less(a[i].first, b[j].first)) {
                out.emplace_back(b[j].first, subtract ? -b[j].second : b[j].second);
                ++j;
            } else {
                K c = subtract ? K(a[i].second - b[j].second) : K(a[i].second + b[j].second);
                if (!Ctx::is_zero(c)) out.emplace_back(a[i].first, std::move(c));
                ++i; ++j;
            }
        }
        return out;
    }

    VarSetPtr vs_;
    Ctx fc_;
    std::vector<Term> terms_;
};

template <FieldElem K>
std::string Polynomial<K>::format() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        std::string cs = Ctx::to_string(c);
        bool neg = !cs.empty() && cs[0] == '-';
        if (neg) cs = cs.substr(1);
        if (first) {
            if (neg) os << "-";
            first = false;
        } else {
            os << (neg ? " - " : " + ");
        }
        std::string vars;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) continue;
            if (!vars.empty()) vars += "*";
            vars += vs_->name(i);
            if (m[i] > 1) vars += "^" + std::to_string(m[i]);
        }
        if (vars.empty()) {
            os << cs;
        } else if (cs == "1") {
            os << vars;
        } else {
            os << cs << "*" << vars;
        }
    }
    return os.str();
}

/// Recursive-descent parser for the polynomial grammar: signed terms
/// joined by + and -, each term a '*'-separated product of rational
/// literals and powers `name^k`. Whitespace is insignificant;
/// juxtaposition is not multiplication.
template <FieldElem K>
Polynomial<K> parse_polynomial(const std::string& text, const VarSetPtr& vs, FieldCtx<K> fc) {
    using P = Polynomial<K>;
    std::size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    auto peek = [&]() -> int {
        return pos < text.size() ? static_cast<unsigned char>(text[pos]) : -1;
    };
    auto parse_uint = [&]() -> std::string {
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == start) throw ParseError("expected a number", start);
        return text.substr(start, pos - start);
    };
    auto parse_factor = [&](P& term) {
        skip_ws();
        int c = peek();
        if (c == -1) throw ParseError("unexpected end of input", pos);
        if (std::isdigit(c)) {
            std::string num = parse_uint();
            skip_ws();
            std::string lit = num;
            if (peek() == '/') {
                ++pos;
                skip_ws();
                lit += "/" + parse_uint();
            }
            term = term * P::constant(vs, fc, fc.parse(lit));
            return;
        }
        if (std::isalpha(c) || c == '_') {
            std::size_t start = pos;
            while (pos < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
                ++pos;
            std::string name = text.substr(start, pos - start);
            int idx = vs->index_of(name);
            if (idx < 0) throw ParseError("unknown variable '" + name + "'", start);
            int power = 1;
            skip_ws();
            if (peek() == '^') {
                ++pos;
                skip_ws();
                power = std::stoi(parse_uint());
            }
            term = term * P::variable(vs, fc, idx, power);
            return;
        }
        throw ParseError(std::string("unexpected character '") + static_cast<char>(c) + "'", pos);
    };

    P result = P::zero(vs, fc);
    skip_ws();
    bool expect_term = true;
    bool negative = false;
    if (peek() == '-') { negative = true; ++pos; }
    else if (peek() == '+') { ++pos; }
    while (expect_term) {
        P term = P::one(vs, fc);
        parse_factor(term);
        skip_ws();
        while (peek() == '*') {
            ++pos;
            parse_factor(term);
            skip_ws();
        }
        result = negative ? result - term : result + term;
        skip_ws();
        int c = peek();
        if (c == '+' || c == '-') {
            negative = (c == '-');
            ++pos;
        } else if (c == -1) {
            expect_term = false;
        } else {
            throw ParseError(std::string("unexpected character '") + static_cast<char>(c) + "'", pos);
        }
    }
    return result;
}

using PolyQ = Polynomial<mpq_class>;
using PolyP = Polynomial<GFp>;

} // namespace birat
