#include "birat/monomial.hpp"

#include <algorithm>
#include <stdexcept>

namespace birat {

int Monomial::total_degree() const {
    int d = 0;
    for (int x : e_) d += x;
    return d;
}

int Monomial::degree_on(const std::vector<char>& mask) const {
    int d = 0;
    for (std::size_t i = 0; i < e_.size(); ++i)
        if (mask[i]) d += e_[i];
    return d;
}

bool Monomial::divides(const Monomial& m) const {
    for (std::size_t i = 0; i < e_.size(); ++i)
        if (e_[i] > m.e_[i]) return false;
    return true;
}

Monomial Monomial::operator*(const Monomial& m) const {
    Monomial r(*this);
    for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] += m.e_[i];
    return r;
}

Monomial Monomial::operator/(const Monomial& m) const {
    Monomial r(*this);
    for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] -= m.e_[i];
    return r;
}

Monomial Monomial::lcm(const Monomial& a, const Monomial& b) {
    Monomial r(a);
    for (std::size_t i = 0; i < r.e_.size(); ++i) r.e_[i] = std::max(a.e_[i], b.e_[i]);
    return r;
}

bool Monomial::coprime(const Monomial& b) const {
    for (std::size_t i = 0; i < e_.size(); ++i)
        if (e_[i] > 0 && b.e_[i] > 0) return false;
    return true;
}

bool Monomial::supported_on(const std::vector<char>& mask) const {
    for (std::size_t i = 0; i < e_.size(); ++i)
        if (e_[i] > 0 && !mask[i]) return false;
    return true;
}

bool grevlex_less(const Monomial& a, const Monomial& b) {
    int da = a.total_degree(), db = b.total_degree();
    if (da != db) return da < db;
    for (std::size_t i = a.size(); i-- > 0;) {
        int d = a[i] - b[i];
        if (d != 0) return d > 0;
    }
    return false;
}

static bool lex_less(const Monomial& a, const Monomial& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        int d = a[i] - b[i];
        if (d != 0) return d < 0;
    }
    return false;
}

// grevlex restricted to masked positions
static int grevlex_cmp_on(const Monomial& a, const Monomial& b,
                          const std::vector<char>& mask, bool inside) {
    int da = 0, db = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (static_cast<bool>(mask[i]) == inside) { da += a[i]; db += b[i]; }
    }
    if (da != db) return da < db ? -1 : 1;
    for (std::size_t i = a.size(); i-- > 0;) {
        if (static_cast<bool>(mask[i]) != inside) continue;
        int d = a[i] - b[i];
        if (d != 0) return d > 0 ? -1 : 1;
    }
    return 0;
}

MonomialOrder MonomialOrder::block_split(std::size_t split, std::size_t nvars) {
    std::vector<char> m(nvars, 0);
    for (std::size_t i = 0; i < split && i < nvars; ++i) m[i] = 1;
    return block_mask(std::move(m));
}

MonomialOrder MonomialOrder::block_mask(std::vector<char> eliminate) {
    MonomialOrder o(Kind::block);
    o.elim_ = std::move(eliminate);
    return o;
}

bool MonomialOrder::less(const Monomial& a, const Monomial& b) const {
    switch (kind_) {
    case Kind::lex: return lex_less(a, b);
    case Kind::grevlex: return grevlex_less(a, b);
    case Kind::block: {
        if (a.size() != elim_.size()) throw std::logic_error("block order arity mismatch");
        int c = grevlex_cmp_on(a, b, elim_, true);
        if (c != 0) return c < 0;
        return grevlex_cmp_on(a, b, elim_, false) < 0;
    }
    }
    return false;
}

std::string MonomialOrder::key() const {
    switch (kind_) {
    case Kind::lex: return "lex";
    case Kind::grevlex: return "grevlex";
    case Kind::block: {
        std::string k = "block:";
        for (char c : elim_) k += c ? '1' : '0';
        return k;
    }
    }
    return "?";
}

} // namespace birat
