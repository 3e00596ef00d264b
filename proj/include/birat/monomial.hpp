#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace birat {

/// Exponent vector over a fixed VariableSet. The length always equals the
/// number of variables of the owning set.
class Monomial {
public:
    Monomial() = default;
    explicit Monomial(std::size_t nvars) : e_(nvars, 0) {}
    explicit Monomial(std::vector<int> exps) : e_(std::move(exps)) {}

    std::size_t size() const { return e_.size(); }
    int operator[](std::size_t i) const { return e_[i]; }
    int& operator[](std::size_t i) { return e_[i]; }
    const std::vector<int>& exps() const { return e_; }

    int total_degree() const;
    /// Total degree over a subset of positions.
    int degree_on(const std::vector<char>& mask) const;
    bool is_constant() const { return total_degree() == 0; }

    bool divides(const Monomial& m) const;
    Monomial operator*(const Monomial& m) const;
    /// Exact division; caller guarantees divisibility.
    Monomial operator/(const Monomial& m) const;
    static Monomial lcm(const Monomial& a, const Monomial& b);
    bool coprime(const Monomial& b) const;
    /// True when all exponents outside `mask` are zero.
    bool supported_on(const std::vector<char>& mask) const;

    bool operator==(const Monomial& m) const { return e_ == m.e_; }
    bool operator!=(const Monomial& m) const { return e_ != m.e_; }

private:
    std::vector<int> e_;
};

/// Total, multiplicative well-orders on monomials. `block` makes every
/// monomial touching a variable of the first block greater than any
/// monomial supported on the rest, which is what elimination needs.
class MonomialOrder {
public:
    enum class Kind { lex, grevlex, block };

    static MonomialOrder lex() { return MonomialOrder(Kind::lex); }
    static MonomialOrder grevlex() { return MonomialOrder(Kind::grevlex); }
    /// Variables with index < split form the (greater) elimination block.
    static MonomialOrder block_split(std::size_t split, std::size_t nvars);
    /// General elimination order: masked variables form the greater block.
    static MonomialOrder block_mask(std::vector<char> eliminate);

    Kind kind() const { return kind_; }
    /// strict a < b
    bool less(const Monomial& a, const Monomial& b) const;
    bool greater(const Monomial& a, const Monomial& b) const { return less(b, a); }
    /// Stable identity for caching.
    std::string key() const;

private:
    explicit MonomialOrder(Kind k) : kind_(k) {}
    Kind kind_;
    std::vector<char> elim_; // nonempty only for block orders
};

/// The canonical storage order for polynomials (graded reverse lex).
bool grevlex_less(const Monomial& a, const Monomial& b);

} // namespace birat
