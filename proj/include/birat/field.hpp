#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace birat {

/// Malformed user input (bad polynomial text, unknown variable, schema
/// violations). Maps to CLI exit code 3.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// A resource cap was hit before the computation finished. Callers that
/// implement decision procedures translate this into an "inconclusive"
/// verdict; it never turns into a wrong yes/no.
class BudgetExceeded : public std::runtime_error {
public:
    explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {
bool is_prime_u64(std::uint64_t n);
std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t p);
std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t p);
std::uint64_t invmod_u64(std::uint64_t a, std::uint64_t p);
} // namespace detail

/// Element of the prime field F_p. The modulus travels with the value so
/// that mixed-modulus arithmetic is caught immediately.
struct GFp {
    std::uint64_t v = 0;
    std::uint64_t p = 0;

    GFp() = default;
    GFp(std::uint64_t value, std::uint64_t modulus) : v(value % modulus), p(modulus) {}

    friend GFp operator+(const GFp& a, const GFp& b) {
        a.require_same(b);
        std::uint64_t s = a.v + b.v;
        if (s >= a.p) s -= a.p;
        return GFp{s, a.p};
    }
    friend GFp operator-(const GFp& a, const GFp& b) {
        a.require_same(b);
        std::uint64_t s = a.v >= b.v ? a.v - b.v : a.v + a.p - b.v;
        return GFp{s, a.p};
    }
    friend GFp operator*(const GFp& a, const GFp& b) {
        a.require_same(b);
        return GFp{detail::mulmod_u64(a.v, b.v, a.p), a.p};
    }
    friend GFp operator/(const GFp& a, const GFp& b) {
        a.require_same(b);
        if (b.v == 0)
            throw InputError("division by zero in F_" + std::to_string(a.p) +
                             " (a denominator is divisible by p)");
        return GFp{detail::mulmod_u64(a.v, detail::invmod_u64(b.v, a.p), a.p), a.p};
    }
    GFp operator-() const { return GFp{v == 0 ? 0 : p - v, p}; }
    friend bool operator==(const GFp& a, const GFp& b) { return a.p == b.p && a.v == b.v; }
    friend bool operator!=(const GFp& a, const GFp& b) { return !(a == b); }

private:
    void require_same(const GFp& o) const {
        if (p != o.p) throw InputError("mixed moduli in F_p arithmetic");
    }
};

/// Field context: the per-field data needed to create elements from
/// literals. Empty for Q; carries the modulus for F_p.
template <class K>
struct FieldCtx;

template <>
struct FieldCtx<mpq_class> {
    using Elem = mpq_class;

    mpq_class zero() const { return mpq_class(0); }
    mpq_class one() const { return mpq_class(1); }
    mpq_class from_long(long n) const { return mpq_class(n); }
    /// Parses "p" or "p/q" with arbitrary-precision integers.
    mpq_class parse(const std::string& text) const;
    static bool is_zero(const mpq_class& a) { return a == 0; }
    static bool is_one(const mpq_class& a) { return a == 1; }
    static std::string to_string(const mpq_class& a) { return a.get_str(); }
    /// Characteristic of the field (0 for Q).
    std::uint64_t characteristic() const { return 0; }
    bool same(const FieldCtx&) const { return true; }
    std::string name() const { return "q"; }
};

template <>
struct FieldCtx<GFp> {
    using Elem = GFp;
    std::uint64_t p = 0;

    FieldCtx() = default;
    explicit FieldCtx(std::uint64_t modulus) : p(modulus) {
        if (p < 2 || !detail::is_prime_u64(p))
            throw InputError("F_p modulus must be prime, got " + std::to_string(p));
    }
    GFp zero() const { return GFp{0, p}; }
    GFp one() const { return GFp{1, p}; }
    GFp from_long(long n) const {
        long long r = n % static_cast<long long>(p);
        if (r < 0) r += static_cast<long long>(p);
        return GFp{static_cast<std::uint64_t>(r), p};
    }
    GFp parse(const std::string& text) const;
    static bool is_zero(const GFp& a) { return a.v == 0; }
    static bool is_one(const GFp& a) { return a.v == 1; }
    static std::string to_string(const GFp& a) { return std::to_string(a.v); }
    std::uint64_t characteristic() const { return p; }
    bool same(const FieldCtx& o) const { return p == o.p; }
    std::string name() const { return "fp:" + std::to_string(p); }
};

using RatCtx = FieldCtx<mpq_class>;
using GFpCtx = FieldCtx<GFp>;

template <class K>
concept FieldElem = std::same_as<K, mpq_class> || std::same_as<K, GFp>;

} // namespace birat
