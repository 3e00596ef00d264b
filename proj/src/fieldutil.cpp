#include "birat/field.hpp"

#include <cctype>

namespace birat {
namespace detail {

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(a) * b) % p);
}

std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, p);
        a = mulmod_u64(a, a, p);
        e >>= 1;
    }
    return r;
}

// Deterministic Miller-Rabin for 64-bit inputs.
bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % q == 0) return n == q;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 0; i < s - 1; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

std::uint64_t invmod_u64(std::uint64_t a, std::uint64_t p) {
    // extended Euclid on signed 128-bit intermediates
    __int128 t = 0, newt = 1;
    __int128 r = p, newr = a % p;
    while (newr != 0) {
        __int128 q = r / newr;
        __int128 tmp = t - q * newt;
        t = newt; newt = tmp;
        tmp = r - q * newr;
        r = newr; newr = tmp;
    }
    if (r != 1) throw InputError("non-invertible element mod p");
    if (t < 0) t += p;
    return static_cast<std::uint64_t>(t);
}

} // namespace detail

static bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

mpq_class FieldCtx<mpq_class>::parse(const std::string& text) const {
    auto slash = text.find('/');
    if (slash == std::string::npos) {
        if (!all_digits(text)) throw InputError("bad rational literal: " + text);
        return mpq_class(text);
    }
    std::string num = text.substr(0, slash), den = text.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den))
        throw InputError("bad rational literal: " + text);
    mpq_class q(text);
    if (q.get_den() == 0) throw InputError("zero denominator in literal: " + text);
    q.canonicalize();
    return q;
}

GFp FieldCtx<GFp>::parse(const std::string& text) const {
    auto slash = text.find('/');
    auto parse_int = [&](const std::string& s) -> GFp {
        if (!all_digits(s)) throw InputError("bad integer literal: " + s);
        mpz_class z(s);
        mpz_class r = z % static_cast<unsigned long>(p);
        return GFp{r.get_ui(), p};
    };
    if (slash == std::string::npos) return parse_int(text);
    GFp num = parse_int(text.substr(0, slash));
    GFp den = parse_int(text.substr(slash + 1));
    return num / den;
}

} // namespace birat
