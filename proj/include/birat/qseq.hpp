#pragma once

#include <gmpxx.h>

namespace birat {

/// q_0(d) = 1, q_m(d) = sum_{j=0..d} q_{m-1}(j). A degree-m polynomial in
/// d with leading coefficient 1/m!; used as the section-count bound for
/// monoid fitting.
mpz_class q_sequence(int m, int d);

/// delta * q_s(d)
mpz_class monoid_h0_bound(const mpz_class& delta, int s, int d);

} // namespace birat
