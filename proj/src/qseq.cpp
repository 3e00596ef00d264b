#include "birat/qseq.hpp"

#include <stdexcept>
#include <vector>

namespace birat {

mpz_class q_sequence(int m, int d) {
    if (m < 0 || d < 0) throw std::invalid_argument("q_sequence: negative argument");
    // row m is built from row m-1 by prefix sums
    std::vector<mpz_class> row(d + 1, 1);
    for (int level = 1; level <= m; ++level) {
        mpz_class acc = 0;
        for (int j = 0; j <= d; ++j) {
            acc += row[j];
            row[j] = acc;
        }
    }
    return row[d];
}

mpz_class monoid_h0_bound(const mpz_class& delta, int s, int d) {
    return delta * q_sequence(s, d);
}

} // namespace birat
