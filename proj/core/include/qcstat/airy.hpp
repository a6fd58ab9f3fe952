#pragma once

#include <cstddef>

namespace qcstat {

// k-th zero (k >= 1) of Ai and of Ai', both negative. Large k use the
// asymptotic expansions in t = 3 pi (4k - 1) / 8 (resp. 3 pi (4k - 3) / 8),
// small k are polished by Newton iteration on the Airy functions.
double airy_ai_zero(std::size_t k);
double airy_ai_prime_zero(std::size_t k);

}  // namespace qcstat
