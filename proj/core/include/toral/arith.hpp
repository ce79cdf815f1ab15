#pragma once

#include <cstdint>
#include <vector>

namespace toral::arith {

using i64 = std::int64_t;

// Overflow-checked primitives; all throw Error(Overflow).
i64 add(i64 a, i64 b);
i64 sub(i64 a, i64 b);
i64 mul(i64 a, i64 b);
i64 neg(i64 a);

/// Non-negative residue of a modulo m (m > 0).
i64 mod(i64 a, i64 m);
i64 mulmod(i64 a, i64 b, i64 m);
i64 powmod(i64 base, i64 exp, i64 m);
/// Inverse of a modulo m; requires gcd(a, m) = 1.
i64 invmod(i64 a, i64 m);

i64 gcd(i64 a, i64 b);
i64 lcm(i64 a, i64 b);

bool is_prime(i64 n);
/// Distinct prime divisors of |n|, ascending. n != 0.
std::vector<i64> prime_divisors(i64 n);
/// Signed squarefree kernel: n = sign * core * square.
i64 squarefree_part(i64 n);
/// Squarefree part of a*b for squarefree a, b, without forming a*b first.
i64 squarefree_product(i64 a, i64 b);
/// Exponent of prime p in n != 0.
int valuation(i64 n, i64 p);

/// Legendre symbol (a/p) for an odd prime p; returns 0 when p | a.
int legendre(i64 a, i64 p);

/// Hilbert symbol (a, b)_p for nonzero integers. p = 0 denotes the real place.
int hilbert_symbol(i64 a, i64 b, i64 p);
/// Whether nonzero integer a is a square in Q_p (p = 0: in R).
bool is_local_square(i64 a, i64 p);

/// Squarefree integers ordered by (|x|, sign) with negatives first:
/// -1, 1, -2, 2, -3, 3, -5, 5, ...  Returns the successor of x in that order.
i64 next_squarefree(i64 x);

} // namespace toral::arith
