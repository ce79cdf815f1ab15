#include "toral/arith.hpp"

#include <cstdlib>
#include <limits>
#include <numeric>

#include "toral/error.hpp"

namespace toral {

std::string_view error_name(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::ZeroScalar: return "ZeroScalar";
    case ErrorKind::SingularForm: return "SingularForm";
    case ErrorKind::FieldMismatch: return "FieldMismatch";
    case ErrorKind::ZeroElement: return "ZeroElement";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::NonMonomialEntry: return "NonMonomialEntry";
    case ErrorKind::UnsupportedField: return "UnsupportedField";
    case ErrorKind::InvalidDescriptor: return "InvalidDescriptor";
    case ErrorKind::SizeMismatch: return "SizeMismatch";
    case ErrorKind::NotUnimodular: return "NotUnimodular";
    case ErrorKind::DegreeIncompatible: return "DegreeIncompatible";
    case ErrorKind::InvalidField: return "InvalidField";
    case ErrorKind::NotSkew: return "NotSkew";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::ParseError: return "ParseError";
    }
    return "Unknown";
}

} // namespace toral

namespace toral::arith {

namespace {

[[noreturn]] void overflow(const char* op) {
    throw Error(ErrorKind::Overflow, std::string("64-bit overflow in ") + op);
}

} // namespace

i64 add(i64 a, i64 b) {
    i64 r;
    if (__builtin_add_overflow(a, b, &r)) overflow("add");
    return r;
}

i64 sub(i64 a, i64 b) {
    i64 r;
    if (__builtin_sub_overflow(a, b, &r)) overflow("sub");
    return r;
}

i64 mul(i64 a, i64 b) {
    i64 r;
    if (__builtin_mul_overflow(a, b, &r)) overflow("mul");
    return r;
}

i64 neg(i64 a) {
    if (a == std::numeric_limits<i64>::min()) overflow("neg");
    return -a;
}

i64 mod(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

i64 mulmod(i64 a, i64 b, i64 m) {
    return static_cast<i64>(static_cast<__int128>(mod(a, m)) * mod(b, m) % m);
}

i64 powmod(i64 base, i64 exp, i64 m) {
    i64 result = 1 % m;
    base = mod(base, m);
    while (exp > 0) {
        if (exp & 1) result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return result;
}

i64 invmod(i64 a, i64 m) {
    // extended Euclid on (a mod m, m)
    i64 old_r = mod(a, m), r = m;
    i64 old_s = 1, s = 0;
    while (r != 0) {
        i64 q = old_r / r;
        i64 t = old_r - q * r;
        old_r = r;
        r = t;
        t = old_s - q * s;
        old_s = s;
        s = t;
    }
    if (old_r != 1 && m != 1) throw Error(ErrorKind::Overflow, "invmod: argument not invertible");
    return mod(old_s, m);
}

i64 gcd(i64 a, i64 b) { return std::gcd(a, b); }

i64 lcm(i64 a, i64 b) {
    if (a == 0 || b == 0) return 0;
    i64 g = std::gcd(a, b);
    return std::abs(mul(a / g, b));
}

bool is_prime(i64 n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (i64 d = 3; d <= n / d; d += 2)
        if (n % d == 0) return false;
    return true;
}

std::vector<i64> prime_divisors(i64 n) {
    std::vector<i64> out;
    unsigned long long m = n < 0 ? 0ULL - static_cast<unsigned long long>(n) : n;
    for (unsigned long long d = 2; d <= m / d; ++d) {
        if (m % d == 0) {
            out.push_back(static_cast<i64>(d));
            while (m % d == 0) m /= d;
        }
    }
    if (m > 1) out.push_back(static_cast<i64>(m));
    return out;
}

i64 squarefree_part(i64 n) {
    if (n == 0) throw Error(ErrorKind::ZeroScalar, "squarefree part of zero");
    i64 sign = n < 0 ? -1 : 1;
    unsigned long long m = n < 0 ? 0ULL - static_cast<unsigned long long>(n) : n;
    unsigned long long core = 1;
    for (unsigned long long d = 2; d <= m / d; ++d) {
        int e = 0;
        while (m % d == 0) {
            m /= d;
            ++e;
        }
        if (e % 2) core *= d;
    }
    core *= m;
    return sign * static_cast<i64>(core);
}

i64 squarefree_product(i64 a, i64 b) {
    i64 g = std::gcd(a, b);
    return mul(a / g, b / g);
}

int valuation(i64 n, i64 p) {
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

int legendre(i64 a, i64 p) {
    i64 r = powmod(a, (p - 1) / 2, p);
    if (r == 0) return 0;
    return r == 1 ? 1 : -1;
}

namespace {

i64 strip(i64 n, i64 p, int& v) {
    v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return n;
}

} // namespace

int hilbert_symbol(i64 a, i64 b, i64 p) {
    if (p == 0) return (a < 0 && b < 0) ? -1 : 1;
    int alpha, beta;
    i64 u = strip(a, p, alpha);
    i64 v = strip(b, p, beta);
    if (p == 2) {
        auto eps = [](i64 x) { return static_cast<int>(mod(x, 4) == 3); };
        auto omega = [](i64 x) {
            i64 r = mod(x, 8);
            return static_cast<int>(r == 3 || r == 5);
        };
        int e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u);
        return (e % 2) ? -1 : 1;
    }
    int sign = 1;
    if ((static_cast<i64>(alpha) * beta % 2 == 1) && ((p - 1) / 2) % 2 == 1) sign = -sign;
    if (beta % 2) sign *= legendre(u, p);
    if (alpha % 2) sign *= legendre(v, p);
    return sign;
}

bool is_local_square(i64 a, i64 p) {
    if (p == 0) return a > 0;
    int v;
    i64 u = strip(a, p, v);
    if (v % 2) return false;
    if (p == 2) return mod(u, 8) == 1;
    return legendre(u, p) == 1;
}

i64 next_squarefree(i64 x) {
    i64 candidate = x;
    for (;;) {
        candidate = candidate < 0 ? -candidate : -(candidate + 1);
        if (squarefree_part(candidate) == candidate) return candidate;
    }
}

} // namespace toral::arith
