#pragma once

// Brute-force reference computations used by the tests. Nothing here calls
// into the library's algorithms; values are derived by enumeration.

#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <set>
#include <vector>

namespace oracle {

/// Field of order q in {3, 5, 7, 9, 11, ...primes}, elements 0..q-1 with
/// explicit tables. F_9 is F_3[i]/(i^2 + 1), element a + 3b <-> a + b i.
struct SmallField {
    int q = 0;
    std::vector<std::vector<int>> add, mul;

    explicit SmallField(int order) : q(order), add(order, std::vector<int>(order)), mul(order, std::vector<int>(order)) {
        if (order == 9) {
            for (int x = 0; x < 9; ++x)
                for (int y = 0; y < 9; ++y) {
                    int a = x % 3, b = x / 3, c = y % 3, d = y / 3;
                    add[x][y] = (a + c) % 3 + 3 * ((b + d) % 3);
                    int re = ((a * c - b * d) % 3 + 3) % 3;
                    int im = (a * d + b * c) % 3;
                    mul[x][y] = re + 3 * im;
                }
        } else {
            for (int x = 0; x < q; ++x)
                for (int y = 0; y < q; ++y) {
                    add[x][y] = (x + y) % q;
                    mul[x][y] = (x * y) % q;
                }
        }
    }

    std::set<int> nonzero_squares() const {
        std::set<int> s;
        for (int x = 1; x < q; ++x) s.insert(mul[x][x]);
        return s;
    }

    int some_nonsquare() const {
        auto sq = nonzero_squares();
        for (int x = 1; x < q; ++x)
            if (!sq.count(x)) return x;
        return -1;
    }

    /// Exhaustive search for a nonzero v with sum a_i v_i^2 = 0.
    bool isotropic(const std::vector<int>& coeffs) const {
        const std::size_t d = coeffs.size();
        std::vector<int> v(d, 0);
        for (;;) {
            std::size_t i = 0;
            while (i < d && v[i] == q - 1) v[i++] = 0;
            if (i == d) return false;
            ++v[i];
            int s = 0;
            for (std::size_t k = 0; k < d; ++k) s = add[s][mul[coeffs[k]][mul[v[k]][v[k]]]];
            if (s == 0) return true;
        }
    }
};

/// Primitive integer solution of sum a_i x_i^2 = 0 with |x_i| <= bound.
inline bool integer_isotropic_search(const std::vector<std::int64_t>& a, int bound) {
    const std::size_t d = a.size();
    std::vector<int> x(d, -bound);
    for (;;) {
        std::int64_t s = 0;
        bool nonzero = false;
        for (std::size_t k = 0; k < d; ++k) {
            s += a[k] * x[k] * x[k];
            nonzero |= x[k] != 0;
        }
        if (nonzero && s == 0) return true;
        std::size_t i = 0;
        while (i < d && x[i] == bound) x[i++] = -bound;
        if (i == d) return false;
        ++x[i];
    }
}

/// For a skew integer matrix A mod N (row-major, n x n), the sizes
/// |Q[m]| of the m-torsion of Q = (Z/N)^n / radical, for m = 1..N.
/// Q is the finite group on which the class induces a nondegenerate pairing.
inline std::vector<long long> torsion_profile(const std::vector<long long>& A, int n, long long N) {
    long long total = 1;
    for (int i = 0; i < n; ++i) total *= N;
    auto in_radical = [&](const std::vector<long long>& v) {
        for (int i = 0; i < n; ++i) {
            long long s = 0;
            for (int j = 0; j < n; ++j) s += A[i * n + j] * v[j];
            if (((s % N) + N) % N != 0) return false;
        }
        return true;
    };
    std::vector<long long> v(n);
    long long radical = 0;
    std::vector<long long> torsion_count(N + 1, 0);
    for (long long code = 0; code < total; ++code) {
        long long c = code;
        for (int i = 0; i < n; ++i) {
            v[i] = c % N;
            c /= N;
        }
        if (in_radical(v)) ++radical;
        for (long long m = 1; m <= N; ++m) {
            std::vector<long long> w(n);
            for (int i = 0; i < n; ++i) w[i] = (m * v[i]) % N;
            if (in_radical(w)) ++torsion_count[m];
        }
    }
    std::vector<long long> out(N + 1, 0);
    for (long long m = 1; m <= N; ++m) out[m] = torsion_count[m] / radical;
    return out;
}

/// |Q[m]| predicted by an ord-list: prod gcd(m, d_k)^2.
inline long long torsion_from_orders(const std::vector<long long>& orders, long long m) {
    long long out = 1;
    for (long long d : orders) {
        long long g = std::gcd(m, d);
        out *= g * g;
    }
    return out;
}

} // namespace oracle
