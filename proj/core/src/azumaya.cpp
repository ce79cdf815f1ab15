#include "toral/azumaya.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <future>
#include <unordered_map>

#include "toral/arith.hpp"

namespace toral {

namespace {

i64 parse_i64(std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    i64 v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw Error(ErrorKind::ParseError, "not an integer: '" + std::string(s) + "'");
    return v;
}

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::InvalidDescriptor, what); }

} // namespace

// ---------------------------------------------------------------------------
// QZ

QZ QZ::make(i64 num, i64 den) {
    if (den == 0) throw Error(ErrorKind::ParseError, "zero denominator");
    if (den < 0) {
        num = arith::neg(num);
        den = arith::neg(den);
    }
    num = arith::mod(num, den);
    i64 g = arith::gcd(num, den);
    return {num / g, den / g};
}

QZ QZ::parse(std::string_view text) {
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return make(parse_i64(text), 1);
    return make(parse_i64(text.substr(0, slash)), parse_i64(text.substr(slash + 1)));
}

std::string QZ::to_string() const { return std::to_string(num) + "/" + std::to_string(den); }

QZ QZ::operator+(QZ other) const {
    i64 l = arith::lcm(den, other.den);
    return make(arith::add(arith::mul(num, l / den), arith::mul(other.num, l / other.den)), l);
}

QZ QZ::operator-() const { return make(den - num, den); }

// ---------------------------------------------------------------------------
// IntMatrix

IntMatrix::IntMatrix(std::size_t n, std::vector<i64> entries) : n_(n), a_(std::move(entries)) {
    if (a_.size() != n * n) throw Error(ErrorKind::SizeMismatch, "matrix entry count is not n*n");
}

IntMatrix IntMatrix::identity(std::size_t n) {
    std::vector<i64> a(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) a[i * n + i] = 1;
    return {n, std::move(a)};
}

IntMatrix IntMatrix::operator*(const IntMatrix& other) const {
    if (n_ != other.n_) throw Error(ErrorKind::SizeMismatch, "matrix sizes differ");
    std::vector<i64> out(n_ * n_, 0);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t k = 0; k < n_; ++k) {
            i64 x = a_[i * n_ + k];
            if (x == 0) continue;
            for (std::size_t j = 0; j < n_; ++j)
                out[i * n_ + j] = arith::add(out[i * n_ + j], arith::mul(x, other.a_[k * n_ + j]));
        }
    return {n_, std::move(out)};
}

i64 IntMatrix::determinant() const {
    // Bareiss fraction-free elimination.
    if (n_ == 0) return 1;
    std::vector<__int128> m(a_.begin(), a_.end());
    auto at = [&](std::size_t i, std::size_t j) -> __int128& { return m[i * n_ + j]; };
    __int128 prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n_; ++k) {
        if (at(k, k) == 0) {
            std::size_t r = k + 1;
            while (r < n_ && at(r, k) == 0) ++r;
            if (r == n_) return 0;
            for (std::size_t j = 0; j < n_; ++j) std::swap(at(k, j), at(r, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n_; ++i)
            for (std::size_t j = k + 1; j < n_; ++j) {
                __int128 v;
                __int128 p1, p2;
                if (__builtin_mul_overflow(at(i, j), at(k, k), &p1) || __builtin_mul_overflow(at(i, k), at(k, j), &p2) ||
                    __builtin_sub_overflow(p1, p2, &v))
                    throw Error(ErrorKind::Overflow, "determinant overflow");
                at(i, j) = v / prev;
            }
        prev = at(k, k);
    }
    __int128 det = at(n_ - 1, n_ - 1) * sign;
    if (det > INT64_MAX || det < INT64_MIN) throw Error(ErrorKind::Overflow, "determinant overflow");
    return static_cast<i64>(det);
}

namespace {

i64 det_mod(const IntMatrix& g, i64 p) {
    const std::size_t n = g.size();
    std::vector<i64> m(n * n);
    for (std::size_t k = 0; k < m.size(); ++k) m[k] = arith::mod(g.entries()[k], p);
    i64 det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t r = c;
        while (r < n && m[r * n + c] == 0) ++r;
        if (r == n) return 0;
        if (r != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m[r * n + j], m[c * n + j]);
            det = p - det;
        }
        det = arith::mulmod(det, m[c * n + c], p);
        const i64 inv = arith::invmod(m[c * n + c], p);
        for (std::size_t i = c + 1; i < n; ++i) {
            const i64 f = arith::mulmod(m[i * n + c], inv, p);
            if (f == 0) continue;
            for (std::size_t j = c; j < n; ++j) m[i * n + j] = arith::mod(m[i * n + j] - arith::mulmod(f, m[c * n + j], p), p);
        }
    }
    return det % p;
}

// Exact test det(g) = +-1. Falls back to residues modulo enough large primes
// to exceed the Hadamard bound when the exact determinant leaves 64 bits.
bool is_unimodular(const IntMatrix& g, i64& det_out) {
    try {
        det_out = g.determinant();
        return det_out == 1 || det_out == -1;
    } catch (const Error&) {
    }
    const std::size_t n = g.size();
    long double log2_bound = 1;
    for (std::size_t i = 0; i < n; ++i) {
        long double row = 0;
        for (std::size_t j = 0; j < n; ++j) row += static_cast<long double>(g(i, j)) * static_cast<long double>(g(i, j));
        log2_bound += 0.5L * std::log2(row);
    }
    long double covered = 0;
    int sign = 0;
    for (i64 p = (i64{1} << 61) - 1; covered <= log2_bound; p -= 2) {
        if (!arith::is_prime(p)) continue;
        const i64 d = det_mod(g, p);
        const int s = d == 1 ? 1 : (d == p - 1 ? -1 : 0);
        if (s == 0 || (sign != 0 && s != sign)) {
            det_out = 0;  // |det| > 1; the exact value is not needed
            return false;
        }
        sign = s;
        covered += std::log2(static_cast<long double>(p));
    }
    det_out = sign;
    return true;
}

} // namespace

// ---------------------------------------------------------------------------
// BrauerMatrix

BrauerMatrix::BrauerMatrix(std::size_t n) : n_(n), q_(n * n) {}

BrauerMatrix::BrauerMatrix(std::size_t n, std::vector<QZ> entries) : n_(n), q_(std::move(entries)) {
    if (q_.size() != n * n) throw Error(ErrorKind::SizeMismatch, "matrix entry count is not n*n");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(*this)(i, i).is_zero()) throw Error(ErrorKind::NotSkew, "nonzero diagonal entry");
        for (std::size_t j = i + 1; j < n; ++j)
            if (!((*this)(j, i) == -(*this)(i, j)))
                throw Error(ErrorKind::NotSkew, "entries (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                                    ") and its transpose are not opposite mod 1");
    }
}

void BrauerMatrix::set(std::size_t i, std::size_t j, QZ q) {
    q_[i * n_ + j] = q;
    q_[j * n_ + i] = -q;
}

i64 BrauerMatrix::exponent() const {
    i64 e = 1;
    for (auto q : q_) e = arith::lcm(e, q.den);
    return e;
}

bool BrauerMatrix::is_zero() const noexcept {
    return std::all_of(q_.begin(), q_.end(), [](QZ q) { return q.is_zero(); });
}

// ---------------------------------------------------------------------------
// Descriptors

void ToralDescriptor::validate() const {
    if (d < 1) invalid("degree d must be at least 1");
    if (s0 < 1) invalid("s0 must be at least 1");
    if (factors.size() != m) invalid("factor list length differs from m");
    if (2 * m > n) invalid("0 <= 2m <= n violated (m=" + std::to_string(m) + ", n=" + std::to_string(n) + ")");
    i64 product = s0;
    for (std::size_t k = 0; k < factors.size(); ++k) {
        const auto& f = factors[k];
        const std::string tag = "factor " + std::to_string(k + 1) + ": ";
        if (f.s < 1) invalid(tag + "s must be at least 1");
        if (f.r < 1 || f.r > f.s) invalid(tag + "1 <= r <= s violated");
        if (arith::gcd(f.r, f.s) != 1) invalid(tag + "gcd(r, s) = 1 violated");
        if (f.i != 2 * k + 1 || f.j != 2 * k + 2)
            invalid(tag + "must sit on variables (" + std::to_string(2 * k + 1) + "," + std::to_string(2 * k + 2) + ")");
        if (__builtin_mul_overflow(product, f.s, &product)) invalid("degree product overflows");
    }
    if (product != d) invalid("s0 * s_1 * ... * s_m = d violated (product " + std::to_string(product) + ")");
}

BrauerMatrix symbol_class(std::size_t n, const std::vector<SymbolFactor>& factors) {
    BrauerMatrix b(n);
    for (const auto& f : factors) {
        if (f.i < 1 || f.j < 1 || f.i > n || f.j > n || f.i == f.j)
            throw Error(ErrorKind::IndexOutOfRange, "symbol on invalid variable pair");
        if (f.s < 1) invalid("symbol degree must be positive");
        const std::size_t i = f.i - 1, j = f.j - 1;
        b.set(i, j, b(i, j) + QZ::make(f.r, f.s));
    }
    return b;
}

BrauerMatrix brauer_matrix(const ToralDescriptor& t) {
    t.validate();
    return symbol_class(t.n, t.factors);
}

BrauerMatrix tensor(const BrauerMatrix& a, const BrauerMatrix& b) {
    if (a.size() != b.size()) throw Error(ErrorKind::SizeMismatch, "Brauer matrices of different sizes");
    std::vector<QZ> out(a.entries().size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = a.entries()[k] + b.entries()[k];
    return {a.size(), std::move(out)};
}

// ---------------------------------------------------------------------------
// Work on a skew matrix as integers mod N, with N the exponent of the class.

namespace {

struct ModSkew {
    std::size_t n;
    i64 N;
    std::vector<i64> a;

    static ModSkew from(const BrauerMatrix& b) {
        ModSkew m{b.size(), b.exponent(), std::vector<i64>(b.size() * b.size())};
        for (std::size_t k = 0; k < m.a.size(); ++k) {
            QZ q = b.entries()[k];
            m.a[k] = q.num * (m.N / q.den);
        }
        return m;
    }

    i64& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
    i64 at(std::size_t i, std::size_t j) const { return a[i * n + j]; }

    BrauerMatrix to_matrix() const {
        std::vector<QZ> q(a.size());
        for (std::size_t k = 0; k < a.size(); ++k) q[k] = QZ::make(a[k], N);
        return {n, std::move(q)};
    }

    // Basis change e_j <- e_j + c e_i  (row j += c row i, then col j += c col i).
    void add(std::size_t j, std::size_t i, i64 c) {
        c = arith::mod(c, N);
        for (std::size_t t = 0; t < n; ++t) at(j, t) = (at(j, t) + arith::mulmod(c, at(i, t), N)) % N;
        for (std::size_t t = 0; t < n; ++t) at(t, j) = (at(t, j) + arith::mulmod(c, at(t, i), N)) % N;
    }

    void swap(std::size_t i, std::size_t j) {
        for (std::size_t t = 0; t < n; ++t) std::swap(at(i, t), at(j, t));
        for (std::size_t t = 0; t < n; ++t) std::swap(at(t, i), at(t, j));
    }

    // e_i <- a e_i + b e_j, e_j <- c e_i + d e_j.
    void mix(std::size_t i, std::size_t j, i64 a, i64 b, i64 c, i64 d) {
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t t = 0; t < n; ++t) {
                i64& x = pass == 0 ? at(i, t) : at(t, i);
                i64& y = pass == 0 ? at(j, t) : at(t, j);
                const i64 xi = x, yj = y;
                x = (arith::mulmod(arith::mod(a, N), xi, N) + arith::mulmod(arith::mod(b, N), yj, N)) % N;
                y = (arith::mulmod(arith::mod(c, N), xi, N) + arith::mulmod(arith::mod(d, N), yj, N)) % N;
            }
    }

    void negate(std::size_t i) {
        for (std::size_t t = 0; t < n; ++t) at(i, t) = (N - at(i, t)) % N;
        for (std::size_t t = 0; t < n; ++t) at(t, i) = (N - at(t, i)) % N;
    }
};

// Elementary operations applied simultaneously to the residue matrix, the
// exact witness W (rows transform) and W^{-1} (columns transform).
struct Reducer {
    ModSkew m;
    IntMatrix w;
    IntMatrix w_inv;
    bool track = true;
    bool overflow = false;

    void add(std::size_t j, std::size_t i, i64 c) {
        m.add(j, i, c);
        if (!track) return;
        try {
            for (std::size_t t = 0; t < m.n; ++t) w(j, t) = arith::add(w(j, t), arith::mul(c, w(i, t)));
            for (std::size_t t = 0; t < m.n; ++t) w_inv(t, i) = arith::sub(w_inv(t, i), arith::mul(c, w_inv(t, j)));
        } catch (const Error&) {
            // The block form is still exact; only the witness is lost.
            track = false;
            overflow = true;
        }
    }

    // Unimodular change on the pair (i, j); requires a d - b c = 1.
    void mix(std::size_t i, std::size_t j, i64 a, i64 b, i64 c, i64 d) {
        m.mix(i, j, a, b, c, d);
        if (!track) return;
        try {
            for (std::size_t t = 0; t < m.n; ++t) {
                const i64 x = w(i, t), y = w(j, t);
                w(i, t) = arith::add(arith::mul(a, x), arith::mul(b, y));
                w(j, t) = arith::add(arith::mul(c, x), arith::mul(d, y));
            }
            for (std::size_t t = 0; t < m.n; ++t) {
                const i64 x = w_inv(t, i), y = w_inv(t, j);
                w_inv(t, i) = arith::sub(arith::mul(d, x), arith::mul(c, y));
                w_inv(t, j) = arith::sub(arith::mul(a, y), arith::mul(b, x));
            }
        } catch (const Error&) {
            track = false;
            overflow = true;
        }
    }

    void swap(std::size_t i, std::size_t j) {
        if (i == j) return;
        m.swap(i, j);
        if (!track) return;
        for (std::size_t t = 0; t < m.n; ++t) std::swap(w(i, t), w(j, t));
        for (std::size_t t = 0; t < m.n; ++t) std::swap(w_inv(t, i), w_inv(t, j));
    }
};

i64 order_mod(i64 x, i64 N) { return N / arith::gcd(x, N); }

// Isolates a 2x2 block at (k, k+1) whose entry divides (in Z/N) every
// remaining entry. Returns false when the active part is zero.
bool reduce_block(Reducer& r, std::size_t k) {
    auto& m = r.m;
    const i64 N = m.N;
    const std::size_t n = m.n;

    // Pivot: maximal additive order, ties to the lowest (i, j).
    std::size_t pi = 0, pj = 0;
    i64 best = 1;
    for (std::size_t i = k; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            i64 ord = order_mod(m.at(i, j), N);
            if (ord > best) {
                best = ord;
                pi = i;
                pj = j;
            }
        }
    if (best == 1) return false;
    r.swap(k, pi);
    r.swap(k + 1, pj);

    for (;;) {
        const i64 p = m.at(k, k + 1);
        const i64 g = arith::gcd(p, N);
        bool pivot_changed = false;

        // Clear row k against column k+1, then row k+1 against column k.
        for (int side = 0; side < 2 && !pivot_changed; ++side) {
            const std::size_t row = k + side;
            const std::size_t partner = k + 1 - side;
            for (std::size_t j = k + 2; j < n; ++j) {
                const i64 a = m.at(row, j);
                if (a == 0) continue;
                // e_j <- e_j + c e_partner changes (row, j) by c * (row, partner) = -+ c p.
                const i64 sign = side == 0 ? -1 : 1;
                if (a % g == 0) {
                    const i64 M = N / g;
                    i64 c = arith::mulmod(a / g, arith::invmod(p / g, M), M);
                    if (2 * c > M) c -= M;  // smallest witness coefficient
                    r.add(j, partner, sign * c);
                    continue;
                }
                // Euclid step: leaves a remainder smaller than p, which becomes the pivot.
                r.add(j, partner, sign * (a / p));
                if (side == 0) {
                    r.swap(k + 1, j);
                } else {
                    r.swap(k, j);
                    r.swap(k, k + 1);
                }
                pivot_changed = true;
                break;
            }
        }
        if (pivot_changed) continue;

        // The block is isolated; fold in any complement entry it does not divide.
        bool folded = false;
        for (std::size_t a = k + 2; a < n && !folded; ++a)
            for (std::size_t b = a + 1; b < n; ++b)
                if (m.at(a, b) % g != 0) {
                    r.add(k, a, 1);
                    folded = true;
                    break;
                }
        if (!folded) break;
    }
    // Canonical sign: representative p <= N - p (swapping the pair negates the block).
    if (m.at(k, k + 1) > N - m.at(k, k + 1)) r.swap(k, k + 1);
    return true;
}

} // namespace

BrauerMatrix unimodular_act(const IntMatrix& g, const BrauerMatrix& b) {
    const std::size_t n = b.size();
    if (g.size() != n) throw Error(ErrorKind::SizeMismatch, "transform and matrix sizes differ");
    i64 det = 0;
    if (!is_unimodular(g, det))
        throw Error(ErrorKind::NotUnimodular, det == 0 ? std::string("determinant is not +-1") : "determinant is " + std::to_string(det));
    const ModSkew m = ModSkew::from(b);
    const i64 N = m.N;
    std::vector<i64> gb(n * n, 0), out(n * n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            i64 x = arith::mod(g(i, k), N);
            if (x == 0) continue;
            for (std::size_t j = 0; j < n; ++j) gb[i * n + j] = (gb[i * n + j] + arith::mulmod(x, m.at(k, j), N)) % N;
        }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            i64 s = 0;
            for (std::size_t k = 0; k < n; ++k) s = (s + arith::mulmod(gb[i * n + k], arith::mod(g(j, k), N), N)) % N;
            out[i * n + j] = s;
        }
    std::vector<QZ> q(n * n);
    for (std::size_t k = 0; k < q.size(); ++k) q[k] = QZ::make(out[k], N);
    return {n, std::move(q)};
}

BrauerMatrix SkewNormalForm::matrix() const {
    BrauerMatrix b(2 * blocks.size() + rank_zero);
    for (std::size_t k = 0; k < blocks.size(); ++k) b.set(2 * k, 2 * k + 1, blocks[k]);
    return b;
}

std::vector<i64> SkewNormalForm::orders() const {
    std::vector<i64> out;
    for (auto q : blocks) out.push_back(q.order());
    return out;
}

i64 SkewNormalForm::index() const {
    i64 index = 1;
    for (auto q : blocks) index = arith::mul(index, q.order());
    return index;
}

namespace {

// With a radical coordinate z available, the block u/d on (k, k+1) becomes
// 1/d under e_k <- u' e_k + t e_z, e_z <- d e_k + w e_z, where u u' = 1 mod d
// and u' w - t d = 1. Since d e_k pairs to zero with everything, e_z stays
// in the radical.
void normalize_numerators(Reducer& r, std::size_t z) {
    const i64 N = r.m.N;
    for (std::size_t k = 0; k + 1 < z; k += 2) {
        const i64 p = r.m.at(k, k + 1);
        const i64 d = N / arith::gcd(p, N);
        const i64 u = (p / (N / d)) % d;
        if (u == 1) continue;
        const i64 u_inv = arith::invmod(u, d);
        const i64 w = arith::invmod(u_inv, d);
        const i64 t = (u_inv * w - 1) / d;
        r.mix(k, z, u_inv, t, d, w);
    }
}

Reducer reduce(const BrauerMatrix& b, bool track) {
    const std::size_t n = b.size();
    Reducer r{ModSkew::from(b), IntMatrix::identity(n), IntMatrix::identity(n), track, false};
    std::size_t k = 0;
    while (k + 1 < n && reduce_block(r, k)) k += 2;
    if (k < n) normalize_numerators(r, k);
    return r;
}

SkewNormalForm read_form(const Reducer& r) {
    SkewNormalForm form;
    for (std::size_t t = 0; t + 1 < r.m.n; t += 2) {
        if (r.m.at(t, t + 1) == 0) break;
        form.blocks.push_back(QZ::make(r.m.at(t, t + 1), r.m.N));
    }
    form.rank_zero = r.m.n - 2 * form.blocks.size();
    return form;
}

} // namespace

SkewNormalForm skew_blocks(const BrauerMatrix& b) { return read_form(reduce(b, false)); }

SkewReduction skew_normal_form(const BrauerMatrix& b) {
    Reducer r = reduce(b, true);
    if (r.overflow)
        throw Error(ErrorKind::Overflow, "normal-form witness exceeds 64-bit integers (exponent " + std::to_string(r.m.N) +
                                             "); skew_blocks gives the form alone");
    return {read_form(r), std::move(r.w), std::move(r.w_inv)};
}

IndexSplit index_and_split(const BrauerMatrix& b, i64 d) {
    if (d < 1) throw Error(ErrorKind::DegreeIncompatible, "degree must be at least 1");
    const i64 index = skew_blocks(b).index();
    if (d % index != 0)
        throw Error(ErrorKind::DegreeIncompatible,
                    "index " + std::to_string(index) + " does not divide degree " + std::to_string(d));
    return {index, d / index};
}

// ---------------------------------------------------------------------------
// Enumeration

namespace {

void extend_factors(i64 remaining, std::size_t slots_left, std::vector<SymbolFactor>& prefix,
                    const ToralDescriptor& shape, std::vector<ToralDescriptor>& out) {
    if (slots_left == 0) {
        ToralDescriptor t = shape;
        t.factors = prefix;
        t.s0 = remaining;
        out.push_back(std::move(t));
        return;
    }
    const std::size_t k = prefix.size();
    for (i64 s = 2; s <= remaining; ++s) {
        if (remaining % s != 0) continue;
        for (i64 r = 1; r < s; ++r) {
            if (arith::gcd(r, s) != 1) continue;
            prefix.push_back({s, r, 2 * k + 1, 2 * k + 2});
            extend_factors(remaining / s, slots_left - 1, prefix, shape, out);
            prefix.pop_back();
        }
    }
}

std::vector<ToralDescriptor> enumerate_with_m(i64 d, std::size_t n, std::size_t m) {
    std::vector<ToralDescriptor> out;
    std::vector<SymbolFactor> prefix;
    ToralDescriptor shape{n, d, m, 1, {}};
    extend_factors(d, m, prefix, shape, out);
    return out;
}

} // namespace

std::vector<ToralDescriptor> enumerate_toral(i64 d, std::size_t n, unsigned jobs) {
    if (d < 1) invalid("degree d must be at least 1");
    const std::size_t max_m = n / 2;
    std::vector<std::vector<ToralDescriptor>> per_m(max_m + 1);
    if (jobs <= 1) {
        for (std::size_t m = 0; m <= max_m; ++m) per_m[m] = enumerate_with_m(d, n, m);
    } else {
        std::vector<std::future<std::vector<ToralDescriptor>>> futures;
        for (std::size_t m = 0; m <= max_m; ++m)
            futures.push_back(std::async(std::launch::async, enumerate_with_m, d, n, m));
        for (std::size_t m = 0; m <= max_m; ++m) per_m[m] = futures[m].get();
    }
    std::vector<ToralDescriptor> out;
    for (auto& chunk : per_m) out.insert(out.end(), chunk.begin(), chunk.end());
    return out;
}

// ---------------------------------------------------------------------------
// Orbit equivalence

namespace {

struct StateHash {
    std::size_t operator()(const std::vector<i64>& v) const noexcept {
        std::size_t h = 1469598103934665603ULL;
        for (i64 x : v) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ULL;
        return h;
    }
};

enum class Move { Transvect, Swap, Negate };

struct Generator {
    Move move;
    std::size_t i, j;
};

std::vector<Generator> generators(std::size_t n) {
    std::vector<Generator> out;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) out.push_back({Move::Transvect, i, j});
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) out.push_back({Move::Swap, i, j});
    for (std::size_t i = 0; i < n; ++i) out.push_back({Move::Negate, i, 0});
    return out;
}

void apply(ModSkew& m, const Generator& g) {
    switch (g.move) {
    case Move::Transvect: m.add(g.i, g.j, 1); break;  // e_i <- e_i + e_j
    case Move::Swap: m.swap(g.i, g.j); break;
    case Move::Negate: m.negate(g.i); break;
    }
}

IntMatrix as_matrix(std::size_t n, const Generator& g) {
    IntMatrix e = IntMatrix::identity(n);
    switch (g.move) {
    case Move::Transvect: e(g.i, g.j) = 1; break;
    case Move::Swap:
        e(g.i, g.i) = e(g.j, g.j) = 0;
        e(g.i, g.j) = e(g.j, g.i) = 1;
        break;
    case Move::Negate: e(g.i, g.i) = -1; break;
    }
    return e;
}

std::string join_orders(const std::vector<i64>& v) {
    std::string s = "[";
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + std::to_string(v[k]);
    return s + "]";
}

} // namespace

OrbitVerdict orbit_equivalent(const BrauerMatrix& a, const BrauerMatrix& b, std::size_t budget) {
    if (a.size() != b.size()) throw Error(ErrorKind::SizeMismatch, "Brauer matrices of different sizes");
    const std::size_t n = a.size();
    const auto fa = skew_blocks(a);
    const auto fb = skew_blocks(b);

    OrbitVerdict verdict;
    if (fa.orders() != fb.orders()) {
        verdict.kind = VerdictKind::Distinct;
        verdict.invariant = "ord-list " + join_orders(fa.orders()) + " vs " + join_orders(fb.orders());
        return verdict;
    }
    if (n == 2 && !(fa == fb)) {
        // 2x2 congruence multiplies the block by det = +-1; both forms carry the representative <= 1/2.
        verdict.kind = VerdictKind::Distinct;
        verdict.invariant = "2x2 block class {q,-q}: " + fa.blocks.at(0).to_string() + " vs " + fb.blocks.at(0).to_string();
        return verdict;
    }
    const auto ra = skew_normal_form(a);
    const auto rb = skew_normal_form(b);

    auto finish = [&](const IntMatrix& h) {
        IntMatrix g = rb.witness_inverse * h * ra.witness;
        if (!(unimodular_act(g, a) == b)) throw Error(ErrorKind::Overflow, "orbit witness failed verification");
        verdict.kind = VerdictKind::Equivalent;
        verdict.witness = std::move(g);
        return verdict;
    };

    const ModSkew start = ModSkew::from(ra.form.matrix());
    const ModSkew target = ModSkew::from(rb.form.matrix());
    if (start.N != target.N) throw Error(ErrorKind::Overflow, "normal forms with equal orders but different exponents");
    if (start.a == target.a) {
        verdict.visited = 1;
        return finish(IntMatrix::identity(n));
    }

    // BFS over the finite orbit of the normal form. The action factors through
    // a finite group, so exhausting the queue proves the target is unreachable.
    const auto gens = generators(n);
    struct Node {
        std::size_t parent;
        std::size_t gen;
    };
    std::vector<Node> nodes{{0, 0}};
    std::vector<std::vector<i64>> states{start.a};
    std::unordered_map<std::vector<i64>, std::size_t, StateHash> seen{{start.a, 0}};
    std::deque<std::size_t> queue{0};
    while (!queue.empty()) {
        const std::size_t cur = queue.front();
        queue.pop_front();
        for (std::size_t gi = 0; gi < gens.size(); ++gi) {
            ModSkew next{n, start.N, states[cur]};
            apply(next, gens[gi]);
            if (seen.count(next.a)) continue;
            if (states.size() >= budget) {
                verdict.kind = VerdictKind::Unknown;
                verdict.visited = states.size();
                return verdict;
            }
            const std::size_t id = states.size();
            seen.emplace(next.a, id);
            states.push_back(next.a);
            nodes.push_back({cur, gi});
            if (next.a == target.a) {
                verdict.visited = states.size();
                IntMatrix h = IntMatrix::identity(n);
                for (std::size_t v = id; v != 0; v = nodes[v].parent) h = h * as_matrix(n, gens[nodes[v].gen]);
                return finish(h);
            }
            queue.push_back(id);
        }
    }
    verdict.kind = VerdictKind::Distinct;
    verdict.visited = states.size();
    verdict.invariant = "orbit exhausted after " + std::to_string(states.size()) + " matrices";
    return verdict;
}

std::vector<QZ> ramification_row(const BrauerMatrix& b, std::size_t i) {
    if (i < 1 || i > b.size())
        throw Error(ErrorKind::IndexOutOfRange, "variable index " + std::to_string(i) + " outside 1.." + std::to_string(b.size()));
    std::vector<QZ> row;
    for (std::size_t j = 0; j < b.size(); ++j)
        if (j != i - 1) row.push_back(b(i - 1, j));
    return row;
}

} // namespace toral
