#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "toral/error.hpp"

namespace toral {

using i64 = std::int64_t;

/// Element of Q/Z as a reduced fraction num/den with 0 <= num < den.
struct QZ {
    i64 num = 0;
    i64 den = 1;

    static QZ make(i64 num, i64 den);
    /// "num/den" or an integer (which is 0 in Q/Z).
    static QZ parse(std::string_view text);
    std::string to_string() const;

    /// Additive order, i.e. the reduced denominator.
    i64 order() const noexcept { return den; }
    bool is_zero() const noexcept { return num == 0; }

    QZ operator+(QZ other) const;
    QZ operator-() const;

    friend bool operator==(QZ, QZ) = default;
};

/// Square integer matrix, row-major. Arithmetic is overflow checked.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t n, std::vector<i64> entries);
    static IntMatrix identity(std::size_t n);

    std::size_t size() const noexcept { return n_; }
    i64 operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
    i64& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    const std::vector<i64>& entries() const noexcept { return a_; }

    IntMatrix operator*(const IntMatrix& other) const;
    i64 determinant() const;

    friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<i64> a_;
};

/// Skew-symmetric n x n matrix over Q/Z: the class sum_{i<j} q_ij (t_i, t_j).
class BrauerMatrix {
public:
    explicit BrauerMatrix(std::size_t n = 0);
    /// Validates skew-symmetry (NotSkew) and a zero diagonal.
    BrauerMatrix(std::size_t n, std::vector<QZ> entries);

    std::size_t size() const noexcept { return n_; }
    QZ operator()(std::size_t i, std::size_t j) const { return q_[i * n_ + j]; }
    /// Sets (i, j) to q and (j, i) to -q; 0-based.
    void set(std::size_t i, std::size_t j, QZ q);
    const std::vector<QZ>& entries() const noexcept { return q_; }

    /// Smallest N with N * B = 0.
    i64 exponent() const;
    bool is_zero() const noexcept;

    friend bool operator==(const BrauerMatrix&, const BrauerMatrix&) = default;

private:
    std::size_t n_;
    std::vector<QZ> q_;
};

/// A(t_i, t_j)^s_r: X^s = t_i, Y^s = t_j, YX = zeta_s^r XY. Indices are 1-based.
struct SymbolFactor {
    i64 s = 1;
    i64 r = 1;
    std::size_t i = 1;
    std::size_t j = 2;

    friend bool operator==(const SymbolFactor&, const SymbolFactor&) = default;
};

/// M_{s0} (x) A(t_1,t_2)^{s_1}_{r_1} (x) ... (x) A(t_{2m-1},t_{2m})^{s_m}_{r_m}.
struct ToralDescriptor {
    std::size_t n = 0;
    i64 d = 1;
    std::size_t m = 0;
    i64 s0 = 1;
    std::vector<SymbolFactor> factors;

    /// Throws InvalidDescriptor naming the violated constraint.
    void validate() const;

    friend bool operator==(const ToralDescriptor&, const ToralDescriptor&) = default;
};

/// Class of a tensor product of symbols placed on arbitrary variable pairs.
BrauerMatrix symbol_class(std::size_t n, const std::vector<SymbolFactor>& factors);
BrauerMatrix brauer_matrix(const ToralDescriptor& t);
BrauerMatrix tensor(const BrauerMatrix& a, const BrauerMatrix& b);
/// B -> g B g^T, reduced mod 1. Requires det g = +-1.
BrauerMatrix unimodular_act(const IntMatrix& g, const BrauerMatrix& b);

struct SkewNormalForm {
    std::vector<QZ> blocks;  // nonzero, ord(blocks[k+1]) | ord(blocks[k])
    std::size_t rank_zero = 0;

    /// Block-diagonal matrix with blocks on (1,2), (3,4), ...
    BrauerMatrix matrix() const;
    std::vector<i64> orders() const;
    i64 index() const;

    friend bool operator==(const SkewNormalForm&, const SkewNormalForm&) = default;
};

struct SkewReduction {
    SkewNormalForm form;
    IntMatrix witness;          // unimodular_act(witness, B) == form.matrix()
    IntMatrix witness_inverse;
};

/// Throws Overflow if the exact witness does not fit in 64-bit integers; the
/// block form alone is always available from skew_blocks.
SkewReduction skew_normal_form(const BrauerMatrix& b);
SkewNormalForm skew_blocks(const BrauerMatrix& b);

struct IndexSplit {
    i64 index = 1;
    i64 s0 = 1;
    bool division() const noexcept { return s0 == 1; }
};

IndexSplit index_and_split(const BrauerMatrix& b, i64 d);

/// All descriptors of degree d over R_n, ordered by m, then (s_1, r_1, ...).
/// Symbol factors have s_i >= 2; trivial factors would only duplicate s0.
std::vector<ToralDescriptor> enumerate_toral(i64 d, std::size_t n, unsigned jobs = 1);

inline constexpr std::size_t kDefaultOrbitBudget = 100000;

enum class VerdictKind { Equivalent, Distinct, Unknown };

struct OrbitVerdict {
    VerdictKind kind = VerdictKind::Unknown;
    std::optional<IntMatrix> witness;  // set iff Equivalent; unimodular_act(*witness, a) == b
    std::string invariant;             // what separated the classes, if Distinct
    std::size_t visited = 0;
};

OrbitVerdict orbit_equivalent(const BrauerMatrix& a, const BrauerMatrix& b, std::size_t budget = kDefaultOrbitBudget);

/// Row i (1-based) without its diagonal entry: the residue of the class at t_i.
std::vector<QZ> ramification_row(const BrauerMatrix& b, std::size_t i);

} // namespace toral
