#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "toral/error.hpp"

namespace toral {

using i64 = std::int64_t;

enum class FieldKind { FiniteField, Rationals, RealClosed };

/// One of the supported base fields: F_{p^e} (p odd), Q, or a real closed
/// field whose elements are restricted to rationals.
///
/// Finite fields carry a fixed monic irreducible modulus of degree e and a
/// fixed quadratic non-residue nu; both are chosen deterministically (the
/// smallest in the base-p code order) so scalar codes are stable.
class FieldDescriptor {
public:
    static FieldDescriptor finite(i64 p, int e = 1);
    static FieldDescriptor rationals();
    static FieldDescriptor real_closed();

    /// Parses "Fq:<q>" (q an odd prime power), "Q" or "R".
    static FieldDescriptor parse(std::string_view text);
    std::string spelling() const;

    FieldKind kind() const noexcept { return kind_; }
    i64 characteristic() const noexcept { return p_; }
    int degree() const noexcept { return e_; }
    i64 order() const noexcept { return q_; }
    /// Code of the fixed non-residue (finite fields only).
    i64 nonresidue() const noexcept { return nu_; }
    /// Modulus coefficients, low degree first, monic of length e + 1.
    std::span<const i64> modulus() const noexcept { return *modulus_; }

    friend bool operator==(const FieldDescriptor& a, const FieldDescriptor& b) noexcept {
        return a.kind_ == b.kind_ && a.p_ == b.p_ && a.e_ == b.e_;
    }

private:
    FieldDescriptor() = default;

    FieldKind kind_ = FieldKind::Rationals;
    i64 p_ = 0;
    int e_ = 0;
    i64 q_ = 0;
    i64 nu_ = 0;
    std::shared_ptr<const std::vector<i64>> modulus_ = std::make_shared<const std::vector<i64>>();
};

/// Exact field element. Finite-field values are base-p codes of residue
/// vectors (c_0 + c_1 p + ...); rational values are reduced fractions.
class FieldScalar {
public:
    static FieldScalar from_int(const FieldDescriptor& field, i64 value);
    static FieldScalar from_fraction(const FieldDescriptor& field, i64 num, i64 den);
    static FieldScalar from_code(const FieldDescriptor& field, i64 code);

    /// Integer, "a/b", or "#code" for a raw finite-field code.
    static FieldScalar parse(const FieldDescriptor& field, std::string_view text);
    std::string to_string() const;

    const FieldDescriptor& field() const noexcept { return field_; }
    bool is_zero() const noexcept { return num_ == 0; }
    bool is_one() const noexcept;
    /// Finite fields: the code. Rationals: numerator.
    i64 numerator() const noexcept { return num_; }
    i64 denominator() const noexcept { return den_; }

    FieldScalar operator+(const FieldScalar& other) const;
    FieldScalar operator*(const FieldScalar& other) const;
    FieldScalar operator-() const;
    FieldScalar inverse() const;
    FieldScalar pow(i64 exponent) const;

    friend bool operator==(const FieldScalar& a, const FieldScalar& b) noexcept {
        return a.field_ == b.field_ && a.num_ == b.num_ && a.den_ == b.den_;
    }

private:
    FieldScalar(FieldDescriptor field, i64 num, i64 den)
        : field_(std::move(field)), num_(num), den_(den) {}

    FieldDescriptor field_;
    i64 num_;
    i64 den_;
};

/// Canonical label of a class in k^x/(k^x)^2.
///   finite fields: 1 or the code of nu;
///   real closed:   -1 or +1;
///   rationals:     the signed squarefree kernel.
/// Ordered by (|label|, label), which gives 1 < nu, -1 < +1, and
/// -1 < 1 < -2 < 2 < -3 < ... on the rationals.
struct SquareClassKey {
    i64 label = 1;

    friend bool operator==(SquareClassKey a, SquareClassKey b) noexcept { return a.label == b.label; }
    friend bool operator<(SquareClassKey a, SquareClassKey b) noexcept {
        i64 aa = a.label < 0 ? -a.label : a.label;
        i64 bb = b.label < 0 ? -b.label : b.label;
        return aa != bb ? aa < bb : a.label < b.label;
    }
};

SquareClassKey square_class(const FieldDescriptor& field, const FieldScalar& a);
bool is_square(const FieldScalar& a);

/// Class of a*b, of -a, and a scalar representing the class.
SquareClassKey class_product(const FieldDescriptor& field, SquareClassKey a, SquareClassKey b);
SquareClassKey class_negate(const FieldDescriptor& field, SquareClassKey a);
FieldScalar class_representative(const FieldDescriptor& field, SquareClassKey a);
/// Throws InvalidField if the label is not a valid class for the field.
void check_class(const FieldDescriptor& field, SquareClassKey a);

/// Nonsingular diagonal form over k, stored as canonically sorted
/// square-class labels.
class KDiagonalForm {
public:
    explicit KDiagonalForm(FieldDescriptor field, std::vector<SquareClassKey> entries = {});
    static KDiagonalForm from_scalars(const FieldDescriptor& field, std::span<const FieldScalar> scalars);

    const FieldDescriptor& field() const noexcept { return field_; }
    const std::vector<SquareClassKey>& entries() const noexcept { return entries_; }
    std::size_t dim() const noexcept { return entries_.size(); }

    /// Orthogonal sum.
    KDiagonalForm operator+(const KDiagonalForm& other) const;
    /// Scaling by -1.
    KDiagonalForm negated() const;

    friend bool operator==(const KDiagonalForm& a, const KDiagonalForm& b) noexcept {
        return a.field_ == b.field_ && a.entries_ == b.entries_;
    }

private:
    FieldDescriptor field_;
    std::vector<SquareClassKey> entries_;
};

struct KWittDecomposition {
    KDiagonalForm kernel;
    int witt_index = 0;
};

bool is_isotropic_k(const KDiagonalForm& q);
/// Anisotropic kernel in a canonical spelling (a function of the isometry
/// class only) together with the number of split hyperbolic planes.
KWittDecomposition witt_decompose_k(const KDiagonalForm& q);
bool is_isometric_k(const KDiagonalForm& f, const KDiagonalForm& g);

} // namespace toral
