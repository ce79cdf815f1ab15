#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "toral/basefield.hpp"

namespace toral {

using Exponents = std::vector<i64>;

/// A unit a * t_1^{e_1} ... t_n^{e_n} of k[t_1^{+-1}, ..., t_n^{+-1}].
class MonomialUnit {
public:
    MonomialUnit(FieldScalar scalar, Exponents exponents);
    static MonomialUnit one(const FieldDescriptor& field, std::size_t n);

    /// Text syntax: factors joined by '*', e.g. "5*t1^3*t2^2", "-9*t1^-1",
    /// "t1*t2", "1", "-t1", "3/4*t2". Variables are t1..tn.
    static MonomialUnit parse(const FieldDescriptor& field, std::size_t n, std::string_view text);
    std::string to_string() const;

    const FieldScalar& scalar() const noexcept { return scalar_; }
    const Exponents& exponents() const noexcept { return exponents_; }
    std::size_t vars() const noexcept { return exponents_.size(); }
    const FieldDescriptor& field() const noexcept { return scalar_.field(); }

    MonomialUnit operator*(const MonomialUnit& other) const;
    MonomialUnit inverse() const;

    friend bool operator==(const MonomialUnit& a, const MonomialUnit& b) noexcept {
        return a.scalar_ == b.scalar_ && a.exponents_ == b.exponents_;
    }

private:
    FieldScalar scalar_;
    Exponents exponents_;
};

/// Square class of a unit: R_n^x/(R_n^x)^2 = k^x/(k^x)^2 x (Z/2)^n.
struct UnitSquareClass {
    SquareClassKey k_class;
    std::vector<std::uint8_t> parity;

    /// Bit i-1 set iff t_i occurs to an odd power.
    std::uint64_t mask() const noexcept;

    friend bool operator==(const UnitSquareClass&, const UnitSquareClass&) = default;
};

UnitSquareClass unit_square_class(const MonomialUnit& u);

/// Order on exponent vectors matching k((t_1))...((t_n)): compare e_n first,
/// then e_{n-1}, ..., e_1.
struct ValuationOrder {
    bool operator()(const Exponents& a, const Exponents& b) const noexcept;
};

/// Finite-support element of F_n = k((t_1))...((t_n)).
class LaurentElement {
public:
    using Terms = std::map<Exponents, FieldScalar, ValuationOrder>;

    LaurentElement(FieldDescriptor field, std::size_t n) : field_(std::move(field)), n_(n) {}
    LaurentElement(const MonomialUnit& u);

    const FieldDescriptor& field() const noexcept { return field_; }
    std::size_t vars() const noexcept { return n_; }
    const Terms& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    /// Adds c * t^e, dropping the term if it cancels.
    void add_term(const Exponents& e, const FieldScalar& c);

    LaurentElement operator+(const LaurentElement& other) const;
    LaurentElement operator*(const LaurentElement& other) const;

    /// Throws NonMonomialEntry unless exactly one term is present.
    MonomialUnit as_unit() const;

    friend bool operator==(const LaurentElement& a, const LaurentElement& b) {
        return a.field_ == b.field_ && a.n_ == b.n_ && a.terms_ == b.terms_;
    }

private:
    FieldDescriptor field_;
    std::size_t n_;
    Terms terms_;
};

/// Minimal term in the valuation order; f = lead * (1 + higher terms).
MonomialUnit leading_unit(const LaurentElement& f);

struct CoordinateResidue {
    int parity = 0;
    MonomialUnit stripped;
};

/// Parity of the exponent of t_i (1-based) and the unit with t_i deleted.
CoordinateResidue coordinate_residues(const MonomialUnit& u, std::size_t i);

/// Inverse of coordinate deletion: inserts t_i^{exponent} at position i.
MonomialUnit insert_coordinate(const MonomialUnit& u, std::size_t i, i64 exponent);

} // namespace toral
