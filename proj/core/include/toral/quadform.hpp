#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "toral/basefield.hpp"
#include "toral/laurent.hpp"

namespace toral {

/// Diagonal form <b_1, ..., b_d> over R_n with monomial-unit entries.
/// Only already-diagonal forms are accepted: diagonalizable forms are
/// exactly the toral classes, and general Gram matrices are out of scope.
class RDiagonalForm {
public:
    RDiagonalForm(FieldDescriptor field, std::size_t n, std::vector<MonomialUnit> entries = {});
    static RDiagonalForm parse(const FieldDescriptor& field, std::size_t n, std::span<const std::string> entries);

    const FieldDescriptor& field() const noexcept { return field_; }
    std::size_t vars() const noexcept { return n_; }
    std::size_t dim() const noexcept { return entries_.size(); }
    const std::vector<MonomialUnit>& entries() const noexcept { return entries_; }

    RDiagonalForm operator+(const RDiagonalForm& other) const;

private:
    FieldDescriptor field_;
    std::size_t n_;
    std::vector<MonomialUnit> entries_;
};

using VariableSubset = std::uint64_t;  // bit i-1 <=> t_i

/// Canonical representative  (+)_I <t_I> q_I  (+)  h * <1,-1>  of a toral
/// class. Every stored slot is anisotropic over k and nonempty; hyperbolic
/// planes live in the count rather than in the empty-subset slot.
struct LoopNormalForm {
    FieldDescriptor field;
    std::size_t n = 0;
    std::map<VariableSubset, KDiagonalForm> slots;
    int hyperbolic_count = 0;

    std::size_t dim() const noexcept;
    /// Diagonal spelling: rep(q_I) * t_I for every slot entry, then the planes.
    RDiagonalForm to_diagonal() const;

    friend bool operator==(const LoopNormalForm&, const LoopNormalForm&) = default;
};

struct SpringerParts {
    RDiagonalForm even;  // entries with even exponent of t_i, t_i removed
    RDiagonalForm odd;   // entries with odd exponent of t_i, t_i removed
};

SpringerParts springer_decompose(const RDiagonalForm& q, std::size_t i);
/// even (+) <t_i> odd, as a form in n variables.
RDiagonalForm springer_reassemble(const SpringerParts& parts, std::size_t i);

struct WittDecompositionF {
    RDiagonalForm kernel;
    int witt_index = 0;
};

/// Witt decomposition over F_n by Springer recursion on the outermost variable.
WittDecompositionF witt_decompose_f(const RDiagonalForm& q);

LoopNormalForm loop_normal_form(const RDiagonalForm& q);

/// Dimension mismatch gives false; field or variable mismatch throws.
bool is_isometric_r(const RDiagonalForm& a, const RDiagonalForm& b);

struct SecondResidue {
    std::vector<MonomialUnit> first;
    std::vector<MonomialUnit> second;
};

SecondResidue second_residue(const RDiagonalForm& q, std::size_t i);
/// Unramified at t_i iff the second residue form is hyperbolic over F_{n-1}.
bool is_unramified_at(const RDiagonalForm& q, std::size_t i);

/// Number of loop normal forms of total dimension d over k in n variables.
/// Supported for real closed and finite fields; `jobs` > 1 splits the sum over
/// hyperbolic counts across threads.
std::uint64_t count_loop_classes(const FieldDescriptor& k, std::size_t n, std::size_t d, unsigned jobs = 1);

} // namespace toral
