#pragma once

// Hand-rolled random generators for property tests. Seeds are fixed by the
// callers so failures reproduce.

#include <algorithm>
#include <random>
#include <vector>

#include "toral/azumaya.hpp"
#include "toral/quadform.hpp"

namespace gen {

using Rng = std::mt19937_64;
using toral::i64;

inline i64 uniform(Rng& rng, i64 lo, i64 hi) { return std::uniform_int_distribution<i64>(lo, hi)(rng); }

inline const std::vector<i64>& small_squarefree() {
    static const std::vector<i64> v{1, -1, 2, -2, 3, -3, 5, -5, 6, -6, 7, -7, 10, -10};
    return v;
}

/// The three field kinds used by the acceptance properties.
inline toral::FieldDescriptor pick_field(Rng& rng) {
    switch (uniform(rng, 0, 2)) {
    case 0: return toral::FieldDescriptor::real_closed();
    case 1: return toral::FieldDescriptor::finite(5);
    default: return toral::FieldDescriptor::rationals();
    }
}

inline toral::FieldScalar nonzero_scalar(const toral::FieldDescriptor& k, Rng& rng) {
    using toral::FieldKind;
    using toral::FieldScalar;
    if (k.kind() == FieldKind::FiniteField) return FieldScalar::from_code(k, uniform(rng, 1, k.order() - 1));
    const auto& sf = small_squarefree();
    i64 a = sf[uniform(rng, 0, sf.size() - 1)];
    i64 c = uniform(rng, 1, 3), e = uniform(rng, 1, 3);
    // a * (c/e)^2 keeps the class of a while varying the spelling.
    return FieldScalar::from_fraction(k, a * c * c, e * e);
}

inline toral::MonomialUnit unit(const toral::FieldDescriptor& k, std::size_t n, Rng& rng, i64 spread = 3) {
    toral::Exponents e(n);
    for (auto& x : e) x = uniform(rng, -spread, spread);
    return {nonzero_scalar(k, rng), e};
}

inline toral::RDiagonalForm form(const toral::FieldDescriptor& k, std::size_t n, std::size_t dim, Rng& rng) {
    std::vector<toral::MonomialUnit> entries;
    for (std::size_t i = 0; i < dim; ++i) entries.push_back(unit(k, n, rng));
    return {k, n, entries};
}

/// w^2 for a random monomial unit w.
inline toral::MonomialUnit square_unit(const toral::FieldDescriptor& k, std::size_t n, Rng& rng) {
    auto w = unit(k, n, rng, 2);
    return w * w;
}

inline toral::RDiagonalForm permute_and_scale(const toral::RDiagonalForm& q, Rng& rng) {
    auto entries = q.entries();
    std::shuffle(entries.begin(), entries.end(), rng);
    for (auto& u : entries)
        if (uniform(rng, 0, 1)) u = u * square_unit(q.field(), q.vars(), rng);
    return {q.field(), q.vars(), entries};
}

/// Random product of elementary generators of GL_n(Z).
inline toral::IntMatrix unimodular(std::size_t n, Rng& rng, int steps = 0) {
    auto g = toral::IntMatrix::identity(n);
    if (n == 0) return g;
    if (steps == 0) steps = static_cast<int>(3 * n + 2);
    for (int s = 0; s < steps; ++s) {
        std::size_t i = uniform(rng, 0, n - 1), j = uniform(rng, 0, n - 1);
        int kind = static_cast<int>(uniform(rng, 0, 3));
        if (kind <= 1 && i != j) {
            i64 c = uniform(rng, -2, 2);
            for (std::size_t col = 0; col < n; ++col) g(i, col) += c * g(j, col);
        } else if (kind == 2 && i != j) {
            for (std::size_t col = 0; col < n; ++col) std::swap(g(i, col), g(j, col));
        } else {
            for (std::size_t col = 0; col < n; ++col) g(i, col) = -g(i, col);
        }
    }
    return g;
}

inline toral::BrauerMatrix brauer(std::size_t n, i64 max_den, Rng& rng) {
    toral::BrauerMatrix b(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            i64 den = uniform(rng, 1, max_den);
            b.set(i, j, toral::QZ::make(uniform(rng, 0, den - 1), den));
        }
    return b;
}

/// Entries k/N with a common denominator N.
inline toral::BrauerMatrix brauer_mod(std::size_t n, i64 N, Rng& rng) {
    toral::BrauerMatrix b(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) b.set(i, j, toral::QZ::make(uniform(rng, 0, N - 1), N));
    return b;
}

} // namespace gen
