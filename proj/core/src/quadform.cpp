#include "toral/quadform.hpp"

#include <future>

#include "toral/arith.hpp"

namespace toral {

namespace {

constexpr std::size_t kMaxVars = 63;

void check_index(const RDiagonalForm& q, std::size_t i) {
    if (i < 1 || i > q.vars())
        throw Error(ErrorKind::IndexOutOfRange,
                    "variable index " + std::to_string(i) + " outside 1.." + std::to_string(q.vars()));
}

std::vector<FieldScalar> scalars_of(const RDiagonalForm& q) {
    std::vector<FieldScalar> out;
    out.reserve(q.dim());
    for (const auto& u : q.entries()) out.push_back(u.scalar());
    return out;
}

MonomialUnit unit_with_mask(const FieldDescriptor& k, std::size_t n, SquareClassKey cls, VariableSubset mask) {
    Exponents e(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        if (mask >> i & 1) e[i] = 1;
    return {class_representative(k, cls), std::move(e)};
}

} // namespace

RDiagonalForm::RDiagonalForm(FieldDescriptor field, std::size_t n, std::vector<MonomialUnit> entries)
    : field_(std::move(field)), n_(n), entries_(std::move(entries)) {
    if (n_ > kMaxVars) throw Error(ErrorKind::IndexOutOfRange, "at most 63 variables are supported");
    for (const auto& u : entries_) {
        if (!(u.field() == field_)) throw Error(ErrorKind::FieldMismatch, "entry over " + u.field().spelling());
        if (u.vars() != n_) throw Error(ErrorKind::SizeMismatch, "entry '" + u.to_string() + "' has wrong variable count");
    }
}

RDiagonalForm RDiagonalForm::parse(const FieldDescriptor& field, std::size_t n, std::span<const std::string> entries) {
    std::vector<MonomialUnit> units;
    units.reserve(entries.size());
    for (const auto& text : entries) {
        try {
            units.push_back(MonomialUnit::parse(field, n, text));
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::ZeroScalar) throw Error(ErrorKind::SingularForm, "zero entry '" + text + "'");
            throw;
        }
    }
    return {field, n, std::move(units)};
}

RDiagonalForm RDiagonalForm::operator+(const RDiagonalForm& other) const {
    if (!(field_ == other.field_)) throw Error(ErrorKind::FieldMismatch, "orthogonal sum across fields");
    if (n_ != other.n_) throw Error(ErrorKind::SizeMismatch, "orthogonal sum across variable counts");
    auto entries = entries_;
    entries.insert(entries.end(), other.entries_.begin(), other.entries_.end());
    return {field_, n_, std::move(entries)};
}

std::size_t LoopNormalForm::dim() const noexcept {
    std::size_t d = 2 * static_cast<std::size_t>(hyperbolic_count);
    for (const auto& [mask, form] : slots) d += form.dim();
    return d;
}

RDiagonalForm LoopNormalForm::to_diagonal() const {
    std::vector<MonomialUnit> entries;
    for (const auto& [mask, form] : slots)
        for (auto cls : form.entries()) entries.push_back(unit_with_mask(field, n, cls, mask));
    for (int h = 0; h < hyperbolic_count; ++h) {
        entries.push_back(MonomialUnit::one(field, n));
        entries.emplace_back(FieldScalar::from_int(field, -1), Exponents(n, 0));
    }
    return {field, n, std::move(entries)};
}

SpringerParts springer_decompose(const RDiagonalForm& q, std::size_t i) {
    check_index(q, i);
    std::vector<MonomialUnit> even, odd;
    for (const auto& u : q.entries()) {
        auto res = coordinate_residues(u, i);
        (res.parity ? odd : even).push_back(std::move(res.stripped));
    }
    return {RDiagonalForm(q.field(), q.vars() - 1, std::move(even)),
            RDiagonalForm(q.field(), q.vars() - 1, std::move(odd))};
}

RDiagonalForm springer_reassemble(const SpringerParts& parts, std::size_t i) {
    const std::size_t n = parts.even.vars() + 1;
    std::vector<MonomialUnit> entries;
    for (const auto& u : parts.even.entries()) entries.push_back(insert_coordinate(u, i, 0));
    for (const auto& u : parts.odd.entries()) entries.push_back(insert_coordinate(u, i, 1));
    return {parts.even.field(), n, std::move(entries)};
}

WittDecompositionF witt_decompose_f(const RDiagonalForm& q) {
    const auto& k = q.field();
    if (q.vars() == 0) {
        auto scalars = scalars_of(q);
        auto dec = witt_decompose_k(KDiagonalForm::from_scalars(k, scalars));
        std::vector<MonomialUnit> kernel;
        for (auto cls : dec.kernel.entries()) kernel.emplace_back(class_representative(k, cls), Exponents{});
        return {RDiagonalForm(k, 0, std::move(kernel)), dec.witt_index};
    }
    const std::size_t outer = q.vars();
    auto parts = springer_decompose(q, outer);
    auto even = witt_decompose_f(parts.even);
    auto odd = witt_decompose_f(parts.odd);
    SpringerParts kernels{std::move(even.kernel), std::move(odd.kernel)};
    return {springer_reassemble(kernels, outer), even.witt_index + odd.witt_index};
}

LoopNormalForm loop_normal_form(const RDiagonalForm& q) {
    const auto& k = q.field();
    std::map<VariableSubset, std::vector<SquareClassKey>> buckets;
    for (const auto& u : q.entries()) {
        auto cls = unit_square_class(u);
        buckets[cls.mask()].push_back(cls.k_class);
    }
    LoopNormalForm out{k, q.vars(), {}, 0};
    for (auto& [mask, classes] : buckets) {
        auto dec = witt_decompose_k(KDiagonalForm(k, std::move(classes)));
        out.hyperbolic_count += dec.witt_index;
        if (dec.kernel.dim() > 0) out.slots.emplace(mask, std::move(dec.kernel));
    }
    return out;
}

bool is_isometric_r(const RDiagonalForm& a, const RDiagonalForm& b) {
    if (!(a.field() == b.field()))
        throw Error(ErrorKind::FieldMismatch, a.field().spelling() + " vs " + b.field().spelling());
    if (a.vars() != b.vars())
        throw Error(ErrorKind::FieldMismatch, "forms over R_" + std::to_string(a.vars()) + " and R_" + std::to_string(b.vars()));
    if (a.dim() != b.dim()) return false;
    auto la = loop_normal_form(a);
    auto lb = loop_normal_form(b);
    if (la.hyperbolic_count != lb.hyperbolic_count || la.slots.size() != lb.slots.size()) return false;
    for (const auto& [mask, form] : la.slots) {
        auto it = lb.slots.find(mask);
        if (it == lb.slots.end() || !is_isometric_k(form, it->second)) return false;
    }
    return true;
}

SecondResidue second_residue(const RDiagonalForm& q, std::size_t i) {
    auto parts = springer_decompose(q, i);
    return {parts.even.entries(), parts.odd.entries()};
}

bool is_unramified_at(const RDiagonalForm& q, std::size_t i) {
    auto parts = springer_decompose(q, i);
    return witt_decompose_f(parts.odd).kernel.dim() == 0;
}

namespace {

using Series = std::vector<std::uint64_t>;

Series truncated_product(const Series& a, const Series& b, std::size_t degree) {
    Series out(degree + 1, 0);
    for (std::size_t i = 0; i <= degree && i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; i + j <= degree && j < b.size(); ++j) {
            std::uint64_t term;
            if (__builtin_mul_overflow(a[i], b[j], &term) || __builtin_add_overflow(out[i + j], term, &out[i + j]))
                throw Error(ErrorKind::Overflow, "class count exceeds 64 bits");
        }
    }
    return out;
}

// Number of anisotropic forms over k of each dimension up to `degree`.
Series anisotropic_counts(const FieldDescriptor& k, std::size_t degree) {
    Series a(degree + 1, 0);
    a[0] = 1;
    switch (k.kind()) {
    case FieldKind::RealClosed:
        for (std::size_t m = 1; m <= degree; ++m) a[m] = 2;  // all positive or all negative
        break;
    case FieldKind::FiniteField:
        if (degree >= 1) a[1] = 2;  // <1>, <nu>
        if (degree >= 2) a[2] = 1;  // the unique anisotropic plane
        break;
    case FieldKind::Rationals:
        throw Error(ErrorKind::UnsupportedField, "anisotropic forms over Q are not finitely classifiable");
    }
    return a;
}

} // namespace

std::uint64_t count_loop_classes(const FieldDescriptor& k, std::size_t n, std::size_t d, unsigned jobs) {
    if (n > kMaxVars) throw Error(ErrorKind::IndexOutOfRange, "at most 63 variables are supported");
    // Generating function of one slot, raised to the number of subsets 2^n.
    Series all_slots = anisotropic_counts(k, d);
    for (std::size_t i = 0; i < n; ++i) all_slots = truncated_product(all_slots, all_slots, d);

    // Sum over the hyperbolic count h: anisotropic part has dimension d - 2h.
    const std::size_t planes = d / 2 + 1;
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(planes)));
    auto partial = [&](unsigned worker) {
        std::uint64_t sum = 0;
        for (std::size_t h = worker; h < planes; h += jobs)
            if (__builtin_add_overflow(sum, all_slots[d - 2 * h], &sum))
                throw Error(ErrorKind::Overflow, "class count exceeds 64 bits");
        return sum;
    };
    std::vector<std::future<std::uint64_t>> futures;
    for (unsigned w = 1; w < jobs; ++w) futures.push_back(std::async(std::launch::async, partial, w));
    std::uint64_t total = partial(0);
    for (auto& f : futures)
        if (__builtin_add_overflow(total, f.get(), &total)) throw Error(ErrorKind::Overflow, "class count exceeds 64 bits");
    return total;
}

} // namespace toral
