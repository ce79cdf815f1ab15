#include "toral/basefield.hpp"

#include <algorithm>
#include <charconv>
#include <map>

#include "toral/arith.hpp"

namespace toral {

namespace {

using Poly = std::vector<i64>;

[[noreturn]] void invalid_field(const std::string& what) { throw Error(ErrorKind::InvalidField, what); }

Poly decode(i64 code, i64 p, int e) {
    Poly out(e, 0);
    for (int i = 0; i < e; ++i) {
        out[i] = code % p;
        code /= p;
    }
    return out;
}

i64 encode(const Poly& v, i64 p) {
    i64 code = 0;
    for (auto it = v.rbegin(); it != v.rend(); ++it) code = code * p + *it;
    return code;
}

// Remainder of a modulo the monic polynomial m, coefficients mod p.
Poly poly_rem(Poly a, const Poly& m, i64 p) {
    const std::size_t dm = m.size() - 1;
    while (a.size() > dm) {
        i64 lead = a.back();
        if (lead != 0) {
            const std::size_t shift = a.size() - 1 - dm;
            for (std::size_t i = 0; i <= dm; ++i)
                a[shift + i] = arith::mod(a[shift + i] - lead * m[i], p);
        }
        a.pop_back();
    }
    return a;
}

Poly poly_mul(const Poly& a, const Poly& b, i64 p) {
    if (a.empty() || b.empty()) return {};
    Poly out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = (out[i + j] + a[i] * b[j]) % p;
    return out;
}

bool poly_is_zero(const Poly& a) {
    return std::all_of(a.begin(), a.end(), [](i64 c) { return c == 0; });
}

bool is_irreducible(const Poly& f, i64 p) {
    const int e = static_cast<int>(f.size()) - 1;
    for (int deg = 1; deg <= e / 2; ++deg) {
        i64 count = 1;
        for (int i = 0; i < deg; ++i) count *= p;
        for (i64 low = 0; low < count; ++low) {
            Poly g = decode(low, p, deg);
            g.push_back(1);
            if (poly_is_zero(poly_rem(f, g, p))) return false;
        }
    }
    return true;
}

Poly smallest_irreducible(i64 p, int e) {
    if (e == 1) return {0, 1};
    i64 count = 1;
    for (int i = 0; i < e; ++i) count *= p;
    for (i64 low = 0; low < count; ++low) {
        Poly f = decode(low, p, e);
        f.push_back(1);
        if (is_irreducible(f, p)) return f;
    }
    invalid_field("no irreducible polynomial found");
}

i64 ff_mul(const FieldDescriptor& k, i64 a, i64 b) {
    const i64 p = k.characteristic();
    if (k.degree() == 1) return arith::mulmod(a, b, p);
    Poly m(k.modulus().begin(), k.modulus().end());
    Poly prod = poly_mul(decode(a, p, k.degree()), decode(b, p, k.degree()), p);
    Poly r = poly_rem(std::move(prod), m, p);
    r.resize(k.degree(), 0);
    return encode(r, p);
}

i64 ff_add(const FieldDescriptor& k, i64 a, i64 b) {
    const i64 p = k.characteristic();
    if (k.degree() == 1) return (a + b) % p;
    Poly x = decode(a, p, k.degree()), y = decode(b, p, k.degree());
    for (int i = 0; i < k.degree(); ++i) x[i] = (x[i] + y[i]) % p;
    return encode(x, p);
}

i64 ff_neg(const FieldDescriptor& k, i64 a) {
    const i64 p = k.characteristic();
    Poly x = decode(a, p, k.degree());
    for (auto& c : x) c = (p - c) % p;
    return encode(x, p);
}

i64 ff_pow(const FieldDescriptor& k, i64 a, i64 exp) {
    i64 result = 1;
    while (exp > 0) {
        if (exp & 1) result = ff_mul(k, result, a);
        a = ff_mul(k, a, a);
        exp >>= 1;
    }
    return result;
}

bool ff_is_square(const FieldDescriptor& k, i64 code) {
    return ff_pow(k, code, (k.order() - 1) / 2) == 1;
}

i64 parse_int(std::string_view text) {
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    i64 value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
        throw Error(ErrorKind::ParseError, "not an integer: '" + std::string(text) + "'");
    return value;
}

bool minus_one_is_square(const FieldDescriptor& k) { return k.order() % 4 == 1; }

} // namespace

// ---------------------------------------------------------------------------
// FieldDescriptor

FieldDescriptor FieldDescriptor::finite(i64 p, int e) {
    if (p < 3 || !arith::is_prime(p)) invalid_field("characteristic must be an odd prime, got " + std::to_string(p));
    if (e < 1) invalid_field("extension degree must be at least 1");
    i64 q = 1;
    for (int i = 0; i < e; ++i) {
        if (q > (i64{1} << 31) / p) invalid_field("field order too large");
        q *= p;
    }
    if (e > 1 && q > (i64{1} << 24)) invalid_field("extension field order too large");
    FieldDescriptor k;
    k.kind_ = FieldKind::FiniteField;
    k.p_ = p;
    k.e_ = e;
    k.q_ = q;
    k.modulus_ = std::make_shared<const std::vector<i64>>(smallest_irreducible(p, e));
    for (i64 code = 2; code < q; ++code) {
        if (!ff_is_square(k, code)) {
            k.nu_ = code;
            break;
        }
    }
    return k;
}

FieldDescriptor FieldDescriptor::rationals() {
    FieldDescriptor k;
    k.kind_ = FieldKind::Rationals;
    return k;
}

FieldDescriptor FieldDescriptor::real_closed() {
    FieldDescriptor k;
    k.kind_ = FieldKind::RealClosed;
    return k;
}

FieldDescriptor FieldDescriptor::parse(std::string_view text) {
    if (text == "Q") return rationals();
    if (text == "R") return real_closed();
    if (text.starts_with("Fq:")) {
        i64 q = 0;
        try {
            q = parse_int(text.substr(3));
        } catch (const Error&) {
            invalid_field("bad field order in '" + std::string(text) + "'");
        }
        if (q < 3) invalid_field("field order must be an odd prime power");
        auto primes = arith::prime_divisors(q);
        if (primes.size() != 1) invalid_field(std::to_string(q) + " is not a prime power");
        int e = 0;
        for (i64 r = q; r > 1; r /= primes[0]) ++e;
        return finite(primes[0], e);
    }
    invalid_field("unknown field spelling '" + std::string(text) + "' (expected Fq:<q>, Q or R)");
}

std::string FieldDescriptor::spelling() const {
    switch (kind_) {
    case FieldKind::FiniteField: return "Fq:" + std::to_string(q_);
    case FieldKind::Rationals: return "Q";
    case FieldKind::RealClosed: return "R";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// FieldScalar

FieldScalar FieldScalar::from_int(const FieldDescriptor& field, i64 value) {
    if (field.kind() == FieldKind::FiniteField) return {field, arith::mod(value, field.characteristic()), 1};
    return {field, value, 1};
}

FieldScalar FieldScalar::from_fraction(const FieldDescriptor& field, i64 num, i64 den) {
    if (den == 0) throw Error(ErrorKind::ParseError, "zero denominator");
    if (field.kind() == FieldKind::FiniteField) {
        const i64 p = field.characteristic();
        if (den % p == 0) throw Error(ErrorKind::ParseError, "denominator divisible by the characteristic");
        return {field, arith::mulmod(num, arith::invmod(den, p), p), 1};
    }
    if (den < 0) {
        num = arith::neg(num);
        den = arith::neg(den);
    }
    i64 g = arith::gcd(num, den);
    if (g == 0) g = 1;
    return {field, num / g, den / g};
}

FieldScalar FieldScalar::from_code(const FieldDescriptor& field, i64 code) {
    if (field.kind() != FieldKind::FiniteField) throw Error(ErrorKind::FieldMismatch, "codes exist only for finite fields");
    if (code < 0 || code >= field.order()) throw Error(ErrorKind::ParseError, "code out of range");
    return {field, code, 1};
}

FieldScalar FieldScalar::parse(const FieldDescriptor& field, std::string_view text) {
    if (text.starts_with("#")) return from_code(field, parse_int(text.substr(1)));
    if (auto slash = text.find('/'); slash != std::string_view::npos)
        return from_fraction(field, parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
    return from_int(field, parse_int(text));
}

std::string FieldScalar::to_string() const {
    if (field_.kind() == FieldKind::FiniteField)
        return num_ < field_.characteristic() ? std::to_string(num_) : "#" + std::to_string(num_);
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

bool FieldScalar::is_one() const noexcept { return num_ == 1 && den_ == 1; }

FieldScalar FieldScalar::operator+(const FieldScalar& other) const {
    if (!(field_ == other.field_)) throw Error(ErrorKind::FieldMismatch, "adding scalars of different fields");
    if (field_.kind() == FieldKind::FiniteField) return {field_, ff_add(field_, num_, other.num_), 1};
    i64 g = arith::gcd(den_, other.den_);
    i64 num = arith::add(arith::mul(num_, other.den_ / g), arith::mul(other.num_, den_ / g));
    return from_fraction(field_, num, arith::mul(den_, other.den_ / g));
}

FieldScalar FieldScalar::operator*(const FieldScalar& other) const {
    if (!(field_ == other.field_)) throw Error(ErrorKind::FieldMismatch, "multiplying scalars of different fields");
    if (field_.kind() == FieldKind::FiniteField) return {field_, ff_mul(field_, num_, other.num_), 1};
    i64 g1 = arith::gcd(num_, other.den_);
    i64 g2 = arith::gcd(other.num_, den_);
    if (g1 == 0) g1 = 1;
    if (g2 == 0) g2 = 1;
    return from_fraction(field_, arith::mul(num_ / g1, other.num_ / g2), arith::mul(den_ / g2, other.den_ / g1));
}

FieldScalar FieldScalar::operator-() const {
    if (field_.kind() == FieldKind::FiniteField) return {field_, ff_neg(field_, num_), 1};
    return {field_, arith::neg(num_), den_};
}

FieldScalar FieldScalar::inverse() const {
    if (is_zero()) throw Error(ErrorKind::ZeroScalar, "inverse of zero");
    if (field_.kind() == FieldKind::FiniteField) return {field_, ff_pow(field_, num_, field_.order() - 2), 1};
    return from_fraction(field_, den_, num_);
}

FieldScalar FieldScalar::pow(i64 exponent) const {
    if (exponent < 0) return inverse().pow(-exponent);
    FieldScalar result = from_int(field_, 1);
    FieldScalar base = *this;
    while (exponent > 0) {
        if (exponent & 1) result = result * base;
        base = base * base;
        exponent >>= 1;
    }
    return result;
}

// ---------------------------------------------------------------------------
// Square classes

bool is_square(const FieldScalar& a) {
    if (a.is_zero()) return true;
    const auto& k = a.field();
    switch (k.kind()) {
    case FieldKind::FiniteField: return ff_is_square(k, a.numerator());
    case FieldKind::RealClosed: return a.numerator() > 0;
    case FieldKind::Rationals:
        return arith::squarefree_part(a.numerator()) == 1 && arith::squarefree_part(a.denominator()) == 1;
    }
    return false;
}

SquareClassKey square_class(const FieldDescriptor& field, const FieldScalar& a) {
    if (!(a.field() == field)) throw Error(ErrorKind::FieldMismatch, "scalar belongs to " + a.field().spelling());
    if (a.is_zero()) throw Error(ErrorKind::ZeroScalar, "square class of zero");
    switch (field.kind()) {
    case FieldKind::FiniteField: return {ff_is_square(field, a.numerator()) ? 1 : field.nonresidue()};
    case FieldKind::RealClosed: return {a.numerator() > 0 ? 1 : -1};
    case FieldKind::Rationals:
        // n/d = n*d / d^2
        return {arith::squarefree_product(arith::squarefree_part(a.numerator()),
                                          arith::squarefree_part(a.denominator()))};
    }
    return {};
}

void check_class(const FieldDescriptor& field, SquareClassKey a) {
    if (a.label == 0) throw Error(ErrorKind::SingularForm, "zero entry in a diagonal form");
    bool ok = true;
    switch (field.kind()) {
    case FieldKind::FiniteField: ok = a.label == 1 || a.label == field.nonresidue(); break;
    case FieldKind::RealClosed: ok = a.label == 1 || a.label == -1; break;
    case FieldKind::Rationals: ok = arith::squarefree_part(a.label) == a.label; break;
    }
    if (!ok) throw Error(ErrorKind::InvalidField, std::to_string(a.label) + " is not a square-class label over " + field.spelling());
}

SquareClassKey class_product(const FieldDescriptor& field, SquareClassKey a, SquareClassKey b) {
    switch (field.kind()) {
    case FieldKind::FiniteField: return {a.label == b.label ? 1 : field.nonresidue()};
    case FieldKind::RealClosed: return {a.label * b.label};
    case FieldKind::Rationals: return {arith::squarefree_product(a.label, b.label)};
    }
    return {};
}

SquareClassKey class_negate(const FieldDescriptor& field, SquareClassKey a) {
    if (field.kind() == FieldKind::FiniteField)
        return minus_one_is_square(field) ? a : class_product(field, a, {field.nonresidue()});
    return {-a.label};
}

FieldScalar class_representative(const FieldDescriptor& field, SquareClassKey a) {
    check_class(field, a);
    if (field.kind() == FieldKind::FiniteField) return FieldScalar::from_code(field, a.label);
    return FieldScalar::from_int(field, a.label);
}

// ---------------------------------------------------------------------------
// KDiagonalForm

KDiagonalForm::KDiagonalForm(FieldDescriptor field, std::vector<SquareClassKey> entries)
    : field_(std::move(field)), entries_(std::move(entries)) {
    for (auto key : entries_) check_class(field_, key);
    std::sort(entries_.begin(), entries_.end());
}

KDiagonalForm KDiagonalForm::from_scalars(const FieldDescriptor& field, std::span<const FieldScalar> scalars) {
    std::vector<SquareClassKey> keys;
    keys.reserve(scalars.size());
    for (const auto& a : scalars) {
        if (a.is_zero()) throw Error(ErrorKind::SingularForm, "zero entry in a diagonal form");
        keys.push_back(square_class(field, a));
    }
    return KDiagonalForm(field, std::move(keys));
}

KDiagonalForm KDiagonalForm::operator+(const KDiagonalForm& other) const {
    if (!(field_ == other.field_)) throw Error(ErrorKind::FieldMismatch, "orthogonal sum across fields");
    auto entries = entries_;
    entries.insert(entries.end(), other.entries_.begin(), other.entries_.end());
    return KDiagonalForm(field_, std::move(entries));
}

KDiagonalForm KDiagonalForm::negated() const {
    auto entries = entries_;
    for (auto& e : entries) e = class_negate(field_, e);
    return KDiagonalForm(field_, std::move(entries));
}

// ---------------------------------------------------------------------------
// Rational forms via local invariants.
//
// A class is tracked by (dim, discriminant, signature, Hasse invariants on a
// finite prime set S). S always contains 2 and every prime dividing an entry
// that has been added; outside S the Hasse invariant is trivial and the
// discriminant is a unit.

namespace {

struct RationalClass {
    int dim = 0;
    i64 disc = 1;
    int pos = 0;
    int neg = 0;
    std::map<i64, int> hasse{{2, 1}};

    void add_primes(i64 a) {
        for (i64 p : arith::prime_divisors(a)) hasse.emplace(p, 1);
    }

    void add_entry(i64 a) {
        add_primes(a);
        for (auto& [p, eps] : hasse) eps *= arith::hilbert_symbol(disc, a, p);
        disc = arith::squarefree_product(disc, a);
        ++dim;
        (a > 0 ? pos : neg) += 1;
    }

    // Inverse of add_entry: this = <a> + rest, returns rest.
    RationalClass without(i64 a) const {
        RationalClass rest = *this;
        rest.add_primes(a);
        rest.disc = arith::squarefree_product(disc, a);
        for (auto& [p, eps] : rest.hasse) eps *= arith::hilbert_symbol(rest.disc, a, p);
        --rest.dim;
        (a > 0 ? rest.pos : rest.neg) -= 1;
        return rest;
    }

    // this = H + rest.
    RationalClass without_hyperbolic_plane() const {
        RationalClass rest = *this;
        for (auto& [p, eps] : rest.hasse) eps *= arith::hilbert_symbol(-1, -disc, p);
        rest.disc = -disc;
        rest.dim -= 2;
        rest.pos -= 1;
        rest.neg -= 1;
        return rest;
    }

    bool locally_isotropic(i64 p) const {
        const int eps = hasse.at(p);
        switch (dim) {
        case 0:
        case 1: return false;
        case 2: return arith::is_local_square(-disc, p);
        case 3: return arith::hilbert_symbol(-1, -disc, p) == eps;
        case 4: return !arith::is_local_square(disc, p) || eps == arith::hilbert_symbol(-1, -1, p);
        default: return true;
        }
    }

    bool isotropic() const {
        if (dim <= 1) return false;
        if (dim == 2) return disc == -1;
        if (pos == 0 || neg == 0) return false;
        for (const auto& entry : hasse)
            if (!locally_isotropic(entry.first)) return false;
        return true;
    }

    bool represents(i64 a) const {
        if (dim == 0) return false;
        if (dim == 1) return disc == a;
        RationalClass extended = *this;
        extended.add_entry(-a);
        return extended.isotropic();
    }

    // Greedy spelling: the smallest represented squarefree label first.
    std::vector<SquareClassKey> spell() const {
        std::vector<SquareClassKey> out;
        RationalClass current = *this;
        while (current.dim > 0) {
            i64 a = -1;
            while (!current.represents(a)) a = arith::next_squarefree(a);
            out.push_back({a});
            current = current.without(a);
        }
        return out;
    }
};

RationalClass rational_class(const KDiagonalForm& q) {
    RationalClass c;
    for (auto key : q.entries()) c.add_entry(key.label);
    return c;
}

struct FiniteClass {
    int dim = 0;
    SquareClassKey disc{1};
};

FiniteClass finite_class(const KDiagonalForm& q) {
    FiniteClass c;
    for (auto key : q.entries()) c.disc = class_product(q.field(), c.disc, key);
    c.dim = static_cast<int>(q.dim());
    return c;
}

bool finite_isotropic(const FieldDescriptor& k, const FiniteClass& c) {
    if (c.dim >= 3) return true;
    if (c.dim == 2) return class_negate(k, c.disc).label == 1;
    return false;
}

} // namespace

bool is_isotropic_k(const KDiagonalForm& q) {
    const auto& k = q.field();
    switch (k.kind()) {
    case FieldKind::FiniteField: return finite_isotropic(k, finite_class(q));
    case FieldKind::RealClosed: {
        bool has_pos = false, has_neg = false;
        for (auto key : q.entries()) (key.label > 0 ? has_pos : has_neg) = true;
        return has_pos && has_neg;
    }
    case FieldKind::Rationals: return rational_class(q).isotropic();
    }
    return false;
}

KWittDecomposition witt_decompose_k(const KDiagonalForm& q) {
    const auto& k = q.field();
    switch (k.kind()) {
    case FieldKind::FiniteField: {
        FiniteClass c = finite_class(q);
        int index = 0;
        while (finite_isotropic(k, c)) {
            c.dim -= 2;
            c.disc = class_negate(k, c.disc);
            ++index;
        }
        std::vector<SquareClassKey> kernel;
        if (c.dim == 1) kernel = {c.disc};
        if (c.dim == 2) kernel = {{1}, c.disc};
        return {KDiagonalForm(k, std::move(kernel)), index};
    }
    case FieldKind::RealClosed: {
        int pos = 0, neg = 0;
        for (auto key : q.entries()) (key.label > 0 ? pos : neg) += 1;
        int index = std::min(pos, neg);
        std::vector<SquareClassKey> kernel(static_cast<std::size_t>(std::abs(pos - neg)), {pos > neg ? 1 : -1});
        return {KDiagonalForm(k, std::move(kernel)), index};
    }
    case FieldKind::Rationals: {
        RationalClass c = rational_class(q);
        int index = 0;
        while (c.isotropic()) {
            c = c.without_hyperbolic_plane();
            ++index;
        }
        return {KDiagonalForm(k, c.spell()), index};
    }
    }
    return {KDiagonalForm(k), 0};
}

bool is_isometric_k(const KDiagonalForm& f, const KDiagonalForm& g) {
    if (!(f.field() == g.field()))
        throw Error(ErrorKind::FieldMismatch, f.field().spelling() + " vs " + g.field().spelling());
    if (f.dim() != g.dim()) return false;
    return static_cast<std::size_t>(witt_decompose_k(f + g.negated()).witt_index) == f.dim();
}

} // namespace toral
