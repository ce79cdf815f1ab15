#include "toral/laurent.hpp"

#include <algorithm>
#include <charconv>

#include "toral/arith.hpp"

namespace toral {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

i64 parse_exponent(std::string_view s, std::string_view token) {
    i64 v = 0;
    const char* begin = s.data();
    if (!s.empty() && s.front() == '+') ++begin;
    auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw Error(ErrorKind::ParseError, "bad factor '" + std::string(token) + "'");
    return v;
}

} // namespace

MonomialUnit::MonomialUnit(FieldScalar scalar, Exponents exponents)
    : scalar_(std::move(scalar)), exponents_(std::move(exponents)) {
    if (scalar_.is_zero()) throw Error(ErrorKind::ZeroScalar, "a monomial unit needs a nonzero scalar");
}

MonomialUnit MonomialUnit::one(const FieldDescriptor& field, std::size_t n) {
    return {FieldScalar::from_int(field, 1), Exponents(n, 0)};
}

MonomialUnit MonomialUnit::parse(const FieldDescriptor& field, std::size_t n, std::string_view text) {
    text = trim(text);
    if (text.empty()) throw Error(ErrorKind::ParseError, "empty monomial");
    FieldScalar scalar = FieldScalar::from_int(field, 1);
    Exponents exps(n, 0);
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t star = text.find('*', pos);
        if (star == std::string_view::npos) star = text.size();
        std::string_view token = trim(text.substr(pos, star - pos));
        pos = star + 1;
        if (token.empty()) throw Error(ErrorKind::ParseError, "empty factor in '" + std::string(text) + "'");
        std::string_view body = token;
        bool negate = false;
        if (body.front() == '-' && body.size() > 1 && body[1] == 't') {
            negate = true;
            body.remove_prefix(1);
        }
        if (body.front() == 't') {
            std::string_view rest = body.substr(1);
            std::size_t caret = rest.find('^');
            i64 index = parse_exponent(rest.substr(0, caret), token);
            i64 power = caret == std::string_view::npos ? 1 : parse_exponent(rest.substr(caret + 1), token);
            if (index < 1 || static_cast<std::size_t>(index) > n)
                throw Error(ErrorKind::IndexOutOfRange,
                            "variable t" + std::to_string(index) + " outside t1..t" + std::to_string(n));
            exps[index - 1] = arith::add(exps[index - 1], power);
            if (negate) scalar = -scalar;
        } else {
            scalar = scalar * FieldScalar::parse(field, body);
        }
    }
    if (scalar.is_zero()) throw Error(ErrorKind::ZeroScalar, "monomial '" + std::string(text) + "' is zero");
    return {scalar, exps};
}

std::string MonomialUnit::to_string() const {
    std::string vars;
    for (std::size_t i = 0; i < exponents_.size(); ++i) {
        if (exponents_[i] == 0) continue;
        if (!vars.empty()) vars += '*';
        vars += 't' + std::to_string(i + 1);
        if (exponents_[i] != 1) vars += '^' + std::to_string(exponents_[i]);
    }
    if (vars.empty()) return scalar_.to_string();
    if (scalar_.is_one()) return vars;
    if ((-scalar_).is_one()) return '-' + vars;
    return scalar_.to_string() + '*' + vars;
}

MonomialUnit MonomialUnit::operator*(const MonomialUnit& other) const {
    if (vars() != other.vars()) throw Error(ErrorKind::SizeMismatch, "monomials in different variable counts");
    Exponents e(exponents_.size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = arith::add(exponents_[i], other.exponents_[i]);
    return {scalar_ * other.scalar_, std::move(e)};
}

MonomialUnit MonomialUnit::inverse() const {
    Exponents e(exponents_.size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = arith::neg(exponents_[i]);
    return {scalar_.inverse(), std::move(e)};
}

std::uint64_t UnitSquareClass::mask() const noexcept {
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < parity.size() && i < 64; ++i)
        if (parity[i]) m |= std::uint64_t{1} << i;
    return m;
}

UnitSquareClass unit_square_class(const MonomialUnit& u) {
    UnitSquareClass c{square_class(u.field(), u.scalar()), {}};
    c.parity.reserve(u.vars());
    for (i64 e : u.exponents()) c.parity.push_back(static_cast<std::uint8_t>(arith::mod(e, 2)));
    return c;
}

bool ValuationOrder::operator()(const Exponents& a, const Exponents& b) const noexcept {
    return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
}

LaurentElement::LaurentElement(const MonomialUnit& u) : field_(u.field()), n_(u.vars()) {
    terms_.emplace(u.exponents(), u.scalar());
}

void LaurentElement::add_term(const Exponents& e, const FieldScalar& c) {
    if (e.size() != n_) throw Error(ErrorKind::SizeMismatch, "exponent vector has wrong length");
    if (c.is_zero()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
        return;
    }
    FieldScalar sum = it->second + c;
    if (sum.is_zero())
        terms_.erase(it);
    else
        it->second = sum;
}

LaurentElement LaurentElement::operator+(const LaurentElement& other) const {
    if (n_ != other.n_) throw Error(ErrorKind::SizeMismatch, "elements in different variable counts");
    LaurentElement out = *this;
    for (const auto& [e, c] : other.terms_) out.add_term(e, c);
    return out;
}

LaurentElement LaurentElement::operator*(const LaurentElement& other) const {
    if (n_ != other.n_) throw Error(ErrorKind::SizeMismatch, "elements in different variable counts");
    LaurentElement out(field_, n_);
    for (const auto& [e1, c1] : terms_) {
        for (const auto& [e2, c2] : other.terms_) {
            Exponents e(n_);
            for (std::size_t i = 0; i < n_; ++i) e[i] = arith::add(e1[i], e2[i]);
            out.add_term(e, c1 * c2);
        }
    }
    return out;
}

MonomialUnit LaurentElement::as_unit() const {
    if (terms_.size() != 1)
        throw Error(ErrorKind::NonMonomialEntry, "element has " + std::to_string(terms_.size()) + " terms");
    return {terms_.begin()->second, terms_.begin()->first};
}

MonomialUnit leading_unit(const LaurentElement& f) {
    if (f.is_zero()) throw Error(ErrorKind::ZeroElement, "leading term of zero");
    const auto& [e, c] = *f.terms().begin();
    return {c, e};
}

CoordinateResidue coordinate_residues(const MonomialUnit& u, std::size_t i) {
    if (i < 1 || i > u.vars())
        throw Error(ErrorKind::IndexOutOfRange, "index " + std::to_string(i) + " outside 1.." + std::to_string(u.vars()));
    Exponents e = u.exponents();
    const int parity = static_cast<int>(arith::mod(e[i - 1], 2));
    e.erase(e.begin() + static_cast<std::ptrdiff_t>(i - 1));
    return {parity, MonomialUnit(u.scalar(), std::move(e))};
}

MonomialUnit insert_coordinate(const MonomialUnit& u, std::size_t i, i64 exponent) {
    if (i < 1 || i > u.vars() + 1)
        throw Error(ErrorKind::IndexOutOfRange, "insert position " + std::to_string(i) + " out of range");
    Exponents e = u.exponents();
    e.insert(e.begin() + static_cast<std::ptrdiff_t>(i - 1), exponent);
    return {u.scalar(), std::move(e)};
}

} // namespace toral
