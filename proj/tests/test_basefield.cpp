#include <doctest.h>

#include <cmath>
#include <set>

#include "gen.hpp"
#include "oracle.hpp"
#include "toral/arith.hpp"
#include "toral/basefield.hpp"

using namespace toral;

namespace {

KDiagonalForm kform(const FieldDescriptor& k, std::initializer_list<i64> values) {
    std::vector<FieldScalar> s;
    for (i64 v : values) s.push_back(FieldScalar::from_int(k, v));
    return KDiagonalForm::from_scalars(k, s);
}

bool is_perfect_square(i64 x) {
    if (x < 0) return false;
    i64 r = static_cast<i64>(std::llround(std::sqrt(static_cast<double>(x))));
    for (i64 c = r - 1; c <= r + 1; ++c)
        if (c >= 0 && c * c == x) return true;
    return false;
}

// Independent isometry test for rational diagonal forms: dimension,
// discriminant, signature and Hasse invariants at every relevant place.
bool rational_isometric_oracle(const std::vector<i64>& f, const std::vector<i64>& g) {
    if (f.size() != g.size()) return false;
    auto disc = [](const std::vector<i64>& v) {
        i64 d = 1;
        for (i64 a : v) d = arith::squarefree_product(d, a);
        return d;
    };
    if (disc(f) != disc(g)) return false;
    auto neg = [](const std::vector<i64>& v) { return std::count_if(v.begin(), v.end(), [](i64 a) { return a < 0; }); };
    if (neg(f) != neg(g)) return false;
    std::set<i64> places{0, 2};
    for (const auto* v : {&f, &g})
        for (i64 a : *v)
            for (i64 p : arith::prime_divisors(a)) places.insert(p);
    for (i64 p : places) {
        auto hasse = [p](const std::vector<i64>& v) {
            int e = 1;
            for (std::size_t i = 0; i < v.size(); ++i)
                for (std::size_t j = i + 1; j < v.size(); ++j) e *= arith::hilbert_symbol(v[i], v[j], p);
            return e;
        };
        if (hasse(f) != hasse(g)) return false;
    }
    return true;
}

std::vector<i64> labels(const KDiagonalForm& q) {
    std::vector<i64> out;
    for (auto c : q.entries()) out.push_back(c.label);
    return out;
}

KDiagonalForm hyperbolic(const FieldDescriptor& k, int planes) {
    std::vector<FieldScalar> s;
    for (int i = 0; i < planes; ++i) {
        s.push_back(FieldScalar::from_int(k, 1));
        s.push_back(FieldScalar::from_int(k, -1));
    }
    return KDiagonalForm::from_scalars(k, s);
}

} // namespace

TEST_CASE("field descriptors parse and spell") {
    CHECK(FieldDescriptor::parse("Fq:7").spelling() == "Fq:7");
    CHECK(FieldDescriptor::parse("Fq:9").degree() == 2);
    CHECK(FieldDescriptor::parse("Q").kind() == FieldKind::Rationals);
    CHECK(FieldDescriptor::parse("R").kind() == FieldKind::RealClosed);
    for (const char* bad : {"Fq:8", "Fq:6", "Fq:2", "F7", "C", "Fq:", "Fq:1"}) {
        CHECK_THROWS_AS(FieldDescriptor::parse(bad), Error);
    }
    CHECK(FieldDescriptor::finite(7).nonresidue() == 3);
}

TEST_CASE("scalars parse and print") {
    auto q = FieldDescriptor::rationals();
    auto x = FieldScalar::parse(q, "-6/4");
    CHECK(x.numerator() == -3);
    CHECK(x.denominator() == 2);
    CHECK(x.to_string() == "-3/2");
    auto f9 = FieldDescriptor::finite(3, 2);
    CHECK(FieldScalar::parse(f9, "#5").to_string() == "#5");
    CHECK(FieldScalar::parse(f9, "2").to_string() == "2");
    CHECK_THROWS_AS(FieldScalar::parse(q, "1/0"), Error);
    CHECK_THROWS_AS(FieldScalar::parse(q, "abc"), Error);
    CHECK_THROWS_AS(FieldScalar::parse(f9, "#9"), Error);
}

TEST_CASE("extension fields satisfy the field axioms") {
    for (auto k : {FieldDescriptor::finite(3, 2), FieldDescriptor::finite(5, 2), FieldDescriptor::finite(3, 3)}) {
        const i64 q = k.order();
        std::vector<FieldScalar> all;
        for (i64 c = 0; c < q; ++c) all.push_back(FieldScalar::from_code(k, c));
        for (i64 a = 1; a < q; ++a) {
            CHECK((all[a] * all[a].inverse()).is_one());
            CHECK(all[a].pow(q - 1).is_one());
        }
        // The multiplicative group is cyclic: some element has order q - 1.
        bool generator = false;
        for (i64 a = 1; a < q && !generator; ++a) {
            bool ok = true;
            for (i64 d = 1; d < q - 1; ++d)
                if ((q - 1) % d == 0 && all[a].pow(d).is_one()) ok = false;
            generator = ok;
        }
        CHECK(generator);
        for (i64 a = 0; a < q; a += 2)
            for (i64 b = 1; b < q; b += 3)
                for (i64 c = 0; c < q; c += 5) {
                    CHECK((all[a] * (all[b] + all[c])) == (all[a] * all[b] + all[a] * all[c]));
                    CHECK(((all[a] * all[b]) * all[c]) == (all[a] * (all[b] * all[c])));
                }
    }
}

TEST_CASE("square_class examples") {
    CHECK(square_class(FieldDescriptor::real_closed(), FieldScalar::from_fraction(FieldDescriptor::real_closed(), -3, 4)).label == -1);
    auto f7 = FieldDescriptor::finite(7);
    CHECK(square_class(f7, FieldScalar::from_int(f7, 3)).label == f7.nonresidue());
    auto q = FieldDescriptor::rationals();
    CHECK(square_class(q, FieldScalar::from_int(q, 18)).label == 2);
    CHECK(square_class(q, FieldScalar::from_fraction(q, 3, 8)).label == 6);
    CHECK_THROWS_AS(square_class(q, FieldScalar::from_int(q, 0)), Error);
    try {
        square_class(q, FieldScalar::from_int(q, 0));
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ZeroScalar);
    }
}

TEST_CASE("square_class is constant on square cosets and separates classes (finite fields)") {
    for (auto k : {FieldDescriptor::finite(3), FieldDescriptor::finite(7), FieldDescriptor::finite(3, 2),
                   FieldDescriptor::finite(5, 2), FieldDescriptor::finite(11)}) {
        const i64 q = k.order();
        std::set<i64> squares;
        for (i64 c = 1; c < q; ++c) {
            auto x = FieldScalar::from_code(k, c);
            squares.insert((x * x).numerator());
        }
        CHECK(squares.size() == static_cast<std::size_t>((q - 1) / 2));
        for (i64 a = 1; a < q; ++a)
            for (i64 b = 1; b < q; ++b) {
                auto x = FieldScalar::from_code(k, a), y = FieldScalar::from_code(k, b);
                bool ratio_square = squares.count((x * y.inverse()).numerator()) > 0;
                CHECK((square_class(k, x) == square_class(k, y)) == ratio_square);
                CHECK(square_class(k, x * y * y) == square_class(k, x));
            }
    }
}

TEST_CASE("square_class is constant on square cosets and separates classes (rationals, reals)") {
    gen::Rng rng(11);
    auto q = FieldDescriptor::rationals();
    auto r = FieldDescriptor::real_closed();
    for (int t = 0; t < 2000; ++t) {
        i64 an = gen::uniform(rng, -60, 60), ad = gen::uniform(rng, 1, 30);
        i64 bn = gen::uniform(rng, -60, 60), bd = gen::uniform(rng, 1, 30);
        if (an == 0 || bn == 0) continue;
        auto x = FieldScalar::from_fraction(q, an, ad), y = FieldScalar::from_fraction(q, bn, bd);
        auto ratio = x * y.inverse();
        bool ratio_square = ratio.numerator() > 0 && is_perfect_square(ratio.numerator()) && is_perfect_square(ratio.denominator());
        CHECK((square_class(q, x) == square_class(q, y)) == ratio_square);
        i64 c = gen::uniform(rng, 1, 9), e = gen::uniform(rng, 1, 9);
        auto c2 = FieldScalar::from_fraction(q, c * c, e * e);
        CHECK(square_class(q, x * c2) == square_class(q, x));

        auto xr = FieldScalar::from_fraction(r, an, ad), yr = FieldScalar::from_fraction(r, bn, bd);
        CHECK((square_class(r, xr) == square_class(r, yr)) == ((an > 0) == (bn > 0)));
    }
}

TEST_CASE("isotropy examples") {
    for (auto k : {FieldDescriptor::rationals(), FieldDescriptor::real_closed(), FieldDescriptor::finite(5),
                   FieldDescriptor::finite(3, 2)})
        CHECK(is_isotropic_k(kform(k, {1, -1})));
    auto q = FieldDescriptor::rationals();
    CHECK_FALSE(is_isotropic_k(kform(q, {1, 1, -7})));
    CHECK(is_isotropic_k(kform(q, {1, 1, -2})));
    CHECK(is_isotropic_k(kform(FieldDescriptor::finite(5), {1, 1, 1})));
    CHECK_FALSE(is_isotropic_k(KDiagonalForm(q)));
    CHECK_THROWS_AS(kform(q, {1, 0}), Error);
}

TEST_CASE("<1,1,-7> has no small rational zero") {
    CHECK_FALSE(oracle::integer_isotropic_search({1, 1, -7}, 200));
    CHECK(oracle::integer_isotropic_search({1, 1, -2}, 2));
}

TEST_CASE("finite-field isotropy agrees with exhaustive search over element tuples") {
    for (int q : {3, 5, 7, 9, 11, 13}) {
        oracle::SmallField of(q);
        auto k = q == 9 ? FieldDescriptor::finite(3, 2) : FieldDescriptor::finite(q);
        auto squares = of.nonzero_squares();
        auto key_of = [&](int x) { return SquareClassKey{squares.count(x) ? 1 : k.nonresidue()}; };
        const std::size_t max_dim = q <= 7 ? 3 : 2;
        for (std::size_t d = 0; d <= max_dim; ++d) {
            std::vector<int> a(d, 1);
            for (;;) {
                std::vector<SquareClassKey> keys;
                for (int x : a) keys.push_back(key_of(x));
                CHECK(is_isotropic_k(KDiagonalForm(k, keys)) == of.isotropic(a));
                std::size_t i = 0;
                while (i < d && a[i] == q - 1) a[i++] = 1;
                if (i == d) break;
                ++a[i];
            }
        }
    }
}

TEST_CASE("prime-field scalars map to the oracle's square classes") {
    for (int p : {3, 5, 7, 11, 13}) {
        oracle::SmallField of(p);
        auto k = FieldDescriptor::finite(p);
        auto squares = of.nonzero_squares();
        for (int x = 1; x < p; ++x)
            CHECK((square_class(k, FieldScalar::from_int(k, x)).label == 1) == (squares.count(x) > 0));
    }
}

TEST_CASE("rational isotropy agrees with bounded search on ternary forms") {
    const std::vector<i64> coeffs{1, -1, 2, -2, 3, -3, 5, -5, 6, -6, 7, -7, 10, -10, 11, -11};
    auto q = FieldDescriptor::rationals();
    int isotropic_found = 0, anisotropic = 0;
    for (std::size_t a = 0; a < coeffs.size(); ++a)
        for (std::size_t b = a; b < coeffs.size(); ++b)
            for (std::size_t c = b; c < coeffs.size(); ++c) {
                std::vector<i64> v{coeffs[a], coeffs[b], coeffs[c]};
                bool predicted = is_isotropic_k(kform(q, {v[0], v[1], v[2]}));
                bool found = oracle::integer_isotropic_search(v, 20);
                // A found zero is a proof of isotropy; no-zero-found is only evidence.
                if (found) CHECK(predicted);
                if (predicted) {
                    CHECK(found);
                    ++isotropic_found;
                } else {
                    ++anisotropic;
                }
            }
    CHECK(isotropic_found > 0);
    CHECK(anisotropic > 0);
}

TEST_CASE("rational isotropy agrees with bounded search on quaternary forms") {
    const std::vector<i64> coeffs{1, -1, 2, -2, 3, -3, 5, -5, 7, -7};
    auto q = FieldDescriptor::rationals();
    int anisotropic_indefinite = 0;
    for (std::size_t a = 0; a < coeffs.size(); ++a)
        for (std::size_t b = a; b < coeffs.size(); ++b)
            for (std::size_t c = b; c < coeffs.size(); ++c)
                for (std::size_t d = c; d < coeffs.size(); ++d) {
                    std::vector<i64> v{coeffs[a], coeffs[b], coeffs[c], coeffs[d]};
                    bool predicted = is_isotropic_k(kform(q, {v[0], v[1], v[2], v[3]}));
                    bool found = oracle::integer_isotropic_search(v, 7);
                    if (found) CHECK(predicted);
                    if (predicted) CHECK(found);
                    bool indefinite = std::any_of(v.begin(), v.end(), [](i64 x) { return x < 0; }) &&
                                      std::any_of(v.begin(), v.end(), [](i64 x) { return x > 0; });
                    if (indefinite && !predicted) ++anisotropic_indefinite;
                }
    // e.g. <1,1,1,-7> type forms: indefinite yet anisotropic at 2 or 7.
    CHECK(anisotropic_indefinite > 0);
}

TEST_CASE("rational forms of dimension five are isotropic iff indefinite") {
    auto q = FieldDescriptor::rationals();
    CHECK(is_isotropic_k(kform(q, {1, 1, 1, 1, -7})));
    CHECK(oracle::integer_isotropic_search({1, 1, 1, 1, -7}, 3));
    CHECK_FALSE(is_isotropic_k(kform(q, {1, 2, 3, 5, 7})));
    CHECK_FALSE(is_isotropic_k(kform(q, {-1, -1, -1, -1, -1, -1})));
}

TEST_CASE("real isotropy is mixed signs") {
    auto r = FieldDescriptor::real_closed();
    CHECK_FALSE(is_isotropic_k(kform(r, {1, 2, 3})));
    CHECK(is_isotropic_k(kform(r, {1, 2, -3})));
    CHECK_FALSE(is_isotropic_k(kform(r, {-1})));
}

TEST_CASE("witt_decompose_k examples") {
    auto r = FieldDescriptor::real_closed();
    auto w = witt_decompose_k(kform(r, {1, -1, 1, -1}));
    CHECK(w.kernel.dim() == 0);
    CHECK(w.witt_index == 2);
    auto q = FieldDescriptor::rationals();
    w = witt_decompose_k(kform(q, {1, 1, -7}));
    CHECK(w.kernel == kform(q, {1, 1, -7}));
    CHECK(w.witt_index == 0);
    auto f5 = FieldDescriptor::finite(5);
    w = witt_decompose_k(kform(f5, {1, 1, 1}));
    CHECK(w.witt_index == 1);
    REQUIRE(w.kernel.dim() == 1);
    // Discriminants: 1 = disc(<1,-1>) * c = -c, so the kernel is <-1>.
    CHECK(w.kernel.entries()[0] == square_class(f5, FieldScalar::from_int(f5, -1)));
}

TEST_CASE("witt_decompose_k invariants on random forms") {
    gen::Rng rng(7);
    std::vector<FieldDescriptor> fields{FieldDescriptor::real_closed(), FieldDescriptor::rationals(), FieldDescriptor::finite(3),
                                        FieldDescriptor::finite(5), FieldDescriptor::finite(3, 2), FieldDescriptor::finite(7)};
    for (const auto& k : fields)
        for (int t = 0; t < 300; ++t) {
            std::vector<FieldScalar> s;
            std::size_t d = gen::uniform(rng, 0, 7);
            for (std::size_t i = 0; i < d; ++i) s.push_back(gen::nonzero_scalar(k, rng));
            auto f = KDiagonalForm::from_scalars(k, s);
            auto w = witt_decompose_k(f);
            CHECK(w.kernel.dim() + 2 * w.witt_index == f.dim());
            CHECK_FALSE(is_isotropic_k(w.kernel));
            CHECK(is_isometric_k(f, w.kernel + hyperbolic(k, w.witt_index)));
            if (k.kind() == FieldKind::Rationals)
                CHECK(rational_isometric_oracle(labels(f), labels(w.kernel + hyperbolic(k, w.witt_index))));
            // The kernel spelling is canonical: shuffling and rescaling entries does not change it.
            std::shuffle(s.begin(), s.end(), rng);
            for (auto& x : s) {
                auto c = gen::nonzero_scalar(k, rng);
                x = x * c * c;
            }
            auto w2 = witt_decompose_k(KDiagonalForm::from_scalars(k, s));
            CHECK(w2.kernel == w.kernel);
            CHECK(w2.witt_index == w.witt_index);
        }
}

TEST_CASE("is_isometric_k examples") {
    auto q = FieldDescriptor::rationals();
    CHECK(is_isometric_k(kform(q, {1}), kform(q, {4})));
    auto r = FieldDescriptor::real_closed();
    CHECK_FALSE(is_isometric_k(kform(r, {1, 1}), kform(r, {1, -1})));
    auto f7 = FieldDescriptor::finite(7);
    CHECK(is_isometric_k(kform(f7, {1, 2}), kform(f7, {2, 1})));
    CHECK_FALSE(is_isometric_k(kform(f7, {1}), kform(f7, {1, 2})));
    CHECK_THROWS_AS(is_isometric_k(kform(q, {1}), kform(r, {1})), Error);
    // Classic rational pair: same dimension, discriminant and signature, different Hasse invariant.
    CHECK_FALSE(is_isometric_k(kform(q, {1, 1}), kform(q, {3, 3})));
    CHECK(is_isometric_k(kform(q, {1, 1}), kform(q, {2, 2})));
    CHECK(is_isometric_k(kform(q, {1, 1}), kform(q, {5, 5})));
}

TEST_CASE("rational isometry agrees with the classical invariants") {
    gen::Rng rng(3);
    auto q = FieldDescriptor::rationals();
    const std::vector<i64> pool{1, -1, 2, -2, 3, -3, 5, -5, 6, -6, 7, -7};
    int agree_true = 0;
    for (int t = 0; t < 3000; ++t) {
        std::size_t d = gen::uniform(rng, 1, 4);
        std::vector<i64> f, g;
        for (std::size_t i = 0; i < d; ++i) {
            f.push_back(pool[gen::uniform(rng, 0, pool.size() - 1)]);
            g.push_back(pool[gen::uniform(rng, 0, pool.size() - 1)]);
        }
        auto to_form = [&](const std::vector<i64>& v) {
            std::vector<FieldScalar> s;
            for (i64 a : v) s.push_back(FieldScalar::from_int(q, a));
            return KDiagonalForm::from_scalars(q, s);
        };
        bool expect = rational_isometric_oracle(f, g);
        CHECK(is_isometric_k(to_form(f), to_form(g)) == expect);
        if (expect) {
            ++agree_true;
            CHECK(witt_decompose_k(to_form(f)).kernel == witt_decompose_k(to_form(g)).kernel);
        }
    }
    CHECK(agree_true > 0);
}

TEST_CASE("is_isometric_k is an equivalence relation on samples") {
    gen::Rng rng(5);
    for (auto k : {FieldDescriptor::rationals(), FieldDescriptor::finite(3), FieldDescriptor::real_closed()}) {
        std::vector<KDiagonalForm> forms;
        for (int t = 0; t < 60; ++t) {
            std::vector<FieldScalar> s;
            for (int i = 0; i < 3; ++i) s.push_back(gen::nonzero_scalar(k, rng));
            forms.push_back(KDiagonalForm::from_scalars(k, s));
        }
        for (const auto& a : forms) {
            CHECK(is_isometric_k(a, a));
            for (const auto& b : forms) {
                bool ab = is_isometric_k(a, b);
                CHECK(ab == is_isometric_k(b, a));
                if (!ab) continue;
                for (const auto& c : forms)
                    if (is_isometric_k(b, c)) CHECK(is_isometric_k(a, c));
            }
        }
    }
}
