#include <doctest.h>

#include <map>
#include <set>
#include <sstream>

#include "attrarith/bp_jacobian.hpp"
#include "attrarith/error.hpp"
#include "support.hpp"

using namespace attrarith;

namespace {

ErrorKind kind_of(const auto& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no exception");
    return ErrorKind::InvalidArgument;
}

CurveSignature sig(Int d, Int k, Int l)
{
    return CurveSignature::make(d, k, l);
}

Int pos_mod(Int x, Int m)
{
    return ((x % m) + m) % m;
}

Int lpr(Int x, Int m)
{
    const Int r = pos_mod(x, m);
    return r == 0 ? m : r;
}

/// Units a mod L with <a x> + <a y> + <a z> = L, straight from the definition.
std::vector<Int> brute_cm(Int x, Int y, Int z, Int L)
{
    std::vector<Int> out;
    for (Int a = 1; a < L || (L == 1 && a == 1); ++a)
        if (std::gcd(a, L) == 1 && lpr(a * x, L) + lpr(a * y, L) + lpr(a * z, L) == L)
            out.push_back(a);
    return out;
}

/// Brute-force triple scan over the stated ranges.
std::vector<FormIndex> brute_forms(Int d, Int k, Int l)
{
    std::vector<FormIndex> out;
    for (Int r = 1; r < d; ++r)
        for (Int s = 1; s < d / k; ++s)
            for (Int t = 1; t < d / l; ++t)
                if ((r + k * s + l * t) % d == 0)
                    out.push_back({r, s, t});
    return out;
}

} // namespace

TEST_CASE("enumerate_forms examples")
{
    CHECK(enumerate_forms(sig(3, 1, 1)) == std::vector<FormIndex>{{1, 1, 1}, {2, 2, 2}});
    CHECK(enumerate_forms(sig(4, 1, 1)) ==
          std::vector<FormIndex>{{1, 1, 2}, {1, 2, 1}, {2, 1, 1}, {2, 3, 3}, {3, 2, 3}, {3, 3, 2}});
    CHECK(enumerate_forms(sig(4, 1, 2)) == std::vector<FormIndex>{{1, 1, 1}, {3, 3, 1}});
    CHECK(genus(sig(3, 1, 1)) == 1);
    CHECK(genus(sig(4, 1, 1)) == 3);
    CHECK(genus(sig(4, 1, 2)) == 1);
    std::ostringstream os;
    os << FormIndex{1, 2, 3};
    CHECK(os.str() == "(1,2,3)");
}

TEST_CASE("signature validation")
{
    CHECK(kind_of([] { sig(4, 3, 1); }) == ErrorKind::InvalidWeights);
    CHECK(kind_of([] { sig(6, 2, 2); }) == ErrorKind::InvalidWeights);
    CHECK(kind_of([] { sig(4, 0, 1); }) == ErrorKind::InvalidWeights);
    CHECK(kind_of([] { sig(0, 1, 1); }) == ErrorKind::InvalidWeights);
    CHECK(kind_of([] { enumerate_forms({6, 4, 1}); }) == ErrorKind::InvalidWeights);
    CHECK(kind_of([] { projective_basis(2); }) == ErrorKind::DegreeTooSmall);
}

TEST_CASE("star_action examples and errors")
{
    const auto s411 = sig(4, 1, 1);
    CHECK(star_action(3, {1, 1, 2}, s411) == FormIndex{3, 3, 2});
    CHECK(star_action(3, {1, 1, 1}, sig(4, 1, 2)) == FormIndex{3, 3, 1});
    for (const auto& idx : enumerate_forms(s411))
        CHECK(star_action(1, idx, s411) == idx);
    CHECK(kind_of([&] { star_action(2, {1, 1, 2}, s411); }) == ErrorKind::NotUnit);
    CHECK(kind_of([&] { star_action(1, {1, 1, 1}, s411); }) == ErrorKind::InvalidIndex);
    CHECK(kind_of([&] { cm_set({1, 1, 1}, s411); }) == ErrorKind::InvalidIndex);
}

TEST_CASE("decompose_jacobian examples")
{
    const auto f411 = decompose_jacobian(sig(4, 1, 1));
    REQUIRE(f411.size() == 3);
    CHECK(f411[0].orbit == std::vector<FormIndex>{{1, 1, 2}, {3, 3, 2}});
    CHECK(f411[1].orbit == std::vector<FormIndex>{{1, 2, 1}, {3, 2, 3}});
    CHECK(f411[2].orbit == std::vector<FormIndex>{{2, 1, 1}, {2, 3, 3}});
    for (const auto& f : f411) {
        CHECK(f.level == 4);
        CHECK(f.dimension == 1);
    }
    const auto f311 = decompose_jacobian(sig(3, 1, 1));
    REQUIRE(f311.size() == 1);
    CHECK(f311[0].level == 3);
    CHECK(f311[0].dimension == 1);
    const auto f412 = decompose_jacobian(sig(4, 1, 2));
    REQUIRE(f412.size() == 1);
    CHECK(f412[0].level == 4);
    CHECK(f412[0].cm_set == std::vector<Int>{1});

    CHECK(cm_set({1, 1, 1}, sig(3, 1, 1)) == std::vector<Int>{1});
    CHECK(cm_set({1, 1, 2}, sig(4, 1, 1)) == std::vector<Int>{1});
    CHECK(cm_set({1, 1, 1}, sig(4, 1, 2)) == std::vector<Int>{1});
}

TEST_CASE("projective basis and descent examples")
{
    CHECK(projective_basis(3).size() == 2);
    CHECK(projective_basis(4).size() == 6);
    CHECK(projective_basis(5).size() == 12);
    CHECK(descent_count(sig(4, 1, 2)) == 2);
    CHECK(descent(sig(4, 1, 2)) == std::vector<FormIndex>{{1, 1, 1}, {3, 3, 1}});
    CHECK(descent_count(sig(4, 1, 1)) == 6);
    CHECK(descent_count(sig(6, 2, 3)) == static_cast<Int>(brute_forms(6, 2, 3).size()));
}

TEST_CASE("properties over every signature with d <= 12")
{
    for (Int d = 3; d <= 12; ++d) {
        const auto basis = projective_basis(d);
        CHECK(static_cast<Int>(basis.size()) == (d - 1) * (d - 2));
        for (const auto& t : basis) {
            CHECK(t[0] > 0);
            CHECK((t[0] + t[1] + t[2]) % d == 0);
        }
        CHECK(genus(sig(d, 1, 1)) == (d - 1) * (d - 2) / 2);
    }
    for (const auto& s : valid_signatures(12)) {
        const auto forms = enumerate_forms(s);
        CHECK(forms == brute_forms(s.d, s.k, s.l));
        CHECK(forms.size() % 2 == 0);
        CHECK(genus(s) * 2 == static_cast<Int>(forms.size()));

        if (s.d >= 3) {
            CHECK(descent(s) == forms);
            CHECK(descent_count(s) == static_cast<Int>(forms.size()));
        }

        const auto units = units_mod(s.d).units;
        // group action laws
        for (const auto& idx : forms) {
            CHECK(star_action(1, idx, s) == idx);
            for (Int a : units) {
                const auto ai = star_action(a, idx, s);
                CHECK(is_valid_index(ai, s));
                for (Int b : units)
                    CHECK(star_action(a * b % s.d, idx, s) == star_action(a, star_action(b, idx, s), s));
            }
        }

        const auto factors = decompose_jacobian(s);
        Int dims = 0;
        std::set<FormIndex> seen;
        for (const auto& f : factors) {
            dims += f.dimension;
            CHECK(euler_phi(s.d) % static_cast<Int>(f.orbit.size()) == 0);
            CHECK(f.dimension * 2 == euler_phi(f.level));
            CHECK(static_cast<Int>(f.cm_set.size()) * 2 == euler_phi(f.level));
            const auto& key = f.orbit.front();
            CHECK(std::is_sorted(f.orbit.begin(), f.orbit.end()));
            for (const auto& idx : f.orbit) {
                CHECK(seen.insert(idx).second);
                CHECK(level(idx, s) == f.level);
            }
            // orbit closure
            std::set<FormIndex> orbit(f.orbit.begin(), f.orbit.end());
            for (Int a : units)
                CHECK(orbit.count(star_action(a, key, s)) == 1);

            // definition on the reduced triple
            const Int x = key.r, y = s.k * key.s, z = s.l * key.t;
            const Int g = std::gcd(std::gcd(x, y), std::gcd(z, s.d));
            CHECK(f.level == s.d / g);
            CHECK(f.cm_set == brute_cm(x / g, y / g, z / g, f.level));
            if (g == 1)
                CHECK(f.cm_set == brute_cm(x, y, z, s.d));

            // exactly one of a, level - a
            const std::set<Int> cm(f.cm_set.begin(), f.cm_set.end());
            for (Int a : units_mod(f.level).units)
                if (f.level > 2)
                    CHECK(cm.count(a) + cm.count(f.level - a) == 1);
        }
        CHECK(seen.size() == forms.size());
        CHECK(dims == genus(s));
    }
}
