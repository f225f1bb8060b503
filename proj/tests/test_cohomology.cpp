#include <doctest.h>

#include "attrarith/cohomology.hpp"
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

// Cohomology of the Fermat m-fold split by the character of the last
// coordinate, rebuilt by enumerating tuples (a_0..a_{m+1}).
using Table = std::vector<std::vector<Int>>;

Table brute_table(Int d, Int m)
{
    const auto du = static_cast<std::size_t>(d);
    if (m == 0)
        return {std::vector<Int>(du, 1)};
    Table h(static_cast<std::size_t>(2 * m + 1), std::vector<Int>(du, 0));
    for (Int i = 0; i <= 2 * m; i += 2)
        h[static_cast<std::size_t>(i)][0] = 1;
    if (m % 2 == 1)
        h[static_cast<std::size_t>(m)][0] = 0;
    std::vector<Int> t(static_cast<std::size_t>(m + 2), 1);
    for (;;) {
        Int sum = 0;
        for (Int v : t)
            sum += v;
        if (sum % d == 0)
            ++h[static_cast<std::size_t>(m)][static_cast<std::size_t>(t.back())];
        std::size_t i = 0;
        while (i < t.size() && t[i] == d - 1)
            t[i++] = 1;
        if (i == t.size())
            break;
        ++t[i];
    }
    return h;
}

Int brute_betti(Int d, Int m, Int i)
{
    if (m < 0 || i < 0 || i > 2 * m)
        return 0;
    const Table table = brute_table(d, m);
    Int total = 0;
    for (Int v : table[static_cast<std::size_t>(i)])
        total += v;
    return total;
}

struct Sides {
    Int lhs_fermat = 0, lhs_lower = 0, rhs_invariant = 0, rhs_product = 0;
};

Sides brute_sides(Int d, Int r, Int s)
{
    Sides out;
    const Int top = r + s;
    out.lhs_fermat = brute_betti(d, top, top);
    for (Int j = 1; j <= r; ++j)
        out.lhs_lower += brute_betti(d, r - 1, top - 2 * j);
    for (Int k = 1; k <= s; ++k)
        out.lhs_lower += brute_betti(d, s - 1, top - 2 * k);
    const auto h1 = brute_table(d, r);
    const auto h2 = brute_table(d, s);
    for (Int i = 0; i <= 2 * r; ++i) {
        const Int j = top - i;
        if (j < 0 || j > 2 * s)
            continue;
        for (Int c = 0; c < d; ++c)
            out.rhs_invariant += h1[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] *
                                 h2[static_cast<std::size_t>(j)][static_cast<std::size_t>((d - c) % d)];
    }
    for (Int a = 0; a <= top - 2; ++a)
        out.rhs_product += brute_betti(d, r - 1, a) * brute_betti(d, s - 1, top - 2 - a);
    return out;
}

} // namespace

TEST_CASE("Hirzebruch-Jung examples")
{
    CHECK(hj_expand(3, 1).steps == std::vector<Int>{3});
    CHECK(hj_expand(5, 2).steps == std::vector<Int>{3, 2});
    CHECK(hj_expand(7, 5).steps == std::vector<Int>{2, 2, 3});
    CHECK(hj_reconstruct({3}) == mpq_class(3));
    CHECK(hj_reconstruct({3, 2}) == mpq_class(5, 2));
    CHECK(hj_reconstruct({2, 2, 2}) == mpq_class(4, 3));
    CHECK(kind_of([] { hj_expand(6, 4); }) == ErrorKind::NotCoprime);
    CHECK(kind_of([] { hj_expand(5, 5); }) == ErrorKind::OutOfRange);
    CHECK(kind_of([] { hj_expand(5, 0); }) == ErrorKind::OutOfRange);
    CHECK(kind_of([] { hj_reconstruct({3, 1}); }) == ErrorKind::InvalidStep);
    CHECK(kind_of([] { hj_reconstruct({}); }) == ErrorKind::InvalidStep);
}

TEST_CASE("Hirzebruch-Jung round trip and duality for n <= 50")
{
    for (Int n = 2; n <= 50; ++n)
        for (Int q = 1; q < n; ++q) {
            if (std::gcd(n, q) != 1)
                continue;
            const auto res = hj_expand(n, q);
            for (Int b : res.steps)
                CHECK(b >= 2);
            CHECK(hj_reconstruct(res.steps) == mpq_class(n, q));
            Int dual = 1;
            while (q * dual % n != 1 % n)
                ++dual;
            const auto other = hj_expand(n, dual);
            CHECK(other.length() == res.length());
            CHECK(std::vector<Int>(res.steps.rbegin(), res.steps.rend()) == other.steps);
        }
}

TEST_CASE("resolution contributions")
{
    const auto a = resolution_contributions({{2, 5, 2}});
    CHECK(a.delta_h2 == 2);
    CHECK(a.delta_h3 == 4);
    const auto b = resolution_contributions({{0, 3, 1}});
    CHECK(b.delta_h2 == 1);
    CHECK(b.delta_h3 == 0);
    const auto c = resolution_contributions({{1, 3, 1}, {2, 5, 2}});
    CHECK(c.delta_h2 == 3);
    // 1*1 + 2*2
    CHECK(c.delta_h3 == 5);
    CHECK(resolution_contributions({}).delta_h2 == 0);
    CHECK(kind_of([] { resolution_contributions({{-1, 3, 1}}); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([] { resolution_contributions({{1, 4, 2}}); }) == ErrorKind::NotCoprime);
}

TEST_CASE("Fermat character counts")
{
    CHECK(fermat_primitive_dim(3, 2) == 6);
    CHECK(fermat_primitive_dim(4, 1) == 6);
    CHECK(fermat_primitive_dim(5, 3) == 204);
    CHECK(fermat_hodge_numbers(5, 3) == std::vector<mpz_class>{1, 101, 101, 1});
    CHECK(fermat_hodge_numbers(3, 1) == std::vector<mpz_class>{1, 1});
    CHECK(fermat_hodge_numbers(4, 2) == std::vector<mpz_class>{1, 19, 1});
    CHECK(kind_of([] { fermat_primitive_dim(1, 2); }) == ErrorKind::InvalidArgument);

    for (Int d = 2; d <= 5; ++d)
        for (Int n = 0; n <= 3; ++n) {
            const auto brute = testsupport::brute_fermat(d, n);
            CHECK(fermat_primitive_dim(d, n) == brute.total);
            const auto hodge = fermat_hodge_numbers(d, n);
            REQUIRE(hodge.size() == brute.by_weight.size());
            for (std::size_t w = 0; w < hodge.size(); ++w)
                CHECK(hodge[w] == brute.by_weight[w]);
        }
    for (Int d = 2; d <= 9; ++d)
        for (Int n = 0; n <= 6; ++n) {
            const auto hodge = fermat_hodge_numbers(d, n);
            mpz_class total = 0;
            for (const auto& h : hodge)
                total += h;
            CHECK(total == fermat_primitive_dim(d, n));
            CHECK(std::equal(hodge.begin(), hodge.end(), hodge.rbegin()));
        }
}

TEST_CASE("Fermat Betti numbers")
{
    CHECK(fermat_betti(3, 1) == std::vector<Int>{1, 2, 1});
    CHECK(fermat_betti(4, 2) == std::vector<Int>{1, 0, 22, 0, 1});
    CHECK(fermat_betti(5, 3)[3] == 204);
    CHECK(fermat_betti(3, 0) == std::vector<Int>{3});
    for (Int d = 2; d <= 6; ++d)
        for (Int m = 0; m <= 4; ++m) {
            const auto b = fermat_betti(d, m);
            for (Int i = 0; i <= 2 * m; ++i)
                CHECK(b[static_cast<std::size_t>(i)] == brute_betti(d, m, i));
        }
}

TEST_CASE("dimension identity examples")
{
    const auto a = shioda_katsura_check(3, 1, 1);
    CHECK(a.lhs == 13);
    CHECK(a.rhs == 13);
    CHECK(a.lhs_fermat == 7);
    CHECK(a.lhs_lower == 6);
    CHECK(a.rhs_invariant == 4);
    CHECK(a.rhs_product == 9);
    CHECK(a.equal);
    CHECK(!a.conventions.empty());

    const auto b = shioda_katsura_check(4, 1, 1);
    CHECK(b.lhs == 30);
    CHECK(b.lhs_fermat == 22);
    CHECK(b.lhs_lower == 8);
    CHECK(b.rhs_invariant == 14);
    CHECK(b.rhs_product == 16);
    CHECK(b.equal);

    CHECK(shioda_katsura_check(5, 1, 1).equal);
    CHECK(kind_of([] { shioda_katsura_check(7, 1, 1); }) == ErrorKind::UnsupportedRange);
    CHECK(kind_of([] { shioda_katsura_check(3, 3, 1); }) == ErrorKind::UnsupportedRange);
    CHECK(kind_of([] { shioda_katsura_check(3, 1, 0); }) == ErrorKind::UnsupportedRange);
}

TEST_CASE("dimension identity over the supported range")
{
    for (Int d = 3; d <= 6; ++d)
        for (Int r = 1; r <= 2; ++r)
            for (Int s = 1; s <= 2; ++s) {
                const auto chk = shioda_katsura_check(d, r, s);
                const auto brute = brute_sides(d, r, s);
                CHECK(chk.lhs_fermat == brute.lhs_fermat);
                CHECK(chk.lhs_lower == brute.lhs_lower);
                CHECK(chk.rhs_invariant == brute.rhs_invariant);
                CHECK(chk.rhs_product == brute.rhs_product);
                CHECK(chk.lhs == chk.rhs);
                CHECK(chk.equal);
            }
    // symmetric in r and s
    for (Int d = 3; d <= 6; ++d)
        CHECK(shioda_katsura_check(d, 1, 2).lhs == shioda_katsura_check(d, 2, 1).lhs);
}
