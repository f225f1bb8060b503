#include "attrarith/arith.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "attrarith/error.hpp"

namespace attrarith {

std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::InvalidDiscriminant: return "InvalidDiscriminant";
    case ErrorKind::NotAttractor: return "NotAttractor";
    case ErrorKind::DegenerateCharge: return "DegenerateCharge";
    case ErrorKind::UnsupportedWeight: return "UnsupportedWeight";
    case ErrorKind::NotUpperHalfPlane: return "NotUpperHalfPlane";
    case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorKind::RoundingFailed: return "RoundingFailed";
    case ErrorKind::AmbiguousCase: return "AmbiguousCase";
    case ErrorKind::ZeroTwist: return "ZeroTwist";
    case ErrorKind::InvalidWeights: return "InvalidWeights";
    case ErrorKind::NotUnit: return "NotUnit";
    case ErrorKind::InvalidIndex: return "InvalidIndex";
    case ErrorKind::DegreeTooSmall: return "DegreeTooSmall";
    case ErrorKind::NotCoprime: return "NotCoprime";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::InvalidStep: return "InvalidStep";
    case ErrorKind::UnsupportedRange: return "UnsupportedRange";
    case ErrorKind::StepUnderflow: return "StepUnderflow";
    case ErrorKind::NonConvergence: return "NonConvergence";
    }
    return "Unknown";
}

Int gcd(Int a, Int b) noexcept
{
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    while (b != 0) {
        const Int t = a % b;
        a = b;
        b = t;
    }
    return a;
}

Int euler_phi(Int n)
{
    if (n < 1)
        throw Error(ErrorKind::InvalidArgument, "euler_phi needs n >= 1, got " + std::to_string(n));
    Int result = n;
    for (Int p = 2; p * p <= n; ++p) {
        if (n % p != 0)
            continue;
        while (n % p == 0)
            n /= p;
        result -= result / p;
    }
    if (n > 1)
        result -= result / n;
    return result;
}

ResidueSystem units_mod(Int n)
{
    if (n < 1)
        throw Error(ErrorKind::InvalidArgument, "modulus must be positive");
    ResidueSystem rs{n, {}};
    if (n == 1) {
        rs.units.push_back(1);
        return rs;
    }
    for (Int m = 1; m < n; ++m)
        if (gcd(m, n) == 1)
            rs.units.push_back(m);
    return rs;
}

SquarefreeSplit squarefree_split(Int n)
{
    if (n == 0)
        throw Error(ErrorKind::InvalidArgument, "squarefree_split of 0");
    const Int sign = n < 0 ? -1 : 1;
    Int m = n * sign;
    Int square = 1;
    Int core = 1;
    for (Int p = 2; p * p <= m; ++p) {
        int e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        for (int i = 0; i < e / 2; ++i)
            square *= p;
        if (e % 2 == 1)
            core *= p;
    }
    core *= m;
    return {sign * core, square};
}

bool is_discriminant(Int disc) noexcept
{
    const Int r = mod_floor(disc, 4);
    return disc < 0 && (r == 0 || r == 1);
}

FundamentalSplit fundamental_split(Int disc)
{
    if (!is_discriminant(disc))
        throw Error(ErrorKind::InvalidDiscriminant, std::to_string(disc));
    const auto [core, square] = squarefree_split(disc);
    // core ≡ 1 (mod 4) is already fundamental; otherwise 4*core is, and the
    // factor 2 moves out of the conductor.
    if (mod_floor(core, 4) == 1)
        return {core, square};
    return {4 * core, square / 2};
}

bool BinaryQuadraticForm::reduced() const noexcept
{
    const Int abs_b = b < 0 ? -b : b;
    if (!(abs_b <= a && a <= c))
        return false;
    if ((abs_b == a || a == c) && b < 0)
        return false;
    return true;
}

Int BinaryQuadraticForm::content() const noexcept
{
    return gcd(gcd(a, b), c);
}

BinaryQuadraticForm BinaryQuadraticForm::transformed(const IntMatrix2& m) const noexcept
{
    const Int p = m(0, 0), q = m(0, 1), r = m(1, 0), s = m(1, 1);
    return {evaluate(p, r), 2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s, evaluate(q, s)};
}

std::ostream& operator<<(std::ostream& os, const BinaryQuadraticForm& f)
{
    return os << '(' << f.a << ',' << f.b << ',' << f.c << ')';
}

namespace {

// floor division for positive divisor
Int floor_div(Int x, Int y) noexcept
{
    Int q = x / y;
    if ((x % y != 0) && ((x < 0) != (y < 0)))
        --q;
    return q;
}

} // namespace

FormReduction reduce_form(const BinaryQuadraticForm& input)
{
    if (!input.positive_definite()) {
        std::ostringstream os;
        os << "form " << input << " has disc " << input.disc();
        throw Error(ErrorKind::NotPositiveDefinite, os.str());
    }
    BinaryQuadraticForm f = input;
    IntMatrix2 acc = IntMatrix2::Identity();

    const auto apply = [&](const IntMatrix2& step) {
        f = f.transformed(step);
        acc = acc * step;
    };
    IntMatrix2 s_move;
    s_move << 0, -1, 1, 0;

    for (;;) {
        // (x, y) -> (x + k y, y) sends b to b + 2ak; bring b into (-a, a].
        const Int k = floor_div(f.a - f.b, 2 * f.a);
        if (k != 0) {
            IntMatrix2 t;
            t << 1, k, 0, 1;
            apply(t);
        }
        if (f.a > f.c) {
            apply(s_move);
            continue;
        }
        break;
    }
    if (f.a == f.c && f.b < 0)
        apply(s_move);
    return {f, acc};
}

std::vector<BinaryQuadraticForm> class_group_forms(Int disc)
{
    if (!is_discriminant(disc))
        throw Error(ErrorKind::InvalidDiscriminant,
                    std::to_string(disc) + " is not a negative discriminant (0 or 1 mod 4)");
    std::vector<BinaryQuadraticForm> out;
    const Int abs_d = -disc;
    for (Int a = 1; 3 * a * a <= abs_d; ++a) {
        for (Int b = -a + 1; b <= a; ++b) {
            if (mod_floor(b - disc, 2) != 0)
                continue;
            const Int num = b * b - disc;
            if (num % (4 * a) != 0)
                continue;
            const BinaryQuadraticForm f{a, b, num / (4 * a)};
            if (f.reduced() && f.primitive())
                out.push_back(f);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

Int class_number(Int disc)
{
    return static_cast<Int>(class_group_forms(disc).size());
}

QuadraticNumber::QuadraticNumber(mpq_class re, mpq_class rad, Int d)
    : re_(std::move(re)), rad_(std::move(rad)), d_(d)
{
    re_.canonicalize();
    rad_.canonicalize();
}

void QuadraticNumber::check_field(const QuadraticNumber& o) const
{
    // A purely rational operand can be reinterpreted in any field.
    if (o.d_ != d_ && !o.is_rational() && !is_rational())
        throw Error(ErrorKind::InvalidArgument, "mixing elements of different quadratic fields");
}

QuadraticNumber& QuadraticNumber::operator+=(const QuadraticNumber& o)
{
    check_field(o);
    if (is_rational())
        d_ = o.d_;
    re_ += o.re_;
    rad_ += o.rad_;
    return *this;
}

QuadraticNumber& QuadraticNumber::operator-=(const QuadraticNumber& o)
{
    return *this += -o;
}

QuadraticNumber& QuadraticNumber::operator*=(const QuadraticNumber& o)
{
    check_field(o);
    const Int d = is_rational() ? o.d_ : d_;
    mpq_class re = re_ * o.re_ + rad_ * o.rad_ * mpq_class(static_cast<long>(d));
    mpq_class rad = re_ * o.rad_ + rad_ * o.re_;
    re_ = std::move(re);
    rad_ = std::move(rad);
    d_ = d;
    return *this;
}

QuadraticNumber& QuadraticNumber::operator/=(const QuadraticNumber& o)
{
    check_field(o);
    const Int d = is_rational() ? o.d_ : d_;
    const mpq_class norm = o.re_ * o.re_ - o.rad_ * o.rad_ * mpq_class(static_cast<long>(d));
    if (sgn(norm) == 0)
        throw Error(ErrorKind::InvalidArgument, "division by zero in quadratic field");
    QuadraticNumber conj_o{o.re_, -o.rad_, d};
    *this *= conj_o;
    re_ /= norm;
    rad_ /= norm;
    return *this;
}

bool QuadraticNumber::operator==(const QuadraticNumber& o) const
{
    if (re_ != o.re_ || rad_ != o.rad_)
        return false;
    return is_rational() || d_ == o.d_;
}

std::string QuadraticNumber::to_string() const
{
    return re_.get_str() + " + " + rad_.get_str() + "*sqrt(" + std::to_string(d_) + ")";
}

QuadraticSurd QuadraticSurd::make(Int num_rational, Int num_radical, Int den, Int disc)
{
    if (den == 0)
        throw Error(ErrorKind::InvalidArgument, "surd with zero denominator");
    if (disc == 0)
        throw Error(ErrorKind::InvalidArgument, "surd with zero radicand");
    const auto [core, square] = squarefree_split(disc);
    num_radical *= square;
    if (den < 0) {
        den = -den;
        num_rational = -num_rational;
        num_radical = -num_radical;
    }
    Int g = gcd(gcd(num_rational, num_radical), den);
    if (g == 0)
        g = 1;
    return {num_rational / g, num_radical / g, den / g, core};
}

QuadraticNumber QuadraticSurd::value() const
{
    return {mpq_class(static_cast<long>(num_rational), static_cast<long>(den)),
            mpq_class(static_cast<long>(num_radical), static_cast<long>(den)), disc};
}

std::string QuadraticSurd::to_string() const
{
    std::string radicand = disc < 0 ? "−" + std::to_string(-disc) : std::to_string(disc);
    return "(" + std::to_string(num_rational) + " + " + std::to_string(num_radical) +
           "·√" + radicand + ")/" + std::to_string(den);
}

QuadraticSurd form_root(const BinaryQuadraticForm& f)
{
    if (!f.positive_definite()) {
        std::ostringstream os;
        os << f;
        throw Error(ErrorKind::NotPositiveDefinite, os.str());
    }
    return QuadraticSurd::make(-f.b, 1, 2 * f.a, f.disc());
}

} // namespace attrarith
