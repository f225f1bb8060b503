#include "attrarith/bigfloat.hpp"

#include <algorithm>
#include <climits>
#include <string>

#include "attrarith/error.hpp"

namespace attrarith {

namespace {

Precision wider(const BigFloat& a, const BigFloat& b) noexcept
{
    return std::max(a.precision(), b.precision());
}

void check_precision(Precision prec)
{
    if (prec < MPFR_PREC_MIN || prec > MPFR_PREC_MAX)
        throw Error(ErrorKind::InvalidArgument, "precision out of range: " + std::to_string(prec));
}

} // namespace

BigFloat::BigFloat(Precision prec)
{
    check_precision(prec);
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
}

BigFloat::BigFloat(long value, Precision prec) : BigFloat(prec)
{
    mpfr_set_si(v_, value, MPFR_RNDN);
}

BigFloat::BigFloat(double value, Precision prec) : BigFloat(prec)
{
    mpfr_set_d(v_, value, MPFR_RNDN);
}

BigFloat::BigFloat(const mpz_class& value, Precision prec) : BigFloat(prec)
{
    mpfr_set_z(v_, value.get_mpz_t(), MPFR_RNDN);
}

BigFloat::BigFloat(const mpq_class& value, Precision prec) : BigFloat(prec)
{
    mpfr_set_q(v_, value.get_mpq_t(), MPFR_RNDN);
}

BigFloat::BigFloat(std::string_view text, Precision prec) : BigFloat(prec)
{
    const std::string s(text);
    char* end = nullptr;
    mpfr_strtofr(v_, s.c_str(), &end, 10, MPFR_RNDN);
    if (s.empty() || end != s.c_str() + s.size())
        throw Error(ErrorKind::InvalidArgument, "not a decimal number: '" + s + "'");
}

BigFloat::BigFloat(const BigFloat& other)
{
    mpfr_init2(v_, other.precision());
    mpfr_set(v_, other.v_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& other) noexcept
{
    mpfr_init2(v_, other.precision());
    mpfr_swap(v_, other.v_);
}

BigFloat& BigFloat::operator=(const BigFloat& other)
{
    if (this != &other) {
        mpfr_set_prec(v_, other.precision());
        mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept
{
    mpfr_swap(v_, other.v_);
    return *this;
}

BigFloat::~BigFloat()
{
    mpfr_clear(v_);
}

BigFloat BigFloat::with_precision(Precision prec) const
{
    BigFloat r(prec);
    mpfr_set(r.v_, v_, MPFR_RNDN);
    return r;
}

BigFloat BigFloat::pi(Precision prec)
{
    BigFloat r(prec);
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
}

mpz_class BigFloat::round_to_integer() const
{
    if (!is_finite())
        throw Error(ErrorKind::InvalidArgument, "rounding a non-finite number");
    mpz_class z;
    BigFloat r(precision());
    mpfr_round(r.v_, v_);
    mpfr_get_z(z.get_mpz_t(), r.v_, MPFR_RNDN);
    return z;
}

std::string BigFloat::to_string() const
{
    return to_string(static_cast<int>(mpfr_get_str_ndigits(10, precision())));
}

std::string BigFloat::to_string(int significant_digits) const
{
    if (mpfr_nan_p(v_))
        return "nan";
    if (mpfr_inf_p(v_))
        return sign() > 0 ? "inf" : "-inf";
    significant_digits = std::max(significant_digits, 1);
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*Re", significant_digits - 1, v_);
    std::string s(buf);
    mpfr_free_str(buf);
    return s;
}

long BigFloat::exponent() const noexcept
{
    if (mpfr_zero_p(v_))
        return LONG_MIN / 2;
    return mpfr_get_exp(v_);
}

BigFloat BigFloat::operator-() const
{
    BigFloat r(precision());
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
}

BigFloat& BigFloat::operator+=(const BigFloat& o)
{
    if (o.precision() > precision())
        mpfr_prec_round(v_, o.precision(), MPFR_RNDN);
    mpfr_add(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}

BigFloat& BigFloat::operator-=(const BigFloat& o)
{
    if (o.precision() > precision())
        mpfr_prec_round(v_, o.precision(), MPFR_RNDN);
    mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}

BigFloat& BigFloat::operator*=(const BigFloat& o)
{
    if (o.precision() > precision())
        mpfr_prec_round(v_, o.precision(), MPFR_RNDN);
    mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}

BigFloat& BigFloat::operator/=(const BigFloat& o)
{
    if (o.precision() > precision())
        mpfr_prec_round(v_, o.precision(), MPFR_RNDN);
    mpfr_div(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}

BigFloat& BigFloat::operator*=(long o)
{
    mpfr_mul_si(v_, v_, o, MPFR_RNDN);
    return *this;
}

BigFloat& BigFloat::operator/=(long o)
{
    mpfr_div_si(v_, v_, o, MPFR_RNDN);
    return *this;
}

BigFloat operator+(const BigFloat& l, const BigFloat& r)
{
    BigFloat out(wider(l, r));
    mpfr_add(out.v_, l.v_, r.v_, MPFR_RNDN);
    return out;
}

BigFloat operator-(const BigFloat& l, const BigFloat& r)
{
    BigFloat out(wider(l, r));
    mpfr_sub(out.v_, l.v_, r.v_, MPFR_RNDN);
    return out;
}

BigFloat operator*(const BigFloat& l, const BigFloat& r)
{
    BigFloat out(wider(l, r));
    mpfr_mul(out.v_, l.v_, r.v_, MPFR_RNDN);
    return out;
}

BigFloat operator/(const BigFloat& l, const BigFloat& r)
{
    BigFloat out(wider(l, r));
    mpfr_div(out.v_, l.v_, r.v_, MPFR_RNDN);
    return out;
}

#define ATTRARITH_UNARY(name, fn)                  \
    BigFloat name(const BigFloat& x)               \
    {                                              \
        BigFloat r(x.precision());                 \
        fn(r.get(), x.get(), MPFR_RNDN);           \
        return r;                                  \
    }

ATTRARITH_UNARY(abs, mpfr_abs)
ATTRARITH_UNARY(sqrt, mpfr_sqrt)
ATTRARITH_UNARY(exp, mpfr_exp)
ATTRARITH_UNARY(log, mpfr_log)
ATTRARITH_UNARY(sin, mpfr_sin)
ATTRARITH_UNARY(cos, mpfr_cos)

#undef ATTRARITH_UNARY

BigFloat round(const BigFloat& x)
{
    BigFloat r(x.precision());
    mpfr_round(r.get(), x.get());
    return r;
}

BigFloat pow(const BigFloat& x, long n)
{
    BigFloat r(x.precision());
    mpfr_pow_si(r.get(), x.get(), n, MPFR_RNDN);
    return r;
}

BigFloat exp2i(long e, Precision prec)
{
    BigFloat r(prec);
    mpfr_set_ui_2exp(r.get(), 1, e, MPFR_RNDN);
    return r;
}

BigComplex::BigComplex(BigFloat re, BigFloat im) : re_(std::move(re)), im_(std::move(im))
{
    const Precision p = std::max(re_.precision(), im_.precision());
    if (re_.precision() < p)
        re_ = re_.with_precision(p);
    if (im_.precision() < p)
        im_ = im_.with_precision(p);
}

BigComplex::BigComplex(std::complex<double> z, Precision prec) : re_(z.real(), prec), im_(z.imag(), prec)
{
}

Precision BigComplex::precision() const noexcept
{
    return std::max(re_.precision(), im_.precision());
}

BigComplex BigComplex::with_precision(Precision prec) const
{
    return {re_.with_precision(prec), im_.with_precision(prec)};
}

BigFloat BigComplex::norm() const
{
    return re_ * re_ + im_ * im_;
}

BigFloat BigComplex::abs() const
{
    BigFloat r(precision());
    mpfr_hypot(r.get(), re_.get(), im_.get(), MPFR_RNDN);
    return r;
}

BigComplex& BigComplex::operator+=(const BigComplex& o)
{
    re_ += o.re_;
    im_ += o.im_;
    return *this;
}

BigComplex& BigComplex::operator-=(const BigComplex& o)
{
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
}

BigComplex& BigComplex::operator*=(const BigComplex& o)
{
    BigFloat re = re_ * o.re_ - im_ * o.im_;
    BigFloat im = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
}

BigComplex& BigComplex::operator/=(const BigComplex& o)
{
    const BigFloat n = o.norm();
    BigFloat re = (re_ * o.re_ + im_ * o.im_) / n;
    BigFloat im = (im_ * o.re_ - re_ * o.im_) / n;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
}

BigComplex& BigComplex::operator*=(const BigFloat& s)
{
    re_ *= s;
    im_ *= s;
    return *this;
}

BigComplex& BigComplex::operator*=(long s)
{
    re_ *= s;
    im_ *= s;
    return *this;
}

BigComplex& BigComplex::operator/=(long s)
{
    re_ /= s;
    im_ /= s;
    return *this;
}

BigComplex exp(const BigComplex& z)
{
    const Precision p = z.precision();
    BigFloat s(p), c(p);
    mpfr_sin_cos(s.get(), c.get(), z.im().get(), MPFR_RNDN);
    const BigFloat m = exp(z.re());
    return {m * c, m * s};
}

BigComplex exp_2pi_i(const BigComplex& z)
{
    const BigFloat two_pi = BigFloat::pi(z.precision()) * 2L;
    // 2 pi i (x + i y) = -2 pi y + i 2 pi x
    return exp(BigComplex(-(two_pi * z.im()), two_pi * z.re()));
}

BigComplex pow(const BigComplex& z, long n)
{
    if (n < 0)
        return BigComplex(BigFloat(1L, z.precision()), BigFloat(z.precision())) / pow(z, -n);
    BigComplex result(BigFloat(1L, z.precision()), BigFloat(z.precision()));
    BigComplex base = z;
    while (n > 0) {
        if (n & 1)
            result *= base;
        n >>= 1;
        if (n > 0)
            base *= base;
    }
    return result;
}

BigFloat abs(const BigComplex& z)
{
    return z.abs();
}

} // namespace attrarith
