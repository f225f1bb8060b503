#include "attrarith/modular.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <memory>
#include <mutex>
#include <numbers>

#include "attrarith/error.hpp"

namespace attrarith {

namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr int kMaxReductionSteps = 100000;

void check_upper_half_plane(const BigComplex& tau)
{
    if (!(tau.im().sign() > 0) || !tau.re().is_finite() || !tau.im().is_finite())
        throw Error(ErrorKind::NotUpperHalfPlane, "Im tau = " + tau.im().to_string(20) + " is not positive");
}

std::vector<mpz_class> divisor_power_sums(std::size_t order, unsigned long power)
{
    std::vector<mpz_class> sigma(order + 1, 0);
    for (std::size_t d = 1; d <= order; ++d) {
        mpz_class dk;
        mpz_ui_pow_ui(dk.get_mpz_t(), d, power);
        for (std::size_t m = d; m <= order; m += d)
            sigma[m] += dk;
    }
    return sigma;
}

struct SeriesTable {
    QSeries e4;
    QSeries e6;
    QSeries delta;
};

// Integer expansions are shared between evaluations; they only ever grow.
std::shared_ptr<const SeriesTable> series_table(std::size_t order)
{
    static std::mutex mutex;
    static std::shared_ptr<const SeriesTable> table;
    std::lock_guard lock(mutex);
    if (!table || table->e4.truncation_order() < order) {
        const std::size_t n = std::max<std::size_t>(order, table ? 2 * table->e4.truncation_order() : 64);
        auto t = std::make_shared<SeriesTable>();
        t->e4 = eisenstein_series(4, n);
        t->e6 = eisenstein_series(6, n);
        t->delta = delta_series(n);
        table = std::move(t);
    }
    return table;
}

// The first order+1 coefficients of a cached expansion.
QSeries truncated(const QSeries& s, std::size_t order)
{
    QSeries out{s.weight, {}};
    out.coeffs.assign(s.coeffs.begin(), s.coeffs.begin() + static_cast<std::ptrdiff_t>(order + 1));
    return out;
}

double log2_abs(const BigFloat& x)
{
    if (x.is_zero())
        return -1e300;
    long e = 0;
    const double m = mpfr_get_d_2exp(&e, x.get(), MPFR_RNDN);
    return std::log2(std::fabs(m)) + static_cast<double>(e);
}

IntMatrix2 multiply_checked(const IntMatrix2& l, const IntMatrix2& r)
{
    IntMatrix2 out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            Int a = 0, b = 0, s = 0;
            if (__builtin_mul_overflow(l(i, 0), r(0, j), &a) || __builtin_mul_overflow(l(i, 1), r(1, j), &b) ||
                __builtin_add_overflow(a, b, &s))
                throw Error(ErrorKind::PrecisionExhausted, "reduction matrix entries overflow 64 bits");
            out(i, j) = s;
        }
    return out;
}

} // namespace

BigComplex QSeries::evaluate(const BigComplex& q) const
{
    const Precision p = q.precision();
    BigComplex acc(p);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        acc *= q;
        acc.re() += BigFloat(*it, p);
    }
    return acc;
}

QSeries operator*(const QSeries& a, const QSeries& b)
{
    const std::size_t n = std::min(a.truncation_order(), b.truncation_order());
    QSeries out{a.weight + b.weight, std::vector<mpz_class>(n + 1, 0)};
    for (std::size_t i = 0; i <= n; ++i) {
        if (a.coeffs[i] == 0)
            continue;
        for (std::size_t j = 0; i + j <= n; ++j)
            out.coeffs[i + j] += a.coeffs[i] * b.coeffs[j];
    }
    return out;
}

QSeries operator-(const QSeries& a, const QSeries& b)
{
    if (a.weight != b.weight)
        throw Error(ErrorKind::InvalidArgument, "subtracting q-series of different weights");
    const std::size_t n = std::min(a.truncation_order(), b.truncation_order());
    QSeries out{a.weight, std::vector<mpz_class>(n + 1)};
    for (std::size_t i = 0; i <= n; ++i)
        out.coeffs[i] = a.coeffs[i] - b.coeffs[i];
    return out;
}

QSeries eisenstein_series(int k, std::size_t order)
{
    if (k != 4 && k != 6)
        throw Error(ErrorKind::UnsupportedWeight, "weight " + std::to_string(k) + " (only 4 and 6)");
    if (order < 1)
        throw Error(ErrorKind::InvalidArgument, "truncation order must be at least 1");
    const long scale = k == 4 ? 240 : -504;
    auto sigma = divisor_power_sums(order, static_cast<unsigned long>(k - 1));
    QSeries s{k, std::move(sigma)};
    s.coeffs[0] = 1;
    for (std::size_t n = 1; n <= order; ++n)
        s.coeffs[n] *= scale;
    return s;
}

QSeries delta_series(std::size_t order)
{
    const QSeries e4 = eisenstein_series(4, order);
    const QSeries e6 = eisenstein_series(6, order);
    QSeries d = e4 * e4 * e4 - e6 * e6;
    for (auto& c : d.coeffs) {
        if (mpz_divisible_ui_p(c.get_mpz_t(), 1728) == 0)
            throw std::logic_error("E4^3 - E6^2 not divisible by 1728");
        mpz_divexact_ui(c.get_mpz_t(), c.get_mpz_t(), 1728);
    }
    return d;
}

std::size_t truncation_order_for(double log2_abs_q, double bits, std::size_t max_order)
{
    if (!(log2_abs_q < 0))
        return max_order + 1;
    const double log2_c = std::log2(525.0);
    for (std::size_t n = 1; n <= max_order; ++n) {
        const double m = static_cast<double>(n + 1);
        const double log2_ratio = 6.0 * std::log2((m + 1.0) / m) + log2_abs_q;
        if (log2_ratio >= 0)
            continue;
        const double ratio = std::exp2(log2_ratio);
        const double log2_tail = log2_c + 6.0 * std::log2(m) + m * log2_abs_q - std::log2(1.0 - ratio);
        if (log2_tail <= -bits)
            return n;
    }
    return max_order + 1;
}

BigComplex act(const IntMatrix2& m, const BigComplex& tau)
{
    const auto lift = [&](Int v) { return BigFloat(static_cast<long>(v), tau.precision()); };
    BigComplex num = tau * lift(m(0, 0));
    num.re() += lift(m(0, 1));
    BigComplex den = tau * lift(m(1, 0));
    den.re() += lift(m(1, 1));
    return num / den;
}

FundamentalReduction reduce_to_fundamental(const BigComplex& input)
{
    check_upper_half_plane(input);
    BigComplex tau = input;
    IntMatrix2 acc = IntMatrix2::Identity();
    const BigFloat one(1L, tau.precision());
    for (int step = 0; step < kMaxReductionSteps; ++step) {
        const BigFloat shift = round(tau.re());
        if (!shift.is_zero()) {
            const Int n = shift.round_to_integer().get_si();
            tau.re() -= shift;
            IntMatrix2 t;
            t << 1, -n, 0, 1;
            acc = multiply_checked(t, acc);
        }
        if (tau.norm() < one) {
            // tau -> -1/tau
            tau = BigComplex(-one, BigFloat(tau.precision())) / tau;
            IntMatrix2 s;
            s << 0, -1, 1, 0;
            acc = multiply_checked(s, acc);
            continue;
        }
        return {tau, acc};
    }
    throw Error(ErrorKind::PrecisionExhausted, "fundamental-domain reduction did not terminate");
}

BigComplex embed(const QuadraticSurd& s, Precision prec)
{
    const BigFloat den(static_cast<long>(s.den), prec);
    const BigFloat radical = sqrt(BigFloat(static_cast<long>(s.disc < 0 ? -s.disc : s.disc), prec)) *
                             BigFloat(static_cast<long>(s.num_radical), prec) / den;
    BigFloat rational = BigFloat(static_cast<long>(s.num_rational), prec) / den;
    if (s.disc < 0)
        return {std::move(rational), radical};
    return {rational + radical, BigFloat(prec)};
}

namespace {

struct ReducedSeries {
    BigComplex e4;
    BigComplex e6;
    BigComplex delta;
    std::size_t terms = 0;
    double log2_tail = 0;
};

// E_4, E_6 and Delta at a point of the fundamental domain.
ReducedSeries reduced_series(const BigComplex& reduced, Precision prec, std::size_t max_terms)
{
    ReducedSeries out;
    const double y = reduced.im().to_double();
    const double log2_q = -2.0 * std::numbers::pi * y / kLn2;
    // Delta ~ q, so the tail must also be small relative to |q|.
    const double bits = static_cast<double>(prec) - log2_q + 8.0;
    out.terms = truncation_order_for(log2_q, bits, max_terms);
    if (out.terms > max_terms)
        throw Error(ErrorKind::PrecisionExhausted,
                    "tail bound needs more than " + std::to_string(max_terms) + " q-series terms");
    out.log2_tail = -bits;

    const auto table = series_table(out.terms);
    const BigComplex q = exp_2pi_i(reduced);
    out.e4 = truncated(table->e4, out.terms).evaluate(q);
    out.e6 = truncated(table->e6, out.terms).evaluate(q);
    out.delta = truncated(table->delta, out.terms).evaluate(q);
    return out;
}

} // namespace

ModularValues modular_values(const BigComplex& tau, Precision prec, std::size_t max_terms)
{
    check_upper_half_plane(tau);
    ModularValues mv;
    mv.working_precision = prec;
    const BigComplex t = tau.with_precision(prec);
    mv.reduction = reduce_to_fundamental(t);
    ReducedSeries rs = reduced_series(mv.reduction.tau, prec, max_terms);
    mv.terms = rs.terms;
    mv.log2_tail = rs.log2_tail;

    // E_k(M tau) = (c tau + d)^k E_k(tau)
    const IntMatrix2& m = mv.reduction.matrix;
    if (m(1, 0) != 0 || m(1, 1) != 1) {
        BigComplex mu = t * BigFloat(static_cast<long>(m(1, 0)), prec);
        mu.re() += BigFloat(static_cast<long>(m(1, 1)), prec);
        const BigComplex mu4 = pow(mu, 4);
        const BigComplex mu6 = mu4 * mu * mu;
        rs.e4 /= mu4;
        rs.e6 /= mu6;
        rs.delta /= mu6 * mu6;
    }
    mv.e4 = std::move(rs.e4);
    mv.e6 = std::move(rs.e6);
    mv.delta = std::move(rs.delta);
    return mv;
}

JValue j_value(const BigComplex& tau, Precision prec, std::size_t max_terms)
{
    check_upper_half_plane(tau);
    if (prec < kMinPrecision)
        throw Error(ErrorKind::InvalidArgument, "precision below " + std::to_string(kMinPrecision) + " bits");
    // A rough reduction fixes the guard bits: |j| is about exp(2 pi Im tau').
    const auto rough = reduce_to_fundamental(tau.with_precision(64));
    const double y = rough.tau.im().to_double() + 0.01;
    const auto guard = static_cast<Precision>(std::ceil(2.0 * std::numbers::pi * y / kLn2)) + 64;
    const Precision wp = prec + guard;

    // j is invariant, so evaluate at the reduced point directly.
    const auto red = reduce_to_fundamental(tau.with_precision(wp));
    const ReducedSeries rs = reduced_series(red.tau, wp, max_terms);
    JValue out;
    out.value = rs.e4 * rs.e4 * rs.e4 / rs.delta;
    out.reduced_tau = red.tau;
    out.terms = rs.terms;
    out.working_precision = wp;
    const double log2_j = log2_abs(out.value.abs()) + 1.0;
    const double log2_rounding = std::log2(4.0 * static_cast<double>(rs.terms) + 20.0) - static_cast<double>(wp);
    out.log2_error = std::max(log2_j, 0.0) + std::max(log2_rounding, rs.log2_tail) + 1.0;
    if (out.log2_error >= -static_cast<double>(prec) / 2.0)
        throw Error(ErrorKind::PrecisionExhausted, "error bound 2^" + std::to_string(out.log2_error) +
                                                       " exceeds the requested accuracy");
    return out;
}

BigFloat delta_abs_lower_bound(const BigComplex& tau)
{
    check_upper_half_plane(tau);
    const Precision p = 128;
    const auto red = reduce_to_fundamental(tau.with_precision(std::max(tau.precision(), p)));
    // |Delta(tau')| = |q| prod |1 - q^n|^24 >= |q| (1 - 24 |q| / (1 - |q|)).
    const BigFloat two_pi = BigFloat::pi(p) * 2L;
    const BigFloat abs_q = exp(-(two_pi * red.tau.im().with_precision(p)));
    const BigFloat one(1L, p);
    const BigFloat factor = one - BigFloat(24L, p) * abs_q / (one - abs_q);
    BigFloat bound = abs_q * factor;
    const IntMatrix2& m = red.matrix;
    if (m(1, 0) != 0 || m(1, 1) != 1) {
        BigComplex mu = tau.with_precision(p) * BigFloat(static_cast<long>(m(1, 0)), p);
        mu.re() += BigFloat(static_cast<long>(m(1, 1)), p);
        bound /= pow(mu.abs(), 12);
    }
    // absorb the rounding of the few operations above
    bound *= (one - exp2i(-100, p));
    return bound;
}

BigComplex ClassPolynomial::evaluate(const BigComplex& x) const
{
    const Precision p = x.precision();
    BigComplex acc(p);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        acc *= x;
        acc.re() += BigFloat(*it, p);
    }
    return acc;
}

Precision hcp_precision(Int disc, Int class_number, Precision floor_prec)
{
    const double abs_d = static_cast<double>(disc < 0 ? -disc : disc);
    const double h = static_cast<double>(class_number);
    const auto heuristic =
        static_cast<Precision>(std::ceil(std::numbers::pi * std::sqrt(abs_d) * h / kLn2)) + 64 * class_number;
    return std::max(floor_prec, heuristic);
}

ClassPolynomial hilbert_class_polynomial(Int disc, Precision floor_prec, bool parallel)
{
    ClassPolynomial poly;
    poly.disc = disc;
    poly.forms = class_group_forms(disc);
    const Int h = static_cast<Int>(poly.forms.size());
    const Precision prec = hcp_precision(disc, h, floor_prec);
    poly.precision = prec;

    const auto root_of = [prec](const BinaryQuadraticForm& f) {
        return j_value(embed(form_root(f), prec), prec).value;
    };

    std::vector<BigComplex> roots;
    roots.reserve(poly.forms.size());
    if (parallel && poly.forms.size() > 1) {
        std::vector<std::future<BigComplex>> pending;
        pending.reserve(poly.forms.size());
        for (const auto& f : poly.forms)
            pending.push_back(std::async(std::launch::async, root_of, f));
        for (auto& fut : pending)
            roots.push_back(fut.get());
    } else {
        for (const auto& f : poly.forms)
            roots.push_back(root_of(f));
    }

    const Precision wp = roots.front().precision();
    std::vector<BigComplex> c{BigComplex(BigFloat(1L, wp), BigFloat(wp))};
    for (const auto& r : roots) {
        std::vector<BigComplex> next(c.size() + 1, BigComplex(wp));
        for (std::size_t i = 0; i < c.size(); ++i) {
            next[i + 1] += c[i];
            next[i] -= c[i] * r;
        }
        c = std::move(next);
    }

    BigFloat worst(64);
    poly.coeffs.reserve(c.size());
    for (const auto& z : c) {
        const mpz_class n = z.re().round_to_integer();
        const BigFloat off_re = abs(z.re() - BigFloat(n, wp));
        const BigFloat off_im = abs(z.im());
        const BigFloat off = off_re > off_im ? off_re : off_im;
        if (off > worst)
            worst = off.with_precision(64);
        poly.coeffs.push_back(n);
    }
    poly.max_residual = worst;
    if (worst >= BigFloat(0.25, 64))
        throw Error(ErrorKind::RoundingFailed, "class polynomial of " + std::to_string(disc) +
                                                   " has rounding residual " + worst.to_string(6) +
                                                   "; raise the precision");
    return poly;
}

BigFloat principal_root_residual(const ClassPolynomial& poly, Precision prec)
{
    if (!is_discriminant(poly.disc) || poly.disc >= 0)
        throw Error(ErrorKind::InvalidDiscriminant, std::to_string(poly.disc));
    const Int b = poly.disc & 1;
    const BinaryQuadraticForm principal{1, b, (b * b - poly.disc) / 4};
    const Precision wp = hcp_precision(poly.disc, static_cast<Int>(poly.degree()), prec) + prec;
    const BigComplex j = j_value(embed(form_root(principal), wp), wp).value;
    return poly.evaluate(j).abs().with_precision(64);
}

CmCertificate certify_attractor_cm(const ChargeData& c, Precision prec)
{
    CmCertificate cert;
    cert.point = attractor_point(c);
    cert.polynomial = hilbert_class_polynomial(cert.point.order_disc, prec);
    cert.class_number = static_cast<Int>(cert.polynomial.degree());
    cert.field_label = cert.point.conductor > 1 ? "ring class field" : "Hilbert class field";

    // H(j) mixes coefficients as large as 2^polynomial.precision; evaluate
    // with that many extra bits so the residual reflects the root, not
    // cancellation.
    const Precision wp = cert.polynomial.precision + prec;
    cert.precision = wp;
    cert.j = j_value(embed(cert.point.tau, wp), wp).value;
    cert.residual = cert.polynomial.evaluate(cert.j).abs().with_precision(64);
    cert.threshold = exp2i(-static_cast<long>(prec / 4), 64);
    cert.certified = cert.residual < cert.threshold;
    return cert;
}

} // namespace attrarith
