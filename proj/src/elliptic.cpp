#include "attrarith/elliptic.hpp"

#include <cmath>
#include <string>

#include "attrarith/error.hpp"

namespace attrarith {

namespace {

constexpr Precision kGuardBits = 64;

BigComplex one_at(Precision p)
{
    return {BigFloat(1L, p), BigFloat(p)};
}

BigComplex model_delta(const BigComplex& A, const BigComplex& B)
{
    return (A * A * A * 4L + B * B * 27L) * -16L;
}

BigComplex model_j(const BigComplex& A, const BigComplex& delta)
{
    // 1728 g2^3 / (g2^3 - 27 g3^2) with g2 = -4A
    return A * A * A * (-64L * 1728L) / delta;
}

} // namespace

WeierstrassModel WeierstrassModel::from_coefficients(BigComplex A, BigComplex B)
{
    WeierstrassModel m;
    m.precision = std::max(A.precision(), B.precision());
    m.A = std::move(A);
    m.B = std::move(B);
    m.delta = model_delta(m.A, m.B);
    if (m.delta.abs().is_zero())
        throw Error(ErrorKind::InvalidArgument, "singular Weierstrass model (delta = 0)");
    m.j = model_j(m.A, m.delta);
    m.twist = one_at(m.precision);
    return m;
}

BigComplex WeierstrassModel::rhs(const BigComplex& x) const
{
    return x * x * x + A * x + B;
}

WeierstrassModel model_from_tau(const BigComplex& tau, Precision prec)
{
    const Precision wp = prec + kGuardBits;
    const ModularValues mv = modular_values(tau, wp);
    const BigFloat pi = BigFloat::pi(wp);
    const BigFloat pi2 = pi * pi;
    const BigFloat pi4 = pi2 * pi2;
    const BigFloat pi6 = pi4 * pi2;

    WeierstrassModel m;
    m.precision = prec;
    m.A = mv.e4 * (-(pi4 / 3L));
    m.B = mv.e6 * (-(pi6 * 2L / 27L));
    m.delta = model_delta(m.A, m.B);
    m.j = model_j(m.A, m.delta);
    m.source_tau = tau.with_precision(wp);
    m.twist = one_at(wp);
    return m;
}

WeierstrassModel twist_model(const WeierstrassModel& model, const BigComplex& u)
{
    if (u.abs().is_zero())
        throw Error(ErrorKind::ZeroTwist, "twist parameter must be nonzero");
    const BigComplex u2 = u * u;
    const BigComplex u4 = u2 * u2;
    const BigComplex u6 = u4 * u2;
    WeierstrassModel m = model;
    m.A = model.A * u4;
    m.B = model.B * u6;
    m.delta = model.delta * (u6 * u6);
    m.twist = model.twist * u;
    return m;
}

WeierstrassValue weierstrass_p(const BigComplex& z_in, const BigComplex& tau_in, Precision prec)
{
    const BigComplex tau = tau_in.with_precision(prec);
    const auto red = reduce_to_fundamental(tau);
    const IntMatrix2& m = red.matrix;
    const BigFloat zero(prec);

    // Z + Z tau = mu (Z + Z tau') with mu = c tau + d.
    BigComplex mu = tau * BigFloat(static_cast<long>(m(1, 0)), prec);
    mu.re() += BigFloat(static_cast<long>(m(1, 1)), prec);
    BigComplex w = z_in.with_precision(prec) / mu;

    // w into the cell |Im w| <= Im tau' / 2, |Re w| <= 1/2.
    const BigComplex& tp = red.tau;
    const BigFloat k = round(w.im() / tp.im());
    if (!k.is_zero())
        w -= tp * k;
    w.re() -= round(w.re());

    const BigComplex q = exp_2pi_i(tp);
    const BigComplex u = exp_2pi_i(w);
    const BigComplex one = one_at(prec);
    const BigComplex u_inv = one / u;
    if ((one - u).abs() < BigFloat(std::ldexp(1.0, -static_cast<int>(prec / 4)), 64))
        throw Error(ErrorKind::InvalidArgument, "p-function evaluated at a lattice point");

    // (2 pi i)^-2 p = 1/12 + sum_{n in Z} q^n u / (1 - q^n u)^2 - 2 sum_{n>=1} q^n / (1 - q^n)^2
    // (2 pi i)^-3 p' = sum_{n in Z} q^n u (1 + q^n u) / (1 - q^n u)^3
    const auto p_term = [&](const BigComplex& v) {
        const BigComplex den = one - v;
        return v / (den * den);
    };
    const auto dp_term = [&](const BigComplex& v) {
        const BigComplex den = one - v;
        return v * (one + v) / (den * den * den);
    };

    BigComplex p_sum = p_term(u);
    BigComplex dp_sum = dp_term(u);
    p_sum.re() += BigFloat(1L, prec) / 12L;

    const BigFloat eps = exp2i(-static_cast<long>(prec) - 16, 64);
    BigComplex qn = q;
    for (int n = 1; n < 100000; ++n) {
        const BigComplex a = qn * u;
        const BigComplex b = qn * u_inv;
        const BigComplex pt = p_term(a) + p_term(b) - p_term(qn) * 2L;
        const BigComplex dpt = dp_term(a) - dp_term(b);
        p_sum += pt;
        dp_sum += dpt;
        // |q^n u^{+-1}| <= |q|^(n - 1/2): stop once the next terms are negligible.
        if (pt.abs() < eps && dpt.abs() < eps && a.abs() < BigFloat(0.5, 64) && b.abs() < BigFloat(0.5, 64))
            break;
        qn *= q;
    }

    const BigFloat two_pi = BigFloat::pi(prec) * 2L;
    const BigComplex two_pi_i(zero, two_pi);
    const BigComplex f2 = two_pi_i * two_pi_i;
    const BigComplex f3 = f2 * two_pi_i;
    const BigComplex mu2 = mu * mu;
    return {f2 * p_sum / mu2, f3 * dp_sum / (mu2 * mu)};
}

std::vector<TorsionPoint> torsion_points(const WeierstrassModel& model, Int n)
{
    if (n < 2)
        throw Error(ErrorKind::InvalidArgument, "torsion order must be at least 2, got " + std::to_string(n));
    if (!model.source_tau)
        throw Error(ErrorKind::InvalidArgument, "model has no lattice; build it with model_from_tau");
    const Precision wp = model.precision + kGuardBits;
    const BigComplex& tau = *model.source_tau;
    const BigComplex u2 = model.twist * model.twist;
    const BigComplex u3 = u2 * model.twist;

    std::vector<TorsionPoint> out;
    out.reserve(static_cast<std::size_t>(n * n - 1));
    for (Int a = 0; a < n; ++a) {
        for (Int b = 0; b < n; ++b) {
            if (a == 0 && b == 0)
                continue;
            BigComplex z = tau.with_precision(wp) * BigFloat(static_cast<long>(a), wp);
            z.re() += BigFloat(static_cast<long>(b), wp);
            z /= static_cast<long>(n);
            const WeierstrassValue v = weierstrass_p(z, tau, wp);
            out.push_back({a, b, n, v.p * u2, v.dp * u3 / 2L});
        }
    }
    return out;
}

WeberCase weber_case(const WeierstrassModel& model)
{
    const BigFloat tol = exp2i(-static_cast<long>(model.precision / 4), 64);
    BigComplex shifted = model.j;
    shifted.re() -= BigFloat(1728L, model.j.precision());
    const bool near_1728 = shifted.abs() < tol;
    const bool near_0 = model.j.abs() < tol;
    if (near_1728 && near_0)
        throw Error(ErrorKind::AmbiguousCase, "j is within tolerance of both 0 and 1728");
    if (near_1728)
        return WeberCase::J1728;
    if (near_0)
        return WeberCase::J0;
    return WeberCase::Generic;
}

BigComplex weber_function(const WeierstrassModel& model, const TorsionPoint& point)
{
    switch (weber_case(model)) {
    case WeberCase::J1728:
        return model.A * model.A / model.delta * point.x * point.x;
    case WeberCase::J0:
        return model.B / model.delta * point.x * point.x * point.x;
    case WeberCase::Generic:
        break;
    }
    return model.A * model.B / model.delta * point.x;
}

} // namespace attrarith
