#include "attrarith/attractor.hpp"

#include <string>

#include "attrarith/error.hpp"

namespace attrarith {

namespace {

void check_lattice_input(const IntVector& p, const IntVector& q, const IntMatrix& gram)
{
    if (gram.rows() != gram.cols() || gram.rows() == 0)
        throw Error(ErrorKind::InvalidArgument, "Gram matrix must be square and non-empty");
    if (p.size() != gram.rows() || q.size() != gram.rows())
        throw Error(ErrorKind::InvalidArgument, "charge vectors must match the Gram matrix size " +
                                                    std::to_string(gram.rows()));
    if (gram != gram.transpose())
        throw Error(ErrorKind::InvalidArgument, "Gram matrix must be symmetric");
}

void check_attractor(const ChargeData& c)
{
    if (c.p2 <= 0)
        throw Error(ErrorKind::DegenerateCharge, "p.p = " + std::to_string(c.p2) + " must be positive");
    const Int d = discriminant(c);
    if (d >= 0)
        throw Error(ErrorKind::NotAttractor, "discriminant " + std::to_string(d) + " is not negative");
}

} // namespace

ChargeData ChargeData::from_lattice(const IntVector& p, const IntVector& q, const IntMatrix& gram)
{
    check_lattice_input(p, q, gram);
    ChargeData c;
    c.p2 = p.dot(gram * p);
    c.q2 = q.dot(gram * q);
    c.pq = p.dot(gram * q);
    c.provenance = ChargeVectors{p, q, gram};
    return c;
}

ChargeData ChargeData::scaled(Int lambda) const
{
    ChargeData c{p2 * lambda * lambda, q2 * lambda * lambda, pq * lambda * lambda, std::nullopt};
    if (provenance)
        c.provenance = ChargeVectors{provenance->p * lambda, provenance->q * lambda, provenance->gram};
    return c;
}

Int discriminant(const ChargeData& c) noexcept
{
    return c.pq * c.pq - c.p2 * c.q2;
}

AttractorPoint attractor_point(const ChargeData& c)
{
    check_attractor(c);
    AttractorPoint pt;
    pt.D = discriminant(c);
    pt.tau = QuadraticSurd::make(c.pq, 1, c.p2, pt.D);
    pt.associated_form = {c.p2, -2 * c.pq, c.q2};
    pt.form = reduce_form(pt.associated_form).form;
    pt.content = pt.associated_form.content();
    pt.order_disc = pt.associated_form.disc() / (pt.content * pt.content);
    pt.class_number = class_number(pt.order_disc);
    const auto split = fundamental_split(pt.order_disc);
    pt.fundamental_disc = split.fundamental;
    pt.conductor = split.conductor;
    return pt;
}

QuadraticNumber attractor_residual(const ChargeData& c, const QuadraticSurd& tau)
{
    const QuadraticNumber t = tau.value();
    const Int d = tau.disc;
    const auto as_q = [d](Int v) { return QuadraticNumber::rational(mpq_class(static_cast<long>(v)), d); };
    return as_q(c.p2) * t * t - as_q(2 * c.pq) * t + as_q(c.q2);
}

BigFloat entropy_invariant(const ChargeData& c, Precision prec)
{
    check_attractor(c);
    const Int d = discriminant(c);
    return sqrt(BigFloat(static_cast<long>(-d), prec));
}

K3FormCertificate k3_form_certificate(const IntVector& p, const IntVector& q, const IntMatrix& gram)
{
    const ChargeData c = ChargeData::from_lattice(p, q, gram);
    K3FormCertificate cert;
    cert.point = attractor_point(c);

    const QuadraticNumber tau_bar = cert.point.tau.value().conj();
    const Int d = cert.point.tau.disc;
    const auto as_q = [d](Int v) { return QuadraticNumber::rational(mpq_class(static_cast<long>(v)), d); };

    const auto n = p.size();
    cert.omega.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
        cert.omega.push_back(as_q(q(i)) - tau_bar * as_q(p(i)));

    QuadraticNumber iso = as_q(0);
    QuadraticNumber pair = as_q(0);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& wi = cert.omega[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < n; ++j) {
            if (gram(i, j) == 0)
                continue;
            const auto& wj = cert.omega[static_cast<std::size_t>(j)];
            const mpq_class g(static_cast<long>(gram(i, j)));
            iso += g * (wi * wj);
            pair += g * (wi * wj.conj());
        }
    }
    cert.isotropy = iso;
    cert.pairing = pair;
    cert.expected_pairing = mpq_class(static_cast<long>(-2 * cert.point.D), static_cast<long>(c.p2));
    cert.expected_pairing.canonicalize();
    cert.isotropic = iso.is_zero();
    cert.positive = pair.is_rational() && pair.rational_part() == cert.expected_pairing &&
                    sgn(pair.rational_part()) > 0;
    return cert;
}

} // namespace attrarith
