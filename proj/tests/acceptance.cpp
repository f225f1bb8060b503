// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>

#include "attrarith/attractor.hpp"
#include "attrarith/bp_jacobian.hpp"
#include "attrarith/cohomology.hpp"
#include "attrarith/elliptic.hpp"
#include "attrarith/flow.hpp"
#include "attrarith/modular.hpp"
#include "support.hpp"

using namespace attrarith;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what)
    {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// Runs body, enforcing limit seconds when positive.
bool criterion(int id, double limit, const std::function<void(Outcome&)>& body)
{
    Outcome out;
    const auto t0 = Clock::now();
    try {
        body(out);
    } catch (const std::exception& e) {
        out.ok = false;
        out.detail = std::string("threw: ") + e.what();
    }
    const double elapsed = seconds_since(t0);
    if (limit > 0 && elapsed >= limit && out.ok) {
        out.ok = false;
        out.detail = "took " + std::to_string(elapsed) + " s, limit " + std::to_string(limit) + " s";
    }
    std::printf("criterion %d: %s (%.3f s)%s%s\n", id, out.ok ? "PASS" : "FAIL", elapsed, out.detail.empty() ? "" : " ",
                out.detail.c_str());
    std::fflush(stdout);
    return out.ok;
}

std::string show(const BigFloat& x)
{
    return x.to_string(6);
}

std::vector<BigComplex> weber_values(const WeierstrassModel& m, Int n)
{
    std::vector<BigComplex> out;
    for (const auto& p : torsion_points(m, n))
        out.push_back(weber_function(m, p));
    return out;
}

double flow_roundoff(const ChargeData& c, std::complex<double> tau)
{
    const double x = tau.real(), y = tau.imag();
    const double terms = std::abs(double(c.q2)) + std::abs(2.0 * double(c.pq) * x) + double(c.p2) * std::norm(tau);
    return 16 * std::numeric_limits<double>::epsilon() * terms / (2 * y);
}

} // namespace

int main()
{
    int failures = 0;
    const auto tally = [&](bool ok) { failures += ok ? 0 : 1; };

    // j at the two elliptic points, 256 bits
    tally(criterion(1, 0, [](Outcome& o) {
        const BigFloat eps(1e-30, 64);
        auto t0 = Clock::now();
        const BigComplex i(0, 1, 256);
        const BigFloat err_i = (j_value(i, 256).value - BigComplex(1728, 0, 256)).abs();
        const double time_i = seconds_since(t0);
        t0 = Clock::now();
        const BigComplex rho(BigFloat(0.5, 256), sqrt(BigFloat(3L, 256)) / 2L);
        const BigFloat err_rho = j_value(rho, 256).value.abs();
        const double time_rho = seconds_since(t0);
        o.require(err_i < eps, "|j(i) - 1728| = " + show(err_i));
        o.require(err_rho < eps, "|j(rho)| = " + show(err_rho));
        o.require(time_i < 1.0, "j(i) took " + std::to_string(time_i) + " s");
        o.require(time_rho < 1.0, "j(rho) took " + std::to_string(time_rho) + " s");
    }));

    tally(criterion(2, 5.0, [](Outcome& o) {
        const auto poly = hilbert_class_polynomial(-163);
        o.require(poly.coeffs == std::vector<mpz_class>{mpz_class("262537412640768000"), 1}, "wrong coefficients");
        o.require(poly.max_residual < 1e-6, "rounding residual " + show(poly.max_residual));
    }));

    tally(criterion(3, 0, [](Outcome& o) {
        for (Int disc = -4; disc >= -200; --disc) {
            if (!is_discriminant(disc))
                continue;
            const Int h = static_cast<Int>(class_group_forms(disc).size());
            o.require(h == testsupport::brute_class_number(disc), "mismatch at " + std::to_string(disc));
        }
        o.require(class_group_forms(-4).size() == 1, "h(-4)");
        o.require(class_group_forms(-20).size() == 2, "h(-20)");
        o.require(class_group_forms(-23).size() == 3, "h(-23)");
    }));

    tally(criterion(4, 30.0, [](Outcome& o) {
        const ChargeData c{2, 3, 1, std::nullopt};
        const AttractorPoint pt = attractor_point(c);
        o.require(pt.tau == QuadraticSurd{1, 1, 2, -5}, "tau is " + pt.tau.to_string());
        // 2 tau^2 - 2 tau + 3 in Q(sqrt -5)
        const QuadraticNumber tau(mpq_class(1, 2), mpq_class(1, 2), -5);
        const QuadraticNumber poly = mpq_class(2) * tau * tau - mpq_class(2) * tau + QuadraticNumber::rational(3, -5);
        o.require(poly.is_zero(), "2 tau^2 - 2 tau + 3 = " + poly.to_string());
        const CmCertificate cert = certify_attractor_cm(c, 256);
        o.require(cert.residual < exp2i(-64, 64), "CM residual " + show(cert.residual));

        testsupport::Rng rng(2024);
        const std::complex<double> exact(0.5, std::sqrt(5.0) / 2);
        for (int k = 0; k < 10; ++k) {
            const std::complex<double> tau0(rng.real(-3, 3), rng.real(0.2, 4));
            const auto res = flow_integrate(c, tau0);
            o.require(std::abs(res.certificate.endpoint - exact) < 1e-8, "endpoint off from start " + std::to_string(k));
            o.require(std::abs(res.certificate.Z2 - std::sqrt(5.0)) < 1e-8, "|Z|^2 off from start " + std::to_string(k));
            for (std::size_t s = 1; s < res.trajectory.size(); ++s) {
                const auto& prev = res.trajectory[s - 1];
                o.require(res.trajectory[s].Z2 <= prev.Z2 + flow_roundoff(c, prev.tau),
                          "|Z| increased from start " + std::to_string(k));
            }
        }
    }));

    tally(criterion(5, 0, [](Outcome& o) {
        const auto s411 = CurveSignature::make(4, 1, 1);
        const auto f411 = decompose_jacobian(s411);
        o.require(genus(s411) == 3, "genus (4,1,1)");
        o.require(f411.size() == 3, "factor count (4,1,1)");
        Int dims = 0;
        for (const auto& f : f411) {
            o.require(f.dimension == 1 && f.level == 4, "factor of (4,1,1)");
            dims += f.dimension;
        }
        o.require(dims == genus(s411), "dimension sum (4,1,1)");
        const auto s412 = CurveSignature::make(4, 1, 2);
        const auto f412 = decompose_jacobian(s412);
        o.require(genus(s412) == 1, "genus (4,1,2)");
        o.require(f412.size() == 1 && f412[0].dimension == 1 && f412[0].level == 4, "factor of (4,1,2)");
    }));

    tally(criterion(6, 0, [](Outcome& o) {
        for (const auto& s : valid_signatures(12)) {
            const std::string tag = "(" + std::to_string(s.d) + "," + std::to_string(s.k) + "," + std::to_string(s.l) + ")";
            const auto forms = enumerate_forms(s);
            o.require(forms.size() % 2 == 0, "odd form count " + tag);
            if (s.d >= 3) {
                o.require(descent_count(s) == static_cast<Int>(forms.size()), "descent count " + tag);
                o.require(descent(s) == forms, "descent bijection " + tag);
            }
            for (const auto& f : decompose_jacobian(s)) {
                o.require(static_cast<Int>(f.cm_set.size()) * 2 == euler_phi(f.level), "cm_set size " + tag);
                const std::set<Int> cm(f.cm_set.begin(), f.cm_set.end());
                if (f.level > 2)
                    for (Int a : units_mod(f.level).units)
                        o.require(cm.count(a) + cm.count(f.level - a) == 1, "complementarity " + tag);
            }
            const auto units = units_mod(s.d).units;
            for (const auto& idx : forms) {
                o.require(star_action(1, idx, s) == idx, "identity " + tag);
                for (Int a : units)
                    for (Int b : units)
                        o.require(star_action(a * b % s.d, idx, s) == star_action(a, star_action(b, idx, s), s),
                                  "composition " + tag);
            }
        }
    }));

    tally(criterion(7, 0, [](Outcome& o) {
        for (Int n = 2; n <= 50; ++n)
            for (Int q = 1; q < n; ++q) {
                if (std::gcd(n, q) != 1)
                    continue;
                const std::string tag = "(" + std::to_string(n) + "," + std::to_string(q) + ")";
                const auto res = hj_expand(n, q);
                for (Int b : res.steps)
                    o.require(b >= 2, "step below 2 at " + tag);
                o.require(hj_reconstruct(res.steps) == mpq_class(n, q), "round trip " + tag);
                Int dual = 1;
                while (q * dual % n != 1 % n)
                    ++dual;
                const auto other = hj_expand(n, dual).steps;
                o.require(std::vector<Int>(res.steps.rbegin(), res.steps.rend()) == other, "dual reversal " + tag);
            }
    }));

    tally(criterion(8, 0, [](Outcome& o) {
        o.require(fermat_primitive_dim(5, 3) == 204, "(5,3) primitive");
        o.require(fermat_hodge_numbers(5, 3) == std::vector<mpz_class>{1, 101, 101, 1}, "(5,3) hodge");
        o.require(fermat_primitive_dim(3, 2) == 6, "(3,2) primitive");
        for (Int d = 2; d <= 5; ++d)
            for (Int n = 0; n <= 3; ++n)
                o.require(fermat_primitive_dim(d, n) == testsupport::brute_fermat(d, n).total,
                          "brute force at (" + std::to_string(d) + "," + std::to_string(n) + ")");
    }));

    tally(criterion(9, 0, [](Outcome& o) {
        const std::vector<std::array<Int, 4>> cases = {{3, 1, 1, 13}, {4, 1, 1, 30}, {5, 1, 1, 0}, {3, 2, 1, 0}};
        for (const auto& [d, r, s, total] : cases) {
            const std::string tag = "(" + std::to_string(d) + "," + std::to_string(r) + "," + std::to_string(s) + ")";
            const auto t0 = Clock::now();
            const auto chk = shioda_katsura_check(d, r, s);
            const double elapsed = seconds_since(t0);
            o.require(chk.equal && chk.lhs == chk.rhs, "inequality at " + tag);
            if (total != 0)
                o.require(chk.lhs == total, "total at " + tag + " is " + std::to_string(chk.lhs));
            o.require(elapsed < 10.0, tag + " took " + std::to_string(elapsed) + " s");
        }
    }));

    tally(criterion(10, 0, [](Outcome& o) {
        testsupport::Rng rng(77);
        const BigFloat weber_tol(1e-20, 64), curve_tol(1e-25, 64), ode_tol(1e-20, 64);
        for (int k = 0; k < 20; ++k) {
            const Int n = 2 + (k % 2);
            const BigComplex tau(std::complex<double>(rng.real(-0.5, 0.5), rng.real(0.9, 2.0)), 256);
            const BigComplex u(std::complex<double>(rng.real(-2, 2), rng.real(0.1, 2)), 256);
            const auto base = model_from_tau(tau);
            const auto twisted = twist_model(base, u);
            const BigFloat gap = testsupport::multiset_distance(weber_values(base, n), weber_values(twisted, n));
            o.require(gap < weber_tol, "Weber multisets differ by " + show(gap));

            for (const auto& m : {base, twisted})
                for (const auto& p : torsion_points(m, 2)) {
                    const BigFloat r = m.rhs(p.x).abs();
                    o.require(r < curve_tol, "2-torsion residual " + show(r));
                }
            for (const auto& p : torsion_points(base, n)) {
                const BigComplex z = (tau * BigFloat(p.a, 256) + BigComplex(p.b, 0, 256)) * (BigFloat(1L, 256) / BigFloat(n, 256));
                const auto v = weierstrass_p(z, tau, 256);
                const BigFloat r = (v.dp * v.dp - (v.p * v.p * v.p * 4L - base.g2() * v.p - base.g3())).abs();
                o.require(r < ode_tol, "ODE residual " + show(r));
            }
        }
    }));

    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
