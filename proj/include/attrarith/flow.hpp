#pragma once

// Radial attractor flow of (U, tau) on the upper half-plane with the
// hyperbolic metric g = 1/(2 Im tau)^2. Integrated in s with ds = e^U drho:
//   dtau/ds = -4 (Im tau)^2 (d_x + i d_y)|Z|,  dU/ds = -|Z|,  drho/ds = e^-U.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <iomanip>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "attrarith/attractor.hpp"
#include "attrarith/error.hpp"

namespace attrarith {

template <typename Real>
struct FlowState {
    Real rho = 0;
    Real U = 0;
    std::complex<Real> tau;
    Real Z2 = 0;
    /// Step in s that produced this state (0 for the initial state).
    Real step = 0;
};

struct FlowConfig {
    double step = 1e-2;
    double tol = 1e-9;
    std::size_t max_steps = 1000000;
    /// Halvings allowed inside one step before StepUnderflow.
    int max_halvings = 40;
};

/// (q2 - 2 pq Re tau + p2 |tau|^2) / (2 Im tau)
template <typename Real>
Real central_charge_sq(const ChargeData& c, const std::complex<Real>& tau)
{
    if (c.p2 <= 0)
        throw Error(ErrorKind::DegenerateCharge, "p.p = " + std::to_string(c.p2) + " must be positive");
    const Real x = tau.real();
    const Real y = tau.imag();
    if (!(y > 0))
        throw Error(ErrorKind::NotUpperHalfPlane, "Im tau must be positive");
    const Real num = Real(c.q2) - Real(2 * c.pq) * x + Real(c.p2) * (x * x + y * y);
    return num / (2 * y);
}

template <typename Real>
class FlowNonConvergence : public Error {
public:
    FlowNonConvergence(const std::string& what, std::vector<FlowState<Real>> trajectory)
        : Error(ErrorKind::NonConvergence, what), trajectory_(std::move(trajectory))
    {
    }
    const std::vector<FlowState<Real>>& trajectory() const noexcept { return trajectory_; }

private:
    std::vector<FlowState<Real>> trajectory_;
};

template <typename Real>
struct FlowCertificate {
    std::complex<Real> endpoint;
    std::complex<Real> exact_tau;
    Real tau_error = 0;
    Real Z2 = 0;
    /// sqrt|D|
    Real entropy = 0;
    Real Z2_error = 0;
    /// |Z| non-increasing on every accepted step, up to round-off.
    bool monotone = true;
    bool passed = false;
};

template <typename Real>
struct FlowResult {
    std::vector<FlowState<Real>> trajectory;
    std::size_t steps = 0;
    FlowCertificate<Real> certificate;
};

namespace flow_detail {

template <typename Real>
struct Derivative {
    std::complex<Real> dtau;
    Real dU;
    Real drho;
};

template <typename Real>
Derivative<Real> rhs(const ChargeData& c, const std::complex<Real>& tau, Real U)
{
    const Real x = tau.real();
    const Real y = tau.imag();
    const Real z2 = central_charge_sq(c, tau);
    const Real z = std::sqrt(z2);
    const Real dx_z2 = (Real(c.p2) * x - Real(c.pq)) / y;
    const Real dy_z2 = Real(c.p2) - z2 / y;
    // d|Z| = d|Z|^2 / (2|Z|)
    const Real scale = -4 * y * y / (2 * z);
    return {std::complex<Real>(scale * dx_z2, scale * dy_z2), -z, std::exp(-U)};
}

/// Tolerated round-off increase of |Z|^2 on an accepted step: a few ulps of
/// the largest term in its numerator, so cancellation near the minimum does
/// not read as an increase.
template <typename Real>
Real monotone_slack(const ChargeData& c, const std::complex<Real>& tau)
{
    const Real x = tau.real();
    const Real y = tau.imag();
    const Real terms = std::abs(Real(c.q2)) + std::abs(Real(2 * c.pq) * x) + Real(c.p2) * (x * x + y * y);
    return 16 * std::numeric_limits<Real>::epsilon() * terms / (2 * y);
}

template <typename Real>
void check_config(const FlowConfig& config)
{
    if (!(config.step > 0) || !(config.tol > 0))
        throw Error(ErrorKind::InvalidArgument, "flow step and tolerance must be positive");
}

/// One RK4 step of size h; false if it left the upper half-plane.
template <typename Real>
bool rk4(const ChargeData& c, const FlowState<Real>& s, Real h, FlowState<Real>& out)
{
    using C = std::complex<Real>;
    const auto inside = [](const C& t) { return t.imag() > 0 && std::isfinite(t.real()) && std::isfinite(t.imag()); };
    const auto k1 = rhs(c, s.tau, s.U);
    const C t2 = s.tau + (h / 2) * k1.dtau;
    if (!inside(t2))
        return false;
    const auto k2 = rhs(c, t2, s.U + h / 2 * k1.dU);
    const C t3 = s.tau + (h / 2) * k2.dtau;
    if (!inside(t3))
        return false;
    const auto k3 = rhs(c, t3, s.U + h / 2 * k2.dU);
    const C t4 = s.tau + h * k3.dtau;
    if (!inside(t4))
        return false;
    const auto k4 = rhs(c, t4, s.U + h * k3.dU);
    out.tau = s.tau + (h / 6) * (k1.dtau + Real(2) * k2.dtau + Real(2) * k3.dtau + k4.dtau);
    if (!inside(out.tau))
        return false;
    out.U = s.U + h / 6 * (k1.dU + 2 * k2.dU + 2 * k3.dU + k4.dU);
    out.rho = s.rho + h / 6 * (k1.drho + 2 * k2.drho + 2 * k3.drho + k4.drho);
    out.Z2 = central_charge_sq(c, out.tau);
    out.step = h;
    return true;
}

template <typename Real>
FlowState<Real> advance(const FlowState<Real>& s, const ChargeData& c, Real h, int max_halvings)
{
    FlowState<Real> next;
    for (int i = 0; i <= max_halvings; ++i, h /= 2) {
        if (rk4(c, s, h, next) && next.Z2 <= s.Z2 + monotone_slack(c, s.tau))
            return next;
    }
    throw Error(ErrorKind::StepUnderflow, "step halved " + std::to_string(max_halvings) + " times without an admissible step");
}

} // namespace flow_detail

template <typename Real>
FlowState<Real> initial_state(const ChargeData& c, const std::complex<Real>& tau0)
{
    FlowState<Real> s;
    s.tau = tau0;
    s.Z2 = central_charge_sq(c, tau0);
    return s;
}

/// One RK4 step of config.step, halved until tau stays in the upper
/// half-plane and |Z| does not increase.
template <typename Real>
FlowState<Real> flow_step(const FlowState<Real>& state, const ChargeData& c, const FlowConfig& config)
{
    flow_detail::check_config<Real>(config);
    central_charge_sq(c, state.tau);
    return flow_detail::advance(state, c, Real(config.step), config.max_halvings);
}

/// Integrates until |tau_n - tau_(n-1)| / h_n < tol. Converged runs carry a
/// certificate against the exact attractor point; NonConvergence carries the
/// trajectory.
template <typename Real>
FlowResult<Real> flow_integrate(const ChargeData& c, const std::complex<Real>& tau0, const FlowConfig& config = {})
{
    flow_detail::check_config<Real>(config);
    const AttractorPoint pt = attractor_point(c);

    FlowResult<Real> res;
    res.trajectory.push_back(initial_state(c, tau0));
    Real h = Real(config.step);
    bool converged = false;
    while (res.steps < config.max_steps) {
        const FlowState<Real>& cur = res.trajectory.back();
        FlowState<Real> next = flow_detail::advance(cur, c, h, config.max_halvings);
        // a halved step is kept while it is needed and regrows afterwards
        h = next.step < h ? next.step : std::min(2 * h, Real(config.step));
        const Real velocity = std::abs(next.tau - cur.tau) / next.step;
        res.trajectory.push_back(next);
        ++res.steps;
        if (velocity < Real(config.tol)) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw FlowNonConvergence<Real>("no convergence after " + std::to_string(res.steps) + " steps",
                                       std::move(res.trajectory));

    auto& cert = res.certificate;
    const QuadraticSurd& t = pt.tau;
    const Real den = Real(t.den);
    cert.exact_tau = {Real(t.num_rational) / den, Real(t.num_radical) * std::sqrt(Real(-t.disc)) / den};
    cert.endpoint = res.trajectory.back().tau;
    cert.tau_error = std::abs(cert.endpoint - cert.exact_tau);
    cert.Z2 = res.trajectory.back().Z2;
    cert.entropy = std::sqrt(Real(-pt.D));
    cert.Z2_error = std::abs(cert.Z2 - cert.entropy);
    for (std::size_t i = 1; i < res.trajectory.size(); ++i) {
        const Real prev = res.trajectory[i - 1].Z2;
        if (res.trajectory[i].Z2 > prev + flow_detail::monotone_slack(c, res.trajectory[i - 1].tau))
            cert.monotone = false;
    }
    const Real gate = 10 * Real(config.tol);
    cert.passed = cert.monotone && cert.tau_error < gate && cert.Z2_error < gate;
    return res;
}

/// Header rho,U,re_tau,im_tau,Z2; 17 significant digits.
template <typename Real>
void write_trace_csv(std::ostream& os, const std::vector<FlowState<Real>>& trajectory)
{
    const auto flags = os.flags();
    const auto prec = os.precision();
    os << "rho,U,re_tau,im_tau,Z2\n" << std::setprecision(17);
    for (const auto& s : trajectory)
        os << s.rho << ',' << s.U << ',' << s.tau.real() << ',' << s.tau.imag() << ',' << s.Z2 << '\n';
    os.flags(flags);
    os.precision(prec);
}

} // namespace attrarith
