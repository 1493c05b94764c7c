#include "osclab/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace osclab {

namespace {

const std::complex<double> kI{0.0, 1.0};

[[noreturn]] void throw_step_underflow(double h, double coord) {
    throw std::invalid_argument(
        "DiffEngine: finite-difference step " + std::to_string(h) +
        " underflows at coordinate " + std::to_string(coord) +
        "; increase fd_step or rescale the problem");
}

std::complex<double> fd_partial(const ScalarField& f, const FourVector& x, int axis,
                                double h, int order) {
    const double c = x[axis];
    if (c + h == c)
        throw_step_underflow(h, c);
    auto at = [&](double d) {
        FourVector y = x;
        y[axis] = c + d;
        return f(y);
    };
    if (order == 2)
        return (at(h) - at(-h)) / (2.0 * h);
    return (-at(2.0 * h) + 8.0 * at(h) - 8.0 * at(-h) + at(-2.0 * h)) / (12.0 * h);
}

std::complex<double> fd_partial_bi(const BiScalarField& f, const FourVector& x,
                                   const FourVector& bigx, bool on_com, int axis, double h,
                                   int order) {
    const double c = on_com ? bigx[axis] : x[axis];
    if (c + h == c)
        throw_step_underflow(h, c);
    auto at = [&](double d) {
        FourVector xr = x, xc = bigx;
        (on_com ? xc : xr)[axis] = c + d;
        return f(xr, xc);
    };
    if (order == 2)
        return (at(h) - at(-h)) / (2.0 * h);
    return (-at(2.0 * h) + 8.0 * at(h) - 8.0 * at(-h) + at(-2.0 * h)) / (12.0 * h);
}

/**
 * p_mu rewritten in the frame variables: p_i = -i d/dx_i, p_4 = +i d/dt
 * (the sign flip relative to p_i comes from differentiating with respect to
 * the upper coordinate x^4 = -t); upper = true flips the time component.
 */
DiffForm mom_form(const FrameGeometry& g, int mu, bool upper) {
    DiffForm d;
    if (mu < 3) {
        d.a = -kI * g.dxi_dx.col(mu).cast<std::complex<double>>();
    } else {
        const std::complex<double> s = upper ? -kI : kI;
        d.a = s * g.dxi_dt.cast<std::complex<double>>();
        d.b = s;
    }
    return d;
}

/** Multiplication by the lab coordinate x_i as a form over (xi, t). */
LinearForm x_form(const FrameGeometry& g, int i) {
    LinearForm m;
    m.cxi = g.x_coef.row(i).transpose().cast<std::complex<double>>();
    m.ct = g.x_tcoef(i);
    return m;
}

LinearForm t_form() {
    LinearForm m;
    m.ct = 1.0;
    return m;
}

/** The spatial dot P.x as a form. */
LinearForm p_dot_x_form(const FrameGeometry& g) {
    const Eigen::Vector3d p = g.frame.spatial();
    LinearForm m;
    for (int j = 0; j < 3; ++j)
        m += std::complex<double>(p(j)) * x_form(g, j);
    return m;
}

/** Upper-index transverse coordinate xperp^mu = x^mu + P^mu (P.x)/M0^2. */
LinearForm xperp_upper_form(const FrameGeometry& g, int mu) {
    const double m0 = g.frame.rest_mass();
    const double e = g.frame.energy();
    LinearForm inv = p_dot_x_form(g); // the invariant P.x - E t
    inv += std::complex<double>(-e) * t_form();
    if (mu < 3) {
        LinearForm m = x_form(g, mu);
        m += std::complex<double>(g.frame.spatial()(mu) / (m0 * m0)) * inv;
        return m;
    }
    LinearForm m = std::complex<double>(-1.0) * t_form();
    m += std::complex<double>(-e / (m0 * m0)) * inv;
    return m;
}

/** Shift of the primed ladder: x_i + (P_i/M0)((P.x)/(M0+E) - t). */
LinearForm primed_shift_form(const FrameGeometry& g, int i) {
    const double m0 = g.frame.rest_mass();
    const double e = g.frame.energy();
    const double pi = g.frame.spatial()(i);
    LinearForm m = x_form(g, i);
    m += std::complex<double>(pi / (m0 * (m0 + e))) * p_dot_x_form(g);
    m += std::complex<double>(-pi / m0) * t_form();
    return m;
}

/** Frame-dragged derivative D_i = d/dx_i + (P_i/(E+M0)) d/dt. */
DiffForm primed_deriv_form(const FrameGeometry& g, int i) {
    const double w = g.frame.spatial()(i) / (g.frame.energy() + g.frame.rest_mass());
    DiffForm d;
    d.a = g.dxi_dx.col(i).cast<std::complex<double>>() +
          w * g.dxi_dt.cast<std::complex<double>>();
    d.b = w;
    return d;
}

const HermiteField& require_state_form(const ScalarField& f, const OscillatorState& s) {
    const HermiteField& hf = f.closed_form();
    const FrameGeometry& g = hf.geometry();
    if (g.omega_big != s.spec().omega_big || g.frame.p().raw() != s.momentum().p().raw())
        throw std::invalid_argument(
            "operator engine: field frame does not match the given state");
    return hf;
}

double primed_shift_value(const FourVector& x, const FrameMomentum& frame, int i) {
    const Eigen::Vector3d p = frame.spatial();
    const double m0 = frame.rest_mass();
    const double e = frame.energy();
    return x[i] + (p(i) / m0) * (p.dot(x.spatial()) / (m0 + e) - x.time());
}

double xperp_sq_value(const FourVector& x, const FrameMomentum& frame) {
    const FourVector xp = perp_project(x, frame);
    return minkowski_dot(xp, xp);
}

/** p_mu p^mu applied in closed form (metric-contracted second derivative). */
HermiteField p_squared_sym(const HermiteField& hf) {
    const FrameGeometry& g = hf.geometry();
    HermiteField acc = hf.scaled(0.0);
    for (int mu = 0; mu < 4; ++mu) {
        const DiffForm d = mom_form(g, mu, false);
        HermiteField twice = hf.differentiated(d).differentiated(d);
        acc = acc.plus(mu == 3 ? twice.scaled(-1.0) : twice);
    }
    return acc;
}

/** xperp_mu xperp^mu as a double multiplication in closed form. */
HermiteField xperp_sq_sym(const HermiteField& hf) {
    const FrameGeometry& g = hf.geometry();
    HermiteField acc = hf.scaled(0.0);
    for (int mu = 0; mu < 4; ++mu) {
        const LinearForm m = xperp_upper_form(g, mu);
        HermiteField twice = hf.multiplied(m).multiplied(m);
        acc = acc.plus(mu == 3 ? twice.scaled(-1.0) : twice);
    }
    return acc;
}

BiScalarField bi_apply_p(const BiScalarField& f, bool on_com, int mu, bool upper,
                         const DiffEngine& eng) {
    const double h = eng.spacing(f.frame());
    const int order = eng.stencil_order;
    std::complex<double> s = (mu == 3) ? kI : -kI;
    if (upper && mu == 3)
        s = -s;
    return BiScalarField(
        [f, on_com, mu, s, h, order](const FourVector& x, const FourVector& bigx) {
            return s * fd_partial_bi(f, x, bigx, on_com, mu, h, order);
        },
        f.frame());
}

/** Metric-contracted nested second derivative on one argument, by FD. */
BiScalarField bi_p_squared_fd(const BiScalarField& f, bool on_com, const DiffEngine& eng) {
    BiScalarField acc;
    for (int mu = 0; mu < 4; ++mu) {
        BiScalarField once = bi_apply_p(f, on_com, mu, false, eng);
        BiScalarField twice = bi_apply_p(once, on_com, mu, false, eng);
        BiScalarField term = (mu == 3) ? (-1.0) * twice : twice;
        acc = acc ? acc + term : term;
    }
    return acc;
}

BiScalarField bi_multiply_rel(const BiScalarField& f,
                              std::function<std::complex<double>(const FourVector&)> w) {
    return BiScalarField(
        [f, w](const FourVector& x, const FourVector& bigx) { return w(x) * f(x, bigx); },
        f.frame());
}

} // namespace

void DiffEngine::validate() const {
    if (mode == Mode::analytic)
        return;
    if (!(step > 0.0) || !std::isfinite(step))
        throw std::invalid_argument("DiffEngine: fd step must be positive and finite");
    if (stencil_order != 2 && stencil_order != 4)
        throw std::invalid_argument("DiffEngine: stencil order must be 2 or 4");
}

double DiffEngine::spacing(const std::shared_ptr<const FrameGeometry>& frame) const {
    return frame ? step / frame->sqrt_omega : step;
}

ScalarField apply_p(const ScalarField& f, int mu, const DiffEngine& engine) {
    if (mu < 0 || mu > 3)
        throw std::out_of_range("apply_p: mu must be 0..3");
    engine.validate();
    if (engine.mode == DiffEngine::Mode::analytic) {
        const HermiteField& hf = f.closed_form();
        return ScalarField(hf.differentiated(mom_form(hf.geometry(), mu, false)));
    }
    const double h = engine.spacing(f.frame());
    const int order = engine.stencil_order;
    return ScalarField(
        [f, mu, h, order](const FourVector& x) {
            const std::complex<double> d = fd_partial(f, x, mu, h, order);
            return (mu == 3) ? kI * d : -kI * d;
        },
        f.frame());
}

ScalarField apply_ladder_cov(const ScalarField& f, const LadderIndex& idx,
                             const OscillatorState& state, const DiffEngine& engine) {
    if (idx.component < 0 || idx.component > 3)
        throw std::out_of_range("apply_ladder_cov: component must be 0..3");
    engine.validate();
    const double omega = state.spec().omega_big;
    const double norm = 1.0 / std::sqrt(2.0 * omega);
    const std::complex<double> psign = (idx.dir == LadderDir::raise) ? -kI : kI;
    const int mu = idx.component;

    if (engine.mode == DiffEngine::Mode::analytic) {
        const HermiteField& hf = require_state_form(f, state);
        const FrameGeometry& g = hf.geometry();
        HermiteField dpart = hf.differentiated(mom_form(g, mu, true)).scaled(psign);
        HermiteField xpart = hf.multiplied(xperp_upper_form(g, mu)).scaled(omega);
        return ScalarField(dpart.plus(xpart).scaled(norm));
    }

    const FrameMomentum frame = state.momentum();
    const double h = engine.spacing(f.frame());
    const int order = engine.stencil_order;
    return ScalarField(
        [f, frame, mu, psign, omega, norm, h, order](const FourVector& x) {
            // p^i = -i d/dx_i and p^4 = -p_4 = -i d/dt: one sign for all four
            const std::complex<double> p_up = -kI * fd_partial(f, x, mu, h, order);
            const FourVector xp = perp_project(x, frame);
            const double xcomp = (mu == 3) ? -xp[3] : xp[mu];
            return norm * (psign * p_up + omega * xcomp * f(x));
        },
        f.frame());
}

ScalarField apply_ladder_primed(const ScalarField& f, const LadderIndex& idx,
                                const OscillatorState& state, const DiffEngine& engine) {
    if (idx.component < 0 || idx.component > 2)
        throw std::out_of_range("apply_ladder_primed: component must be 0..2 (spatial)");
    engine.validate();
    const double omega = state.spec().omega_big;
    const double norm = 1.0 / std::sqrt(2.0 * omega);
    const double dsign = (idx.dir == LadderDir::raise) ? -1.0 : 1.0;
    const int i = idx.component;

    if (engine.mode == DiffEngine::Mode::analytic) {
        const HermiteField& hf = require_state_form(f, state);
        const FrameGeometry& g = hf.geometry();
        HermiteField dpart = hf.differentiated(primed_deriv_form(g, i)).scaled(dsign);
        HermiteField xpart = hf.multiplied(primed_shift_form(g, i)).scaled(omega);
        return ScalarField(dpart.plus(xpart).scaled(norm));
    }

    const FrameMomentum frame = state.momentum();
    const double h = engine.spacing(f.frame());
    const int order = engine.stencil_order;
    return ScalarField(
        [f, frame, i, dsign, omega, norm, h, order](const FourVector& x) {
            const double drag = frame.spatial()(i) / (frame.energy() + frame.rest_mass());
            const std::complex<double> dval =
                fd_partial(f, x, i, h, order) + drag * fd_partial(f, x, 3, h, order);
            return norm *
                   (dsign * dval + omega * primed_shift_value(x, frame, i) * f(x));
        },
        f.frame());
}

ScalarField apply_number_operator(const ScalarField& f, const OscillatorState& state,
                                  const DiffEngine& engine) {
    ScalarField acc;
    for (int mu = 0; mu < 4; ++mu) {
        ScalarField low = apply_ladder_cov(f, {LadderDir::lower, mu}, state, engine);
        ScalarField both = apply_ladder_cov(low, {LadderDir::raise, mu}, state, engine);
        ScalarField term = (mu == 3) ? (-1.0) * both : both;
        acc = acc ? acc + term : term;
    }
    return acc;
}

ScalarField apply_KS(const ScalarField& f, const OscillatorState& state,
                     const DiffEngine& engine) {
    const FourVector& p = state.momentum().p();
    ScalarField acc;
    for (int mu = 0; mu < 4; ++mu) {
        const double w = (mu == 3) ? -p[3] : p[mu]; // P_mu p^mu with p^4 = -p_4
        ScalarField term = std::complex<double>(w) * apply_p(f, mu, engine);
        acc = acc ? acc + term : term;
    }
    return acc;
}

ScalarField apply_internal_HO(const ScalarField& f, const OscillatorState& state,
                              const DiffEngine& engine) {
    engine.validate();
    const double omega = state.spec().omega_big;
    ScalarField psq;
    for (int mu = 0; mu < 4; ++mu) {
        ScalarField twice = apply_p(apply_p(f, mu, engine), mu, engine);
        ScalarField term = (mu == 3) ? (-1.0) * twice : twice;
        psq = psq ? psq + term : term;
    }
    if (engine.mode == DiffEngine::Mode::analytic) {
        const HermiteField& hf = require_state_form(f, state);
        return psq + ScalarField(xperp_sq_sym(hf).scaled(omega * omega));
    }
    const FrameMomentum frame = state.momentum();
    ScalarField xsq(
        [f, frame, omega](const FourVector& x) {
            return omega * omega * xperp_sq_value(x, frame) * f(x);
        },
        f.frame());
    return psq + xsq;
}

ScalarField apply_P_dot_ladder(const ScalarField& f, LadderDir dir,
                               const OscillatorState& state, const DiffEngine& engine) {
    const FourVector& p = state.momentum().p();
    ScalarField acc;
    for (int mu = 0; mu < 4; ++mu) {
        ScalarField ladder = apply_ladder_cov(f, {dir, mu}, state, engine);
        ScalarField term = std::complex<double>(p[mu]) * ladder;
        acc = acc ? acc + term : term;
    }
    return acc;
}

BiScalarField apply_KT_com(const BiScalarField& psi, const OscillatorState& state,
                           const DiffEngine& engine) {
    engine.validate();
    const double omega = state.spec().omega_big;
    const double mc = state.spec().combined_mass();

    if (engine.mode == DiffEngine::Mode::analytic) {
        const auto* h = std::get_if<BiScalarField::SeparableHermite>(&psi.payload());
        if (!h)
            throw std::invalid_argument(
                "apply_KT_com: analytic engine needs a state-built field");
        const HermiteField& rel = *h->rel;
        if (rel.geometry().omega_big != omega ||
            rel.geometry().frame.p().raw() != state.momentum().p().raw())
            throw std::invalid_argument(
                "apply_KT_com: field frame does not match the given state");
        const double psq_com = minkowski_dot(h->p_com, h->p_com);
        HermiteField out = rel.scaled(psq_com + mc * mc);
        out = out.plus(p_squared_sym(rel).scaled(4.0));
        out = out.plus(xperp_sq_sym(rel).scaled(4.0 * omega * omega));
        return BiScalarField::from_hermite(std::move(out), h->p_com);
    }

    const FrameMomentum frame = state.momentum();
    BiScalarField acc = bi_p_squared_fd(psi, true, engine);
    acc = acc + 4.0 * bi_p_squared_fd(psi, false, engine);
    acc = acc + (mc * mc) * psi;
    acc = acc + 4.0 * omega * omega *
                    bi_multiply_rel(psi, [frame](const FourVector& x) {
                        return std::complex<double>(xperp_sq_value(x, frame));
                    });
    return acc;
}

BiScalarField apply_KT_individual(const BiScalarField& psi, double m1, double m2,
                                  double omega_big, const EpsilonPair& eps,
                                  const FrameMomentum& frame, const DiffEngine& engine) {
    engine.validate();
    if (!(omega_big >= 0.0))
        throw std::domain_error("apply_KT_individual: omega must be >= 0");
    const double m0 = frame.rest_mass();
    const double c_pp = (eps.e1 * eps.e1 + eps.e2 * eps.e2) / (m0 * m0);
    const double c_mixed = 2.0 * (eps.e1 - eps.e2) / m0;
    const double c_mass = m1 * m1 + m2 * m2;
    const double c_x = 4.0 * omega_big * omega_big;

    if (engine.mode == DiffEngine::Mode::analytic) {
        if (const auto* h = std::get_if<BiScalarField::SeparableHermite>(&psi.payload())) {
            const HermiteField& rel = *h->rel;
            const FrameGeometry& g = rel.geometry();
            const double psq_com = minkowski_dot(h->p_com, h->p_com);
            HermiteField out = rel.scaled(c_pp * psq_com + c_mass);
            out = out.plus(p_squared_sym(rel).scaled(2.0));
            HermiteField mixed = rel.scaled(0.0);
            for (int mu = 0; mu < 4; ++mu)
                mixed = mixed.plus(
                    rel.differentiated(mom_form(g, mu, true)).scaled(h->p_com[mu]));
            out = out.plus(mixed.scaled(c_mixed));
            if (c_x != 0.0)
                out = out.plus(xperp_sq_sym(rel).scaled(c_x));
            return BiScalarField::from_hermite(std::move(out), h->p_com);
        }
        if (const auto* w = std::get_if<BiScalarField::SeparablePlaneWave>(&psi.payload())) {
            const double scalar = c_pp * minkowski_dot(w->p_com, w->p_com) +
                                  2.0 * minkowski_dot(w->k_rel, w->k_rel) +
                                  c_mixed * minkowski_dot(w->p_com, w->k_rel) + c_mass;
            if (c_x == 0.0)
                return scalar * psi;
            BiScalarField out = scalar * psi;
            return out + c_x * bi_multiply_rel(psi, [frame](const FourVector& x) {
                       return std::complex<double>(xperp_sq_value(x, frame));
                   });
        }
        throw std::invalid_argument(
            "apply_KT_individual: analytic engine needs a closed-form field");
    }

    BiScalarField acc = c_pp * bi_p_squared_fd(psi, true, engine);
    acc = acc + 2.0 * bi_p_squared_fd(psi, false, engine);
    BiScalarField mixed;
    for (int mu = 0; mu < 4; ++mu) {
        BiScalarField inner = bi_apply_p(psi, false, mu, true, engine);
        BiScalarField outer = bi_apply_p(inner, true, mu, false, engine);
        mixed = mixed ? mixed + outer : outer;
    }
    acc = acc + c_mixed * mixed;
    acc = acc + c_mass * psi;
    if (c_x != 0.0)
        acc = acc + c_x * bi_multiply_rel(psi, [frame](const FourVector& x) {
                  return std::complex<double>(xperp_sq_value(x, frame));
              });
    return acc;
}

AuditRecord audit_KT_individual(const OscillatorState& state, const DiffEngine& engine,
                                std::span<const FourVector> rel_points,
                                const FourVector& com_point) {
    AuditRecord rec;
    rec.id = "audit.kt-individual";
    rec.m1 = state.spec().m1;
    rec.m2 = state.spec().m2;
    rec.sigma = state.sigma();
    const double mc = state.spec().combined_mass();
    const double m0 = state.rest_mass();
    rec.scalar_discrepancy = mc * mc + 8.0 * state.sigma() - m0 * m0;

    const BiScalarField psi = BiScalarField::eigenstate(state);
    const BiScalarField a = apply_KT_individual(psi, rec.m1, rec.m2, state.spec().omega_big,
                                                state.epsilons(), state.momentum(), engine);
    const BiScalarField b = apply_KT_com(psi, state, engine);

    std::vector<std::complex<double>> av, bv, pv;
    double max_p = 0.0, max_b = 0.0;
    for (const FourVector& x : rel_points) {
        av.push_back(a(x, com_point));
        bv.push_back(b(x, com_point));
        pv.push_back(psi(x, com_point));
        max_p = std::max(max_p, std::abs(pv.back()));
        max_b = std::max(max_b, std::abs(bv.back()));
    }
    rec.samples = long(rel_points.size());
    rec.com_residual_scale = max_p > 0.0 ? max_b / max_p : 0.0;

    double rmin = 0.0, rmax = 0.0, rsum = 0.0, imax = 0.0;
    long used = 0;
    for (std::size_t k = 0; k < pv.size(); ++k) {
        if (std::abs(pv[k]) < 1e-6 * max_p)
            continue;
        const std::complex<double> r = av[k] / pv[k];
        if (used == 0) {
            rmin = rmax = r.real();
        } else {
            rmin = std::min(rmin, r.real());
            rmax = std::max(rmax, r.real());
        }
        rsum += r.real();
        imax = std::max(imax, std::abs(r.imag()));
        ++used;
    }
    rec.ratio_to_state_min = rmin;
    rec.ratio_to_state_max = rmax;
    rec.ratio_to_state_mean = used > 0 ? rsum / double(used) : 0.0;
    rec.ratio_imag_max = imax;

    std::complex<double> num{0.0, 0.0};
    double den = 0.0, anorm = 0.0;
    for (std::size_t k = 0; k < av.size(); ++k) {
        num += std::conj(bv[k]) * av[k];
        den += std::norm(bv[k]);
        anorm += std::norm(av[k]);
    }
    rec.fitted_ratio_defined = den > 1e-20 * (anorm + 1.0) && max_b > 1e-9 * m0 * m0 * max_p;
    rec.fitted_ratio = rec.fitted_ratio_defined ? num / den : std::complex<double>{0.0, 0.0};

    rec.notes = state.spec().equal_masses()
                    ? "equal masses: the center-of-momentum form annihilates the state, so "
                      "no proportionality constant is defined"
                    : "unequal masses: neither form annihilates the state; the pointwise "
                      "ratio to the state varies across the sample set";
    return rec;
}

} // namespace osclab
