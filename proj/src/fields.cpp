#include "osclab/fields.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "osclab/hermite.hpp"

namespace osclab {

namespace {

constexpr int kMaxLevel = 250;
constexpr int kMaxTPow = 120;

const std::complex<double> kI{0.0, 1.0};

void accumulate(HermiteField::TermMap& out, HermiteField::Key k, std::complex<double> c) {
    auto [it, inserted] = out.try_emplace(k, c);
    if (!inserted)
        it->second += c;
}

void drop_zeros(HermiteField::TermMap& m) {
    for (auto it = m.begin(); it != m.end();) {
        if (it->second == std::complex<double>{0.0, 0.0})
            it = m.erase(it);
        else
            ++it;
    }
}

} // namespace

FrameGeometry::FrameGeometry(const FrameMomentum& f, double omega)
    : frame(f), omega_big(omega), sqrt_omega(std::sqrt(omega)) {
    if (!(omega > 0.0))
        throw std::domain_error("FrameGeometry: omega must be > 0");
    const Eigen::Vector3d p = f.spatial();
    const double m0 = f.rest_mass();
    const double e = f.energy();
    dxi_dx = sqrt_omega *
             (Eigen::Matrix3d::Identity() + p * p.transpose() / (m0 * (m0 + e)));
    dxi_dt = -sqrt_omega * p / m0;
    x_coef = (Eigen::Matrix3d::Identity() - p * p.transpose() / (e * (m0 + e))) / sqrt_omega;
    x_tcoef = p / e;
}

Eigen::Vector3d FrameGeometry::xi_of(const FourVector& x) const {
    return xi_arguments(x, frame, omega_big);
}

FourVector FrameGeometry::event_of(const Eigen::Vector3d& xi, double t) const {
    FourVector out;
    out.set_spatial(x_coef * xi + x_tcoef * t);
    out[3] = t;
    return out;
}

bool FrameGeometry::same_frame(const FrameGeometry& o) const {
    return omega_big == o.omega_big && frame.rest_mass() == o.frame.rest_mass() &&
           frame.p().raw() == o.frame.p().raw();
}

HermiteField::HermiteField(std::shared_ptr<const FrameGeometry> geom, TermMap terms)
    : geom_(std::move(geom)), terms_(std::move(terms)) {
    if (!geom_)
        throw std::invalid_argument("HermiteField: null geometry");
    drop_zeros(terms_);
}

HermiteField::Key HermiteField::key_of(int tpow, int l1, int l2, int l3) {
    if (tpow < 0 || tpow > kMaxTPow)
        throw std::domain_error("HermiteField: t power out of range");
    if (l1 < 0 || l2 < 0 || l3 < 0 || l1 > kMaxLevel || l2 > kMaxLevel || l3 > kMaxLevel)
        throw std::domain_error("HermiteField: Hermite level out of range");
    return (Key(tpow) << 24) | (Key(l1) << 16) | (Key(l2) << 8) | Key(l3);
}

std::array<int, 4> HermiteField::unpack(Key k) {
    return {int((k >> 24) & 0xff), int((k >> 16) & 0xff), int((k >> 8) & 0xff),
            int(k & 0xff)};
}

HermiteField HermiteField::eigenstate(const OscillatorState& state) {
    auto geom = std::make_shared<FrameGeometry>(state.momentum(), state.spec().omega_big);
    const double pref = std::pow(state.spec().omega_big / M_PI, 0.75);
    const QuantumNumbers& q = state.qns();
    TermMap terms;
    terms[key_of(0, q.l1, q.l2, q.l3)] = pref;
    return HermiteField(std::move(geom), std::move(terms));
}

std::complex<double> HermiteField::value(const FourVector& x) const {
    if (terms_.empty())
        return {0.0, 0.0};
    int lmax[3] = {0, 0, 0};
    int tmax = 0;
    for (const auto& [k, c] : terms_) {
        const auto u = unpack(k);
        tmax = std::max(tmax, u[0]);
        for (int a = 0; a < 3; ++a)
            lmax[a] = std::max(lmax[a], u[a + 1]);
    }
    const Eigen::Vector3d xi = geom_->xi_of(x);
    std::vector<double> tab[3];
    for (int a = 0; a < 3; ++a) {
        tab[a].resize(std::size_t(lmax[a]) + 1);
        hermite_phi_fill(xi(a), tab[a]);
    }
    std::vector<double> tpow(std::size_t(tmax) + 1);
    tpow[0] = 1.0;
    for (int k = 1; k <= tmax; ++k)
        tpow[std::size_t(k)] = tpow[std::size_t(k) - 1] * x.time();
    std::complex<double> acc{0.0, 0.0};
    for (const auto& [k, c] : terms_) {
        const auto u = unpack(k);
        acc += c * tpow[std::size_t(u[0])] * tab[0][std::size_t(u[1])] *
               tab[1][std::size_t(u[2])] * tab[2][std::size_t(u[3])];
    }
    return acc;
}

HermiteField HermiteField::scaled(std::complex<double> c) const {
    TermMap out = terms_;
    for (auto& [k, v] : out)
        v *= c;
    return HermiteField(geom_, std::move(out));
}

HermiteField HermiteField::plus(const HermiteField& o) const {
    if (!geom_->same_frame(*o.geom_))
        throw std::logic_error("HermiteField::plus: fields live in different frames");
    TermMap out = terms_;
    for (const auto& [k, c] : o.terms_)
        accumulate(out, k, c);
    return HermiteField(geom_, std::move(out));
}

HermiteField HermiteField::multiplied(const LinearForm& m) const {
    TermMap out;
    for (const auto& [key, c] : terms_) {
        const auto u = unpack(key);
        if (m.c0 != std::complex<double>{0.0, 0.0})
            accumulate(out, key, c * m.c0);
        for (int a = 0; a < 3; ++a) {
            const std::complex<double> w = m.cxi(a);
            if (w == std::complex<double>{0.0, 0.0})
                continue;
            const int l = u[a + 1];
            std::array<int, 4> v = u;
            if (l > 0) {
                v[a + 1] = l - 1;
                accumulate(out, key_of(v[0], v[1], v[2], v[3]),
                           c * w * std::sqrt(0.5 * l));
            }
            v[a + 1] = l + 1;
            accumulate(out, key_of(v[0], v[1], v[2], v[3]),
                       c * w * std::sqrt(0.5 * (l + 1)));
        }
        if (m.ct != std::complex<double>{0.0, 0.0})
            accumulate(out, key_of(u[0] + 1, u[1], u[2], u[3]), c * m.ct);
    }
    return HermiteField(geom_, std::move(out));
}

HermiteField HermiteField::differentiated(const DiffForm& d) const {
    TermMap out;
    for (const auto& [key, c] : terms_) {
        const auto u = unpack(key);
        for (int a = 0; a < 3; ++a) {
            const std::complex<double> w = d.a(a);
            if (w == std::complex<double>{0.0, 0.0})
                continue;
            const int l = u[a + 1];
            std::array<int, 4> v = u;
            if (l > 0) {
                v[a + 1] = l - 1;
                accumulate(out, key_of(v[0], v[1], v[2], v[3]),
                           c * w * std::sqrt(0.5 * l));
            }
            v[a + 1] = l + 1;
            accumulate(out, key_of(v[0], v[1], v[2], v[3]),
                       -c * w * std::sqrt(0.5 * (l + 1)));
        }
        if (d.b != std::complex<double>{0.0, 0.0} && u[0] > 0)
            accumulate(out, key_of(u[0] - 1, u[1], u[2], u[3]), c * d.b * double(u[0]));
    }
    return HermiteField(geom_, std::move(out));
}

int HermiteField::max_level(int axis) const {
    if (axis < 0 || axis > 2)
        throw std::out_of_range("HermiteField::max_level: axis must be 0..2");
    int m = 0;
    for (const auto& [k, c] : terms_)
        m = std::max(m, unpack(k)[axis + 1]);
    return m;
}

int HermiteField::max_tpow() const {
    int m = 0;
    for (const auto& [k, c] : terms_)
        m = std::max(m, unpack(k)[0]);
    return m;
}

ScalarField::ScalarField(Eval eval, std::shared_ptr<const FrameGeometry> frame_hint)
    : eval_(std::move(eval)), geom_(std::move(frame_hint)) {}

ScalarField::ScalarField(HermiteField closed_form)
    : sym_(std::make_shared<HermiteField>(std::move(closed_form))) {
    geom_ = sym_->geometry_ptr();
    eval_ = [sym = sym_](const FourVector& x) { return sym->value(x); };
}

ScalarField ScalarField::eigenstate(const OscillatorState& state) {
    return ScalarField(HermiteField::eigenstate(state));
}

const HermiteField& ScalarField::closed_form() const {
    if (!sym_)
        throw std::logic_error("ScalarField: no closed form attached; the analytic engine "
                               "needs fields built from an OscillatorState");
    return *sym_;
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
    if (a.sym_ && b.sym_ && a.sym_->geometry().same_frame(b.sym_->geometry()))
        return ScalarField(a.sym_->plus(*b.sym_));
    return ScalarField([a, b](const FourVector& x) { return a(x) + b(x); },
                       a.geom_ ? a.geom_ : b.geom_);
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
    return a + (std::complex<double>{-1.0, 0.0} * b);
}

ScalarField operator*(std::complex<double> c, const ScalarField& f) {
    if (f.sym_)
        return ScalarField(f.sym_->scaled(c));
    return ScalarField([c, f](const FourVector& x) { return c * f(x); }, f.geom_);
}

BiScalarField::BiScalarField(Eval eval, std::shared_ptr<const FrameGeometry> frame_hint)
    : eval_(std::move(eval)), geom_(std::move(frame_hint)) {}

BiScalarField BiScalarField::eigenstate(const OscillatorState& state) {
    return from_hermite(HermiteField::eigenstate(state), state.momentum().p());
}

BiScalarField BiScalarField::from_hermite(HermiteField rel, const FourVector& p_com) {
    auto relp = std::make_shared<const HermiteField>(std::move(rel));
    BiScalarField out;
    out.geom_ = relp->geometry_ptr();
    out.payload_ = SeparableHermite{relp, p_com};
    out.eval_ = [relp, p_com](const FourVector& x, const FourVector& bigx) {
        return relp->value(x) * std::exp(kI * minkowski_dot(p_com, bigx));
    };
    return out;
}

BiScalarField BiScalarField::plane_wave(const FourVector& k_rel, const FourVector& p_com,
                                        std::complex<double> scale) {
    BiScalarField out;
    out.payload_ = SeparablePlaneWave{k_rel, p_com, scale};
    out.eval_ = [k_rel, p_com, scale](const FourVector& x, const FourVector& bigx) {
        return scale * std::exp(kI * (minkowski_dot(k_rel, x) + minkowski_dot(p_com, bigx)));
    };
    return out;
}

BiScalarField operator+(const BiScalarField& a, const BiScalarField& b) {
    const auto* ah = std::get_if<BiScalarField::SeparableHermite>(&a.payload_);
    const auto* bh = std::get_if<BiScalarField::SeparableHermite>(&b.payload_);
    if (ah && bh && ah->rel->geometry().same_frame(bh->rel->geometry()) &&
        ah->p_com.raw() == bh->p_com.raw())
        return BiScalarField::from_hermite(ah->rel->plus(*bh->rel), ah->p_com);
    BiScalarField out;
    out.eval_ = [a, b](const FourVector& x, const FourVector& bigx) {
        return a(x, bigx) + b(x, bigx);
    };
    out.geom_ = a.geom_ ? a.geom_ : b.geom_;
    return out;
}

BiScalarField operator*(std::complex<double> c, const BiScalarField& f) {
    if (const auto* h = std::get_if<BiScalarField::SeparableHermite>(&f.payload_))
        return BiScalarField::from_hermite(h->rel->scaled(c), h->p_com);
    if (const auto* w = std::get_if<BiScalarField::SeparablePlaneWave>(&f.payload_))
        return BiScalarField::plane_wave(w->k_rel, w->p_com, c * w->scale);
    BiScalarField out;
    out.eval_ = [c, f](const FourVector& x, const FourVector& bigx) { return c * f(x, bigx); };
    out.geom_ = f.geom_;
    return out;
}

} // namespace osclab
