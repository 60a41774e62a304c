#include "stickysim/scenario.hpp"

#include "stickysim/errors.hpp"

namespace stickysim {

namespace {

void check_vec(const VecN& v, int dim, Backend b, const char* what) {
    if (v.dim() != dim) throw InputError(std::string(what) + ": dimension mismatch");
    for (int i = 0; i < v.dim(); ++i)
        if (v[i].backend() != b) throw InputError(std::string(what) + ": backend mismatch");
}

} // namespace

void validate_scenario(const Scenario& s) {
    if (s.dimension < 1) throw InputError("scenario: dimension must be >= 1");
    if (s.event_cap < 1) throw InputError("scenario: event_cap must be >= 1");
    if (s.horizon.backend() != s.backend || s.tolerance.backend() != s.backend)
        throw InputError("scenario: horizon/tolerance backend mismatch");
    if (s.horizon.sign() <= 0) throw InputError("scenario: horizon must be > 0");
    if (s.tolerance.sign() < 0) throw InputError("scenario: tolerance must be >= 0");
    if (s.backend == Backend::Rational && !s.tolerance.is_zero())
        throw InputError("scenario: rational backend requires tolerance 0");
    if (s.particles.empty()) throw InputError("scenario: no particles");

    for (std::size_t i = 0; i < s.particles.size(); ++i) {
        const Particle& p = s.particles[i];
        if (p.mass.backend() != s.backend) throw InputError("scenario: mass backend mismatch");
        if (p.mass.sign() <= 0) throw InputError("scenario: masses must be > 0");
        check_vec(p.position, s.dimension, s.backend, "scenario position");
        check_vec(p.velocity, s.dimension, s.backend, "scenario velocity");
        // Initial particles are the originals: member set {index}.
        if (p.members != std::vector<int>{static_cast<int>(i)})
            throw InputError("scenario: initial particle " + std::to_string(i) +
                             " must have member set {" + std::to_string(i) + "}");
    }
    for (std::size_t i = 0; i < s.particles.size(); ++i)
        for (std::size_t j = i + 1; j < s.particles.size(); ++j)
            if (coincide(s.particles[i].position, s.particles[j].position, s.tolerance))
                throw InputError("scenario: initial positions are not distinct");
}

namespace {

Scalar convert_scalar(const Scalar& x, Backend target) {
    if (x.backend() == target) return x;
    if (target == Backend::Float) return Scalar::real(x.to_double());
    return Scalar::rational(Rational(x.dbl())); // exact binary expansion
}

VecN convert_vec(const VecN& v, Backend target) {
    std::vector<Scalar> comps;
    comps.reserve(static_cast<std::size_t>(v.dim()));
    for (int i = 0; i < v.dim(); ++i) comps.push_back(convert_scalar(v[i], target));
    return VecN(std::move(comps));
}

} // namespace

Scenario convert_backend(const Scenario& s, Backend target, const Scalar& new_tol) {
    Scenario out = s;
    out.backend = target;
    out.tolerance = new_tol;
    out.horizon = convert_scalar(s.horizon, target);
    for (auto& p : out.particles) {
        p.mass = convert_scalar(p.mass, target);
        p.position = convert_vec(p.position, target);
        p.velocity = convert_vec(p.velocity, target);
    }
    validate_scenario(out);
    return out;
}

} // namespace stickysim
