#include "stickysim/particle.hpp"

#include <stdexcept>

namespace stickysim {

bool coincide(const VecN& p, const VecN& q, const Scalar& tol) {
    if (p.dim() != q.dim()) throw std::invalid_argument("coincide: dimension mismatch");
    if (tol.sign() < 0) throw std::invalid_argument("coincide: negative tolerance");
    if (tol.backend() == Backend::Rational && !tol.is_zero())
        throw std::invalid_argument("coincide: rational backend requires tol = 0");
    return (p - q).norm2() <= tol * tol;
}

VecN barycenter(const std::vector<Particle>& particles) {
    if (particles.empty()) throw std::invalid_argument("barycenter of empty particle list");
    Scalar total = particles[0].mass;
    VecN weighted = particles[0].position * particles[0].mass;
    for (std::size_t i = 1; i < particles.size(); ++i) {
        total += particles[i].mass;
        weighted += particles[i].position * particles[i].mass;
    }
    if (total.sign() <= 0) throw std::invalid_argument("barycenter needs positive total mass");
    return weighted / total;
}

VecN momentum(const std::vector<Particle>& particles) {
    if (particles.empty()) throw std::invalid_argument("momentum of empty particle list");
    VecN acc = particles[0].velocity * particles[0].mass;
    for (std::size_t i = 1; i < particles.size(); ++i)
        acc += particles[i].velocity * particles[i].mass;
    return acc;
}

VecN momentum(const SystemState& state) { return momentum(state.particles); }

Scalar energy(const std::vector<Particle>& particles) {
    if (particles.empty()) throw std::invalid_argument("energy of empty particle list");
    Scalar acc = particles[0].mass * particles[0].velocity.norm2();
    for (std::size_t i = 1; i < particles.size(); ++i)
        acc += particles[i].mass * particles[i].velocity.norm2();
    return acc / 2;
}

Scalar energy(const SystemState& state) { return energy(state.particles); }

} // namespace stickysim
