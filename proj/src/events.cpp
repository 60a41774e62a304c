#include "stickysim/events.hpp"

#include "stickysim/errors.hpp"
#include "stickysim/particle.hpp"

#include <stdexcept>

namespace stickysim {

const Segment& Trajectory::segment_at(int index, const Scalar& t) const {
    const auto& segs = paths.at(static_cast<std::size_t>(index));
    if (segs.empty()) throw std::logic_error("trajectory index has no segments");
    if (t < segs.front().t_start || t > segs.back().t_end)
        throw std::out_of_range("trajectory time out of range");
    // Right-continuous: at an interior breakpoint return the later segment.
    for (std::size_t k = segs.size(); k-- > 0;)
        if (segs[k].t_start <= t) return segs[k];
    return segs.front();
}

VecN Trajectory::position_at(int index, const Scalar& t) const {
    return segment_at(index, t).position_at(t);
}

VecN Trajectory::velocity_at(int index, const Scalar& t) const {
    return segment_at(index, t).velocity;
}

void validate_trajectory(const Trajectory& traj, const Scalar& tol) {
    if (traj.dimension < 1) throw InputError("trajectory: dimension must be >= 1");
    if (traj.size() == 0) throw InputError("trajectory: empty");
    if (traj.masses.size() != traj.paths.size())
        throw InputError("trajectory: one mass per index required");
    if (traj.horizon.sign() <= 0) throw InputError("trajectory: horizon must be > 0");
    for (int i = 0; i < traj.size(); ++i) {
        const auto& segs = traj.paths[i];
        if (segs.empty()) throw InputError("trajectory: index without segments");
        if (!segs.front().t_start.is_zero()) throw InputError("trajectory: path must start at t=0");
        if (segs.back().t_end != traj.horizon)
            throw InputError("trajectory: path must end at the horizon");
        for (std::size_t k = 0; k < segs.size(); ++k) {
            const Segment& s = segs[k];
            if (s.t_end < s.t_start) throw InputError("trajectory: segment with t_end < t_start");
            if (s.position_start.dim() != traj.dimension || s.velocity.dim() != traj.dimension)
                throw InputError("trajectory: segment dimension mismatch");
            if (k + 1 < segs.size()) {
                const Segment& n = segs[k + 1];
                if (n.t_start != s.t_end) throw InputError("trajectory: segments not contiguous");
                if (!coincide(n.position_start, s.position_at(s.t_end), tol))
                    throw InputError("trajectory: path not continuous at a breakpoint");
            }
        }
    }
}

Scalar EnergyProfile::value_at(const Scalar& t) const {
    if (times.empty()) throw std::logic_error("empty energy profile");
    if (t < times.front()) throw std::out_of_range("energy profile time out of range");
    for (std::size_t k = times.size(); k-- > 0;)
        if (times[k] <= t) return values[k];
    return values.front();
}

} // namespace stickysim
