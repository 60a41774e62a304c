#include "stickysim/checks.hpp"

#include "stickysim/errors.hpp"
#include "stickysim/particle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stickysim {

namespace {

Scalar grid_dedup(Backend b) {
    return b == Backend::Rational ? Scalar::rational(0) : Scalar::real(kEventTimeDedup);
}

void append_breakpoints(const Trajectory& traj, int i, std::vector<Scalar>& out) {
    for (const auto& seg : traj.paths[i]) out.push_back(seg.t_start);
    out.push_back(traj.paths[i].back().t_end);
}

std::vector<Scalar> sorted_dedup(std::vector<Scalar> ts, Backend b) {
    std::sort(ts.begin(), ts.end());
    Scalar dedup = grid_dedup(b);
    std::vector<Scalar> out;
    for (auto& t : ts)
        if (out.empty() || t > out.back() + dedup) out.push_back(std::move(t));
    return out;
}

std::vector<Scalar> pair_grid(const Trajectory& traj, int i, int j) {
    std::vector<Scalar> ts;
    append_breakpoints(traj, i, ts);
    append_breakpoints(traj, j, ts);
    return sorted_dedup(std::move(ts), traj.backend);
}

std::vector<Scalar> global_grid(const Trajectory& traj) {
    std::vector<Scalar> ts;
    for (int i = 0; i < traj.size(); ++i) append_breakpoints(traj, i, ts);
    return sorted_dedup(std::move(ts), traj.backend);
}

std::vector<CoincidencePiece> merge_pieces(std::vector<CoincidencePiece> raw, Backend b) {
    Scalar dedup = grid_dedup(b);
    std::vector<CoincidencePiece> out;
    for (auto& p : raw) {
        if (!out.empty() && p.start <= out.back().end + dedup)
            out.back().end = max(out.back().end, p.end);
        else
            out.push_back(std::move(p));
    }
    return out;
}

} // namespace

std::vector<CoincidencePiece> pair_coincidence(const Trajectory& traj, int i, int j,
                                               const Scalar& tol) {
    auto grid = pair_grid(traj, i, j);
    Scalar tol2 = tol * tol;
    std::vector<CoincidencePiece> raw;
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
        const Scalar& a = grid[k];
        const Scalar& b = grid[k + 1];
        VecN da = traj.position_at(i, a) - traj.position_at(j, a);
        VecN dv = traj.velocity_at(i, a) - traj.velocity_at(j, a);
        Scalar len = b - a;
        VecN db = da + len * dv;
        bool ca = da.norm2() <= tol2;
        bool cb = db.norm2() <= tol2;
        if (ca && cb) {
            raw.push_back({a, b});
            continue;
        }
        if (ca) raw.push_back({a, a});
        Scalar dv2 = dv.norm2();
        if (!dv2.is_zero()) {
            Scalar trel = -da.dot(dv) / dv2;
            if (trel > 0 && trel < len && (da + trel * dv).norm2() <= tol2)
                raw.push_back({a + trel, a + trel});
        }
        if (cb) raw.push_back({b, b});
    }
    return merge_pieces(std::move(raw), traj.backend);
}

std::vector<StickyViolation> check_sticky(const Trajectory& traj, const Scalar& tol) {
    std::vector<StickyViolation> violations;
    Scalar dedup = grid_dedup(traj.backend);
    for (int i = 0; i < traj.size(); ++i)
        for (int j = i + 1; j < traj.size(); ++j) {
            auto pieces = pair_coincidence(traj, i, j, tol);
            if (pieces.empty()) continue;
            bool sticky = pieces.size() == 1 && pieces[0].end >= traj.horizon - dedup;
            if (!sticky)
                violations.push_back({i, j, pieces[0].start, pieces[0].end});
        }
    return violations;
}

double WeakReport::max_residual() const { return std::sqrt(max_residual2.to_double()); }

WeakReport check_weak(const Trajectory& traj, const Scalar& tol) {
    const int n = traj.size();
    const Backend backend = traj.backend;
    auto grid = global_grid(traj);
    Scalar dedup = grid_dedup(backend);

    // Coincidence pieces for every unordered pair, indexed i*n+j (i<j).
    std::vector<std::vector<CoincidencePiece>> pieces(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            pieces[static_cast<std::size_t>(i) * n + j] = pair_coincidence(traj, i, j, tol);

    auto together_on = [&](int i, int j, const Scalar& a, const Scalar& b) {
        const auto& ps =
            pieces[static_cast<std::size_t>(std::min(i, j)) * n + std::max(i, j)];
        for (const auto& p : ps)
            if (p.start <= a + dedup && p.end >= b - dedup) return true;
        return false;
    };

    WeakReport report{Scalar::zero(backend), -1, Scalar::zero(backend)};
    for (int i = 0; i < n; ++i) {
        VecN integral = traj.initial_position(i);
        for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
            const Scalar& a = grid[k];
            const Scalar& b = grid[k + 1];
            Scalar mass_sum = traj.masses[i];
            VecN mom = traj.masses[i] * traj.initial_velocity(i);
            for (int j = 0; j < n; ++j) {
                if (j == i || !together_on(i, j, a, b)) continue;
                mass_sum += traj.masses[j];
                mom += traj.masses[j] * traj.initial_velocity(j);
            }
            integral += (b - a) * (mom / mass_sum);
            Scalar res2 = (traj.position_at(i, b) - integral).norm2();
            if (res2 > report.max_residual2) {
                report.max_residual2 = res2;
                report.worst_index = i;
                report.worst_time = b;
            }
        }
    }
    return report;
}

EnergyProfile energy_profile(const Trajectory& traj) {
    auto grid = global_grid(traj);
    EnergyProfile profile;
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
        Scalar e = Scalar::zero(traj.backend);
        for (int i = 0; i < traj.size(); ++i)
            e += traj.masses[i] * traj.velocity_at(i, grid[k]).norm2();
        e = e / 2;
        if (profile.values.empty() || e != profile.values.back()) {
            profile.times.push_back(grid[k]);
            profile.values.push_back(std::move(e));
        }
    }
    if (profile.times.empty()) { // single-instant trajectory cannot arise, but stay total
        profile.times.push_back(Scalar::zero(traj.backend));
        profile.values.push_back(Scalar::zero(traj.backend));
    }
    return profile;
}

bool is_energy_admissible(const EnergyProfile& profile) {
    for (std::size_t k = 0; k + 1 < profile.values.size(); ++k) {
        const Scalar& cur = profile.values[k];
        const Scalar& next = profile.values[k + 1];
        if (cur.backend() == Backend::Rational) {
            if (next > cur) return false;
        } else {
            double slack = 1e-12 * std::max(1.0, std::abs(cur.dbl()));
            if (next.dbl() > cur.dbl() + slack) return false;
        }
    }
    return true;
}

Scalar nonstickiness_phi(const Trajectory& traj, const std::vector<Scalar>& masses,
                         const Scalar& tol) {
    if (static_cast<int>(masses.size()) != traj.size())
        throw std::invalid_argument("nonstickiness_phi: one mass per index required");
    Scalar phi = Scalar::zero(traj.backend);
    for (const auto& v : check_sticky(traj, tol))
        phi += masses[v.i] * masses[v.j];
    return phi;
}

Scalar j_epsilon(const EnergyProfile& profile, const Scalar& eps) {
    double e = eps.to_double();
    if (!(e > 0)) throw InputError("j_epsilon: eps must be > 0");
    if (profile.times.empty()) throw std::invalid_argument("j_epsilon: empty profile");
    double acc = 0;
    for (std::size_t k = 0; k < profile.times.size(); ++k) {
        double lo = std::exp(-profile.times[k].to_double() / e);
        double hi = k + 1 < profile.times.size()
                        ? std::exp(-profile.times[k + 1].to_double() / e)
                        : 0.0;
        acc += profile.values[k].to_double() * e * (lo - hi);
    }
    return Scalar::real(acc);
}

Moments eulerian_moments(const Trajectory& traj, const Scalar& t) {
    if (t.sign() < 0 || t > traj.horizon)
        throw std::out_of_range("eulerian_moments: time out of range");
    Moments m{Scalar::zero(traj.backend), VecN::zero(traj.dimension, traj.backend),
              Scalar::zero(traj.backend)};
    for (int i = 0; i < traj.size(); ++i) {
        VecN v = traj.velocity_at(i, t);
        m.mass += traj.masses[i];
        m.momentum += traj.masses[i] * v;
        m.energy += traj.masses[i] * v.norm2();
    }
    m.energy = m.energy / 2;
    return m;
}

} // namespace stickysim
