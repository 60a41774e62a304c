#include "stickysim/engine.hpp"

#include "stickysim/checks.hpp"
#include "stickysim/errors.hpp"

#include <algorithm>
#include <numeric>

namespace stickysim {

namespace {

struct UnionFind {
    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), std::size_t{0});
    }
    std::size_t find(std::size_t x) {
        std::size_t root = x;
        while (parent[root] != root) root = parent[root];
        while (parent[x] != root) {
            std::size_t next = parent[x];
            parent[x] = root;
            x = next;
        }
        return root;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
    std::vector<std::size_t> parent;
};

Scalar dedup_tol(Backend b) {
    return b == Backend::Rational ? Scalar::rational(0) : Scalar::real(kEventTimeDedup);
}

} // namespace

std::optional<Scalar> pair_collision_time(const Particle& a, const Particle& b,
                                          const Scalar& tol) {
    VecN dx = b.position - a.position;
    VecN dv = b.velocity - a.velocity;
    Scalar dv2 = dv.norm2();
    if (dv2.is_zero()) return std::nullopt;
    Scalar t = -dx.dot(dv) / dv2;
    if (t.sign() <= 0) return std::nullopt;
    if ((dx + t * dv).norm2() > tol * tol) return std::nullopt;
    return t;
}

std::optional<NextEvent> next_event(const SystemState& state, const Scalar& horizon,
                                    const Scalar& tol) {
    const auto& ps = state.particles;
    const std::size_t n = ps.size();
    if (n < 2) return std::nullopt;

    // Pairs coincident right now were passed at this instant; skip them.
    std::vector<std::pair<std::size_t, std::size_t>> skip;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (coincide(ps[i].position, ps[j].position, tol)) skip.emplace_back(i, j);
    auto skipped = [&](std::size_t i, std::size_t j) {
        return std::find(skip.begin(), skip.end(), std::make_pair(i, j)) != skip.end();
    };

    struct Candidate {
        std::size_t i, j;
        Scalar time; // absolute
    };
    std::vector<Candidate> candidates;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (skipped(i, j)) continue;
            if (auto dt = pair_collision_time(ps[i], ps[j], tol)) {
                Scalar t_abs = state.time + *dt;
                if (t_abs <= horizon) candidates.push_back({i, j, t_abs});
            }
        }
    if (candidates.empty()) return std::nullopt;

    Scalar t_min = candidates[0].time;
    for (const auto& c : candidates) t_min = min(t_min, c.time);

    std::vector<VecN> at(n, VecN{});
    Scalar dt = t_min - state.time;
    for (std::size_t i = 0; i < n; ++i) at[i] = ps[i].position + dt * ps[i].velocity;

    UnionFind uf(n);
    Scalar dedup = dedup_tol(t_min.backend());
    for (const auto& c : candidates)
        if (c.time <= t_min + dedup) uf.unite(c.i, c.j);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (!skipped(i, j) && coincide(at[i], at[j], tol)) uf.unite(i, j);

    std::vector<std::vector<int>> groups(n);
    for (std::size_t i = 0; i < n; ++i) groups[uf.find(i)].push_back(static_cast<int>(i));

    NextEvent ev{t_min, {}};
    for (auto& g : groups)
        if (g.size() >= 2) ev.clusters.push_back(std::move(g));
    if (ev.clusters.empty()) return std::nullopt; // cannot happen with a valid candidate

    // Canonical order: by smallest original member index in the cluster.
    auto min_member = [&](const std::vector<int>& cluster) {
        int m = ps[cluster[0]].members[0];
        for (int idx : cluster)
            for (int mem : ps[idx].members) m = std::min(m, mem);
        return m;
    };
    std::sort(ev.clusters.begin(), ev.clusters.end(),
              [&](const auto& a, const auto& b) { return min_member(a) < min_member(b); });
    return ev;
}

Particle merge_cluster(const std::vector<Particle>& ps, const Scalar& tol) {
    if (ps.empty()) throw std::invalid_argument("merge_cluster: empty cluster");
    for (std::size_t i = 0; i < ps.size(); ++i)
        for (std::size_t j = i + 1; j < ps.size(); ++j)
            if (!coincide(ps[i].position, ps[j].position, tol))
                throw std::invalid_argument("merge_cluster: positions do not coincide");
    Particle merged;
    merged.mass = ps[0].mass;
    for (std::size_t i = 1; i < ps.size(); ++i) merged.mass += ps[i].mass;
    merged.position = barycenter(ps);
    merged.velocity = momentum(ps) / merged.mass;
    for (const auto& p : ps)
        merged.members.insert(merged.members.end(), p.members.begin(), p.members.end());
    std::sort(merged.members.begin(), merged.members.end());
    return merged;
}

Scalar cluster_energy_drop(const std::vector<Particle>& ps) {
    Scalar total = ps[0].mass;
    for (std::size_t i = 1; i < ps.size(); ++i) total += ps[i].mass;
    return energy(ps) - momentum(ps).norm2() / (2 * total);
}

ProviderRunResult evolve_with_provider(
    const Scenario& scenario,
    const std::function<std::optional<Decision>(int ordinal)>& provider) {
    validate_scenario(scenario);

    const int n = static_cast<int>(scenario.particles.size());
    std::vector<Particle> live = scenario.particles;

    struct OpenSegment {
        Scalar t_start;
        VecN position_start;
    };
    std::vector<OpenSegment> open;
    open.reserve(live.size());
    for (const auto& p : live) open.push_back({Scalar::zero(scenario.backend), p.position});

    ProviderRunResult out;
    out.trajectory.dimension = scenario.dimension;
    out.trajectory.backend = scenario.backend;
    out.trajectory.horizon = scenario.horizon;
    out.trajectory.masses.resize(n, Scalar::zero(scenario.backend));
    out.trajectory.paths.resize(n);
    for (const auto& p : scenario.particles)
        for (int m : p.members) out.trajectory.masses[m] = p.mass;

    Scalar now = Scalar::zero(scenario.backend);
    int ordinal = 0;

    auto close_paths = [&](const Scalar& t_end) {
        for (std::size_t k = 0; k < live.size(); ++k) {
            Segment seg{open[k].t_start, t_end, open[k].position_start, live[k].velocity};
            for (int m : live[k].members) out.trajectory.paths[m].push_back(seg);
        }
    };

    while (true) {
        SystemState state{now, scenario.dimension, live};
        auto ev = next_event(state, scenario.horizon, scenario.tolerance);
        if (!ev) break;
        if (static_cast<int>(out.events.size()) >= scenario.event_cap)
            throw BudgetExceeded("event cap exceeded at t=" + now.str());

        Scalar dt = ev->time - now;
        for (std::size_t k = 0; k < live.size(); ++k)
            live[k].position += dt * live[k].velocity;

        CollisionEvent record{ev->time, {}};
        std::vector<char> remove(live.size(), 0);
        std::vector<Particle> merged_new;

        for (const auto& cluster : ev->clusters) {
            std::vector<Particle> group;
            group.reserve(cluster.size());
            for (int idx : cluster) group.push_back(live[idx]);

            auto decision = provider(ordinal);
            if (!decision) {
                out.decisions_consumed = ordinal;
                out.complete = false;
                return out;
            }
            ++ordinal;
            bool stick = *decision == Decision::Stick;

            EventCluster ec;
            for (const auto& g : group) {
                ec.members.push_back(g.members);
                ec.masses.push_back(g.mass);
                ec.pre_velocities.push_back(g.velocity);
            }
            Particle merged = merge_cluster(group, scenario.tolerance);
            ec.post_velocity = merged.velocity;
            ec.energy_drop = stick ? cluster_energy_drop(group) : Scalar::zero(scenario.backend);
            ec.stuck = stick;
            record.clusters.push_back(std::move(ec));

            if (stick) {
                for (int idx : cluster) {
                    remove[idx] = 1;
                    Segment seg{open[idx].t_start, ev->time, open[idx].position_start,
                                live[idx].velocity};
                    for (int m : live[idx].members) out.trajectory.paths[m].push_back(seg);
                }
                merged_new.push_back(std::move(merged));
            }
        }
        out.events.push_back(std::move(record));

        std::vector<Particle> next_live;
        std::vector<OpenSegment> next_open;
        for (std::size_t k = 0; k < live.size(); ++k) {
            if (remove[k]) continue;
            next_live.push_back(std::move(live[k]));
            next_open.push_back(open[k]); // segment continues, velocity unchanged
        }
        for (auto& m : merged_new) {
            next_open.push_back({ev->time, m.position});
            next_live.push_back(std::move(m));
        }
        live = std::move(next_live);
        open = std::move(next_open);
        now = ev->time;
    }

    close_paths(scenario.horizon);
    out.decisions_consumed = ordinal;
    out.complete = true;
    return out;
}

EvolveResult evolve(const Scenario& scenario) {
    auto run = evolve_with_provider(scenario, [](int) { return Decision::Stick; });
    return {std::move(run.trajectory), std::move(run.events)};
}

PolicyEvolveResult evolve_with_policy(const Scenario& scenario, const Policy& policy) {
    auto run = evolve_with_provider(scenario, [&](int ordinal) -> std::optional<Decision> {
        if (ordinal >= static_cast<int>(policy.decisions.size())) return std::nullopt;
        return policy.decisions[static_cast<std::size_t>(ordinal)];
    });
    if (!run.complete)
        throw InputError("policy shorter than the realized event sequence (" +
                         std::to_string(run.decisions_consumed) + " decisions consumed)");
    if (run.decisions_consumed != static_cast<int>(policy.decisions.size()))
        throw InputError("policy longer than the realized event sequence");
    PolicyEvolveResult out{std::move(run.trajectory), std::move(run.events), {}};
    out.energy = energy_profile(out.trajectory);
    return out;
}

Trajectory free_flight_trajectory(const Scenario& scenario) {
    validate_scenario(scenario);
    Trajectory traj;
    traj.dimension = scenario.dimension;
    traj.backend = scenario.backend;
    traj.horizon = scenario.horizon;
    for (const auto& p : scenario.particles) {
        traj.masses.push_back(p.mass);
        traj.paths.push_back({Segment{Scalar::zero(scenario.backend), scenario.horizon,
                                      p.position, p.velocity}});
    }
    return traj;
}

} // namespace stickysim
