#include "stickysim/smoothing.hpp"

#include "stickysim/errors.hpp"
#include "stickysim/rng.hpp"

#include <cmath>
#include <set>
#include <string>
#include <vector>

namespace stickysim {

Scalar smooth_bump(const BallCloud& cloud, const VecN& x) {
    Backend b = cloud.center.backend();
    Scalar d2 = (x - cloud.center).norm2();
    Scalar r2 = cloud.radius * cloud.radius;
    if (d2 >= r2) return Scalar::zero(b);
    double value =
        cloud.amplitude.to_double() * std::exp(-1.0 / (r2.to_double() - d2.to_double()));
    return b == Backend::Float ? Scalar::real(value) : Scalar::rational(Rational(value));
}

VecN collapse_velocity(const VecN& center, const Scalar& s, const VecN& base_velocity,
                       const VecN& x) {
    if (s.sign() <= 0) throw InputError("collapse_velocity: scale must be > 0");
    return base_velocity + (center - x) / s;
}

std::vector<Particle> discretize_ball(BallCloud& cloud, int samples, std::uint64_t seed) {
    if (samples < 1) throw InputError("discretize_ball: samples >= 1 required");
    if (cloud.collapse_scale.sign() <= 0 || cloud.radius != cloud.collapse_scale * cloud.collapse_scale)
        throw InputError("discretize_ball: radius must equal collapse_scale^2");
    if (cloud.target_mass.sign() <= 0) throw InputError("discretize_ball: target mass must be > 0");

    const Backend backend = cloud.center.backend();
    const int dim = cloud.center.dim();
    const int pairs = (samples + 1) / 2;
    const Scalar r2 = cloud.radius * cloud.radius;
    const double r2d = r2.to_double();

    Rng rng(seed);
    std::set<std::vector<std::string>> used; // canonical offset keys, both signs
    std::vector<VecN> offsets;
    std::vector<double> weights; // bump value relative to the center value

    while (static_cast<int>(offsets.size()) < pairs) {
        std::vector<Scalar> comps;
        for (int c = 0; c < dim; ++c) comps.push_back(cloud.radius * rng.rational_in_unit(1 << 12));
        VecN d{std::move(comps)};
        if (d.is_zero()) continue;
        Scalar d2 = d.norm2();
        if (d2 >= r2) continue;
        // exp(-1/(r^2-d^2)) / exp(-1/r^2): the common center factor cancels in
        // the normalization, and the shifted form stays representable for
        // small radii. Reject samples whose relative weight underflows.
        double w = std::exp(1.0 / r2d - 1.0 / (r2d - d2.to_double()));
        if (!(w >= 1e-12)) continue;
        std::vector<std::string> key;
        for (int c = 0; c < dim; ++c) key.push_back(d[c].str());
        std::vector<std::string> neg_key;
        for (int c = 0; c < dim; ++c) neg_key.push_back((-d[c]).str());
        if (used.count(key) || used.count(neg_key)) continue;
        used.insert(key);
        offsets.push_back(std::move(d));
        weights.push_back(w);
    }

    Scalar weight_sum = Scalar::zero(backend);
    std::vector<Scalar> pair_weight;
    for (double w : weights) {
        Scalar sw = backend == Backend::Float ? Scalar::real(w) : Scalar::rational(Rational(w));
        pair_weight.push_back(sw);
        weight_sum += 2 * sw;
    }

    cloud.sample_positions.clear();
    cloud.sample_masses.clear();
    std::vector<Particle> out;
    for (std::size_t p = 0; p < offsets.size(); ++p) {
        Scalar mass = cloud.target_mass * pair_weight[p] / weight_sum;
        for (int sign = 0; sign < 2; ++sign) {
            VecN pos = sign == 0 ? cloud.center + offsets[p] : cloud.center - offsets[p];
            VecN vel = collapse_velocity(cloud.center, cloud.collapse_scale,
                                         cloud.base_velocity, pos);
            cloud.sample_positions.push_back(pos);
            cloud.sample_masses.push_back(mass);
            out.push_back(Particle{mass, std::move(pos), std::move(vel), {}});
        }
    }
    return out;
}

Scenario cloud_scenario(const BallCloud& cloud, const Scalar& horizon, int event_cap) {
    Scenario s;
    s.dimension = cloud.center.dim();
    s.backend = cloud.center.backend();
    s.tolerance = s.backend == Backend::Rational ? Scalar::rational(0)
                                                 : Scalar::real(kDefaultPositionTol);
    s.horizon = horizon;
    s.event_cap = event_cap;
    for (std::size_t i = 0; i < cloud.sample_positions.size(); ++i) {
        VecN pos = cloud.sample_positions[i];
        VecN vel = collapse_velocity(cloud.center, cloud.collapse_scale, cloud.base_velocity, pos);
        s.particles.push_back(
            Particle{cloud.sample_masses[i], std::move(pos), std::move(vel),
                     {static_cast<int>(i)}});
    }
    validate_scenario(s);
    return s;
}

namespace {

/// min over t in [0, window] of |dc + t dv|^2, exactly.
Scalar min_separation2(const VecN& dc, const VecN& dv, const Scalar& window) {
    Scalar best = dc.norm2();
    Scalar at_end = (dc + window * dv).norm2();
    if (at_end < best) best = at_end;
    Scalar dv2 = dv.norm2();
    if (!dv2.is_zero()) {
        Scalar t = -dc.dot(dv) / dv2;
        if (t > 0 && t < window) {
            Scalar interior = (dc + t * dv).norm2();
            if (interior < best) best = interior;
        }
    }
    return best;
}

} // namespace

SmoothResult smooth_scenario(const Scenario& base, const SmoothingSchedule& schedule,
                             std::uint64_t seed) {
    validate_scenario(base);
    if (schedule.initial_scale.sign() <= 0 || schedule.floor.sign() <= 0)
        throw InputError("smooth_scenario: scales must be > 0");
    if (schedule.decay.sign() <= 0 || schedule.decay > 1)
        throw InputError("smooth_scenario: decay must be in (0, 1]");

    const int n = static_cast<int>(base.particles.size());
    std::vector<Scalar> scale;
    for (int k = 0; k < n; ++k) scale.push_back(schedule.initial_scale * pow_int(schedule.decay, k));

    // Shrink until the moving ball envelopes are pairwise separated through
    // the longer of each pair's collapse windows.
    bool all_clear = false;
    while (!all_clear) {
        all_clear = true;
        for (int i = 0; i < n && all_clear; ++i)
            for (int j = i + 1; j < n && all_clear; ++j) {
                Scalar ri = scale[i] * scale[i];
                Scalar rj = scale[j] * scale[j];
                Scalar window = max(scale[i], scale[j]);
                Scalar sep2 = min_separation2(
                    base.particles[i].position - base.particles[j].position,
                    base.particles[i].velocity - base.particles[j].velocity, window);
                Scalar reach = ri + rj;
                if (sep2 <= reach * reach) {
                    scale[i] = scale[i] / 2;
                    scale[j] = scale[j] / 2;
                    if (scale[i] < schedule.floor || scale[j] < schedule.floor)
                        throw BudgetExceeded(
                            "smooth_scenario: no disjoint envelopes above the scale floor "
                            "(particles " + std::to_string(i) + ", " + std::to_string(j) + ")");
                    all_clear = false;
                }
            }
    }

    SmoothResult result;
    result.scenario.dimension = base.dimension;
    result.scenario.backend = base.backend;
    result.scenario.tolerance = base.tolerance;
    result.scenario.horizon = base.horizon;
    result.scenario.event_cap = base.event_cap;

    Rng rng(seed);
    int next_index = 0;
    for (int k = 0; k < n; ++k) {
        SmoothedCloud entry;
        entry.source_index = k;
        entry.cloud.center = base.particles[k].position;
        entry.cloud.collapse_scale = scale[k];
        entry.cloud.radius = scale[k] * scale[k];
        entry.cloud.base_velocity = base.particles[k].velocity;
        entry.cloud.target_mass = base.particles[k].mass;
        auto particles = discretize_ball(entry.cloud, schedule.samples_per_cloud,
                                         rng.child_seed(static_cast<std::uint64_t>(k)));
        entry.first_particle = next_index;
        entry.sample_count = static_cast<int>(particles.size());
        for (auto& p : particles) {
            p.members = {next_index++};
            result.scenario.particles.push_back(std::move(p));
        }
        result.clouds.push_back(std::move(entry));
    }
    validate_scenario(result.scenario);
    return result;
}

} // namespace stickysim
