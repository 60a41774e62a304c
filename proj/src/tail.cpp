#include "stickysim/tail.hpp"

#include "stickysim/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace stickysim {

bool TailParams::in_open_unit_interval() const {
    return alpha > 0 && alpha < 1 && beta > 0 && beta < 1 && gamma > 0 && gamma < 1;
}

bool TailParams::valid() const {
    return in_open_unit_interval() && beta < gamma &&
           alpha * (1 + beta + gamma) < 1;
}

void TailParams::require_valid() const {
    if (!in_open_unit_interval())
        throw InputError("tail params: alpha, beta, gamma must lie in (0,1)");
    if (!(beta < gamma)) throw InputError("tail params: beta < gamma required");
    if (!(alpha * (1 + beta + gamma) < 1))
        throw InputError("tail params: alpha < 1/(1+beta+gamma) required (lemma1 bound), got alpha = " +
                         alpha.str());
}

Scalar free_position(const TailParams& p, int k, const Scalar& t) {
    return pow_int(p.beta, k) + t * (1 - pow_int(p.gamma, k));
}

Scalar free_velocity(const TailParams& p, int k) { return 1 - pow_int(p.gamma, k); }

Scalar barycenter_tail(const TailParams& p, int k, const Scalar& t) {
    if (k < 1) throw std::invalid_argument("barycenter_tail: k >= 1 required");
    if (!p.in_open_unit_interval())
        throw InputError("barycenter_tail: parameters outside (0,1)");
    Scalar one_minus_alpha = 1 - p.alpha;
    return one_minus_alpha * (pow_int(p.beta, k) / (1 - p.alpha * p.beta) +
                              t / one_minus_alpha -
                              t * pow_int(p.gamma, k) / (1 - p.alpha * p.gamma));
}

Scalar barycenter_tail_truncated(const TailParams& p, int k, int last, const Scalar& t) {
    if (k < 1 || last < k)
        throw std::invalid_argument("barycenter_tail_truncated: need 1 <= k <= last");
    Scalar mass = Scalar::zero(p.backend());
    Scalar weighted = Scalar::zero(p.backend());
    for (int j = k; j <= last; ++j) {
        Scalar m = pow_int(p.alpha, j);
        mass += m;
        weighted += m * free_position(p, j, t);
    }
    return weighted / mass;
}

Scalar collision_time_tk(const TailParams& p, int k) {
    if (k < 1) throw std::invalid_argument("collision_time_tk: k >= 1 required");
    if (!p.in_open_unit_interval())
        throw InputError("collision_time_tk: parameters outside (0,1)");
    return ((1 - p.beta) / (1 - p.alpha * p.beta)) *
           ((1 - p.alpha * p.gamma) / (1 - p.gamma)) * pow_int(p.beta / p.gamma, k - 1);
}

bool lemma1_check(const TailParams& p, int k) {
    if (k <= 1) throw std::invalid_argument("lemma1_check: k > 1 required");
    if (!p.in_open_unit_interval())
        throw InputError("lemma1_check: parameters outside (0,1)");
    Scalar t = collision_time_tk(p, k);
    Scalar lhs = free_position(p, k + 1, t);
    Scalar rhs = free_position(p, k - 1, t);
    Scalar bk = barycenter_tail(p, k, t);
    // The defining identity of t_{k-1}; in float mode allow rounding noise.
    if (p.backend() == Backend::Rational) {
        if (rhs != bk) throw std::logic_error("lemma1_check: b_k(t_{k-1}) != x_{k-1}(t_{k-1})");
    } else {
        double scale = std::max(1.0, std::abs(rhs.dbl()));
        if (std::abs(rhs.dbl() - bk.dbl()) > 1e-9 * scale)
            throw std::logic_error("lemma1_check: b_k(t_{k-1}) != x_{k-1}(t_{k-1})");
    }
    return lhs > rhs;
}

Scalar select_tau(const TailParams& p, int k) {
    if (k < 1) throw std::invalid_argument("select_tau: k >= 1 required");
    Scalar t_hi = collision_time_tk(p, k);     // t_{k-1}
    Scalar t_lo = collision_time_tk(p, k + 1); // t_k
    Scalar width = t_hi - t_lo;
    Scalar step = width;
    for (int iter = 0; iter < 200; ++iter) {
        step = step / 2;
        Scalar tau = t_hi - step;
        if (tau > t_lo && free_position(p, k + 1, tau) > barycenter_tail(p, k, tau))
            return tau;
    }
    throw BudgetExceeded("select_tau: no certificate within iteration budget for k=" +
                         std::to_string(k));
}

bool lemma2_check(const TailParams& p, int k, const Scalar& tau, std::uint32_t subset_mask,
                  int tail_cutoff) {
    if (k < 1) throw std::invalid_argument("lemma2_check: k >= 1 required");
    if (tail_cutoff < 1 || tail_cutoff > 30)
        throw std::invalid_argument("lemma2_check: tail_cutoff out of range");
    const std::uint32_t full = (std::uint32_t{1} << (tail_cutoff + 1)) - 1;
    if ((subset_mask & 1u) == 0)
        throw std::invalid_argument("lemma2_check: subset must contain k");
    if (subset_mask == full)
        throw std::invalid_argument("lemma2_check: subset must be proper");
    if (subset_mask > full) throw std::invalid_argument("lemma2_check: mask out of range");

    Scalar mass = Scalar::zero(p.backend());
    Scalar weighted = Scalar::zero(p.backend());
    for (int bit = 0; bit <= tail_cutoff; ++bit) {
        if ((subset_mask >> bit) & 1u) {
            Scalar m = pow_int(p.alpha, k + bit);
            mass += m;
            weighted += m * free_position(p, k + bit, tau);
        }
    }
    Scalar subset_barycenter = weighted / mass;
    return subset_barycenter < barycenter_tail_truncated(p, k, k + tail_cutoff, tau);
}

} // namespace stickysim
