#pragma once

#include "stickysim/scalar.hpp"

#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace stickysim {

/// Point or velocity in R^n, componentwise over Scalar. The dimension is
/// fixed per scenario; operations on mismatched dimensions throw.
class VecN {
public:
    VecN() = default;
    explicit VecN(std::vector<Scalar> comps) : c_(std::move(comps)) {}
    VecN(std::initializer_list<Scalar> comps) : c_(comps) {}

    static VecN zero(int dim, Backend b) {
        return VecN(std::vector<Scalar>(static_cast<std::size_t>(dim), Scalar::zero(b)));
    }

    int dim() const { return static_cast<int>(c_.size()); }
    Backend backend() const {
        if (c_.empty()) throw std::logic_error("backend of empty vector");
        return c_[0].backend();
    }

    const Scalar& operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
    Scalar& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
    const std::vector<Scalar>& components() const { return c_; }

    VecN& operator+=(const VecN& o) {
        check_dim(o);
        for (int i = 0; i < dim(); ++i) c_[i] += o[i];
        return *this;
    }
    VecN& operator-=(const VecN& o) {
        check_dim(o);
        for (int i = 0; i < dim(); ++i) c_[i] -= o[i];
        return *this;
    }
    VecN& operator*=(const Scalar& s) {
        for (auto& c : c_) c *= s;
        return *this;
    }
    VecN& operator/=(const Scalar& s) {
        for (auto& c : c_) c /= s;
        return *this;
    }

    friend VecN operator+(VecN a, const VecN& b) { return a += b; }
    friend VecN operator-(VecN a, const VecN& b) { return a -= b; }
    friend VecN operator*(VecN a, const Scalar& s) { return a *= s; }
    friend VecN operator*(const Scalar& s, VecN a) { return a *= s; }
    friend VecN operator/(VecN a, const Scalar& s) { return a /= s; }
    VecN operator-() const {
        VecN r = *this;
        for (auto& c : r.c_) c = -c;
        return r;
    }

    Scalar dot(const VecN& o) const {
        check_dim(o);
        if (c_.empty()) throw std::logic_error("dot of empty vector");
        Scalar acc = c_[0] * o[0];
        for (int i = 1; i < dim(); ++i) acc += c_[i] * o[i];
        return acc;
    }
    /// Squared Euclidean norm; no square roots are taken anywhere in core.
    Scalar norm2() const { return dot(*this); }

    bool is_zero() const {
        for (const auto& c : c_)
            if (!c.is_zero()) return false;
        return true;
    }

    friend bool operator==(const VecN& a, const VecN& b) {
        if (a.dim() != b.dim()) return false;
        for (int i = 0; i < a.dim(); ++i)
            if (a[i] != b[i]) return false;
        return true;
    }
    friend bool operator!=(const VecN& a, const VecN& b) { return !(a == b); }

private:
    void check_dim(const VecN& o) const {
        if (dim() != o.dim()) throw std::invalid_argument("vector dimension mismatch");
    }

    std::vector<Scalar> c_;
};

} // namespace stickysim
