#pragma once

#include "crawlsim/types.hpp"

namespace crawlsim {

/// Point of the full phase space: displacements x and velocities v, both in R^n.
struct FullState {
    Vector x;
    Vector v;

    int block_count() const { return static_cast<int>(x.size()); }
    Vector packed() const;

    friend bool operator==(const FullState& a, const FullState& b) {
        return exact_equal(a.x, b.x) && exact_equal(a.v, b.v);
    }
};

/// Point of the reduced phase space: shape z = P x in R^{n-1} and velocities v
/// in R^n.
struct ReducedState {
    Vector z;
    Vector v;

    int block_count() const { return static_cast<int>(v.size()); }
    Vector packed() const;

    friend bool operator==(const ReducedState& a, const ReducedState& b) {
        return exact_equal(a.z, b.z) && exact_equal(a.v, b.v);
    }
};

FullState full_state_from_packed(const Vector& y);
ReducedState reduced_state_from_packed(const Vector& y);

/// (Px, v): quotient by rigid translations.
ReducedState project(const FullState& s);

/// Gamma_g(x, v) = (x + g 1, v).
FullState translate(const FullState& s, double g);

}  // namespace crawlsim
