#include "crawlsim/state.hpp"

#include <stdexcept>

namespace crawlsim {

Vector FullState::packed() const {
    Vector y(x.size() + v.size());
    y << x, v;
    return y;
}

Vector ReducedState::packed() const {
    Vector y(z.size() + v.size());
    y << z, v;
    return y;
}

FullState full_state_from_packed(const Vector& y) {
    if (y.size() % 2 != 0 || y.size() < 4)
        throw std::invalid_argument("full_state_from_packed: dimension must be even and >= 4");
    const int n = static_cast<int>(y.size()) / 2;
    return {y.head(n), y.tail(n)};
}

ReducedState reduced_state_from_packed(const Vector& y) {
    if (y.size() % 2 != 1 || y.size() < 3)
        throw std::invalid_argument("reduced_state_from_packed: dimension must be odd and >= 3");
    const int n = static_cast<int>(y.size() + 1) / 2;
    return {y.head(n - 1), y.tail(n)};
}

ReducedState project(const FullState& s) {
    const int n = s.block_count();
    Vector z(n - 1);
    for (int i = 0; i < n - 1; ++i) z[i] = s.x[i + 1] - s.x[i];
    return {std::move(z), s.v};
}

FullState translate(const FullState& s, double g) {
    return {s.x.array() + g, s.v};
}

}  // namespace crawlsim
