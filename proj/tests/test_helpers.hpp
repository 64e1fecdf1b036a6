#pragma once

#include <numbers>

#include "crawlsim/model.hpp"
#include "crawlsim/state.hpp"

namespace crawlsim::testing {

inline TrigPoly cosine(double period, double constant, double amplitude, double phase,
                       int multiple = 1) {
    return TrigPoly(period, constant, {{multiple, amplitude, phase}});
}

/// Two-block crawler with time-dependent viscous friction mu_{1,2} = 2 -+ ...
/// and a unit-stiffness link driven at the gait frequency. gait_sign flips the
/// rest-length signal (the flipped variant advances the other way).
inline CrawlerModel inching_model(double gait_sign = 1.0) {
    const double period = 1.0;
    std::vector<ScalarFriction> laws;
    laws.emplace_back(ViscousTerm{cosine(period, 2.0, 1.0, -std::numbers::pi / 2)});
    laws.emplace_back(ViscousTerm{cosine(period, 2.0, 1.0, std::numbers::pi / 2)});
    GaitSignal gait{{cosine(period, 0.0, gait_sign * 5.0, 0.0)}};
    return CrawlerModel(Vector::Constant(2, 1.0), Matrix::Constant(1, 1, 1.0),
                        FrictionLaw(std::move(laws)), std::move(gait), period);
}

/// Same chain with the friction frozen at its mean (time-independent).
inline CrawlerModel inching_model_constant_friction() {
    const double period = 1.0;
    std::vector<ScalarFriction> laws(2, ScalarFriction(LinearTerm{2.0}));
    GaitSignal gait{{cosine(period, 0.0, 5.0, 0.0)}};
    return CrawlerModel(Vector::Constant(2, 1.0), Matrix::Constant(1, 1, 1.0),
                        FrictionLaw(std::move(laws)), std::move(gait), period);
}

/// Two blocks, bounded arctan friction, rest length driven exactly at the
/// free shape frequency sqrt(2k).
inline CrawlerModel resonance_model(double k = 2.0, double amplitude = 3.0) {
    const double period = 2.0 * std::numbers::pi / std::sqrt(2.0 * k);
    std::vector<ScalarFriction> laws(2, ScalarFriction(ResonanceTerm{}));
    GaitSignal gait{{cosine(period, 0.0, amplitude, 0.0)}};
    return CrawlerModel(Vector::Constant(2, 1.0), Matrix::Constant(1, 1, k),
                        FrictionLaw(std::move(laws)), std::move(gait), period);
}

/// Four equal blocks, unit link stiffness, linear friction at half the
/// stiff-body bound, fixed three-harmonic gait.
inline CrawlerModel stiff_chain_model() {
    const double period = 1.0;
    std::vector<ScalarFriction> laws(4, ScalarFriction(LinearTerm{1.0}));
    GaitSignal gait{{cosine(period, 0.0, 0.8, 0.0), cosine(period, 0.0, 0.6, 2.0943951023931953),
                     cosine(period, 0.0, 0.7, 4.1887902047863905)}};
    return CrawlerModel(Vector::Constant(4, 1.0), Matrix::Identity(3, 3),
                        FrictionLaw(std::move(laws)), std::move(gait), period);
}

/// Two blocks, constant viscous coefficient mu, stiffness k, no actuation.
inline CrawlerModel damped_two_block(double mu, double k, double period = 1.0) {
    std::vector<ScalarFriction> laws(2, ScalarFriction(LinearTerm{mu}));
    GaitSignal gait{{TrigPoly(period, 0.0)}};
    return CrawlerModel(Vector::Constant(2, 1.0), Matrix::Constant(1, 1, k),
                        FrictionLaw(std::move(laws)), std::move(gait), period);
}

inline FullState make_full(std::initializer_list<double> x, std::initializer_list<double> v) {
    Vector xv(static_cast<Eigen::Index>(x.size())), vv(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double value : x) xv[i++] = value;
    i = 0;
    for (double value : v) vv[i++] = value;
    return {xv, vv};
}

inline ReducedState make_reduced(std::initializer_list<double> z,
                                 std::initializer_list<double> v) {
    Vector zv(static_cast<Eigen::Index>(z.size())), vv(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double value : z) zv[i++] = value;
    i = 0;
    for (double value : v) vv[i++] = value;
    return {zv, vv};
}

}  // namespace crawlsim::testing
