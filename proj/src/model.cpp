#include "crawlsim/model.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace crawlsim {

Vector GaitSignal::value(double t) const {
    Vector out(link_count());
    for (int i = 0; i < link_count(); ++i) out[i] = rest_lengths[i].value(t);
    return out;
}

Vector GaitSignal::derivative(double t) const {
    Vector out(link_count());
    for (int i = 0; i < link_count(); ++i) out[i] = rest_lengths[i].derivative(t);
    return out;
}

double GaitSignal::norm_bound() const {
    double s = 0.0;
    for (const auto& li : rest_lengths) s += li.abs_bound() * li.abs_bound();
    return std::sqrt(s);
}

Matrix build_projection(int n) {
    if (n < 2) throw std::invalid_argument("build_projection: need at least two blocks");
    Matrix p = Matrix::Zero(n - 1, n);
    for (int i = 0; i < n - 1; ++i) {
        p(i, i) = -1.0;
        p(i, i + 1) = 1.0;
    }
    return p;
}

namespace {

void check_signal_period(const TrigPoly& poly, double period, const char* what) {
    if (!poly.is_constant() && poly.period() != period)
        throw std::invalid_argument(std::string(what) +
                                    ": signal period differs from the model period");
}

}  // namespace

CrawlerModel::CrawlerModel(Vector masses, Matrix shape_stiffness, FrictionLaw friction,
                           GaitSignal gait, double period)
    : n_(static_cast<int>(masses.size())),
      masses_(std::move(masses)),
      stiffness_(std::move(shape_stiffness)),
      friction_(std::move(friction)),
      gait_(std::move(gait)),
      period_(period) {
    if (n_ < 2) throw std::invalid_argument("CrawlerModel: need at least two blocks");
    for (int i = 0; i < n_; ++i)
        if (!(masses_[i] > 0.0) || !std::isfinite(masses_[i]))
            throw std::invalid_argument("CrawlerModel: masses must be strictly positive");
    total_mass_ = masses_.sum();

    if (stiffness_.rows() != n_ - 1 || stiffness_.cols() != n_ - 1)
        throw std::invalid_argument("CrawlerModel: shape stiffness must be (n-1) x (n-1)");
    const double scale = stiffness_.cwiseAbs().maxCoeff();
    if (!(scale > 0.0) || !std::isfinite(scale))
        throw std::invalid_argument("CrawlerModel: invalid stiffness matrix");
    if ((stiffness_ - stiffness_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw std::invalid_argument("CrawlerModel: shape stiffness must be symmetric");

    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (stiffness_ + stiffness_.transpose()),
                                             Eigen::EigenvaluesOnly);
    k_min_ = es.eigenvalues()(0);
    if (!(k_min_ > 0.0))
        throw std::invalid_argument("CrawlerModel: shape stiffness must be positive definite");

    if (friction_.block_count() != n_)
        throw std::invalid_argument("CrawlerModel: friction law count does not match blocks");
    if (gait_.link_count() != n_ - 1)
        throw std::invalid_argument("CrawlerModel: gait must provide n-1 rest lengths");
    if (!(period_ > 0.0) || !std::isfinite(period_))
        throw std::invalid_argument("CrawlerModel: period must be positive");

    for (const auto& li : gait_.rest_lengths) check_signal_period(li, period_, "gait");
    for (const auto& law : friction_.per_block())
        for (const auto& term : law.terms())
            if (const auto* v = std::get_if<ViscousTerm>(&term))
                check_signal_period(v->mu, period_, "friction");

    projection_ = build_projection(n_);
    proj_stiffness_ = projection_.transpose() * stiffness_;
    config_stiffness_ = proj_stiffness_ * projection_;
}

bool CrawlerModel::equal_masses(double rel_tol) const {
    return masses_.maxCoeff() - masses_.minCoeff() <= rel_tol * mean_mass();
}

Vector CrawlerModel::actuation_load(double t) const { return proj_stiffness_ * gait_.value(t); }

Matrix assemble_configuration_stiffness(const CrawlerModel& model) {
    return model.configuration_stiffness();
}

Vector actuation_load(const CrawlerModel& model, double t) { return model.actuation_load(t); }

double elastic_energy(const CrawlerModel& model, double t, const Vector& x) {
    const Vector r = model.projection() * x - model.gait().value(t);
    return 0.5 * r.dot(model.shape_stiffness() * r);
}

AssumptionReport validate_assumptions(const CrawlerModel& model, const SamplingGrid& grid) {
    if (grid.time_samples < 1 || grid.velocity_samples < 2 || !(grid.v_min < grid.v_max))
        throw std::invalid_argument("validate_assumptions: empty sampling grid");

    const auto& friction = model.friction();
    AssumptionReport report;

    // A3 is structural for the parametric families; the grid scan below only
    // corroborates it.
    double a3_defect = 0.0;
    double grid_mu = std::numeric_limits<double>::infinity();
    double grid_lip = 0.0;
    Witness mu_witness{"monotonicity_grid_min", 0.0, 0.0, Vector::Zero(2)};
    Witness lip_witness{"lipschitz_grid_max", 0.0, 0.0, Vector::Zero(1)};

    const double dv = (grid.v_max - grid.v_min) / (grid.velocity_samples - 1);
    for (int b = 0; b < friction.block_count(); ++b) {
        const auto& law = friction.block(b);
        for (int it = 0; it < grid.time_samples; ++it) {
            const double t = grid.time_samples == 1
                                 ? 0.0
                                 : model.period() * it / (grid.time_samples - 1);
            a3_defect = std::max(a3_defect, std::abs(law.force(t, 0.0)));
            double prev = law.force(t, grid.v_min);
            for (int iv = 0; iv < grid.velocity_samples; ++iv) {
                const double v = grid.v_min + iv * dv;
                const double slope = law.dforce_dv(t, v);
                if (std::abs(slope) > grid_lip) {
                    grid_lip = std::abs(slope);
                    lip_witness = {"lipschitz_grid_max", t, std::abs(slope), Vector::Constant(1, v)};
                }
                if (slope < grid_mu) {
                    grid_mu = slope;
                    mu_witness = {"monotonicity_grid_min", t, slope, Vector::Constant(1, v)};
                }
                if (iv > 0) {
                    const double cur = law.force(t, v);
                    const double dd = (cur - prev) / dv;
                    if (dd < grid_mu) {
                        grid_mu = dd;
                        Vector pair(2);
                        pair << v - dv, v;
                        mu_witness = {"monotonicity_grid_min", t, dd, pair};
                    }
                    prev = cur;
                } else {
                    prev = law.force(t, v);
                }
            }
        }
    }

    report.a3_holds = a3_defect < 1e-12;
    report.a4_star_holds = friction.a4_star();
    report.monotonicity_constant =
        std::max(0.0, std::min(friction.monotonicity_bound(), grid_mu));
    report.lipschitz_constant = friction.lipschitz_constant();
    report.witnesses.push_back(mu_witness);
    report.witnesses.push_back(lip_witness);

    report.equal_masses = model.equal_masses();
    report.identical_friction = friction.identical_laws();
    report.min_stiffness_eigenvalue = model.min_stiffness_eigenvalue();
    report.stiff_body_bound =
        4.0 * report.min_stiffness_eigenvalue *
        (1.0 - std::cos(std::numbers::pi / (model.block_count() - 1)));
    report.stiff_body_holds = report.equal_masses && report.identical_friction &&
                              report.lipschitz_constant < report.stiff_body_bound;
    return report;
}

}  // namespace crawlsim
