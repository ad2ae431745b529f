#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "alphaflow/dynamics.hpp"
#include "alphaflow/fixtures.hpp"
#include "alphaflow/linalg.hpp"
#include "alphaflow/packing.hpp"
#include "alphaflow/potential.hpp"
#include "alphaflow/random.hpp"
#include "alphaflow/solve.hpp"

// Executable property checks. Each check draws its instances from the given
// seed and reports the worst measured value of every property against its
// threshold.

namespace alphaflow
{

/** @brief Outcome of one property over all its samples */
struct PropertyResult {
    std::string name;
    std::string relation;  ///< "<", ">", ">=", "<=", or "all" for boolean properties
    double measured{0.0};  ///< worst sample (failure count for "all")
    double threshold{0.0};
    long samples{0};
    bool pass{false};
};

/** @brief Accumulates samples of one property, keeping the worst */
class Property
{
public:
    enum class Kind { below, above, at_most, at_least, all };

    Property(std::string name, Kind kind, double threshold = 0.0)
        : name_(std::move(name)), kind_(kind), threshold_(threshold)
    {
        worst_ = (kind_ == Kind::above || kind_ == Kind::at_least)
                     ? std::numeric_limits<double>::infinity()
                     : (kind_ == Kind::all ? 0.0 : -std::numeric_limits<double>::infinity());
    }

    static Property below(std::string n, double t) { return {std::move(n), Kind::below, t}; }
    static Property above(std::string n, double t) { return {std::move(n), Kind::above, t}; }
    static Property at_most(std::string n, double t) { return {std::move(n), Kind::at_most, t}; }
    static Property at_least(std::string n, double t) { return {std::move(n), Kind::at_least, t}; }
    static Property all(std::string n) { return {std::move(n), Kind::all}; }

    void add(double v)
    {
        ++samples_;
        if (std::isnan(v)) {
            nan_ = true;
            return;
        }
        if (kind_ == Kind::above || kind_ == Kind::at_least) {
            worst_ = std::min(worst_, v);
        }
        else {
            worst_ = std::max(worst_, v);
        }
    }

    void add(bool ok)
    {
        ++samples_;
        if (!ok) {
            worst_ += 1.0;
        }
    }

    [[nodiscard]] PropertyResult result() const
    {
        PropertyResult r;
        r.name = name_;
        r.measured = worst_;
        r.threshold = threshold_;
        r.samples = samples_;
        switch (kind_) {
            case Kind::below:
                r.relation = "<";
                r.pass = worst_ < threshold_;
                break;
            case Kind::above:
                r.relation = ">";
                r.pass = worst_ > threshold_;
                break;
            case Kind::at_most:
                r.relation = "<=";
                r.pass = worst_ <= threshold_;
                break;
            case Kind::at_least:
                r.relation = ">=";
                r.pass = worst_ >= threshold_;
                break;
            case Kind::all:
                r.relation = "all";
                r.pass = worst_ == 0.0;
                break;
        }
        r.pass = r.pass && !nan_ && samples_ > 0;
        return r;
    }

private:
    std::string name_;
    Kind kind_;
    double threshold_;
    double worst_;
    long samples_{0};
    bool nan_{false};
};

using PropertyList = std::vector<PropertyResult>;

inline bool all_pass(const PropertyList& ps)
{
    return !ps.empty() && std::all_of(ps.begin(), ps.end(), [](const auto& p) { return p.pass; });
}

namespace detail
{

inline PropertyList collect(std::initializer_list<const Property*> ps)
{
    PropertyList out;
    for (const auto* p : ps) {
        out.push_back(p->result());
    }
    return out;
}

inline void append(PropertyList& a, const PropertyList& b)
{
    a.insert(a.end(), b.begin(), b.end());
}

/// Radii r0 (1 + 0.1 eps), eps uniform in [-1, 1]
inline PackingMetric perturbed_metric(Geometry g, int n, double r0, Rng& rng)
{
    std::uniform_real_distribution<double> eps(-1.0, 1.0);
    Eigen::VectorXd r(n);
    for (int i = 0; i < n; ++i) {
        r[i] = r0 * (1.0 + 0.1 * eps(rng));
    }
    return {g, r};
}

/// Radius scale with negative curvature everywhere on the Klein quartic
inline double negative_radius(Geometry g)
{
    return g == Geometry::euclidean ? 1.0 : 0.3;
}

inline const WeightedTriangulation& klein()
{
    static const auto wt = builtin("klein_quartic_24", 0.2);
    return wt;
}

inline PotentialSpec kind_spec(PotentialKind kind, const WeightedTriangulation& wt, double alpha,
                               Rng& rng, PackingMetric* target = nullptr)
{
    PotentialSpec s;
    s.kind = kind;
    s.alpha = alpha;
    s.beta = BranchAssignment::none(wt.vertex_count());
    s.normalization = Normalization::literal();
    if (uses_rbar(kind)) {
        const Geometry g = geometry_of(kind);
        const auto m = perturbed_metric(g, wt.vertex_count(), negative_radius(g), rng);
        s.rbar = rbar_from_metric(kind, wt, m, alpha, s.beta);
        if (target != nullptr) {
            *target = m;
        }
    }
    return s;
}

inline FlowSpec flow_of(const PotentialSpec& p, const Eigen::VectorXd& u0)
{
    FlowSpec f;
    f.potential = p;
    f.u0 = u0;
    return f;
}

inline double max_relative(const Eigen::VectorXd& a, const Eigen::VectorXd& b)
{
    return ((a - b).array() / b.array()).abs().maxCoeff();
}

}  // namespace detail

/**
 * @brief Triangle inequalities and angle sums on random (r, Phi) triples
 */
inline PropertyList check_geometry_laws(std::uint64_t seed, int samples = 10000)
{
    Rng rng(seed);
    auto tri = Property::all("triangle inequalities (both geometries)");
    auto esum = Property::below("euclidean |angle sum - pi|", 1e-12);
    auto hsum = Property::below("hyperbolic angle sum - pi", 0.0);
    for (int k = 0; k < samples; ++k) {
        for (auto g : {Geometry::euclidean, Geometry::hyperbolic}) {
            const auto t = random_triangle(g, rng);
            const auto tg = triangle_geometry(g, t.r, t.phi);
            const auto& l = tg.lengths;
            tri.add(l[0] < l[1] + l[2] && l[1] < l[0] + l[2] && l[2] < l[0] + l[1]);
            const double s = tg.angles[0] + tg.angles[1] + tg.angles[2];
            if (g == Geometry::euclidean) {
                esum.add(std::abs(s - std::numbers::pi));
            }
            else {
                hsum.add(s - std::numbers::pi);
            }
        }
    }
    return detail::collect({&tri, &esum, &hsum});
}

/**
 * @brief Per-triangle sign conditions and symmetry of the angle derivatives
 *
 * d theta_i / d r_i < 0, d theta_i / d r_j > 0 (i != j), and
 * d theta_i / d u_j = d theta_j / d u_i.
 */
inline PropertyList check_angle_derivatives(std::uint64_t seed, int samples = 10000)
{
    Rng rng(seed);
    auto signs = Property::all("sign conditions d theta_i/d r_i < 0 < d theta_i/d r_j");
    auto sym = Property::below("symmetry |d theta_i/d u_j - d theta_j/d u_i|", 1e-10);
    auto sums = Property::all("angle-sum derivative: 0 (euclidean), < 0 (hyperbolic)");
    for (int k = 0; k < samples; ++k) {
        for (auto g : {Geometry::euclidean, Geometry::hyperbolic}) {
            const auto t = random_triangle(g, rng);
            const auto D = angle_derivative_block(g, t.r, t.phi);
            const auto Dr = to_radius_derivatives(g, D, t.r);
            bool ok = true;
            double asym = 0.0;
            for (int m = 0; m < 3; ++m) {
                ok = ok && Dr(m, m) < 0.0;
                for (int n = 0; n < 3; ++n) {
                    if (n != m) {
                        ok = ok && Dr(m, n) > 0.0;
                        asym = std::max(asym, std::abs(D(m, n) - D(n, m)));
                    }
                }
            }
            signs.add(ok);
            sym.add(asym);
            bool sums_ok = true;
            for (int n = 0; n < 3; ++n) {
                const double c = Dr.col(n).sum();
                sums_ok = sums_ok && (g == Geometry::euclidean ? std::abs(c) < 1e-10 : c < 0.0);
            }
            sums.add(sums_ok);
        }
    }
    return detail::collect({&signs, &sym, &sums});
}

/**
 * @brief Gauss-Bonnet on random metrics of every fixture
 *
 * sum K - 2 pi chi (euclidean) and sum K - 2 pi chi - total area (hyperbolic).
 */
inline PropertyList check_gauss_bonnet(std::uint64_t seed, int metrics = 100)
{
    Rng rng(seed);
    auto e = Property::below("euclidean |sum K - 2 pi chi|", 1e-9);
    auto h = Property::below("hyperbolic |sum K - 2 pi chi - area|", 1e-9);
    for (const auto& name : builtin_names()) {
        const auto wt = builtin(name, 0.3);
        const double chi = euler_characteristic(wt);
        for (int k = 0; k < metrics; ++k) {
            for (auto g : {Geometry::euclidean, Geometry::hyperbolic}) {
                const auto d = curvature_detail(wt, g, random_radii(g, wt.vertex_count(), rng));
                const double dev = d.K.sum() - 2 * std::numbers::pi * chi -
                                   (g == Geometry::hyperbolic ? d.total_area : 0.0);
                (g == Geometry::euclidean ? e : h).add(std::abs(dev));
            }
        }
    }
    return detail::collect({&e, &h});
}

/**
 * @brief Curvature Jacobian structure on random metrics of the Klein quartic
 */
inline PropertyList check_jacobian_structure(std::uint64_t seed, int metrics = 100,
                                             int fd_metrics = 10)
{
    Rng rng(seed);
    const auto& wt = detail::klein();
    const int n = wt.vertex_count();
    auto sym = Property::below("euclidean symmetry defect", 1e-10);
    auto kernel = Property::below("euclidean |J 1|_inf", 1e-9);
    auto second = Property::above("euclidean second-smallest eigenvalue", 0.0);
    auto pattern = Property::all("euclidean sign pattern (diag > 0, neighbors < 0, else 0)");
    auto hmin = Property::above("hyperbolic min eigenvalue", 0.0);
    auto fd = Property::below("analytic vs finite-difference Jacobian", 1e-6);
    for (int k = 0; k < metrics; ++k) {
        const PackingMetric m{Geometry::euclidean, random_radii(Geometry::euclidean, n, rng)};
        const auto cj = curvature_jacobian(wt, m);
        sym.add(cj.symmetry_defect());
        kernel.add((cj.J * Eigen::VectorXd::Ones(n)).cwiseAbs().maxCoeff());
        second.add(symmetric_eigenvalues(cj.J)[1]);
        bool ok = true;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (i == j) {
                    ok = ok && cj.J(i, i) > 0.0;
                }
                else if (wt.adjacent(i, j)) {
                    ok = ok && cj.J(i, j) < 0.0;
                }
                else {
                    ok = ok && cj.J(i, j) == 0.0;
                }
            }
        }
        pattern.add(ok);

        const PackingMetric mh{Geometry::hyperbolic, random_radii(Geometry::hyperbolic, n, rng)};
        const auto ch = curvature_jacobian(wt, mh);
        hmin.add(min_eigenvalue(ch.J));
        if (k < fd_metrics) {
            for (const auto* mm : {&m, &mh}) {
                const auto a = curvature_jacobian(wt, *mm);
                const auto f = curvature_jacobian(wt, *mm, DerivativeMode::finite_difference);
                fd.add((a.J - f.J).cwiseAbs().maxCoeff());
            }
        }
    }
    return detail::collect({&sym, &kernel, &second, &pattern, &hmin, &fd});
}

/**
 * @brief Potentials: gradient, path independence, and closedness of the one-forms
 */
inline PropertyList check_potential_closedness(std::uint64_t seed)
{
    Rng rng(seed);
    const auto& wt = detail::klein();
    const int n = wt.vertex_count();
    const QuadratureConfig quad;
    auto grad = Property::below("|finite-difference gradient - one_form|", 1e-6);
    auto path = Property::below("|straight - staircase| (closed kinds)", 2e-10);
    auto sinh2 = Property::above("sinh_variant_H closedness defect at alpha = 2", 1e-4);
    auto sinh0 = Property::below("sinh_variant_H closedness defect at alpha = 0", 1e-6);
    for (auto kind : all_potential_kinds()) {
        if (!is_closed(kind)) {
            continue;
        }
        const auto s = detail::kind_spec(kind, wt, 1.5, rng);
        const Eigen::VectorXd u = random_u(s.geometry(), n, rng);
        const double h = 1e-5;
        Eigen::VectorXd g(n);
        for (int i = 0; i < n; ++i) {
            Eigen::VectorXd up = u, um = u;
            up[i] += h;
            um[i] -= h;
            g[i] = (potential(s, wt, up, quad) - potential(s, wt, um, quad)) / (2 * h);
        }
        grad.add((g - one_form(s, wt, u)).cwiseAbs().maxCoeff());

        const Eigen::VectorXd base = base_point(s, wt);
        const double straight = potential(s, wt, u, quad);
        const double stairs = potential_along_path(s, wt, staircase_path(base, u), quad);
        path.add(std::abs(straight - stairs));
    }
    auto sv = detail::kind_spec(PotentialKind::sinh_variant_H, wt, 2.0, rng);
    const Eigen::VectorXd u = random_u(Geometry::hyperbolic, n, rng);
    sinh2.add(closedness_defect(sv, wt, u));
    sv.alpha = 0.0;
    sinh0.add(closedness_defect(sv, wt, u));
    return detail::collect({&grad, &path, &sinh2, &sinh0});
}

/**
 * @brief Analytic Hessians of all seven kinds against differenced one-forms
 */
inline PropertyList check_hessian_formulas(std::uint64_t seed, int trials = 3)
{
    Rng rng(seed);
    const auto& wt = detail::klein();
    auto fd = Property::below("|analytic Hessian - differenced one-form| (all kinds)", 1e-5);
    auto sym = Property::below("Hessian asymmetry (closed kinds)", 1e-10);
    for (auto kind : all_potential_kinds()) {
        for (int t = 0; t < trials; ++t) {
            for (auto norm : {Normalization::literal(), Normalization::branched(),
                              Normalization::explicit_s(-0.3)}) {
                auto s = detail::kind_spec(kind, wt, 1.7, rng);
                s.normalization = norm;
                s.beta.orders[2] = 1;
                const Eigen::VectorXd u = random_u(s.geometry(), wt.vertex_count(), rng);
                const auto H = potential_hessian(s, wt, u);
                fd.add((H - one_form_jacobian_fd(s, wt, u)).cwiseAbs().maxCoeff());
                if (is_closed(kind)) {
                    sym.add(asymmetry(H));
                }
            }
        }
    }
    return detail::collect({&fd, &sym});
}

/**
 * @brief Convexity of the potentials on random instances with chi < 0
 */
inline PropertyList check_convexity(std::uint64_t seed, int instances = 100)
{
    Rng rng(seed);
    const auto& wt = detail::klein();
    const int n = wt.vertex_count();
    auto e = Property::above("restricted euclidean main Hessian min eigenvalue", 0.0);
    auto h = Property::above("hyperbolic main Hessian min eigenvalue", 0.0);
    auto p = Property::above("prescribed/area Hessian min eigenvalue (rbar <= 0)", 0.0);
    auto hyp = Property::all("rbar <= 0 with some rbar_i < 0");
    for (double alpha : {0.0, 0.5, 1.0, 2.0}) {
        for (int k = 0; k < instances; ++k) {
            auto se = detail::kind_spec(PotentialKind::main_E, wt, alpha, rng);
            e.add(min_eigenvalue(restricted_hessian_U(se, wt, random_u(Geometry::euclidean, n, rng))));
            auto sh = detail::kind_spec(PotentialKind::main_H, wt, alpha, rng);
            h.add(min_eigenvalue(potential_hessian(sh, wt, random_u(Geometry::hyperbolic, n, rng))));
        }
    }
    for (auto kind : {PotentialKind::prescribed_E, PotentialKind::prescribed_tanh_H,
                      PotentialKind::area_E, PotentialKind::area_H}) {
        for (double alpha : {0.5, 1.0, 2.0}) {
            for (int k = 0; k < instances / 4; ++k) {
                const auto s = detail::kind_spec(kind, wt, alpha, rng);
                hyp.add(rbar_supports_convexity(s));
                p.add(min_eigenvalue(potential_hessian(s, wt, random_u(s.geometry(), n, rng))));
            }
        }
    }
    return detail::collect({&e, &h, &p, &hyp});
}

/**
 * @brief main_E on the Klein quartic: convergence, decay rate, agreement with Newton
 */
inline PropertyList check_flow_convergence(std::uint64_t seed, int starts = 5)
{
    Rng rng(seed);
    const auto& wt = detail::klein();
    auto conv = Property::all("converged to ||omega||_inf < 1e-10");
    auto lambda = Property::below("decay exponent lambda", 0.0);
    auto r2 = Property::above("tail fit R^2", 0.99);
    auto newton = Property::below("|u_flow - u_newton|_inf", 1e-6);
    IntegratorConfig icfg;
    icfg.track_potential = false;
    for (double alpha : {0.0, 1.0, 2.0}) {
        for (int k = 0; k < starts; ++k) {
            auto s = detail::kind_spec(PotentialKind::main_E, wt, alpha, rng);
            const Eigen::VectorXd u0 = project_mean_zero(random_u(Geometry::euclidean, 24, rng));
            const auto tr = integrate(detail::flow_of(s, u0), wt, icfg);
            conv.add(tr.status == FlowStatus::converged);
            try {
                const auto est = estimate_rate(tr);
                lambda.add(est.lambda);
                r2.add(est.r_squared);
            }
            catch (const ConvergenceError&) {
                lambda.add(std::numeric_limits<double>::quiet_NaN());
                r2.add(std::numeric_limits<double>::quiet_NaN());
            }
            SolveConfig scfg;
            scfg.u0 = u0;
            const auto res = stationary_metric(s, wt, scfg);
            newton.add(res.status == SolveStatus::found
                           ? (tr.final_record().u - res.u).cwiseAbs().maxCoeff()
                           : std::numeric_limits<double>::quiet_NaN());
        }
    }
    return detail::collect({&conv, &lambda, &r2, &newton});
}

/**
 * @brief Prescribed and area kinds recover their generating metric by Newton and by flow
 */
inline PropertyList check_prescribed_round_trips(std::uint64_t seed, int starts = 3)
{
    Rng rng(seed);
    const auto& wt = detail::klein();
    auto found = Property::all("Newton found and flow converged");
    auto rel = Property::below("relative error to generating metric", 1e-6);
    auto unique = Property::below("two-start agreement |u_a - u_b|_inf", 1e-7);
    IntegratorConfig icfg;
    icfg.track_potential = false;
    for (auto kind : {PotentialKind::prescribed_E, PotentialKind::prescribed_tanh_H,
                      PotentialKind::area_E, PotentialKind::area_H}) {
        PackingMetric target;
        const auto s = detail::kind_spec(kind, wt, 2.0, rng, &target);
        std::vector<Eigen::VectorXd> solutions;
        for (int k = 0; k < starts; ++k) {
            const Eigen::VectorXd u0 = random_u(s.geometry(), wt.vertex_count(), rng);
            SolveConfig scfg;
            scfg.u0 = u0;
            const auto res = solve_prescribed(s, wt, scfg);
            const auto tr = integrate(detail::flow_of(s, u0), wt, icfg);
            const bool ok = res.status == SolveStatus::found && tr.status == FlowStatus::converged;
            found.add(ok);
            rel.add(detail::max_relative(res.r, target.r));
            rel.add(detail::max_relative(tr.final_record().r, target.r));
            solutions.push_back(res.u);
            solutions.push_back(tr.final_record().u);
        }
        for (std::size_t a = 0; a < solutions.size(); ++a) {
            for (std::size_t b = a + 1; b < solutions.size(); ++b) {
                unique.add((solutions[a] - solutions[b]).cwiseAbs().maxCoeff());
            }
        }
    }
    return detail::collect({&found, &rel, &unique});
}

/**
 * @brief Scaling equivalence of the euclidean main flow
 *
 * Trajectories from r(0) and 2 r(0) (fixed-step RK4, identical step
 * sequence) differ by ln 2 in u; flow_field is invariant under scaling.
 */
inline PropertyList check_scaling(std::uint64_t seed, int instances = 5)
{
    Rng rng(seed);
    const auto& wt = detail::klein();
    auto shift = Property::below("| (u_2r(t) - u_r(t)) - ln 2 |", 1e-9);
    auto field = Property::below("|flow_field(2r) - flow_field(r)|", 1e-10);
    IntegratorConfig cfg;
    cfg.method = IntegrationMethod::rk4_fixed;
    cfg.step = 0.05;
    cfg.max_time = 10.0;
    cfg.track_potential = false;
    for (int k = 0; k < instances; ++k) {
        const double alpha = 0.5 * k;
        const auto s = detail::kind_spec(PotentialKind::main_E, wt, alpha, rng);
        const Eigen::VectorXd u0 = random_u(Geometry::euclidean, wt.vertex_count(), rng);
        const Eigen::VectorXd u1 = (u0.array() + std::log(2.0)).matrix();
        const auto f0 = detail::flow_of(s, u0);
        field.add((flow_field(f0, wt, u1) - flow_field(f0, wt, u0)).cwiseAbs().maxCoeff());
        const auto a = integrate(f0, wt, cfg);
        const auto b = integrate(detail::flow_of(s, u1), wt, cfg);
        const std::size_t m = std::min(a.records.size(), b.records.size());
        for (std::size_t j = 0; j < m; ++j) {
            if (a.records[j].t != b.records[j].t) {
                shift.add(std::numeric_limits<double>::quiet_NaN());
                continue;
            }
            shift.add(((b.records[j].u - a.records[j].u).array() - std::log(2.0)).abs().maxCoeff());
        }
    }
    return detail::collect({&shift, &field});
}

/**
 * @brief Long-time envelope on euclidean main runs over all fixtures
 */
inline PropertyList check_envelope(std::uint64_t seed, int starts = 2)
{
    Rng rng(seed);
    auto margin = Property::at_least("envelope margin min(du + a2 t, -a1 t - du)", 0.0);
    IntegratorConfig cfg;
    cfg.track_potential = false;
    cfg.max_time = 50.0;
    for (const auto& name : builtin_names()) {
        const auto wt = builtin(name, 0.3);
        for (double alpha : {0.0, 1.0, 2.0}) {
            for (int k = 0; k < starts; ++k) {
                PotentialSpec s;
                s.kind = PotentialKind::main_E;
                s.alpha = alpha;
                s.normalization = k == 0 ? Normalization::literal() : Normalization::branched();
                s.beta = BranchAssignment::none(wt.vertex_count());
                if (k == 1) {
                    s.beta.orders[0] = 1;
                }
                const auto f = detail::flow_of(s, random_u(Geometry::euclidean, wt.vertex_count(), rng));
                const auto tr = integrate(f, wt, cfg);
                const auto rep = diagnostics(f, wt, tr);
                for (const auto& smp : rep.samples) {
                    margin.add(smp.envelope_margin);
                }
            }
        }
    }
    return detail::collect({&margin});
}

/**
 * @brief Curvature-evolution identity on states sampled from main flow runs
 */
inline PropertyList check_curvature_evolution(std::uint64_t seed, int states = 100)
{
    Rng rng(seed);
    const auto& wt = detail::klein();
    auto e = Property::below("euclidean |J du/dt - coupling form|_inf", 1e-8);
    auto h = Property::below("hyperbolic |J du/dt - coupling form|_inf (with S_i term)", 1e-8);
    IntegratorConfig cfg;
    cfg.track_potential = false;
    cfg.max_time = 5.0;
    cfg.max_step = 0.02;
    for (auto kind : {PotentialKind::main_E, PotentialKind::main_H}) {
        const auto s = detail::kind_spec(kind, wt, 1.0, rng);
        const auto f = detail::flow_of(s, random_u(s.geometry(), wt.vertex_count(), rng));
        const auto tr = integrate(f, wt, cfg);
        const std::size_t total = tr.records.size();
        for (int k = 0; k < states; ++k) {
            const auto& rec = tr.records[(total - 1) * static_cast<std::size_t>(k) /
                                         static_cast<std::size_t>(std::max(states - 1, 1))];
            const auto cj = curvature_jacobian(wt, from_u(s.geometry(), rec.u));
            const double res =
                (cj.J * rec.field - coupling_form(cj, -rec.field)).cwiseAbs().maxCoeff();
            (kind == PotentialKind::main_E ? e : h).add(res);
        }
    }
    return detail::collect({&e, &h});
}

/**
 * @brief Gradient-sum identities under the literal normalization
 */
inline PropertyList check_normalization_obstruction(std::uint64_t seed)
{
    Rng rng(seed);
    const auto& wt = detail::klein();
    const int n = wt.vertex_count();
    auto sum = Property::below("euclidean |sum omega - 2 pi sum beta|", 1e-9);
    auto status = Property::all("sum beta >= 1: solver reports no_stationary_point");
    auto obstruction = Property::below("|obstruction - 2 pi sum beta|", 1e-12);
    auto positive = Property::above("hyperbolic probe: min area-sum over records", 0.0);
    for (int total : {0, 1, 2}) {
        PotentialSpec s;
        s.kind = PotentialKind::main_E;
        s.alpha = 1.0;
        s.normalization = Normalization::literal();
        s.beta = BranchAssignment::none(n);
        for (int k = 0; k < total; ++k) {
            s.beta.orders[5 * k] += 1;
        }
        for (int k = 0; k < 20; ++k) {
            sum.add(std::abs(one_form(s, wt, random_u(Geometry::euclidean, n, rng)).sum() -
                             2 * std::numbers::pi * total));
        }
        if (total >= 1) {
            const auto res = stationary_metric(s, wt);
            status.add(res.status == SolveStatus::no_stationary_point);
            obstruction.add(std::abs(res.obstruction - 2 * std::numbers::pi * total));
        }
    }
    IntegratorConfig cfg;
    cfg.track_potential = false;
    cfg.max_time = 200.0;
    for (double alpha : {0.0, 1.0}) {
        const auto s = detail::kind_spec(PotentialKind::main_H, wt, alpha, rng);
        const auto f = detail::flow_of(s, random_u(Geometry::hyperbolic, n, rng));
        const auto tr = integrate(f, wt, cfg);
        positive.add(literal_normalization_probe(f, wt, tr).min_sum);
    }
    return detail::collect({&sum, &status, &obstruction, &positive});
}

/**
 * @brief Potential values never increase by more than 1e-9 per step on main/prescribed runs
 */
inline PropertyList check_lyapunov_descent(std::uint64_t seed)
{
    Rng rng(seed);
    const auto& wt = detail::klein();
    auto inc = Property::at_most("max per-step potential increase", 1e-9);
    auto tracked = Property::all("potential finite at every record");
    for (auto kind : {PotentialKind::main_E, PotentialKind::main_H, PotentialKind::prescribed_E,
                      PotentialKind::prescribed_tanh_H}) {
        for (double alpha : {0.0, 1.0, 2.0}) {
            const auto s = detail::kind_spec(kind, wt, alpha, rng);
            IntegratorConfig cfg;
            if (kind == PotentialKind::main_H) {
                cfg.max_time = 30.0;
            }
            const auto tr = integrate(detail::flow_of(s, random_u(s.geometry(), 24, rng)), wt, cfg);
            double worst = -std::numeric_limits<double>::infinity();
            bool finite = true;
            for (std::size_t k = 1; k < tr.records.size(); ++k) {
                finite = finite && std::isfinite(tr.records[k].potential);
                worst = std::max(worst, tr.records[k].potential - tr.records[k - 1].potential);
            }
            inc.add(worst);
            tracked.add(finite);
        }
    }
    return detail::collect({&inc, &tracked});
}

/** @brief Named suite for the command line */
struct Suite {
    std::string name;
    std::string description;
    std::function<PropertyList(std::uint64_t)> run;
};

inline const std::vector<Suite>& suites()
{
    static const std::vector<Suite> all = {
        {"geometry-signs", "triangle laws and angle-derivative signs/symmetry",
         [](std::uint64_t s) {
             auto p = check_geometry_laws(s);
             detail::append(p, check_angle_derivatives(s + 1));
             return p;
         }},
        {"jacobian-structure", "curvature Jacobian symmetry, kernel, signs, definiteness",
         [](std::uint64_t s) { return check_jacobian_structure(s); }},
        {"potential-closedness", "potential gradients, path independence, sinh-variant defect",
         [](std::uint64_t s) { return check_potential_closedness(s); }},
        {"hessian-formulas", "analytic Hessians against differences; convexity",
         [](std::uint64_t s) {
             auto p = check_hessian_formulas(s);
             detail::append(p, check_convexity(s + 1));
             return p;
         }},
        {"flow-vs-newton", "flow convergence, decay rate, round trips against Newton",
         [](std::uint64_t s) {
             auto p = check_flow_convergence(s);
             detail::append(p, check_prescribed_round_trips(s + 1));
             return p;
         }},
        {"scaling", "scaling equivalence of the euclidean main flow",
         [](std::uint64_t s) { return check_scaling(s); }},
        {"gauss-bonnet", "Gauss-Bonnet identities in both geometries",
         [](std::uint64_t s) { return check_gauss_bonnet(s); }},
        {"envelope", "long-time envelope on euclidean main runs",
         [](std::uint64_t s) { return check_envelope(s); }},
        {"curvature-evolution", "curvature-evolution identity along flows",
         [](std::uint64_t s) { return check_curvature_evolution(s); }},
        {"normalization", "literal-normalization gradient-sum identities",
         [](std::uint64_t s) { return check_normalization_obstruction(s); }},
        {"lyapunov", "potential descent along gradient flows",
         [](std::uint64_t s) { return check_lyapunov_descent(s); }},
    };
    return all;
}

inline const Suite* find_suite(std::string_view name)
{
    for (const auto& s : suites()) {
        if (s.name == name) {
            return &s;
        }
    }
    return nullptr;
}

}  // namespace alphaflow
