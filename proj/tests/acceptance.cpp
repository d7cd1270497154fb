// Acceptance gate. Prints one PASS/FAIL line per criterion and exits nonzero if
// any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <random>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "paretune/io/run.hpp"
#include "paretune/moo_engine.hpp"
#include "paretune/pareto.hpp"
#include "paretune/problems.hpp"
#include "paretune/simulate.hpp"
#include "paretune/solvers/elastic_net.hpp"
#include "paretune/solvers/fused_lasso.hpp"
#include "paretune/solvers/jgl.hpp"
#include "paretune/surrogate.hpp"

using namespace paretune;
namespace fs = std::filesystem;

namespace {

/// Collects failure reasons and a few facts for the summary line.
class Check {
public:
    void require(bool ok, const std::string& what)
    {
        if (!ok) failures_.push_back(what);
    }
    void note(const std::string& fact) { notes_.push_back(fact); }
    bool passed() const { return failures_.empty(); }

    std::string detail() const
    {
        const auto& items = failures_.empty() ? notes_ : failures_;
        std::string out;
        for (std::size_t i = 0; i < items.size(); ++i) out += (i ? "; " : "") + items[i];
        return out;
    }

private:
    std::vector<std::string> failures_;
    std::vector<std::string> notes_;
};

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Timed {
    MooResult result;
    double seconds = 0.0;
};

Timed timed_run(const Problem& problem, const DesignSpace& space, const BudgetConfig& budget)
{
    const auto t0 = std::chrono::steady_clock::now();
    Timed t{run_moo(problem, space, budget), 0.0};
    t.seconds = seconds_since(t0);
    return t;
}

RegressionDataset regression_data(const SimulatedRegression& sim)
{
    return prepare_regression(sim.X, sim.y, sim.names);
}

BudgetConfig budget_of(std::size_t b, std::uint64_t seed)
{
    BudgetConfig c;
    c.total_budget = b;
    c.seed = seed;
    return c;
}

bool trace_monotone(const std::vector<double>& trace)
{
    for (std::size_t i = 1; i < trace.size(); ++i)
        if (trace[i] < trace[i - 1] - 1e-12 * std::max(1.0, std::abs(trace[i - 1]))) return false;
    return true;
}

bool refilter_idempotent(const MooResult& r)
{
    // The reference point comes from every evaluation, so only membership is compared.
    const ParetoArchive again = non_dominated_filter(r.archive.records);
    const ParetoArchive full = non_dominated_filter(r.evaluations);
    return again.ids() == r.archive.ids() && full.ids() == r.archive.ids() &&
           full.reference_point == r.archive.reference_point;
}

/// All scenario runs feed the invariant criterion as well.
std::vector<const MooResult*> g_runs;

// ---------------------------------------------------------------- scenarios

Check scenario_enet()
{
    Check c;
    const auto data = regression_data(simulate_enet(100, 5, 1));
    const auto space = enet_space(data);
    static Timed t = timed_run(make_problem_enet(data), space, budget_of(50, 1));
    g_runs.push_back(&t.result);
    const auto& archive = t.result.archive.records;
    double min_nnz = 1e9, max_nnz = -1;
    for (const auto& r : archive) {
        min_nnz = std::min(min_nnz, r.objectives.values[1]);
        max_nnz = std::max(max_nnz, r.objectives.values[1]);
    }
    c.require(t.seconds < 300.0, "took " + fmt(t.seconds) + " s, limit 300 s");
    c.require(archive.size() >= 3, "archive size " + std::to_string(archive.size()) + " < 3");
    c.require(min_nnz <= 1.0, "sparsest archived model has " + fmt(min_nnz) + " nonzeros, need <= 1");
    c.require(max_nnz >= 4.0, "densest archived model has " + fmt(max_nnz) + " nonzeros, need >= 4");
    c.note(fmt(t.seconds) + " s, archive " + std::to_string(archive.size()) + ", nnz range [" + fmt(min_nnz) + ", " +
           fmt(max_nnz) + "]");
    return c;
}

Check scenario_flasso()
{
    Check c;
    const auto sim = simulate_flasso(100, 10, 1);
    const auto data = regression_data(sim);
    const auto space = flasso_space(data);
    static Timed t = timed_run(make_problem_flasso(data), space, budget_of(80, 1));
    g_runs.push_back(&t.result);

    // Least squares on the same standardized design the objectives are measured on.
    const Eigen::VectorXd ols = data.X.colPivHouseholderQr().solve(data.y);
    double ols_rough = 0.0;
    for (Eigen::Index j = 1; j < ols.size(); ++j) ols_rough += std::abs(ols(j) - ols(j - 1));
    ols_rough /= static_cast<double>(ols.size() - 1);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& r : t.result.archive.records) best = std::min(best, r.objectives.values[2]);
    c.require(t.seconds < 480.0, "took " + fmt(t.seconds) + " s, limit 480 s");
    c.require(best < 0.1 * ols_rough,
              "smoothest archived roughness " + fmt(best) + " not below 10% of least squares " + fmt(ols_rough));
    c.note(fmt(t.seconds) + " s, archive " + std::to_string(t.result.archive.records.size()) + ", min roughness " +
           fmt(best) + " vs least squares " + fmt(ols_rough));
    return c;
}

/// Refits every archived hyperparameter pair and checks the estimates are PD and
/// reproduce the archived objectives.
void check_jgl_archive(Check& c, const MultiGroupDataset& data, JglPenalty penalty, const MooResult& r,
                       const std::string& tag)
{
    double min_eig = std::numeric_limits<double>::infinity();
    for (const auto& rec : r.archive.records) {
        const auto est = fit_jgl(data, {rec.point.natural[0], rec.point.natural[1], penalty}, 1e-5, 10000);
        for (const auto& th : est.theta) {
            c.require((th - th.transpose()).cwiseAbs().maxCoeff() == 0.0, tag + " estimate not symmetric");
            const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(th, Eigen::EigenvaluesOnly);
            min_eig = std::min(min_eig, eig.eigenvalues().minCoeff());
            c.require(Eigen::LLT<Eigen::MatrixXd>(th).info() == Eigen::Success, tag + " Cholesky failed");
        }
        const auto obj = penalty == JglPenalty::fused ? jgl_fused_objectives(est, data) : jgl_group_objectives(est, data);
        c.require(obj.values == rec.objectives.values, tag + " refit objectives differ from archive");
    }
    c.require(min_eig > 0.0, tag + " min eigenvalue " + fmt(min_eig));
    c.note(tag + " archive " + std::to_string(r.archive.records.size()) + ", min eigenvalue " + fmt(min_eig));
}

Check scenario_jgl()
{
    Check c;
    {
        const auto sim = simulate_jgl({20, 40, 60, 80}, 20, 1);
        const auto data = make_multigroup(sim.groups, sim.names);
        c.require(data.sample_sizes == std::vector<Eigen::Index>{20, 40, 60, 80}, "fused sample sizes not recorded");
        static Timed t = timed_run(make_problem_jgl(data, JglPenalty::fused),
                                   jgl_space(data, JglPenalty::fused), budget_of(40, 1));
        g_runs.push_back(&t.result);
        c.require(t.seconds < 900.0, "fused took " + fmt(t.seconds) + " s, limit 900 s");
        c.note("fused " + fmt(t.seconds) + " s");
        check_jgl_archive(c, data, JglPenalty::fused, t.result, "fused");
    }
    {
        const auto sim = simulate_jgl({30, 50, 40, 70}, 20, 2);
        const auto data = make_multigroup(sim.groups, sim.names);
        static Timed t = timed_run(make_problem_jgl(data, JglPenalty::group),
                                   jgl_space(data, JglPenalty::group), budget_of(50, 1));
        g_runs.push_back(&t.result);
        c.require(t.seconds < 900.0, "group took " + fmt(t.seconds) + " s, limit 900 s");
        c.note("group " + fmt(t.seconds) + " s");
        check_jgl_archive(c, data, JglPenalty::group, t.result, "group");
    }
    return c;
}

Check scenario_sparser_network()
{
    Check c;
    // Three groups with the case-study sample sizes, one of them small.
    const auto sim = simulate_jgl({428, 404, 48}, 20, 3);
    const auto data = make_multigroup(sim.groups, sim.names);
    static Timed t = timed_run(make_problem_jgl(data, JglPenalty::group), jgl_space(data, JglPenalty::group),
                               budget_of(50, 1));
    g_runs.push_back(&t.result);
    const auto& archive = t.result.archive.records;
    const auto best = std::min_element(archive.begin(), archive.end(), [](const auto& a, const auto& b) {
        return a.objectives.values[0] < b.objectives.values[0];
    });
    const double aic0 = best->objectives.values[0], edges0 = best->objectives.values[1];
    int sparser = 0;
    double sparsest = edges0, sparsest_aic = aic0;
    for (const auto& r : archive)
        if (r.objectives.values[1] < edges0) {
            c.require(r.objectives.values[0] > aic0, "sparser model " + std::to_string(r.id) + " is not worse in AIC");
            ++sparser;
            if (r.objectives.values[1] < sparsest) {
                sparsest = r.objectives.values[1];
                sparsest_aic = r.objectives.values[0];
            }
        }
    c.require(sparser > 0, "no archived model is sparser than the minimum-AIC model (" + fmt(edges0) + " edges)");
    c.note("min-AIC model " + fmt(edges0) + " edges, AIC " + fmt(aic0) + "; " + std::to_string(sparser) +
           " sparser archived models, down to " + fmt(sparsest) + " edges at AIC " + fmt(sparsest_aic));
    return c;
}

// ---------------------------------------------------------------- oracle equivalence

std::vector<oracle::Vec> random_set(std::mt19937_64& gen, std::size_t n, std::size_t q, bool ties)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> level(0, 5);
    std::vector<oracle::Vec> pts(n, oracle::Vec(q));
    for (auto& p : pts)
        for (auto& v : p) v = ties ? level(gen) : u(gen);
    return pts;
}

std::vector<oracle::Vec> random_front(std::mt19937_64& gen, std::size_t n, std::size_t q)
{
    // Points on a concave surface are mutually non-dominated.
    std::normal_distribution<double> z(0.0, 1.0);
    std::vector<oracle::Vec> front;
    while (front.size() < n) {
        oracle::Vec p(q);
        double norm = 0.0;
        for (auto& v : p) {
            v = std::abs(z(gen));
            norm += v * v;
        }
        for (auto& v : p) v = 1.0 - v / std::sqrt(norm);
        front.push_back(p);
    }
    return front;
}

void oracle_filter(Check& c)
{
    std::mt19937_64 gen(20240601);
    int mismatches = 0;
    for (int s = 0; s < 200; ++s) {
        const auto pts = random_set(gen, 20 + static_cast<std::size_t>(s % 40), 3, s % 4 == 0);
        const auto got = non_dominated_indices(pts);
        if (got != oracle::brute_force_front(pts)) ++mismatches;
    }
    c.require(mismatches == 0, "filter differs from brute force on " + std::to_string(mismatches) + "/200 sets");
    c.note("filter 200/200 exact");
}

void oracle_hypervolume(Check& c)
{
    std::mt19937_64 gen(77);
    double worst_z = 0.0;
    int outside = 0;
    for (int s = 0; s < 50; ++s) {
        const std::size_t q = s % 2 == 0 ? 2 : 3;
        const auto front = random_front(gen, 3 + static_cast<std::size_t>(s % 12), q);
        const oracle::Vec ref(q, 1.1);
        const double hv = hypervolume(front, ref);
        const auto mc = oracle::mc_hypervolume(front, ref, 1000000, 1000 + static_cast<std::uint64_t>(s));
        const double z = std::abs(hv - mc.mean) / mc.se;
        worst_z = std::max(worst_z, z);
        if (z > 3.0) ++outside;
    }
    c.require(outside == 0, std::to_string(outside) + "/50 fronts outside 3 SE (worst " + fmt(worst_z) + " SE)");
    c.note("hypervolume 50 fronts, worst " + fmt(worst_z) + " SE");
}

void oracle_solvers(Check& c)
{
    // Elastic net, p = 2 orthonormal design: closed-form soft threshold and grid search.
    {
        const Eigen::Index n = 50;
        Eigen::MatrixXd raw = fixtures::gaussian_matrix(n, 2, 31);
        raw = raw.rowwise() - raw.colwise().mean();
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(raw);
        Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(n, 2);
        Q *= std::sqrt(static_cast<double>(n));
        const Eigen::VectorXd y = Q * Eigen::Vector2d(1.5, -0.3) + 0.5 * fixtures::gaussian_vector(n, 32);
        const auto d = prepare_regression(Q, y);
        const Eigen::VectorXd ols = d.X.transpose() * d.y / static_cast<double>(n);
        double worst = 0.0;
        for (double lambda : {0.05, 0.4, 1.0}) {
            const ElasticNetParams params{lambda, 1.0};
            const auto fit = fit_elastic_net(d, params, 1e-12);
            const auto grid = oracle::grid_refine_2d(
                [&](const oracle::Vec& b) {
                    const Eigen::VectorXd r = d.y - d.X.col(0) * b[0] - d.X.col(1) * b[1];
                    return r.squaredNorm() / (2.0 * n) + lambda * (std::abs(b[0]) + std::abs(b[1]));
                },
                {-3.0, -3.0}, {3.0, 3.0});
            for (int j = 0; j < 2; ++j) {
                const double st = std::copysign(std::max(std::abs(ols(j)) - lambda, 0.0), ols(j));
                worst = std::max({worst, std::abs(fit.beta(j) - st), std::abs(grid[static_cast<std::size_t>(j)] - st)});
            }
        }
        c.require(worst <= 1e-4, "elastic net off soft-threshold/grid by " + fmt(worst));
        c.note("enet grid " + fmt(worst));
    }
    // Fused lasso, p = 2, n = 50: objective within 1e-6 of pattern search.
    {
        auto prob = fixtures::linear_problem(50, Eigen::Vector2d(1.0, 0.6), 15);
        const auto d = prepare_regression(prob.X, prob.y);
        double worst = 0.0;
        for (const FusedLassoParams params : {FusedLassoParams{0.05, 0.1}, FusedLassoParams{0.3, 0.02},
                                              FusedLassoParams{0.01, 0.5}}) {
            const auto fit = fit_fused_lasso(d, params, 1e-11, 200000);
            auto obj = [&](const oracle::Vec& b) {
                const Eigen::VectorXd r = d.y - d.X.col(0) * b[0] - d.X.col(1) * b[1];
                return r.squaredNorm() / 100.0 + params.lambda1 * (std::abs(b[0]) + std::abs(b[1])) +
                       params.lambda2 * std::abs(b[1] - b[0]);
            };
            const double value = obj({fit.beta(0), fit.beta(1)});
            worst = std::max(worst, value - obj(oracle::pattern_search(obj, {0.0, 0.0}, 1.0)));
        }
        c.require(worst <= 1e-6, "fused lasso above pattern search by " + fmt(worst));
        c.note("flasso pattern " + fmt(worst));
    }
    // JGL, K = 2, p = 2: penalized likelihood within 1e-5 of 6-parameter pattern search.
    {
        Eigen::Matrix2d L1, L2;
        L1 << 1.0, 0.0, 0.6, 0.8;
        L2 << 1.0, 0.0, 0.3, 0.9;
        const auto d = make_multigroup({fixtures::gaussian_matrix(30, 2, 101) * L1.transpose(),
                                        fixtures::gaussian_matrix(50, 2, 102) * L2.transpose()});
        double worst = 0.0;
        for (const JGLParams params : {JGLParams{2.0, 1.0, JglPenalty::fused}, JGLParams{0.5, 4.0, JglPenalty::fused},
                                       JGLParams{2.0, 1.0, JglPenalty::group}, JGLParams{0.5, 6.0, JglPenalty::group}}) {
            const auto est = fit_jgl(d, params, 1e-11, 200000);
            auto f = [&](const oracle::Vec& v) {
                double total = 0.0;
                for (int k = 0; k < 2; ++k) {
                    const double a = v[3 * k], b = v[3 * k + 1], cc = v[3 * k + 2], det = a * cc - b * b;
                    if (!(a > 0.0 && cc > 0.0 && det > 0.0)) return std::numeric_limits<double>::infinity();
                    const auto& S = d.S[static_cast<std::size_t>(k)];
                    total += static_cast<double>(d.sample_sizes[static_cast<std::size_t>(k)]) *
                             (S(0, 0) * a + 2.0 * S(0, 1) * b + S(1, 1) * cc - std::log(det));
                    total += params.lambda1 * 2.0 * std::abs(b);
                }
                if (params.penalty == JglPenalty::fused)
                    total += params.lambda2 * (std::abs(v[0] - v[3]) + 2.0 * std::abs(v[1] - v[4]) + std::abs(v[2] - v[5]));
                else
                    total += params.lambda2 * 2.0 * std::hypot(v[1], v[4]);
                return total;
            };
            const oracle::Vec admm{est.theta[0](0, 0), est.theta[0](0, 1), est.theta[0](1, 1),
                                   est.theta[1](0, 0), est.theta[1](0, 1), est.theta[1](1, 1)};
            worst = std::max(worst, f(admm) - f(oracle::pattern_search(f, {1.0, 0.0, 1.0, 1.0, 0.0, 1.0}, 0.25)));
        }
        c.require(worst <= 1e-5, "JGL above pattern search by " + fmt(worst));
        c.note("jgl pattern " + fmt(worst));
    }
}

void oracle_gp(Check& c)
{
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (Eigen::Index m = 1; m <= 10; ++m) {
        Eigen::MatrixXd X(m, 2);
        for (Eigen::Index i = 0; i < m; ++i) X.row(i) << u(gen), u(gen);
        Eigen::VectorXd t(m);
        for (Eigen::Index i = 0; i < m; ++i) t(i) = std::sin(6.0 * X(i, 0)) + X(i, 1) * X(i, 1) + 0.1 * u(gen);
        // Small m uses fixed hyperparameters; m >= 3 uses the fitted ones.
        const GpSurrogate gp = m < 3 ? GpSurrogate::from_params(X, t, {{0.3, 0.5}, 1.2, 1e-4})
                                     : fit_gp(X, t, static_cast<std::uint64_t>(m));
        if (gp.constant()) continue;
        const auto& kp = gp.params();
        std::vector<oracle::Vec> rows(static_cast<std::size_t>(m)), K(static_cast<std::size_t>(m));
        for (Eigen::Index i = 0; i < m; ++i) rows[static_cast<std::size_t>(i)] = {X(i, 0), X(i, 1)};
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = 0; j < rows.size(); ++j)
                K[i].push_back(oracle::matern52(rows[i], rows[j], kp.lengthscales, kp.signal_variance) +
                               (i == j ? gp.nugget() : 0.0));
        const auto inv = oracle::gauss_jordan(K);
        const double mean = t.mean(), sd = std::sqrt((t.array() - mean).square().mean());
        for (int s = 0; s < 20; ++s) {
            const oracle::Vec x{u(gen), u(gen)};
            double mu = 0.0, quad = 0.0;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                const double ki = oracle::matern52(rows[i], x, kp.lengthscales, kp.signal_variance);
                for (std::size_t j = 0; j < rows.size(); ++j) {
                    const double kj = oracle::matern52(rows[j], x, kp.lengthscales, kp.signal_variance);
                    mu += ki * inv.inverse[i][j] * (t(static_cast<Eigen::Index>(j)) - mean) / sd;
                    quad += ki * inv.inverse[i][j] * kj;
                }
            }
            const auto p = gp.predict(x);
            worst = std::max({worst, std::abs(p.mean - (mean + sd * mu)),
                              std::abs(p.variance - sd * sd * (kp.signal_variance - quad))});
        }
    }
    c.require(worst <= 1e-8, "GP differs from dense formula by " + fmt(worst));
    c.note("gp m<=10 worst " + fmt(worst));
}

Check oracle_equivalence()
{
    Check c;
    oracle_filter(c);
    oracle_hypervolume(c);
    oracle_solvers(c);
    oracle_gp(c);
    return c;
}

// ---------------------------------------------------------------- invariants

std::string strip_wall_time(const std::string& s)
{
    return std::regex_replace(s, std::regex("\"wall_time\":[-0-9.eE+]+"), "\"wall_time\":0");
}

void invariant_solvers(Check& c)
{
    auto prob = fixtures::linear_problem(60, (Eigen::VectorXd(6) << 1, 1, 0, -1, 0, 0.5).finished(), 8);
    const auto d = prepare_regression(prob.X, prob.y);
    const ElasticNetParams ep{0.05, 0.7};
    const auto e1 = fit_elastic_net(d, ep), e2 = fit_elastic_net(d, ep);
    c.require(e1.beta == e2.beta && e1.iterations == e2.iterations, "elastic net not deterministic");
    double prev = elastic_net_objective(d, ep, Eigen::VectorXd::Zero(6));
    for (int sweeps = 1; sweeps <= 40; ++sweeps) {
        const double obj = elastic_net_objective(d, ep, fit_elastic_net(d, ep, 1e-14, sweeps).beta);
        c.require(obj <= prev + 1e-15, "elastic net objective rose at sweep " + std::to_string(sweeps));
        prev = obj;
    }

    const FusedLassoParams fp{0.02, 0.05};
    const auto f1 = fit_fused_lasso(d, fp), f2 = fit_fused_lasso(d, fp);
    c.require(f1.beta == f2.beta && f1.iterations == f2.iterations, "fused lasso not deterministic");
    const Eigen::VectorXd ols = d.X.colPivHouseholderQr().solve(d.y);
    const double fobj = fused_lasso_objective(d, fp, f1.beta);
    c.require(fobj <= fused_lasso_objective(d, fp, Eigen::VectorXd::Zero(6)) &&
                  fobj <= fused_lasso_objective(d, fp, ols),
              "fused lasso did not descend below its start and least squares");

    std::vector<Eigen::MatrixXd> groups;
    for (int k = 0; k < 3; ++k) groups.push_back(fixtures::gaussian_matrix(30 + 10 * k, 6, 400 + k));
    const auto g = make_multigroup(groups);
    for (auto pen : {JglPenalty::fused, JglPenalty::group}) {
        const JGLParams jp{0.1 * lambda_anchor_jgl_sparsity(g), 0.5, pen};
        const auto j1 = fit_jgl(g, jp), j2 = fit_jgl(g, jp);
        bool same = j1.iterations == j2.iterations;
        for (std::size_t k = 0; k < 3; ++k) same = same && j1.theta[k] == j2.theta[k];
        c.require(same, std::string("JGL ") + to_string(pen) + " not deterministic");
        std::vector<Eigen::MatrixXd> start(3, Eigen::MatrixXd::Identity(6, 6));
        c.require(jgl_objective(g, jp, j1.theta) <= jgl_objective(g, jp, start),
                  std::string("JGL ") + to_string(pen) + " did not descend below the identity start");
    }
    c.note("solvers deterministic and descending");
}

void invariant_archive(Check& c)
{
    for (const MooResult* r : g_runs) {
        c.require(refilter_idempotent(*r), "re-filtering a scenario archive changed it");
        c.require(trace_monotone(r->hypervolume_trace), "scenario hypervolume trace decreased");
    }
    std::mt19937_64 gen(99);
    for (int s = 0; s < 100; ++s) {
        const auto pts = random_set(gen, 40, 3, s % 2 == 0);
        std::vector<EvaluationRecord> recs;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            EvaluationRecord r;
            r.id = static_cast<int>(i);
            r.objectives.values = pts[i];
            recs.push_back(r);
        }
        const auto once = non_dominated_filter(recs);
        c.require(non_dominated_filter(once.records).ids() == once.ids(), "re-filter changed a random archive");
    }
    c.note(std::to_string(g_runs.size()) + " scenario archives idempotent with monotone traces");
}

void invariant_ehvi(Check& c)
{
    const Front front{{0.2, 0.8, 0.5}, {0.5, 0.5, 0.5}, {0.8, 0.2, 0.3}};
    const std::vector<double> ref{1.0, 1.0, 1.0};
    const Eigen::MatrixXd z = common_normals(4096, 3, 3);
    double prev = std::numeric_limits<double>::infinity();
    for (double var : {1e-2, 1e-4, 1e-6, 1e-8, 1e-12, 0.0}) {
        const std::vector<Prediction> pred(3, Prediction{0.6, var});
        const double v = ehvi_from_predictions(pred, front, ref, z).value;
        c.require(v <= prev, "EHVI grew as the variance shrank");
        prev = v;
    }
    c.require(prev == 0.0, "EHVI at zero variance is " + fmt(prev));
    c.note("EHVI 0 at zero variance");
}

void invariant_reproducible(Check& c)
{
    const fs::path dir = fs::temp_directory_path() / "paretune_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const auto sim = simulate_enet(60, 4, 12);
    Eigen::MatrixXd m(60, 5);
    m << sim.y, sim.X;
    write_csv((dir / "d.csv").string(), {"y", "x1", "x2", "x3", "x4"}, m);
    const auto groups = simulate_jgl({25, 35}, 6, 4);
    for (int k = 0; k < 2; ++k)
        write_csv((dir / ("g" + std::to_string(k + 1) + ".csv")).string(), groups.names, groups.groups[k]);

    auto config = [&](Family f, const std::string& tag) {
        RunConfig rc;
        rc.family = f;
        rc.inputs = f == Family::enet ? std::vector<std::string>{(dir / "d.csv").string()}
                                      : std::vector<std::string>{(dir / "g1.csv").string(), (dir / "g2.csv").string()};
        rc.budget.total_budget = 14;
        rc.budget.candidate_pool_size = 300;
        rc.budget.mc_samples = 256;
        rc.budget.seed = 21;
        rc.out_json = (dir / (tag + ".json")).string();
        rc.out_html = (dir / (tag + ".html")).string();
        rc.progress = false;
        return rc;
    };
    for (Family f : {Family::enet, Family::jgl_group}) {
        const std::string name = to_string(f);
        std::ostringstream err;
        const int a = run(config(f, name + "_a"), err), b = run(config(f, name + "_b"), err);
        c.require(a == exit_ok && b == exit_ok, name + " run failed: " + err.str());
        if (a != exit_ok || b != exit_ok) continue;
        const std::string ja = read_file((dir / (name + "_a.json")).string());
        const std::string jb = read_file((dir / (name + "_b.json")).string());
        c.require(ja != strip_wall_time(ja), name + " JSON has no wall_time field");
        c.require(strip_wall_time(ja) == strip_wall_time(jb), name + " JSON differs between runs");
        c.require(extract_embedded_json(read_file((dir / (name + "_a.html")).string())) == ja,
                  name + " HTML data block differs from the JSON file");
    }
    fs::remove_all(dir);
    c.note("JSON byte-identical (wall_time aside)");
}

Check invariants()
{
    Check c;
    invariant_solvers(c);
    invariant_archive(c);
    invariant_ehvi(c);
    invariant_reproducible(c);
    return c;
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Check()>>> criteria{
        {"scenario-enet", scenario_enet},
        {"scenario-flasso", scenario_flasso},
        {"scenario-jgl", scenario_jgl},
        {"sparser-network", scenario_sparser_network},
        {"oracle-equivalence", oracle_equivalence},
        {"invariants", invariants},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Check c;
        try {
            c = fn();
        } catch (const std::exception& e) {
            c.require(false, std::string("exception: ") + e.what());
        }
        if (!c.passed()) ++failed;
        std::printf("%s %s (%.1f s): %s\n", c.passed() ? "PASS" : "FAIL", name.c_str(), seconds_since(t0),
                    c.detail().c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
