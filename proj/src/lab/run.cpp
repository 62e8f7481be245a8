#include <cmclab/curvature.hpp>
#include <cmclab/density.hpp>
#include <cmclab/functionals.hpp>
#include <cmclab/generators.hpp>
#include <cmclab/lab/run.hpp>
#include <cmclab/lab/svg.hpp>
#include <cmclab/mesh_io.hpp>
#include <cmclab/sphere_map.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <thread>

namespace cmclab::lab {

namespace {

constexpr double kPi = std::numbers::pi;

std::string num(double v) { return format_number(v); }

SurfaceMesh scenario_surface(const ExperimentConfig& c)
{
    if (c.input_mesh) return load_mesh(*c.input_mesh);
    return generate(*c.generator);
}

SurfaceMesh scale_to_sphere_area(const SurfaceMesh& mesh)
{
    return scale_mesh(mesh, std::sqrt(4.0 * kPi / mesh.total_area()));
}

// Smallest consecutive difference (sign flipped for decreasing sequences).
double min_step(const std::vector<double>& v, bool increasing)
{
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < v.size(); ++i) m = std::min(m, increasing ? v[i] - v[i - 1] : v[i - 1] - v[i]);
    return v.size() < 2 ? 0.0 : m;
}

struct Output
{
    ExperimentResult result;
    std::vector<std::pair<std::string, std::string>> files; // name -> contents
};

void rigidity_curve(const ExperimentConfig& c, Output& out)
{
    GeneratorSpec base;
    base.kind = GeneratorKind::PerturbedSphere;
    if (c.generator) base = *c.generator;
    // rigidity_report compares against the unit sphere.
    base.normalize_area = true;

    std::vector<double> amps = c.params.amplitudes;
    std::sort(amps.begin(), amps.end());
    struct Row
    {
        double deficit_l2, w22, u, eu, sum, c_dev, willmore_raw, qc_mean;
    };
    std::vector<Row> rows(amps.size());
    parallel_for(amps.size(), [&](std::size_t i) {
        GeneratorSpec g = base;
        g.amplitude = amps[i];
        const SurfaceMesh mesh = generate(g);
        const EnergyReport e = energy_report(mesh, compute_curvature(mesh));
        const RigidityReport r = rigidity_report(mesh);
        rows[i] = {e.deficit_l2.value_or(std::nan("")), r.w22_deficit, r.sup_log_conformal, r.sup_exp_conformal,
                   r.w22_deficit + r.sup_log_conformal, r.c_deviation.value_or(std::nan("")), e.willmore_raw,
                   r.qc_mean};
    });

    CsvTable t;
    t.header = {"amplitude", "deficit_l2", "w22_deficit", "sup_log_conformal", "sup_exp_conformal",
                "rigidity_sum", "c_deviation", "willmore_raw", "qc_mean"};
    std::vector<double> dl2, w22, sum;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const Row& r = rows[i];
        t.add_row({num(amps[i]), num(r.deficit_l2), num(r.w22), num(r.u), num(r.eu), num(r.sum), num(r.c_dev),
                   num(r.willmore_raw), num(r.qc_mean)});
        dl2.push_back(r.deficit_l2);
        w22.push_back(r.w22);
        sum.push_back(r.sum);
    }
    out.result.tables.emplace_back("rigidity_curve", t);
    out.result.summary.push_back(make_check("deficit_l2 strictly increasing (min step)", min_step(dl2, true), ">", 0));
    out.result.summary.push_back(make_check("w22_deficit strictly increasing (min step)", min_step(w22, true), ">", 0));
    out.result.summary.push_back(
        make_check("w22_deficit + sup_log_conformal strictly increasing (min step)", min_step(sum, true), ">", 0));

    Plot p;
    p.title = "Rigidity curve";
    p.x_label = "amplitude";
    p.y_label = "deficit";
    p.series = {{"w22_deficit", amps, w22, true}, {"w22 + sup|u|", amps, sum, true}, {"deficit_l2", amps, dl2, true}};
    out.files.emplace_back("rigidity_curve.svg", render_svg(p));
}

void bubbling_sweep_scenario(const ExperimentConfig& c, Output& out)
{
    const int subdiv = c.generator ? c.generator->subdiv : 4;
    const auto& necks = c.params.necks;
    struct Row
    {
        double willmore_raw, min_rd, max_theta;
    };
    std::vector<Row> rows(necks.size());
    parallel_for(necks.size(), [&](std::size_t i) {
        GeneratorSpec g;
        g.kind = GeneratorKind::BubblingPair;
        g.subdiv = subdiv;
        g.neck_radius = necks[i];
        const SurfaceMesh mesh = generate(g);
        const EnergyReport e = energy_report(mesh, compute_curvature(mesh));
        const std::vector<int> region = neck_region_vertices(mesh, necks[i]);
        const std::size_t want = std::min<std::size_t>(static_cast<std::size_t>(c.params.neck_samples), region.size());
        const BallIntegrator balls(mesh);
        Row r{e.willmore_raw, std::numeric_limits<double>::infinity(), 0.0};
        for (std::size_t k = 0; k < want; ++k) {
            const int v = region[k * region.size() / want];
            const Eigen::VectorXd x = mesh.vertex(static_cast<std::size_t>(v));
            r.min_rd = std::min(r.min_rd, nonconcentration_radius(balls, x, c.params.gamma, c.params.r_max));
            const double th = c.params.theta_radius;
            r.max_theta = std::max(r.max_theta, balls.mass(x, th) / (kPi * th * th));
        }
        rows[i] = r;
    });

    CsvTable t;
    t.header = {"neck", "willmore_raw", "min_rD", "max_theta_neck"};
    std::vector<double> w, rd;
    for (std::size_t i = 0; i < necks.size(); ++i) {
        t.add_row({num(necks[i]), num(rows[i].willmore_raw), num(rows[i].min_rd), num(rows[i].max_theta)});
        w.push_back(rows[i].willmore_raw);
        rd.push_back(rows[i].min_rd);
    }
    out.result.tables.emplace_back("bubbling_sweep", t);
    out.result.summary.push_back(make_check("willmore_raw strictly increasing (min step)", min_step(w, true), ">", 0));
    out.result.summary.push_back(make_check("|willmore_raw - 32 pi| / 32 pi at last neck",
                                            std::abs(w.back() - 32.0 * kPi) / (32.0 * kPi), "<=",
                                            c.params.willmore_tolerance));
    out.result.summary.push_back(
        make_check("min r^D first / last neck", rd.front() / rd.back(), ">=", c.params.rd_ratio));

    Plot pw;
    pw.title = "Bubbling sweep: Willmore energy";
    pw.x_label = "neck";
    pw.y_label = "willmore_raw / (32 pi)";
    std::vector<double> ratio;
    for (double v : w) ratio.push_back(v / (32.0 * kPi));
    pw.series = {{"willmore_raw / 32 pi", necks, ratio, true}};
    out.files.emplace_back("bubbling_willmore.svg", render_svg(pw));
    Plot pr;
    pr.title = "Bubbling sweep: non-concentration radius";
    pr.x_label = "neck";
    pr.y_label = "min r^D";
    pr.log_y = true;
    pr.series = {{"min r^D", necks, rd, true}};
    out.files.emplace_back("bubbling_rd.svg", render_svg(pr));
}

void monotonicity_scenario(const ExperimentConfig& c, Output& out)
{
    const SurfaceMesh mesh = scenario_surface(c);
    const CurvaturePacket packet = compute_curvature(mesh);
    const auto samples = random_monotonicity_samples(mesh, static_cast<std::size_t>(c.params.samples), c.params.seed,
                                                     c.params.a_min, c.params.a_max);
    const auto evals = evaluate_monotonicity(mesh, packet, samples, c.params.delta);

    CsvTable v;
    v.header = {"index", "r", "a", "lhs", "rhs"};
    std::size_t worst = 0;
    std::size_t violations = 0;
    for (const auto& e : evals) {
        if (e.lhs / e.rhs > evals[worst].lhs / evals[worst].rhs) worst = e.index;
        if (!e.violated) continue;
        ++violations;
        const auto& s = samples[e.index];
        v.add_row({std::to_string(e.index), num(s.r), num(s.a), num(e.lhs), num(e.rhs)});
    }
    out.result.tables.emplace_back("monotonicity_violations", v);

    CsvTable w;
    w.header = {"samples", "violations", "worst_index", "worst_r", "worst_a", "worst_lhs", "worst_rhs", "worst_ratio"};
    if (!evals.empty()) {
        const auto& e = evals[worst];
        w.add_row({std::to_string(evals.size()), std::to_string(violations), std::to_string(worst),
                   num(samples[worst].r), num(samples[worst].a), num(e.lhs), num(e.rhs), num(e.lhs / e.rhs)});
    }
    out.result.tables.emplace_back("monotonicity_summary", w);
    out.result.summary.push_back(make_check("monotonicity violations", static_cast<double>(violations), "<=", 0));
}

void minimal_sphere_scenario(const ExperimentConfig& c, Output& out)
{
    const int subdiv = c.generator ? c.generator->subdiv : 4;
    GeneratorSpec torus;
    torus.kind = GeneratorKind::CliffordTorus;
    torus.grid_u = torus.grid_v = c.params.torus_grid;
    const std::vector<std::tuple<std::string, SurfaceMesh, double>> cases{
        {"sphere", scale_to_sphere_area(make_icosphere(subdiv)), 2.0},
        {"clifford_torus", scale_to_sphere_area(generate(torus)), kPi},
    };
    CsvTable t;
    t.header = {"surface", "j_value", "j_c", "expected_c", "pass"};
    for (const auto& [name, mesh, expected] : cases) {
        const JFunctional j = j_functional(mesh, compute_curvature(mesh));
        const CheckResult cc =
            make_check(name + " |j_c - c| / c", std::abs(j.j_c - expected) / expected, "<=", c.params.c_tolerance);
        const CheckResult cj = make_check(name + " j_value", j.j_value, "<=", c.params.j_bound);
        t.add_row({name, num(j.j_value), num(j.j_c), num(expected), cc.passed && cj.passed ? "true" : "false"});
        out.result.summary.push_back(cc);
        out.result.summary.push_back(cj);
    }
    out.result.tables.emplace_back("minimal_sphere_check", t);
}

void density_scan_scenario(const ExperimentConfig& c, Output& out)
{
    const SurfaceMesh mesh = scenario_surface(c);
    const auto basepoints = farthest_point_samples(mesh, static_cast<std::size_t>(c.params.basepoints));
    std::vector<DensityProfile> profiles(basepoints.size());
    parallel_for(basepoints.size(), [&](std::size_t k) { profiles[k] = density_profile(mesh, basepoints[k], c.params.radii); });

    CsvTable all;
    all.header = {"basepoint", "vertex", "r", "mass", "theta"};
    Plot p;
    p.title = "Density ratio";
    p.x_label = "r";
    p.y_label = "theta";
    double worst_step = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < profiles.size(); ++k) {
        const DensityProfile& d = profiles[k];
        CsvTable one;
        one.header = {"r", "mass", "theta"};
        for (std::size_t i = 0; i < d.radii.size(); ++i) {
            one.add_row({num(d.radii[i]), num(d.masses[i]), num(d.ratios[i])});
            all.add_row({std::to_string(k), std::to_string(d.basepoint), num(d.radii[i]), num(d.masses[i]),
                         num(d.ratios[i])});
        }
        if (d.masses.size() > 1) worst_step = std::min(worst_step, min_step(d.masses, true));
        out.result.tables.emplace_back("density_" + std::to_string(k), one);
        p.series.push_back({"vertex " + std::to_string(d.basepoint), d.radii, d.ratios, true});
    }
    out.result.tables.emplace_back("density_scan", all);
    if (std::isfinite(worst_step)) {
        out.result.summary.push_back(make_check("ball mass nondecreasing in r (min step)", worst_step, ">=", 0));
    }
    out.files.emplace_back("density_scan.svg", render_svg(p));
}

void single_report_scenario(const ExperimentConfig& c, Output& out)
{
    const SurfaceMesh mesh = scenario_surface(c);
    SingleReport r = single_report(mesh, c.params);
    out.files.emplace_back("report.txt", r.report.str());
    out.result.summary = std::move(r.checks);
}

} // namespace

std::string CheckResult::line() const
{
    return std::string(passed ? "PASS " : "FAIL ") + name + ": " + format_number(lhs) + " " + relation + " " +
           format_number(rhs);
}

CheckResult make_check(std::string name, double lhs, std::string relation, double rhs)
{
    bool ok = false;
    if (relation == "<=") ok = lhs <= rhs;
    else if (relation == ">=") ok = lhs >= rhs;
    else if (relation == "<") ok = lhs < rhs;
    else if (relation == ">") ok = lhs > rhs;
    else throw Error("unknown relation " + relation);
    return {std::move(name), lhs, std::move(relation), rhs, ok};
}

bool ExperimentResult::all_passed() const
{
    return std::all_of(summary.begin(), summary.end(), [](const CheckResult& c) { return c.passed; });
}

std::string ExperimentResult::summary_text() const
{
    std::string s;
    for (const auto& c : summary) s += c.line() + "\n";
    return s;
}

unsigned lab_threads()
{
    if (const char* env = std::getenv("LAB_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn)
{
    const std::size_t workers = std::min<std::size_t>(lab_threads(), count);
    std::vector<std::exception_ptr> errors(count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        }
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

SingleReport single_report(const SurfaceMesh& mesh, const ScenarioParams& params)
{
    SingleReport out;
    const MeshDiagnostics diag = validate(mesh);
    out.report.append("mesh.", to_report(diag));
    out.report.add("mesh.ambient_dim", mesh.ambient_dim());
    out.report.add("mesh.vertices", static_cast<int>(mesh.num_vertices()));
    out.report.add("mesh.triangles", static_cast<int>(mesh.num_triangles()));
    out.checks.push_back(make_check("mesh valid", diag.ok() ? 1.0 : 0.0, ">=", 1.0));
    if (!diag.ok()) return out;

    const CurvaturePacket packet = compute_curvature(mesh);
    const EnergyReport e = energy_report(mesh, packet);
    out.report.append("energy.", to_report(e));
    const double w = params.w.value_or(e.willmore_quarter);

    if (mesh.ambient_dim() == 3 && std::abs(signed_volume(mesh)) >= 1e-12) {
        out.report.append("alexandrov.", to_report(alexandrov_report(mesh, packet)));
    }

    out.report.add("constants.c_delta", monotonicity_constant(params.delta));
    out.report.add("constants.sigma", total_curvature_sigma(params.gamma));
    const LemmaConstants k = lemma_constants(params.gamma, w);
    out.report.add("constants.epsilon_gamma", k.epsilon_gamma);
    out.report.add("constants.a_gamma_w", k.a_gamma_w);
    out.report.add("constants.w", w);
    out.report.append("radii.", to_report(radii_report(mesh, packet, mesh.vertex(0), params.gamma, params.epsilon,
                                                       params.r_max)));

    const DiameterBound db = diameter_bound_check(e);
    out.checks.push_back(make_check("diameter <= 28 sqrt(area W)", e.diameter, "<=", db.slack + e.diameter));

    const double eps_sq = params.epsilon * params.epsilon;
    if (e.j_value <= eps_sq) {
        const CBounds cb = c_bounds_check(e, params.epsilon);
        out.report.add("c_bounds.lower", cb.lower);
        out.report.add("c_bounds.upper", cb.upper);
        out.checks.push_back(make_check("c bounds", cb.holds ? 1.0 : 0.0, ">=", 1.0));
    } else {
        out.report.add("c_bounds.status", std::string("skipped: J exceeds epsilon^2"));
    }

    const bool sphere_area = std::abs(e.area - 4.0 * kPi) <= 0.005 * 4.0 * kPi;
    if (e.deficit_l2 && sphere_area && *e.deficit_l2 <= eps_sq) {
        out.report.add("mean_lower_bound.value", mean_lower_bound(params.epsilon));
        out.checks.push_back(make_check("Hbar >= 2 sqrt(1 - eps^2 / 16 pi) - 0.02", *e.mean_scalar, ">=",
                                        mean_lower_bound(params.epsilon) - 0.02));
    } else {
        out.report.add("mean_lower_bound.status", std::string("skipped: needs area 4 pi and deficit <= epsilon^2"));
    }

    if (e.euler_char == 2 && diag.num_components == 1 && sphere_area) {
        try {
            out.report.append("rigidity.", to_report(rigidity_report(mesh)));
        } catch (const FlowDiverged& ex) {
            out.report.add("rigidity.status", std::string("failed: ") + ex.what());
        }
    } else {
        out.report.add("rigidity.status", std::string("skipped: needs a genus-0 surface of area 4 pi"));
    }
    return out;
}

ExperimentResult run(const ExperimentConfig& config)
{
    Output out;
    out.result.scenario = config.scenario;
    try {
        switch (config.scenario) {
        case Scenario::RigidityCurve: rigidity_curve(config, out); break;
        case Scenario::BubblingSweep: bubbling_sweep_scenario(config, out); break;
        case Scenario::MonotonicityAudit: monotonicity_scenario(config, out); break;
        case Scenario::MinimalSphereCheck: minimal_sphere_scenario(config, out); break;
        case Scenario::DensityScan: density_scan_scenario(config, out); break;
        case Scenario::SingleReport: single_report_scenario(config, out); break;
        }
    } catch (const ScenarioFailure&) {
        throw;
    } catch (const std::exception& e) {
        throw ScenarioFailure(config.scenario, e.what());
    }

    std::filesystem::create_directories(config.output_dir);
    auto emit = [&](const std::string& name, const std::string& text) {
        const std::filesystem::path path = config.output_dir / name;
        write_text(path, text);
        out.result.artifacts.push_back(path);
    };
    emit("resolved.cfg", resolved_config(config));
    for (const auto& [stem, table] : out.result.tables) emit(stem + ".csv", table.str());
    for (const auto& [name, text] : out.files) emit(name, text);
    emit("summary.txt", out.result.summary_text());
    return std::move(out.result);
}

} // namespace cmclab::lab
