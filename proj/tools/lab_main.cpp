#include <cmclab/generators.hpp>
#include <cmclab/lab/config.hpp>
#include <cmclab/lab/run.hpp>
#include <cmclab/mesh_io.hpp>

#include <CLI11.hpp>

#include <iostream>

using namespace cmclab;

int main(int argc, char** argv)
{
    CLI::App app{"Experiments on almost-CMC and Willmore-type surface meshes"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run_cmd = app.add_subcommand("run", "Run the scenario described by a config file");
    run_cmd->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
    run_cmd->footer(lab::config_help());

    std::string report_mesh;
    lab::ScenarioParams report_params;
    double report_w = 0.0;
    auto* report_cmd = app.add_subcommand("report", "Print the key=value report of one mesh");
    report_cmd->add_option("mesh", report_mesh, "Mesh file (.obj or .ndmesh)")->required()->check(CLI::ExistingFile);
    report_cmd->add_option("--gamma", report_params.gamma, "Non-concentration level in (0, 1/2)")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 0.5));
    report_cmd->add_option("--delta", report_params.delta, "Monotonicity delta")->capture_default_str();
    report_cmd->add_option("--epsilon", report_params.epsilon, "Deficit level")->capture_default_str();
    auto* w_opt = report_cmd->add_option("--w", report_w, "Willmore bound W (default: the mesh's own)");

    std::string gen_spec;
    std::string gen_out;
    auto* gen_cmd = app.add_subcommand("gen", "Generate a surface");
    gen_cmd->add_option("spec", gen_spec, "Config file with a [generator] section, or kind=...,subdiv=...")
        ->required();
    gen_cmd->add_option("-o,--output", gen_out, "Output path (.obj or .ndmesh)")->required();

    std::string validate_mesh;
    auto* validate_cmd = app.add_subcommand("validate", "Check mesh topology");
    validate_cmd->add_option("mesh", validate_mesh, "Mesh file")->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            const lab::ExperimentConfig config = lab::parse_config(config_path);
            const lab::ExperimentResult result = lab::run(config);
            std::cout << result.summary_text();
            for (const auto& a : result.artifacts) std::cout << "wrote " << a.generic_string() << "\n";
            return result.all_passed() ? 0 : 1;
        }
        if (*report_cmd) {
            if (report_params.delta <= 0.0 || report_params.epsilon <= 0.0) {
                std::cerr << "error: --delta and --epsilon must be positive\n";
                return 2;
            }
            if (*w_opt) {
                if (report_w <= 0.0) {
                    std::cerr << "error: --w must be positive\n";
                    return 2;
                }
                report_params.w = report_w;
            }
            const lab::SingleReport r = lab::single_report(load_mesh(report_mesh), report_params);
            std::cout << r.report.str();
            bool ok = true;
            for (const auto& c : r.checks) {
                std::cout << "check = " << c.line() << "\n";
                ok = ok && c.passed;
            }
            return ok ? 0 : 1;
        }
        if (*gen_cmd) {
            const SurfaceMesh mesh = generate(lab::parse_generator_spec(gen_spec));
            save_mesh(mesh, gen_out);
            std::cout << "wrote " << gen_out << " (" << mesh.num_vertices() << " vertices, " << mesh.num_triangles()
                      << " triangles)\n";
            return 0;
        }
        if (*validate_cmd) {
            const SurfaceMesh mesh = load_mesh(validate_mesh);
            const MeshDiagnostics d = validate(mesh);
            std::cout << lab::to_report(d).str();
            return d.ok() ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
