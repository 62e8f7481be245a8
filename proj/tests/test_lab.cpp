#include "support.hpp"

#include <cmclab/errors.hpp>
#include <cmclab/lab/config.hpp>
#include <cmclab/lab/report.hpp>
#include <cmclab/lab/run.hpp>
#include <cmclab/lab/svg.hpp>
#include <cmclab/mesh_io.hpp>

#include <doctest.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace cmclab;
using namespace cmclab::lab;

namespace {

std::filesystem::path fresh_dir(const std::string& name)
{
    const auto dir = std::filesystem::temp_directory_path() / ("cmclab_lab_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

ConfigError config_error(const std::string& text)
{
    try {
        parse_config_text(text);
    } catch (const ConfigError& e) {
        return e;
    }
    FAIL("expected ConfigError");
    return ConfigError("", 0, "");
}

} // namespace

TEST_CASE("config defaults")
{
    const ExperimentConfig c = parse_config_text("scenario = MinimalSphereCheck\n");
    CHECK(c.scenario == Scenario::MinimalSphereCheck);
    CHECK_FALSE(c.generator.has_value());
    CHECK(c.params.gamma == 0.1);
    CHECK(c.params.delta == 0.5);
    CHECK(c.params.samples == 500);
    CHECK(c.params.amplitudes == std::vector<double>{0.01, 0.02, 0.04, 0.08});
    CHECK(c.output_dir == "lab_out");
}

TEST_CASE("config parsing")
{
    const ExperimentConfig c = parse_config_text(R"(# rigidity sweep
scenario = RigidityCurve
output_dir = out/rig   # trailing comment

[generator]
kind = PerturbedSphere
subdiv = 3
seed = 9

[params]
amplitudes = 0.02, 0.01
gamma = 0.2
)");
    CHECK(c.scenario == Scenario::RigidityCurve);
    REQUIRE(c.generator);
    CHECK(c.generator->kind == GeneratorKind::PerturbedSphere);
    CHECK(c.generator->subdiv == 3);
    CHECK(c.generator->seed == 9);
    CHECK(c.params.amplitudes == std::vector<double>{0.02, 0.01});
    CHECK(c.params.gamma == 0.2);
    CHECK(c.output_dir == std::filesystem::path(".") / "out/rig");
}

TEST_CASE("config errors name the key and line")
{
    const ConfigError typo = config_error("scenario = DensityScan\n[generator]\nkind = Icosphere\n[params]\ngamna = 0.1\n");
    CHECK(typo.key() == "params.gamna");
    CHECK(typo.line() == 5);

    CHECK(config_error("scenario = SingleReport\n[generator]\n[params]\ngamma = 0.7\n").key() == "params.gamma");
    CHECK(config_error("scenario = MinimalSphereCheck\n[extra]\n").line() == 2);
    CHECK(config_error("scenario = MinimalSphereCheck\n[params]\ndelta = 1\ndelta = 2\n").line() == 4);
    CHECK(config_error("scenario = MinimalSphereCheck\n[params]\nsamples = -3\n").key() == "params.samples");
    CHECK(config_error("scenario = MinimalSphereCheck\n[params]\ndelta = abc\n").key() == "params.delta");
    CHECK(config_error("scenario = Nope\n").key() == "scenario");
    CHECK(config_error("output_dir = x\n").key() == "scenario");
    CHECK(config_error("scenario = SingleReport\ninput_mesh = /no/such/file.obj\n").key() == "input_mesh");
    CHECK(config_error("scenario = DensityScan\n").key() == "generator");
    CHECK(config_error("scenario = RigidityCurve\n[generator]\nkind = Icosphere\n").key() == "generator.kind");
    CHECK(config_error("scenario = BubblingSweep\n[generator]\nkind = Icosphere\n").key() == "generator.kind");
    CHECK(config_error("scenario = SingleReport\n[generator]\nkind = Blob\n").key() == "generator.kind");
    CHECK(config_error("scenario = SingleReport\n[generator]\nwidth = 3\n").key() == "generator.width");
}

TEST_CASE("config with an input mesh")
{
    const auto dir = fresh_dir("input");
    save_mesh(make_icosphere(1), dir / "ico.obj");
    const ExperimentConfig c = parse_config_text("scenario = SingleReport\ninput_mesh = ico.obj\n", dir);
    REQUIRE(c.input_mesh);
    CHECK(*c.input_mesh == dir / "ico.obj");
    const ConfigError both = config_error(
        "scenario = SingleReport\ninput_mesh = " + (dir / "ico.obj").string() + "\n[generator]\nkind = Icosphere\n");
    CHECK(both.key() == "input_mesh");
}

TEST_CASE("resolved config reparses to the same config")
{
    const ExperimentConfig c = parse_config_text(
        "scenario = BubblingSweep\n[generator]\nkind = BubblingPair\nsubdiv = 2\n[params]\nnecks = 0.2, 0.1\nw = 50\n");
    const std::string text = resolved_config(c);
    const ExperimentConfig back = parse_config_text(text, "");
    CHECK(resolved_config(back) == text);
    CHECK(back.params.necks == c.params.necks);
    REQUIRE(back.params.w);
    CHECK(*back.params.w == 50.0);
    CHECK(back.generator->subdiv == 2);
    CHECK(config_help().find("gamma") != std::string::npos);
}

TEST_CASE("inline generator specs")
{
    const GeneratorSpec g = parse_generator_spec("kind=Ellipsoid,subdiv=2,axes=1,2,3");
    CHECK(g.kind == GeneratorKind::Ellipsoid);
    CHECK(g.subdiv == 2);
    CHECK(g.axes == std::array<double, 3>{1.0, 2.0, 3.0});
    CHECK_THROWS_AS(parse_generator_spec("kind=Ellipsoid,colour=red"), ConfigError);
}

TEST_CASE("number formatting")
{
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(0.1 + 0.2) == "0.3");
    CHECK(format_number(1.0 / 3.0) == "0.333333333333");
    CHECK(format_number(2.0) == "2");
    CHECK(format_number(-1.5e-20) == "-1.5e-20");
    CHECK(format_number(1e300) == "1e+300");
    CHECK(format_number(123456789012345.0) == "1.23456789012e+14");
    CHECK(format_number(std::nan("")) == "nan");
    CHECK(format_number(-INFINITY) == "-inf");
}

TEST_CASE("csv quoting")
{
    CsvTable t{{"name", "value"}, {}};
    t.add_row({"plain", "1"});
    t.add_row({"with,comma", "say \"hi\""});
    t.add_row({"multi\nline", ""});
    CHECK(t.str() == "name,value\nplain,1\n\"with,comma\",\"say \"\"hi\"\"\"\n\"multi\nline\",\n");
    CHECK_THROWS_AS(t.add_row({"short"}), Error);
}

TEST_CASE("key value reports")
{
    KeyValueReport r;
    r.add("a", 0.5);
    r.add("b", 3);
    r.add("c", true);
    KeyValueReport outer;
    outer.append("x.", r);
    CHECK(outer.str() == "x.a = 0.5\nx.b = 3\nx.c = true\n");
}

TEST_CASE("svg output")
{
    Plot p;
    p.title = "W <vs> t & more";
    p.x_label = "t";
    p.y_label = "W";
    p.series.push_back({"data", {1, 2, 3}, {1, 4, 9}, true});
    p.log_y = true;
    const std::string svg = render_svg(p);
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("W &lt;vs&gt; t &amp; more") != std::string::npos);
    CHECK(svg.find("<polyline") != std::string::npos);
}

TEST_CASE("check lines")
{
    const CheckResult c = make_check("trend", 1.0, "<=", 2.0);
    CHECK(c.passed);
    CHECK(c.line() == "PASS trend: 1 <= 2");
    CHECK_FALSE(make_check("x", 3.0, "<", 3.0).passed);
    CHECK(make_check("x", 3.0, ">=", 3.0).passed);
}

TEST_CASE("thread count and parallel_for")
{
    setenv("LAB_THREADS", "3", 1);
    CHECK(lab_threads() == 3);
    setenv("LAB_THREADS", "zero", 1);
    CHECK(lab_threads() >= 1);
    unsetenv("LAB_THREADS");
    CHECK(lab_threads() >= 1);

    std::vector<std::atomic<int>> hits(100);
    parallel_for(100, [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) CHECK(h.load() == 1);

    try {
        parallel_for(50, [](std::size_t i) {
            if (i == 7 || i == 31) throw std::runtime_error(std::to_string(i));
        });
        FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()) == "7");
    }
}

TEST_CASE("single report")
{
    ScenarioParams params;
    const SingleReport r = single_report(make_icosphere(3), params);
    const std::string text = r.report.str();
    CHECK(text.find("energy.j_c = ") != std::string::npos);
    CHECK(text.find("mesh.euler_characteristic = 2") != std::string::npos);
    CHECK_FALSE(r.checks.empty());
    for (const auto& c : r.checks) CHECK_MESSAGE(c.passed, c.line());
}

TEST_CASE("runs are reproducible")
{
    const std::string cfg = "scenario = MinimalSphereCheck\n[generator]\nkind = Icosphere\nsubdiv = 3\n"
                            "[params]\ntorus_grid = 48\n";
    const auto dir_a = fresh_dir("run_a");
    const auto dir_b = fresh_dir("run_b");
    ExperimentConfig a = parse_config_text(cfg + "", ".");
    a.output_dir = dir_a;
    ExperimentConfig b = a;
    b.output_dir = dir_b;

    setenv("LAB_THREADS", "1", 1);
    const ExperimentResult ra = run(a);
    setenv("LAB_THREADS", "4", 1);
    const ExperimentResult rb = run(b);
    unsetenv("LAB_THREADS");

    CHECK(ra.all_passed());
    CHECK_FALSE(ra.tables.empty());
    CHECK(ra.artifacts.size() == rb.artifacts.size());
    CHECK(std::filesystem::exists(dir_a / "resolved.cfg"));
    CHECK(std::filesystem::exists(dir_a / "summary.txt"));
    for (const auto& path : ra.artifacts) {
        CHECK(std::filesystem::exists(path));
        if (path.filename() == "resolved.cfg") continue;
        CHECK_MESSAGE(slurp(path) == slurp(dir_b / path.filename()), path.string());
    }
    CHECK(ra.summary_text() == rb.summary_text());
}

TEST_CASE("scenario errors are wrapped")
{
    const auto dir = fresh_dir("wrapped");
    CHECK(config_error("scenario = BubblingSweep\n[params]\nnecks = 0.1, 0.2\n").key() == "params.necks");
    ExperimentConfig c = parse_config_text("scenario = SingleReport\n[generator]\nkind = Icosphere\n");
    c.generator->subdiv = 9;
    c.output_dir = dir;
    CHECK_THROWS_AS(run(c), ScenarioFailure);
}
