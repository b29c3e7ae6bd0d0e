#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "mechsynth/io.hpp"

using namespace mechsynth;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir()
{
    const fs::path dir = fs::temp_directory_path() / "mechsynth_test_io";
    fs::create_directories(dir);
    return dir;
}

std::vector<std::string> lines_of(const std::string& text)
{
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
        lines.push_back(line);
    return lines;
}

void check_same_case(const CaseSpec& a, const CaseSpec& b)
{
    CHECK(a.name == b.name);
    CHECK(a.targets == b.targets);
    CHECK(a.gene_bounds == b.gene_bounds);
    CHECK(a.has_frame == b.has_frame);
    CHECK(a.angle_mode.index() == b.angle_mode.index());
    CHECK(gene_count(a) == gene_count(b));
    CHECK(a.default_de.np == b.default_de.np);
    CHECK(a.default_de.itermax == b.default_de.itermax);
    CHECK(a.default_de.f == b.default_de.f);
    CHECK(a.default_de.cr == b.default_de.cr);
    CHECK(a.default_de.mp == b.default_de.mp);
    CHECK(a.default_de.mutation == b.default_de.mutation);
}

} // namespace

TEST_CASE("case documents round trip")
{
    for (const char* id : {"1", "2", "2r", "3"}) {
        const CaseSpec spec = builtin_case(id);
        const CaseSpec back = io::case_from_json(io::case_to_json(spec));
        check_same_case(back, spec);
        if (const auto* p = std::get_if<PrescribedAngles>(&spec.angle_mode))
            CHECK(std::get<PrescribedAngles>(back.angle_mode).values == p->values);
        if (const auto* b = std::get_if<BaseWithIncrements>(&spec.angle_mode))
            CHECK(std::get<BaseWithIncrements>(back.angle_mode).increment == b->increment);
    }

    const fs::path file = scratch_dir() / "case3.json";
    io::write_json(file, io::case_to_json(builtin_case("3")));
    check_same_case(io::load_case(file.string()), builtin_case("3"));
    CHECK_THROWS_AS(io::load_case("no-such-case"), std::invalid_argument);
}

TEST_CASE("malformed case documents are rejected")
{
    io::Json doc = io::case_to_json(builtin_case("2"));
    doc["angle_mode"]["type"] = "spiral";
    CHECK_THROWS_AS(io::case_from_json(doc), std::invalid_argument);

    doc = io::case_to_json(builtin_case("2"));
    doc.erase("targets");
    CHECK_THROWS_AS(io::case_from_json(doc), std::invalid_argument);

    doc = io::case_to_json(builtin_case("2"));
    doc["bounds"].erase(0);
    CHECK_THROWS_AS(io::case_from_json(doc), std::invalid_argument);

    doc = io::case_to_json(builtin_case("2"));
    doc["de"]["mutation"] = "best1bin";
    CHECK(io::case_from_json(doc).default_de.mutation == Mutation::BestOneBin);
}

TEST_CASE("run records round trip exactly")
{
    const CaseSpec spec = builtin_case("2");
    DEConfig cfg = spec.default_de;
    cfg.itermax = 12;
    cfg.seed = 77;
    const RunRecord r = run(spec, {.kind = StrategyKind::SSI}, cfg);
    const io::Json doc = io::record_to_json(r);
    for (const char* key : {"case", "strategy", "seed", "best_vector", "best_error", "stop_generation", "history_len",
                            "wall_time", "rng_id"})
        CHECK(doc.contains(key));
    CHECK(doc["history_len"] == 12);

    const RunRecord back = io::record_from_json(io::Json::parse(doc.dump()));
    CHECK(back.same_result(r));
    CHECK(back.wall_time == r.wall_time);
}

TEST_CASE("batch summary document")
{
    const CaseSpec spec = builtin_case("2");
    DEConfig cfg = spec.default_de;
    cfg.itermax = 5;
    const BatchStats stats = batch_run(spec, {}, cfg, 3, 10, 1);
    const io::Json doc = io::stats_to_json(stats, true);
    CHECK(doc["runs"] == 3);
    CHECK(doc["seeds"] == io::Json::array({10, 11, 12}));
    CHECK(doc["records"].size() == 3);
    CHECK(doc.contains("cap_semantics"));
    CHECK(doc["cumulative"].size() == 7);

    std::ostringstream csv;
    io::write_errors_csv(csv, stats);
    CHECK(lines_of(csv.str()).size() == 4);
}

TEST_CASE("vector files")
{
    const fs::path dir = scratch_dir();
    {
        std::ofstream(dir / "v.json") << "[1, 2.5, -3]";
        std::ofstream(dir / "rec.json") << R"({"best_vector": [4, 5], "best_error": 1})";
        std::ofstream(dir / "v.txt") << "1 2.5\n-3\n";
        std::ofstream(dir / "bad.txt") << "1 two 3";
    }
    CHECK(io::load_vector(dir / "v.json") == DesignVector{{1, 2.5, -3}});
    CHECK(io::load_vector(dir / "rec.json") == DesignVector{{4, 5}});
    CHECK(io::load_vector(dir / "v.txt") == DesignVector{{1, 2.5, -3}});
    CHECK_THROWS_AS(io::load_vector(dir / "bad.txt"), std::invalid_argument);
    CHECK_THROWS_AS(io::load_vector(dir / "missing.txt"), std::invalid_argument);
}

TEST_CASE("history CSV has one row per generation")
{
    const CaseSpec spec = builtin_case("2");
    DEConfig cfg = spec.default_de;
    cfg.itermax = 23;
    const RunRecord r = run(spec, {.kind = StrategyKind::LSI}, cfg);
    std::ostringstream out;
    io::write_history_csv(out, r);
    const auto lines = lines_of(out.str());
    CHECK(lines.front() == "generation,best_penalized,best_raw");
    CHECK(lines.size() - 1 == static_cast<std::size_t>(r.stop_generation));
    CHECK(lines.back().rfind("23,", 0) == 0);
}

TEST_CASE("trace CSV of the case 1 best mechanism")
{
    const DesignVector v{{40.061, 10.785, 24.47, 43.887, 32.236, 10.064, 3.7921, -2.4468, 56.545, 1.9659, 2.5047,
                          2.9448, 3.3791, 3.8469, 4.3841}};
    const CaseSpec spec = builtin_case("1");
    const Decoded d = decode(v, spec);
    const Branch branch = branch_errors(d, spec).best_branch();

    std::vector<double> angles(360);
    for (std::size_t i = 0; i < angles.size(); ++i)
        angles[i] = 2 * std::numbers::pi * static_cast<double>(i) / 360.0;
    std::ostringstream out;
    CHECK(io::write_trace_csv(out, d.params, angles, branch) == 360);
    const auto lines = lines_of(out.str());
    CHECK(lines.front() == "theta1,x,y,branch");
    CHECK(lines.size() == 361);
    CHECK(out.str().find("unassemblable") == std::string::npos);

    std::ostringstream mech;
    io::write_mechanism_csv(mech, d.params, angles, branch);
    CHECK(lines_of(mech.str()).size() == 361);

    // An unassemblable linkage is marked row by row.
    MechanismParams broken;
    broken.bars = {10, 1, 1, 1};
    std::ostringstream bad;
    CHECK(io::write_trace_csv(bad, broken, angles, Branch::Open) == 0);
    CHECK(bad.str().find("unassemblable") != std::string::npos);
}

TEST_CASE("unwritable output path")
{
    const fs::path blocker = scratch_dir() / "plain_file";
    std::ofstream(blocker) << "x";
    CHECK_THROWS(io::open_output(blocker / "child.csv"));
}
