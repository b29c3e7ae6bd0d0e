#include "mechsynth/io.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace mechsynth::io {

namespace {

template <typename... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <typename... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Json de_to_json(const DEConfig& cfg)
{
    Json de{{"np", cfg.np}, {"itermax", cfg.itermax}, {"f", cfg.f},
            {"cr", cfg.cr}, {"mp", cfg.mp},           {"strategy", cfg.strategy_id}};
    de["mutation"] = std::string(to_string(cfg.mutation));
    if (cfg.stop_error) de["stop_error"] = *cfg.stop_error;
    return de;
}

DEConfig de_from_json(const Json& de)
{
    DEConfig cfg;
    cfg.np = de.value("np", cfg.np);
    cfg.itermax = de.value("itermax", cfg.itermax);
    cfg.f = de.value("f", cfg.f);
    cfg.cr = de.value("cr", cfg.cr);
    cfg.mp = de.value("mp", cfg.mp);
    cfg.strategy_id = de.value("strategy", cfg.strategy_id);
    if (de.contains("mutation")) cfg.mutation = parse_mutation(de["mutation"].get<std::string>());
    if (de.contains("stop_error") && !de["stop_error"].is_null()) cfg.stop_error = de["stop_error"].get<double>();
    return cfg;
}

std::ostream& precise(std::ostream& out)
{
    return out << std::setprecision(std::numeric_limits<double>::max_digits10);
}

} // namespace

Json case_to_json(const CaseSpec& spec)
{
    Json targets = Json::array();
    for (const auto& t : spec.targets)
        targets.push_back({t.x, t.y});
    Json bounds = Json::array();
    for (const auto& b : spec.gene_bounds)
        bounds.push_back({b.low, b.high});
    const Json mode = std::visit(
        Overloaded{
            [](const GeneAngles& m) { return Json{{"type", "gene"}, {"count", m.count}}; },
            [](const PrescribedAngles& m) { return Json{{"type", "prescribed"}, {"values", m.values}}; },
            [](const BaseWithIncrements& m) {
                return Json{{"type", "base_with_increments"}, {"increment", m.increment}, {"count", m.count}};
            },
        },
        spec.angle_mode);
    return Json{{"name", spec.name},           {"targets", targets},     {"angle_mode", mode},
                {"bounds", bounds},            {"has_frame", spec.has_frame}, {"de", de_to_json(spec.default_de)}};
}

CaseSpec case_from_json(const Json& doc)
{
    try {
        CaseSpec spec;
        spec.name = doc.at("name").get<std::string>();
        for (const auto& t : doc.at("targets"))
            spec.targets.push_back({t.at(0).get<double>(), t.at(1).get<double>()});
        for (const auto& b : doc.at("bounds"))
            spec.gene_bounds.push_back({b.at(0).get<double>(), b.at(1).get<double>()});
        spec.has_frame = doc.at("has_frame").get<bool>();

        const Json& mode = doc.at("angle_mode");
        const auto type = mode.at("type").get<std::string>();
        if (type == "gene")
            spec.angle_mode = GeneAngles{mode.at("count").get<std::size_t>()};
        else if (type == "prescribed")
            spec.angle_mode = PrescribedAngles{mode.at("values").get<std::vector<double>>()};
        else if (type == "base_with_increments")
            spec.angle_mode = BaseWithIncrements{mode.at("increment").get<double>(), mode.at("count").get<std::size_t>()};
        else
            throw std::invalid_argument("unknown angle_mode type '" + type + "'");

        if (doc.contains("de")) spec.default_de = de_from_json(doc["de"]);
        spec.validate();
        return spec;
    } catch (const Json::exception& e) {
        throw std::invalid_argument(std::string("malformed case document: ") + e.what());
    }
}

CaseSpec load_case(const std::string& id_or_path)
{
    if (id_or_path == "1" || id_or_path == "2" || id_or_path == "2r" || id_or_path == "3")
        return builtin_case(id_or_path);
    if (!std::filesystem::exists(id_or_path))
        throw std::invalid_argument("'" + id_or_path + "' is neither a built-in case nor an existing file");
    return case_from_json(read_json(id_or_path));
}

Json record_to_json(const RunRecord& r)
{
    return Json{{"case", r.case_name},
                {"strategy", r.strategy},
                {"seed", r.seed},
                {"rng_id", r.rng_id},
                {"best_vector", r.best_vector.genes},
                {"best_error", r.best_error},
                {"best_penalized", r.best_penalized},
                {"stop_generation", r.stop_generation},
                {"history_len", r.history.size()},
                {"history", r.history},
                {"raw_history", r.raw_history},
                {"wall_time", r.wall_time}};
}

RunRecord record_from_json(const Json& doc)
{
    try {
        RunRecord r;
        r.case_name = doc.at("case").get<std::string>();
        r.strategy = doc.at("strategy").get<std::string>();
        r.seed = doc.at("seed").get<std::uint64_t>();
        r.rng_id = doc.at("rng_id").get<std::string>();
        r.best_vector.genes = doc.at("best_vector").get<std::vector<double>>();
        r.best_error = doc.at("best_error").get<double>();
        r.best_penalized = doc.value("best_penalized", r.best_error);
        r.stop_generation = doc.at("stop_generation").get<int>();
        r.history = doc.value("history", std::vector<double>{});
        r.raw_history = doc.value("raw_history", std::vector<double>{});
        r.wall_time = doc.at("wall_time").get<double>();
        return r;
    } catch (const Json::exception& e) {
        throw std::invalid_argument(std::string("malformed run record: ") + e.what());
    }
}

Json stats_to_json(const BatchStats& stats, bool include_records)
{
    const auto& best = stats.records.at(stats.best_run);
    Json doc{{"case", best.case_name},
             {"strategy", best.strategy},
             {"runs", stats.runs},
             {"seeds", Json::array()},
             {"errors", stats.errors},
             {"thresholds", stats.thresholds.values},
             {"cumulative", stats.buckets.cumulative},
             {"per_bin", stats.buckets.per_bin},
             {"above_last", stats.buckets.above_last},
             {"capped", stats.buckets.capped},
             {"cap", kErrorCap},
             {"cap_semantics", "final raw errors >= cap (including assembly failures) are counted as '= cap'"},
             {"best_seed", best.seed},
             {"best_error", best.best_error},
             {"mean_wall_time", stats.mean_wall_time}};
    for (const auto& r : stats.records)
        doc["seeds"].push_back(r.seed);
    if (include_records) {
        doc["records"] = Json::array();
        for (const auto& r : stats.records)
            doc["records"].push_back(record_to_json(r));
    }
    return doc;
}

DesignVector load_vector(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open vector file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();

    const Json doc = Json::parse(text, nullptr, false);
    if (!doc.is_discarded()) {
        if (doc.is_array()) return DesignVector{doc.get<std::vector<double>>()};
        if (doc.is_object() && doc.contains("best_vector"))
            return DesignVector{doc["best_vector"].get<std::vector<double>>()};
    }

    std::string cleaned = text;
    for (char& c : cleaned)
        if (c == ',' || c == '[' || c == ']' || c == ';') c = ' ';
    std::istringstream numbers(cleaned);
    DesignVector v;
    double x;
    while (numbers >> x)
        v.genes.push_back(x);
    if (!numbers.eof() || v.genes.empty()) throw std::invalid_argument("cannot parse a design vector from " + path.string());
    return v;
}

void write_history_csv(std::ostream& out, const RunRecord& record)
{
    precise(out) << "generation,best_penalized,best_raw\n";
    for (std::size_t i = 0; i < record.history.size(); ++i)
        out << i + 1 << ',' << record.history[i] << ',' << record.raw_history.at(i) << '\n';
}

std::size_t write_trace_csv(std::ostream& out, const MechanismParams& params, std::span<const double> theta1,
                            Branch branch)
{
    precise(out) << "theta1,x,y,branch\n";
    std::size_t assembled = 0;
    const auto points = trace_path(params, theta1, branch);
    for (std::size_t i = 0; i < points.size(); ++i) {
        out << theta1[i] << ',';
        if (points[i]) {
            out << points[i]->x << ',' << points[i]->y << ',' << to_string(branch) << '\n';
            ++assembled;
        } else {
            out << ",," << "unassemblable" << '\n';
        }
    }
    return assembled;
}

void write_mechanism_csv(std::ostream& out, const MechanismParams& params, std::span<const double> theta1,
                         Branch branch)
{
    precise(out) << "theta1,ax,ay,bx,by,cx,cy,dx,dy,ex,ey\n";
    for (double t : theta1) {
        const auto pose = linkage_pose(params, t, branch);
        if (!pose) continue;
        const auto& p = *pose;
        out << t << ',' << p.crank_pivot.x << ',' << p.crank_pivot.y << ',' << p.crank_tip.x << ',' << p.crank_tip.y
            << ',' << p.rocker_tip.x << ',' << p.rocker_tip.y << ',' << p.rocker_pivot.x << ',' << p.rocker_pivot.y
            << ',' << p.coupler_point.x << ',' << p.coupler_point.y << '\n';
    }
}

void write_errors_csv(std::ostream& out, const BatchStats& stats)
{
    precise(out) << "seed,error,penalized,stop_generation,wall_time\n";
    for (const auto& r : stats.records)
        out << r.seed << ',' << r.best_error << ',' << r.best_penalized << ',' << r.stop_generation << ','
            << r.wall_time << '\n';
}

std::ofstream open_output(const std::filesystem::path& path)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

void write_json(const std::filesystem::path& path, const Json& doc)
{
    auto out = open_output(path);
    out << doc.dump(2) << '\n';
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

Json read_json(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw std::invalid_argument(path.string() + ": " + e.what());
    }
}

} // namespace mechsynth::io
