#include "pinball/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include <unistd.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "pinball/angular.hpp"
#include "pinball/attractor.hpp"
#include "pinball/errors.hpp"
#include "pinball/io.hpp"
#include "pinball/verify.hpp"

namespace pinball::cli {

using nlohmann::json;

namespace {

// Manifold CSV output stops growing past this many segments.
constexpr std::size_t kManifoldCsvCap = 1u << 16;

double require_lambda(const RunConfig& c) {
    if (!c.lambda) throw DomainError(c.command + ": --lambda is required");
    return *c.lambda;
}

GridSpec grid_or(const RunConfig& c, GridSpec fallback) {
    if (c.grid) {
        fallback.width = (*c.grid)[0];
        fallback.height = (*c.grid)[1];
    }
    return fallback;
}

json grid_json(const GridSpec& g) {
    return {{"width", g.width},
            {"height", g.height},
            {"s_min", g.s_min},
            {"s_max", g.s_max},
            {"theta_min", g.theta_min},
            {"theta_max", g.theta_max}};
}

json base_meta(const RunConfig& c) {
    json m;
    m["command"] = c.command;
    m["version"] = kVersion;
    m["seed"] = c.seed;
    m["out"] = c.out;
    if (c.lambda) m["lambda"] = *c.lambda;
    if (c.lambda_range) m["lambda_range"] = {(*c.lambda_range)[0], (*c.lambda_range)[1], (*c.lambda_range)[2]};
    return m;
}

void write_meta(const RunConfig& c, json meta, CommandResult& res) {
    const std::string path = c.out + ".meta.json";
    meta["files"] = res.files;
    io::write_text(path, meta.dump(2) + "\n");
    res.files.push_back(path);
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

} // namespace

void validate(const RunConfig& c) {
    auto positive = [](const auto& v, const char* name) {
        if (v && *v < 1) throw DomainError(std::string("--") + name + " must be at least 1");
    };
    if (c.lambda && !(*c.lambda > 0.0 && *c.lambda <= 1.0)) {
        throw DomainError("--lambda must lie in (0,1], got " + io::format_double(*c.lambda));
    }
    if (c.lambda_range) {
        const auto [lo, hi, step] = *c.lambda_range;
        if (!(lo > 0.0 && hi <= 1.0)) throw DomainError("--lambda-range must lie in (0,1]");
        lambda_grid(lo, hi, step); // throws on an empty range
    }
    positive(c.transient, "transient");
    positive(c.keep, "keep");
    positive(c.seeds, "seeds");
    positive(c.escape_n, "escape-n");
    positive(c.generations, "generations");
    positive(c.horizon, "horizon");
    if (c.grid) {
        for (int d : *c.grid) {
            if (d < 1 || d > kMaxGridDim) throw DomainError("--grid dimensions must lie in 1..8192");
        }
    }
    if (c.out.empty()) throw DomainError("--out must not be empty");
}

std::array<int, 2> parse_grid(const std::string& text) {
    int w = 0;
    int h = 0;
    char x = 0;
    char tail = 0;
    if (std::sscanf(text.c_str(), "%d%c%d%c", &w, &x, &h, &tail) != 3 || (x != 'x' && x != 'X')) {
        throw DomainError("--grid expects WxH, got '" + text + "'");
    }
    return {w, h};
}

std::array<double, 3> parse_range(const std::string& text) {
    std::array<double, 3> v{};
    std::stringstream ss(text);
    std::string part;
    int k = 0;
    while (std::getline(ss, part, ':')) {
        if (k == 3) throw DomainError("--lambda-range expects a:b:step, got '" + text + "'");
        std::size_t used = 0;
        try {
            v[static_cast<std::size_t>(k)] = std::stod(part, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != part.size()) throw DomainError("--lambda-range: bad number '" + part + "'");
        ++k;
    }
    if (k != 3) throw DomainError("--lambda-range expects a:b:step, got '" + text + "'");
    return v;
}

CommandResult cmd_attractor(const RunConfig& c) {
    validate(c);
    const double lambda = require_lambda(c);
    const std::size_t transient = c.transient.value_or(kDefaultTransient);
    const std::size_t keep = c.keep.value_or(kDefaultKeep);
    const std::size_t seeds = c.seeds.value_or(1);
    const GridSpec grid = grid_or(c, GridSpec::full(600, 400));

    const std::vector<AttractorSample> samples = sample_attractors(lambda, c.seed, seeds, transient, keep);
    CommandResult res;
    json meta = base_meta(c);
    meta["transient"] = transient;
    meta["keep"] = keep;
    meta["seeds"] = seeds;
    meta["grid"] = grid_json(grid);
    json per_seed = json::array();
    for (std::size_t j = 0; j < samples.size(); ++j) {
        const std::string stem = seeds == 1 ? c.out : c.out + "." + std::to_string(j);
        io::write_points_csv(stem + ".points.csv", samples[j].points);
        io::write_pgm(stem + ".hits.pgm", grid.width, grid.height, io::log_scale(io::hit_counts(samples[j].points, grid)));
        res.files.push_back(stem + ".points.csv");
        res.files.push_back(stem + ".hits.pgm");
        double tmin = samples[j].points.front().theta;
        double tmax = tmin;
        for (const PhasePoint& p : samples[j].points) {
            tmin = std::min(tmin, p.theta);
            tmax = std::max(tmax, p.theta);
        }
        per_seed.push_back({{"index", j}, {"restarts", samples[j].restarts}, {"points", samples[j].points.size()},
                            {"theta_min", tmin}, {"theta_max", tmax}});
        res.lines.push_back("sample " + std::to_string(j) + ": " + std::to_string(samples[j].points.size()) +
                            " points, " + std::to_string(samples[j].restarts) + " restarts -> " + stem + ".points.csv");
    }
    meta["samples"] = per_seed;
    write_meta(c, meta, res);
    return res;
}

CommandResult cmd_scan(const RunConfig& c) {
    validate(c);
    if (!c.lambda_range) throw DomainError("scan: --lambda-range a:b:step is required");
    const auto [lo, hi, step] = *c.lambda_range;
    const std::vector<double> lambdas = lambda_grid(lo, hi, step);
    for (double l : lambdas) {
        if (!(l > 0.0 && l < 1.0)) throw DomainError("scan: every lambda must lie in (0,1)");
    }
    ScanOptions opt;
    opt.seed = c.seed;
    opt.n_seeds = c.seeds.value_or(opt.n_seeds);
    opt.n_transient = c.transient.value_or(opt.n_transient);
    opt.n_keep = c.keep.value_or(opt.n_keep);
    opt.escape_n = c.escape_n.value_or(opt.escape_n);
    opt.escape_grid = grid_or(c, opt.escape_grid);
    opt.generations = c.generations.value_or(opt.generations);

    const std::vector<ScanRow> rows = lambda_scan(lambdas, opt);
    std::vector<std::vector<std::string>> table;
    CommandResult res;
    for (const ScanRow& r : rows) {
        table.push_back({io::format_double(r.lambda), std::to_string(r.components), bool_text(r.homoclinic),
                         std::to_string(r.bands), io::format_double(r.alpha), bool_text(r.gap_covered)});
        char buf[160];
        std::snprintf(buf, sizeof buf, "lambda %.4f  components %d  homoclinic %s  bands %d  alpha %.6f  gap_covered %s",
                      r.lambda, r.components, bool_text(r.homoclinic).c_str(), r.bands, r.alpha,
                      bool_text(r.gap_covered).c_str());
        res.lines.push_back(buf);
    }
    const std::string path = c.out + ".scan.csv";
    io::write_csv(path, {"lambda", "components", "homoclinic", "bands", "alpha", "gap_covered"}, table);
    res.files.push_back(path);

    json meta = base_meta(c);
    meta["seeds"] = opt.n_seeds;
    meta["transient"] = opt.n_transient;
    meta["keep"] = opt.n_keep;
    meta["band_keep"] = opt.band_keep;
    meta["escape_n"] = opt.escape_n;
    meta["grid"] = grid_json(opt.escape_grid);
    meta["generations"] = opt.generations;
    write_meta(c, meta, res);
    return res;
}

CommandResult cmd_manifolds(const RunConfig& c) {
    validate(c);
    const double lambda = require_lambda(c);
    const int n = c.escape_n.value_or(kDefaultEscapeN);
    const GridSpec grid = grid_or(c, GridSpec::side0_upper(800, 800));
    const int generations = c.generations.value_or(kDefaultGenerations);

    const HomoclinicResult h = homoclinic_test(lambda, n, grid);
    ManifoldCurve curve = manifold_seed(lambda);
    while (curve.generations < generations && !curve.truncated) advance_manifold(curve, kManifoldCsvCap);

    CommandResult res;
    std::vector<std::vector<std::string>> rows;
    rows.reserve(curve.segments.size());
    for (const ManifoldSegment& seg : curve.segments) {
        rows.push_back({io::format_double(seg.side + seg.u0), io::format_double(seg.side + seg.u1),
                        io::format_double(seg.theta), seg.primary ? "1" : "0"});
    }
    io::write_csv(c.out + ".unstable.csv", {"s_start", "s_end", "theta", "primary"}, rows);
    res.files.push_back(c.out + ".unstable.csv");
    io::write_pgm(c.out + ".escape.pgm", grid.width, grid.height,
                  io::linear_scale(h.escape, static_cast<std::uint32_t>(n)));
    res.files.push_back(c.out + ".escape.pgm");

    json meta = base_meta(c);
    meta["escape_n"] = n;
    meta["grid"] = grid_json(grid);
    meta["generations"] = curve.generations;
    meta["generations_requested"] = generations;
    meta["segments"] = curve.segments.size();
    meta["truncated"] = curve.truncated;
    meta["homoclinic"] = h.homoclinic;
    meta["homoclinic_generations"] = h.generation;
    if (h.witness) {
        meta["witness"] = {{"row", h.witness->row},
                           {"col", h.witness->col},
                           {"s", h.witness_point.s},
                           {"theta", h.witness_point.theta}};
    }
    write_meta(c, meta, res);
    res.lines.push_back("homoclinic: " + bool_text(h.homoclinic) + " (searched " + std::to_string(h.generation) +
                        " generations); " + std::to_string(curve.segments.size()) + " segments written");
    return res;
}

CommandResult cmd_basins(const RunConfig& c) {
    validate(c);
    const double lambda = require_lambda(c);
    const std::size_t seeds = c.seeds.value_or(12);
    const std::size_t keep = c.keep.value_or(50000);
    const std::size_t transient = c.transient.value_or(kDefaultTransient);
    const int horizon = c.horizon.value_or(200);
    const GridSpec grid = grid_or(c, GridSpec::full(300, 300));

    const ComponentReport comps = transitive_components(lambda, seeds, keep, c.seed, transient);
    if (comps.count < 2) {
        throw DomainError("basins: single transitive component at lambda " + io::format_double(lambda));
    }
    const RasterGrid basins = basin_raster(lambda, grid, horizon, comps);
    CommandResult res;
    io::write_ppm(c.out + ".basins.ppm", grid.width, grid.height, io::basin_colors(basins));
    res.files.push_back(c.out + ".basins.ppm");

    std::vector<double> fractions(static_cast<std::size_t>(comps.count) + 1, 0.0);
    for (std::uint32_t v : basins.values) fractions[std::min<std::size_t>(v, fractions.size() - 1)] += 1.0;
    for (double& f : fractions) f /= static_cast<double>(basins.values.size());

    json meta = base_meta(c);
    meta["seeds"] = seeds;
    meta["keep"] = keep;
    meta["transient"] = transient;
    meta["horizon"] = horizon;
    meta["grid"] = grid_json(grid);
    meta["components"] = comps.count;
    meta["fractions"] = fractions;
    meta["boundary_box_slope"] = box_counting_slope(basins);
    write_meta(c, meta, res);
    res.lines.push_back(std::to_string(comps.count) + " components; basin fractions:");
    for (std::size_t k = 1; k < fractions.size(); ++k) {
        res.lines.push_back("  " + std::to_string(k) + ": " + io::format_double(fractions[k]));
    }
    return res;
}

CommandResult cmd_verify(const RunConfig& c) {
    validate(c);
    std::vector<verify::CheckResult> checks;
    json meta = base_meta(c);
    if (c.points) {
        const double lambda = require_lambda(c);
        const std::vector<PhasePoint> pts = io::read_points_csv(*c.points);
        checks = verify::check_points(pts, lambda);
        meta["points"] = *c.points;
        meta["point_count"] = pts.size();
    } else if (c.lambda) {
        checks = verify::run_lambda_checks(*c.lambda, c.seed);
    } else {
        namespace fs = std::filesystem;
        const fs::path scratch = fs::temp_directory_path() / ("pinball-verify-" + std::to_string(::getpid()));
        fs::create_directories(scratch);
        try {
            checks = verify::run_acceptance(scratch.string());
        } catch (...) {
            fs::remove_all(scratch);
            throw;
        }
        fs::remove_all(scratch);
    }

    CommandResult res;
    bool all = true;
    json list = json::array();
    for (const auto& r : checks) {
        all = all && r.passed;
        list.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
        res.lines.push_back(verify::format_line(r));
    }
    json report = {{"version", kVersion}, {"passed", all}, {"checks", list}};
    io::write_text(c.out + ".verify.json", report.dump(2) + "\n");
    res.files.push_back(c.out + ".verify.json");
    meta["passed"] = all;
    write_meta(c, meta, res);
    res.exit_code = all ? kOk : kVerifyFailed;
    return res;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Pinball billiard in the equilateral triangle"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    RunConfig cfg;
    std::string grid_text;
    std::string range_text;
    double lambda = 0.0;
    std::size_t transient = 0;
    std::size_t keep = 0;
    std::size_t seeds = 0;
    int escape_n = 0;
    int generations = 0;
    int horizon = 0;
    std::string points;

    struct Flags {
        CLI::Option* lambda = nullptr;
        CLI::Option* range = nullptr;
        CLI::Option* transient = nullptr;
        CLI::Option* keep = nullptr;
        CLI::Option* seeds = nullptr;
        CLI::Option* grid = nullptr;
        CLI::Option* escape_n = nullptr;
        CLI::Option* generations = nullptr;
        CLI::Option* horizon = nullptr;
        CLI::Option* points = nullptr;
    };
    std::vector<std::pair<CLI::App*, Flags>> subs;

    auto add = [&](const char* name, const char* help) {
        CLI::App* sub = app.add_subcommand(name, help);
        Flags f;
        f.lambda = sub->add_option("--lambda", lambda, "contraction parameter in (0,1]");
        f.range = sub->add_option("--lambda-range", range_text, "a:b:step");
        sub->add_option("--seed", cfg.seed, "64-bit seed");
        f.transient = sub->add_option("--transient", transient, "steps discarded before sampling");
        f.keep = sub->add_option("--keep", keep, "points kept per orbit");
        f.seeds = sub->add_option("--seeds", seeds, "number of independent orbits");
        f.grid = sub->add_option("--grid", grid_text, "raster size WxH");
        f.escape_n = sub->add_option("--escape-n", escape_n, "escape-time order n");
        f.generations = sub->add_option("--generations", generations, "unstable-manifold generations");
        f.horizon = sub->add_option("--horizon", horizon, "basin iteration horizon");
        sub->add_option("--out", cfg.out, "output path prefix");
        if (std::string(name) == "verify") f.points = sub->add_option("--points", points, "points CSV to check");
        subs.emplace_back(sub, f);
    };
    add("attractor", "sample the attractor");
    add("scan", "scan observables over a lambda range");
    add("manifolds", "unstable manifold, escape-time raster and homoclinic verdict");
    add("basins", "basins of the transitive components");
    add("verify", "acceptance checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    int code = kOk;
    try {
        for (const auto& [sub, f] : subs) {
            if (!sub->parsed()) continue;
            cfg.command = sub->get_name();
            if (f.lambda->count()) cfg.lambda = lambda;
            if (f.range->count()) cfg.lambda_range = parse_range(range_text);
            if (f.transient->count()) cfg.transient = transient;
            if (f.keep->count()) cfg.keep = keep;
            if (f.seeds->count()) cfg.seeds = seeds;
            if (f.grid->count()) cfg.grid = parse_grid(grid_text);
            if (f.escape_n->count()) cfg.escape_n = escape_n;
            if (f.generations->count()) cfg.generations = generations;
            if (f.horizon->count()) cfg.horizon = horizon;
            if (f.points && f.points->count()) cfg.points = points;
        }
        CommandResult res;
        if (cfg.command == "attractor") res = cmd_attractor(cfg);
        else if (cfg.command == "scan") res = cmd_scan(cfg);
        else if (cfg.command == "manifolds") res = cmd_manifolds(cfg);
        else if (cfg.command == "basins") res = cmd_basins(cfg);
        else res = cmd_verify(cfg);
        for (const auto& line : res.lines) out << line << '\n';
        for (const auto& file : res.files) out << "wrote " << file << '\n';
        code = res.exit_code;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        code = kIoFailure;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        code = kIoFailure;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        code = kUsage;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        code = kIoFailure;
    }
    return code;
}

} // namespace pinball::cli
