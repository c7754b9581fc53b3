#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <qlef/qlef.hpp>

namespace
{

using nlohmann::json;
using namespace qlef;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string geometry;
    std::string command;
    int max_degree = default_truncation;
    std::string format = "json";
    std::uint64_t seed = 20240601;
    std::string out_dir;
    std::string input;
};

struct Output {
    std::string text;
    std::string extension;
    int status = 0;
    std::optional<json> error;
};

Output make_output(std::string text, std::string extension)
{
    Output out;
    out.text = std::move(text);
    out.extension = std::move(extension);
    return out;
}

json read_json_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path);
    }
    try {
        return json::parse(in);
    } catch (const json::exception &e) {
        throw IoError("cannot parse " + path + ": " + e.what());
    }
}

GeometrySpec load_geometry(const std::string &path)
{
    const json j = read_json_file(path);
    try {
        return json_io::geometry_from_json(j);
    } catch (const json::exception &e) {
        throw IoError("malformed geometry " + path + ": " + e.what());
    }
}

std::string dump(const json &j)
{
    return j.dump(2) + "\n";
}

// The I-function, either computed or read back from an earlier `ifun` dump.
QSeries load_or_compute_i(const GeometrySpec &g, const RunConfig &cfg)
{
    if (cfg.input.empty()) {
        return i_function(g, cfg.max_degree);
    }
    const json j = read_json_file(cfg.input);
    try {
        return json_io::qseries_from_json(j, g.ambient).truncated(cfg.max_degree);
    } catch (const json::exception &e) {
        throw IoError("malformed series dump " + cfg.input + ": " + e.what());
    }
}

std::vector<json_io::InvariantRow> invariant_rows(const GeometrySpec &g, int max_degree)
{
    std::vector<json_io::InvariantRow> rows;
    if (max_degree == 0) {
        return rows;
    }
    for (const auto &[beta, value] : n_numbers(g, max_degree)) {
        rows.push_back({beta, value, std::nullopt});
    }
    std::vector<Rational> big;
    for (const auto &r : rows) {
        big.push_back(r.big_n);
    }
    try {
        const auto small = aspinwall_morrison(g, big);
        for (std::size_t d = 0; d < rows.size(); ++d) {
            rows[d].small_n = small[d];
        }
    } catch (const DimensionError &) {
        // Multiple-cover numbers are only reported where the inversion applies.
    }
    return rows;
}

Output run_invariants(const GeometrySpec &g, const RunConfig &cfg)
{
    std::vector<json_io::InvariantRow> rows;
    if (!cfg.input.empty() && cfg.max_degree > 0) {
        // Re-run from a dumped mirror map: apply it to the I-function.
        const json j = read_json_file(cfg.input);
        MirrorMap m;
        try {
            m = json_io::mirror_map_from_json(j, g.ambient.num_factors(), cfg.max_degree);
        } catch (const json::exception &e) {
            throw IoError("malformed mirror map " + cfg.input + ": " + e.what());
        }
        const auto jn = apply_transform(i_function(g, cfg.max_degree), m);
        extract_descendants(jn);
        for (const auto &beta : curve_classes_up_to(g.ambient.num_factors(), cfg.max_degree)) {
            if (!beta.is_zero()) {
                rows.push_back({beta, n_number_from_j(jn, beta), std::nullopt});
            }
        }
    } else {
        rows = invariant_rows(g, cfg.max_degree);
    }
    if (cfg.format == "tsv") {
        return make_output(json_io::to_tsv(rows), "tsv");
    }
    return make_output(dump(json_io::to_json(rows)), "json");
}

Output run_serre(const GeometrySpec &g, const RunConfig &cfg)
{
    const auto pair = serre_dual_pair(g, cfg.max_degree);
    const auto sol = solve_serre_factor(pair);
    json report = json_io::to_json(sol);
    report["sign"] = pair.sign;
    report["D"] = cfg.max_degree;
    Output out = make_output(dump(report), "json");
    try {
        require_feasible(sol);
    } catch (const Infeasible &e) {
        out.status = 1;
        out.error = json_io::error_json(e);
    }
    return out;
}

void require_single_factor(const GeometrySpec &g)
{
    if (g.ambient.num_factors() != 1) {
        throw Unsupported("oracle", "the localization oracle handles a single projective space");
    }
}

Output run_oracle(const GeometrySpec &g, const RunConfig &cfg)
{
    require_single_factor(g);
    json reports = json::array();
    const json geometry = json_io::to_json(g);
    for (int d = 1; d <= std::min(cfg.max_degree, 2); ++d) {
        const auto run = oracle::oracle_n_number(g.ambient.dim(0), d, g.bundle, cfg.seed + static_cast<std::uint64_t>(d));
        reports.push_back(json_io::to_json(run, geometry, d));
    }
    return make_output(dump(reports), "json");
}

Output run_verify(const GeometrySpec &g, const RunConfig &cfg)
{
    require_single_factor(g);
    const int top = std::min(cfg.max_degree, 2);
    const auto pipeline = top > 0 ? n_numbers(g, top) : std::vector<std::pair<CurveClass, Rational>>{};
    bool match = true;
    std::ostringstream lines;
    json rows = json::array();
    for (int d = 1; d <= top; ++d) {
        const Rational ours = pipeline[static_cast<std::size_t>(d - 1)].second;
        const Rational theirs =
            oracle::oracle_n_number(g.ambient.dim(0), d, g.bundle, cfg.seed + static_cast<std::uint64_t>(d)).value;
        match = match && ours == theirs;
        lines << "N_" << d << "\t" << to_fraction_string(ours) << "\t" << to_fraction_string(theirs) << "\n";
        rows.push_back({{"d", d},
                        {"pipeline", to_fraction_string(ours)},
                        {"oracle", to_fraction_string(theirs)},
                        {"match", ours == theirs}});
    }
    Output out;
    if (cfg.format == "tsv") {
        out = make_output(std::string(match ? "MATCH" : "MISMATCH") + "\n" + lines.str(), "tsv");
    } else {
        out = make_output(dump({{"verdict", match ? "MATCH" : "MISMATCH"}, {"degrees", rows}}), "json");
    }
    out.status = match ? 0 : 1;
    return out;
}

Output run_command(const RunConfig &cfg)
{
    const GeometrySpec g = load_geometry(cfg.geometry);
    if (cfg.command == "check") {
        return make_output(dump(json_io::to_json(check_conditions(g), g)), "json");
    }
    if (cfg.command == "ifun") {
        return make_output(dump(json_io::to_json(i_function(g, cfg.max_degree))), "json");
    }
    if (cfg.command == "mirror-map") {
        if (!check_conditions(g).theorem1_holds()) {
            throw Unsupported("mirror", "the Theorem 1 combination is negative in some factor");
        }
        const auto i = load_or_compute_i(g, cfg);
        return make_output(dump(json_io::to_json(solve_mirror_map(i, base_class(g)))), "json");
    }
    if (cfg.command == "invariants") {
        return run_invariants(g, cfg);
    }
    if (cfg.command == "serre") {
        return run_serre(g, cfg);
    }
    if (cfg.command == "oracle") {
        return run_oracle(g, cfg);
    }
    return run_verify(g, cfg);
}

void emit(const Output &out, const RunConfig &cfg)
{
    std::cout << out.text;
    if (cfg.out_dir.empty()) {
        return;
    }
    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    const auto path = std::filesystem::path(cfg.out_dir) / (cfg.command + "." + out.extension);
    std::ofstream file(path, std::ios::binary);
    if (!file || !(file << out.text)) {
        throw IoError("cannot write " + path.string());
    }
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Genus-zero twisted Gromov-Witten invariants via quantum Lefschetz"};
    RunConfig cfg;
    app.add_option("--geometry", cfg.geometry, "Geometry JSON file")->required();
    app.add_option("--cmd", cfg.command, "Command to run")
        ->required()
        ->check(CLI::IsMember({"check", "ifun", "mirror-map", "invariants", "serre", "oracle", "verify"}));
    app.add_option("--max-degree", cfg.max_degree, "Truncation degree D")->check(CLI::Range(0, 64));
    app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "tsv"}));
    app.add_option("--seed", cfg.seed, "Seed for the oracle torus weights");
    app.add_option("--out", cfg.out_dir, "Directory receiving <cmd>.<format>");
    app.add_option("--input", cfg.input, "Earlier dump to resume from (ifun for mirror-map, mirror-map for invariants)");
    CLI11_PARSE(app, argc, argv);

    try {
        const Output out = run_command(cfg);
        emit(out, cfg);
        if (out.error) {
            std::cerr << out.error->dump() << "\n";
        }
        return out.status;
    } catch (const Error &e) {
        std::cerr << json_io::error_json(e).dump() << "\n";
        return 1;
    } catch (const IoError &e) {
        std::cerr << json{{"error", "IOError"}, {"module", "cli"}, {"beta", nullptr}, {"message", e.what()}}.dump()
                  << "\n";
        return 2;
    }
}
